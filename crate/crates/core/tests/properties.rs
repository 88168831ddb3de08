use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use utfw_core::certificate::certify;
use utfw_core::critical_charge::{atomic_bounds, molecular_x_root};
use utfw_core::geometry::{MoleculeConfig, Nucleus};
use utfw_core::instability_search::{trial_density, TrialFamily};
use utfw_core::quadrature::{atomic_energy, GridSpec, RadialGrid};
use utfw_core::uncertainty_lab::{mup_terms, random_spline_probe, SHARP_COEFFICIENT};
use utfw_core::ModelParams;

fn family() -> impl Strategy<Value = TrialFamily> {
    prop_oneof![
        (1.0f64..1e6, 0.05f64..2.0).prop_map(|(a, s)| TrialFamily::exponential(a, s)),
        (1.0f64..1e6, 0.05f64..2.0, 4.0f64..12.0).prop_map(|(a, s, p)| TrialFamily::power(a, s, p)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn energy_is_one_homogeneous(f in family(), t in 0.3f64..10.0, z in 0.0f64..100.0) {
        let params = ModelParams::from_lambda(0.2, 1.0 / 137.0).unwrap();
        let grid = GridSpec::default().build().unwrap();
        let rho = trial_density(&f, &grid).unwrap();
        let base = atomic_energy(&rho, z, &params).unwrap();
        let scaled = atomic_energy(&rho.dilated(t).unwrap(), z, &params).unwrap();
        prop_assert!((scaled - t * base).abs() <= 1e-9 * base.abs().max(1.0));
    }

    #[test]
    fn energy_decreases_with_charge(f in family(), z in 0.0f64..100.0, dz in 0.1f64..20.0) {
        let params = ModelParams::from_lambda(1.0 / 9.0, 1.0 / 137.0).unwrap();
        let rho = trial_density(&f, &GridSpec::default().build().unwrap()).unwrap();
        let e0 = atomic_energy(&rho, z, &params).unwrap();
        let e1 = atomic_energy(&rho, z + dz, &params).unwrap();
        prop_assert!(e1 < e0);
    }

    #[test]
    fn molecular_root_is_accurate(lambda in 0.01f64..10.0, alpha in 1e-3f64..1.0) {
        let params = ModelParams::from_lambda(lambda, alpha).unwrap();
        let m = molecular_x_root(&params);
        let residual = ((1.0 - m.x_root) / m.x_root.powi(3) - m.rhs).abs() / m.rhs;
        prop_assert!(residual < 1e-9);
        prop_assert!(m.z_max < atomic_bounds(&params).lower);
        prop_assert!(m.b1 > 0.0 && m.b2 > 0.0);
    }

    #[test]
    fn margin_ignores_geometry(
        z in 1.0f64..70.0,
        p in prop::collection::vec(-5.0f64..5.0, 9),
    ) {
        let params = ModelParams::from_lambda(0.2, 1.0 / 137.0).unwrap();
        let a = MoleculeConfig::new(vec![
            Nucleus { z, position: [0.0; 3] },
            Nucleus { z, position: [1.0, 0.0, 0.0] },
        ]).unwrap();
        let nuclei: Vec<Nucleus> = p.chunks(3).map(|c| Nucleus { z, position: [c[0], c[1], c[2]] }).collect();
        let Ok(b) = MoleculeConfig::new(nuclei) else { return Ok(()) };
        let (ca, cb) = (certify(&a, &params), certify(&b, &params));
        prop_assert_eq!(ca.margin, cb.margin);
        prop_assert_eq!(ca.verdict, cb.verdict);
        let inv: f64 = cb.half_distances.iter().map(|d| 1.0 / d).sum();
        prop_assert!((cb.energy_lower_bound.unwrap() - cb.margin.unwrap() * inv).abs() <= 1e-12 * inv * cb.margin.unwrap().abs());
    }

    #[test]
    fn uncertainty_principle_on_spline_probes(seed in any::<u64>(), radius in 0.1f64..10.0, a in 0.05f64..3.0, b in 0.05f64..3.0) {
        let grid = RadialGrid::linear(4000, radius).unwrap();
        let probe = random_spline_probe(&mut ChaCha8Rng::seed_from_u64(seed), &grid);
        let t = mup_terms(&probe, a, b, SHARP_COEFFICIENT);
        prop_assert!(t.gap() >= -1e-8 * t.lhs());
    }
}

//! Acceptance criteria, one line per criterion.
//!
//! Run with `cargo test -p utfw --test acceptance -- --nocapture` to see the
//! summary.

use std::f64::consts::PI;

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use utfw::cli::{run, Cli};
use utfw_core::certificate::{ball_integral, certify, exterior_bound, lieb_yau_gap, xi1_pointwise_min, Blob};
use utfw_core::critical_charge::{atomic_bounds, molecular_x_root, QUOTED};
use utfw_core::geometry::{half_distances, phi_at, w_at, MoleculeConfig, Nucleus};
use utfw_core::instability_search::{search_negative, trial_density, SearchOptions, SearchVerdict, TrialFamily, DEFAULT_BUDGET};
use utfw_core::quadrature::{atomic_energy, gauss_legendre, hartree_radial, GridSpec, RadialDensity, RadialGrid};
use utfw_core::uncertainty_lab::{
    coefficient_probe_search, extremal_f, mup_terms, random_spline_probe, schwarz_ratio, WeightFn, AB_PAIRS,
    SHARP_COEFFICIENT,
};
use utfw_core::{ModelParams, ALPHA_PHYSICAL};

type Check = Result<String, String>;

fn rel(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

fn params(lambda: f64) -> ModelParams {
    ModelParams::from_lambda(lambda, ALPHA_PHYSICAL).unwrap()
}

fn pair(z: f64, separation: f64) -> MoleculeConfig {
    MoleculeConfig::new(vec![
        Nucleus { z, position: [0.0; 3] },
        Nucleus {
            z,
            position: [separation, 0.0, 0.0],
        },
    ])
    .unwrap()
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn atomic_bounds_criterion() -> Check {
    let expected = [(1.0 / 9.0, 55.93), (0.2, 75.04), (0.185, 72.17)];
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut lowers = Vec::new();
    for ((lambda, approx), quoted) in expected.iter().zip(QUOTED) {
        let lower = atomic_bounds(&params(*lambda)).lower;
        worst = worst.max(rel(lower, (1.5 * lambda).sqrt() / ALPHA_PHYSICAL));
        ok &= (lower - approx).abs() < 5e-3;
        // "stable for z < n" over integer charges means n − 1 < lower.
        ok &= quoted.atomic - 1.0 < lower && (lower - quoted.atomic).abs() < 1.0;
        lowers.push(format!("{lower:.4}"));
    }
    ensure(ok && worst < 1e-9, format!("lower = {} ; closed-form rel err {worst:.1e}", lowers.join(" / ")))
}

fn gap_criterion() -> Check {
    let mut worst: f64 = 0.0;
    let mut largest: f64 = 0.0;
    for lambda in [1.0 / 9.0, 0.185, 0.2] {
        let gap = atomic_bounds(&params(lambda)).gap;
        worst = worst.max(rel(gap, 7.0 / (12.0 * PI) * (1.5 * lambda.powi(3)).sqrt()));
        largest = largest.max(gap);
    }
    ensure(worst < 1e-9 && largest < 0.021, format!("rel err {worst:.1e}, max gap {largest:.5}"))
}

fn molecular_criterion() -> Check {
    let mut worst: f64 = 0.0;
    let mut below = true;
    for lambda in [0.05, 1.0 / 9.0, 0.185, 0.2, 1.0, 4.0] {
        for alpha in [1e-3, ALPHA_PHYSICAL, 0.05, 0.5] {
            let p = ModelParams::from_lambda(lambda, alpha).unwrap();
            let m = molecular_x_root(&p);
            worst = worst.max(rel((1.0 - m.x_root) / m.x_root.powi(3), m.rhs));
            below &= m.z_max < atomic_bounds(&p).lower;
        }
    }
    let cli = Cli::try_parse_from(["utfw", "molecular-bound", "--lambda", "0.2"]).map_err(|e| e.to_string())?;
    let outcome = run(&cli).map_err(|e| e.to_string())?;
    let rows = outcome.report.outputs["comparison"].as_array().cloned().unwrap_or_default();
    let mut shown = Vec::new();
    let mut flags_ok = rows.len() == 3;
    for (row, approx) in rows.iter().zip([53.4, 70.9, 68.3]) {
        let z = row["z_max"].as_f64().unwrap_or(f64::NAN);
        let quoted = row["quoted_molecular"].as_f64().unwrap_or(f64::NAN);
        flags_ok &= (z - approx).abs() < 0.05;
        flags_ok &= row["flagged"].as_bool() == Some((z - quoted).abs() > 1.0);
        shown.push(format!("{z:.1} vs {quoted}"));
    }
    ensure(
        worst < 1e-9 && below && flags_ok,
        format!("residual {worst:.1e}; {} (all flagged, discrepancy documented)", shown.join(", ")),
    )
}

fn saturation_criterion() -> Check {
    let mut worst: f64 = 0.0;
    for lambda in [1.0 / 9.0, 0.185, 0.2] {
        let p = params(lambda);
        let (mut lo, mut hi) = (0.0, atomic_bounds(&p).lower);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if certify(&pair(mid, 1.7), &p).stable() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        worst = worst.max(rel(lo, molecular_x_root(&p).z_max));
    }
    ensure(worst < 1e-6, format!("bisected vs closed form rel err {worst:.1e}"))
}

fn uncertainty_criterion() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst_gap = f64::INFINITY;
    let mut probes = 0;
    for radius in [0.5, 1.0, 3.0] {
        let grid = RadialGrid::linear(10_000, radius).unwrap();
        for _ in 0..100 {
            let probe = random_spline_probe(&mut rng, &grid);
            for (a, b) in AB_PAIRS {
                let t = mup_terms(&probe, a, b, SHARP_COEFFICIENT);
                worst_gap = worst_gap.min(t.gap() / t.lhs());
            }
            probes += 1;
        }
    }
    let grid = RadialGrid::linear(10_000, 1.0).unwrap();
    let weight = WeightFn::coulomb(&grid);
    let mut worst_ratio: f64 = 0.0;
    for (lam, c) in [(1.0, 1.0), (5.0, 0.5), (0.2, 3.0)] {
        let probe = extremal_f(&weight, lam, c, &grid).map_err(|e| e.to_string())?;
        let ratio = schwarz_ratio(&weight, &probe).map_err(|e| e.to_string())?;
        worst_ratio = worst_ratio.max((ratio - 1.0).abs());
    }
    let (bumped, _) = coefficient_probe_search(0.27, 1.52, SHARP_COEFFICIENT + 0.05, 1.0).map_err(|e| e.to_string())?;
    ensure(
        worst_gap >= -1e-8 && worst_ratio <= 1e-6 && bumped < 0.0,
        format!(
            "{probes} probes min gap/LHS {worst_gap:.3e}; extremal |ratio−1| {worst_ratio:.1e}; 4/3+0.05 gap/LHS {bumped:.3e}"
        ),
    )
}

fn exact_integrals_criterion() -> Check {
    let p = params(0.2);
    let config = MoleculeConfig::new(vec![
        Nucleus { z: 40.0, position: [0.0; 3] },
        Nucleus {
            z: 40.0,
            position: [1.2, 0.4, 0.0],
        },
        Nucleus {
            z: 40.0,
            position: [-0.3, 2.0, 0.5],
        },
    ])
    .unwrap();
    let d = half_distances(&config);
    let b2 = 0.9;
    let (mu, mu_w) = gauss_legendre(24);
    let (x, x_w) = gauss_legendre(24);
    let mut ball_err: f64 = 0.0;
    for (j, n) in config.nuclei().iter().enumerate() {
        let dj = d.get(j).unwrap();
        let mut total = 0.0;
        for (xr, wr) in x.iter().zip(&x_w) {
            let r = 0.5 * dj * (xr + 1.0);
            for (m, wm) in mu.iter().zip(&mu_w) {
                let sin = (1.0 - m * m).sqrt();
                for k in 0..24 {
                    let phi = 2.0 * PI * (k as f64 + 0.5) / 24.0;
                    let point = [
                        n.position[0] + r * sin * phi.cos(),
                        n.position[1] + r * sin * phi.sin(),
                        n.position[2] + r * m,
                    ];
                    let diff = w_at(&point, &config, p.a, b2).unwrap() - phi_at(&point, &config).unwrap();
                    total += 0.5 * dj * wr * wm * (2.0 * PI / 24.0) * r * r * diff.powi(4);
                }
            }
        }
        ball_err = ball_err.max(rel(total, ball_integral(dj, p.a, b2)));
    }

    // ∫_{|x|>D, x₁<D} z⁴/|x|⁴ with u = D/r; the polar cap is cos θ < u.
    let (dd, z) = (0.8_f64, 3.0_f64);
    let (u, u_w) = gauss_legendre(16);
    let half_space: f64 = u
        .iter()
        .zip(&u_w)
        .map(|(t, w)| {
            let s = 0.5 * (t + 1.0);
            0.5 * w * 2.0 * PI * (1.0 + s) * z.powi(4) / dd
        })
        .sum();
    let exterior_err = rel(half_space, exterior_bound(dd, z));

    let radius = 1.7;
    let grid = GridSpec {
        r_max: radius,
        ..GridSpec::default()
    }
    .build()
    .unwrap();
    let rho = RadialDensity::from_fn(grid, |_| 0.4).unwrap();
    let q = 0.4 * 4.0 * PI * radius.powi(3) / 3.0;
    let hartree_err = rel(hartree_radial(&rho, &p).unwrap(), 0.6 * p.alpha * q * q / radius);
    ensure(
        ball_err < 1e-10 && exterior_err < 1e-4 && hartree_err < 1e-6,
        format!("ball {ball_err:.1e}, exterior {exterior_err:.1e}, uniform-ball Hartree {hartree_err:.1e}"),
    )
}

fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let k = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..300 {
        let (x1, x2) = (hi - k * (hi - lo), lo + k * (hi - lo));
        if f(x1) < f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    f(0.5 * (lo + hi))
}

fn xi1_criterion() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let s = 10f64.powf(rng.random_range(-2.0..2.0));
        let b1 = rng.random_range(0.1..1.5);
        let alpha = 10f64.powf(rng.random_range(-3.0..0.0));
        let (_, closed) = xi1_pointwise_min(s, b1, alpha);
        let numeric = golden(
            |rho| b1 * b1 * rho.powf(4.0 / 3.0) - alpha * s * rho,
            0.0,
            (2.0 * alpha * s / (b1 * b1)).powi(3),
        );
        worst = worst.max((numeric - closed).abs() / closed.abs());
    }
    ensure(worst < 1e-8, format!("20 triples, worst rel diff {worst:.1e}"))
}

fn homogeneity_criterion() -> Check {
    let p = params(0.2);
    let grid = GridSpec::default().build().unwrap();
    let mut worst: f64 = 0.0;
    for family in [TrialFamily::exponential(5.0e3, 0.3), TrialFamily::power(5.0e4, 0.1, 4.5)] {
        let rho = trial_density(&family, &grid).unwrap();
        let base = atomic_energy(&rho, 50.0, &p).unwrap();
        for t in [0.5, 2.0, 10.0] {
            let scaled = atomic_energy(&rho.dilated(t).unwrap(), 50.0, &p).unwrap();
            worst = worst.max((scaled - t * base).abs() / base.abs());
        }
    }
    ensure(worst < 1e-5, format!("worst |ξ(ρ_t) − tξ(ρ)|/|ξ(ρ)| = {worst:.1e}"))
}

fn witness_criterion() -> Check {
    let p = params(0.2);
    let grid = GridSpec::default().build().unwrap();
    let hot = search_negative(80.0, &p, &SearchOptions::new(DEFAULT_BUDGET, 1, grid.clone())).map_err(|e| e.to_string())?;
    let fine = grid.refined(4).unwrap();
    let e4 = atomic_energy(&trial_density(&hot.best_params, &fine).unwrap(), 80.0, &p).unwrap();
    let cold = search_negative(70.0, &p, &SearchOptions::new(DEFAULT_BUDGET, 1, grid)).map_err(|e| e.to_string())?;
    ensure(
        hot.verdict == SearchVerdict::NegativeFound
            && hot.evaluations <= DEFAULT_BUDGET
            && e4 < 0.0
            && cold.verdict == SearchVerdict::NoneFound,
        format!(
            "z=80: ξ = {:.4} ({} evals), 4× grid {e4:.4}; z=70: best {:.3e}",
            hot.best_energy, hot.evaluations, cold.best_energy
        ),
    )
}

fn lieb_yau_criterion() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = f64::INFINITY;
    for _ in 0..20 {
        let z = rng.random_range(0.5..5.0);
        let separation = rng.random_range(0.5..4.0);
        let config = pair(z, separation);
        let count = rng.random_range(1..=3usize);
        let blobs: Vec<Blob> = (0..count)
            .map(|_| {
                let width = rng.random_range(0.05..0.6) * separation;
                let grid = RadialGrid::log_spaced(160, 1e-5 * width, 6.0 * width).unwrap();
                Blob {
                    center: [
                        rng.random_range(-0.5..1.5) * separation,
                        rng.random_range(-0.5..0.5) * separation,
                        rng.random_range(-0.5..0.5) * separation,
                    ],
                    profile: RadialDensity::from_fn(grid, |r| (-(r / width).powi(2)).exp()).unwrap(),
                    mass: rng.random_range(0.0..2.0) * z,
                }
            })
            .collect();
        let t = lieb_yau_gap(&config, &blobs).map_err(|e| e.to_string())?;
        worst = worst.min(t.gap() / t.lhs().abs());
    }
    ensure(worst >= -1e-6, format!("20 configs, min gap/|LHS| {worst:.3e}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("atomic bounds", atomic_bounds_criterion),
        ("gap closed form", gap_criterion),
        ("molecular bound", molecular_criterion),
        ("certificate saturation", saturation_criterion),
        ("modified uncertainty principle", uncertainty_criterion),
        ("exact-integral oracles", exact_integrals_criterion),
        ("pointwise minimum closed form", xi1_criterion),
        ("homogeneity", homogeneity_criterion),
        ("instability witness", witness_criterion),
        ("Lieb-Yau sanity", lieb_yau_criterion),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

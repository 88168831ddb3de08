//! Property suites with pass/fail summaries, shared by the command line
//! `verify` command and the test suites.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::{certify, lieb_yau_gap, xi1_pointwise_min, Blob};
use crate::critical_charge::{atomic_bounds, molecular_x_root};
use crate::geometry::{MoleculeConfig, Nucleus};
use crate::instability_search::{trial_density, TrialFamily};
use crate::quadrature::{atomic_energy, GridSpec, RadialDensity, RadialGrid};
use crate::uncertainty_lab;
use crate::{ModelParams, Result};

/// One line of a verification summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    /// Worst normalized margin; nonnegative when the property holds.
    pub worst_margin: f64,
}

/// Golden-section minimum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iterations: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iterations {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// The closed-form pointwise minimum of `b₁²ρ^{4/3} − αsρ` against a
/// golden-section search over `ρ`.
pub fn xi1_suite(seed: u64, cases: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let s = 10f64.powf(rng.random_range(-2.0..2.0));
        let b1 = rng.random_range(0.1..1.5);
        let alpha = 10f64.powf(rng.random_range(-3.0..0.0));
        let (_, closed) = xi1_pointwise_min(s, b1, alpha);
        // g(ρ) > 0 beyond (2αs/b₁²)³, so the minimizer lies inside.
        let hi = (2.0 * alpha * s / (b1 * b1)).powi(3);
        let g = |rho: f64| b1 * b1 * rho.powf(4.0 / 3.0) - alpha * s * rho;
        let (_, numeric) = golden_section(g, 0.0, hi, 200);
        worst = worst.max((numeric - closed).abs() / closed.abs());
    }
    SuiteOutcome {
        name: "pointwise-minimum-closed-form".to_string(),
        cases,
        passed: worst <= 1e-8,
        worst_margin: 1e-8 - worst,
    }
}

/// Largest charge certified on a symmetric pair, by bisection.
pub fn saturation_charge(params: &ModelParams, separation: f64) -> Result<f64> {
    let stable = |z: f64| -> Result<bool> {
        let config = MoleculeConfig::new(vec![
            Nucleus {
                z,
                position: [0.0; 3],
            },
            Nucleus {
                z,
                position: [separation, 0.0, 0.0],
            },
        ])?;
        Ok(certify(&config, params).stable())
    };
    let (mut lo, mut hi) = (0.0, atomic_bounds(params).lower);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if stable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// The certificate saturates at the closed-form molecular bound.
pub fn saturation_suite() -> Result<SuiteOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for &lambda in &[1.0 / 9.0, 0.185, 0.2, 1.0] {
        for &alpha in &[crate::ALPHA_PHYSICAL, 0.05] {
            let params = ModelParams::from_lambda(lambda, alpha)?;
            let expected = molecular_x_root(&params).z_max;
            for &separation in &[0.5, 3.0] {
                let z = saturation_charge(&params, separation)?;
                worst = worst.max((z - expected).abs() / expected);
                cases += 1;
            }
        }
    }
    Ok(SuiteOutcome {
        name: "certificate-saturation".to_string(),
        cases,
        passed: worst <= 1e-6,
        worst_margin: 1e-6 - worst,
    })
}

/// `|ξ(ρ_t) − tξ(ρ)|/|ξ(ρ)|` for both trial shapes.
pub fn homogeneity_suite(params: &ModelParams, grid: &RadialGrid) -> Result<SuiteOutcome> {
    let families = [
        TrialFamily::exponential(3.0e3, 0.4),
        TrialFamily::power(2.0e4, 0.2, 5.0),
        TrialFamily::power(1.0e5, 0.05, 4.0),
    ];
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for family in &families {
        let rho = trial_density(family, grid)?;
        for z in [0.0, 50.0, 80.0] {
            let base = atomic_energy(&rho, z, params)?;
            for t in [0.5, 2.0, 10.0] {
                let scaled = atomic_energy(&rho.dilated(t)?, z, params)?;
                worst = worst.max((scaled - t * base).abs() / base.abs());
                cases += 1;
            }
        }
    }
    Ok(SuiteOutcome {
        name: "scaling-homogeneity".to_string(),
        cases,
        passed: worst < 1e-5,
        worst_margin: 1e-5 - worst,
    })
}

fn gaussian_profile(width: f64) -> Result<RadialDensity> {
    let grid = RadialGrid::log_spaced(160, 1e-5 * width, 6.0 * width)?;
    RadialDensity::from_fn(grid, |r| (-(r / width).powi(2)).exp())
}

/// Lieb–Yau inequality on random equal-charge pairs with Gaussian blobs.
pub fn lieb_yau_suite(seed: u64, configs: usize) -> Result<SuiteOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..configs {
        let z = rng.random_range(0.5..5.0);
        let separation = rng.random_range(0.5..4.0);
        let config = MoleculeConfig::new(vec![
            Nucleus {
                z,
                position: [0.0; 3],
            },
            Nucleus {
                z,
                position: [separation, 0.0, 0.0],
            },
        ])?;
        let count = rng.random_range(1..=3usize);
        let mut blobs = Vec::with_capacity(count);
        for _ in 0..count {
            let center = [
                rng.random_range(-0.5..1.5) * separation,
                rng.random_range(-0.5..0.5) * separation,
                rng.random_range(-0.5..0.5) * separation,
            ];
            let width = rng.random_range(0.05..0.6) * separation;
            blobs.push(Blob {
                center,
                profile: gaussian_profile(width)?,
                mass: rng.random_range(0.0..2.0) * z,
            });
        }
        let terms = lieb_yau_gap(&config, &blobs)?;
        worst = worst.min(terms.gap() / terms.lhs().abs());
    }
    Ok(SuiteOutcome {
        name: "lieb-yau-inequality".to_string(),
        cases: configs,
        passed: worst >= -1e-6,
        worst_margin: worst,
    })
}

/// Sizes for [`run_all`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteSizes {
    pub probes: usize,
    pub probe_nodes: usize,
    pub lieb_yau_configs: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        Self {
            probes: 100,
            probe_nodes: 10_000,
            lieb_yau_configs: 20,
        }
    }
}

/// Every property suite, in a fixed order.
pub fn run_all(seed: u64, params: &ModelParams, grid: &GridSpec, sizes: SuiteSizes) -> Result<Vec<SuiteOutcome>> {
    let mut out = Vec::new();
    out.extend(uncertainty_lab::random_probe_suite(
        seed,
        sizes.probes,
        &[0.5, 1.0, 3.0],
        sizes.probe_nodes,
    )?);
    out.push(uncertainty_lab::extremal_suite(sizes.probe_nodes)?);
    out.extend(uncertainty_lab::sharpness_suite()?);
    out.push(uncertainty_lab::parts_identity_suite(seed, sizes.probes.min(20), sizes.probe_nodes)?);
    out.push(uncertainty_lab::amgm_suite(seed, 1000));
    out.push(xi1_suite(seed, 20));
    out.push(saturation_suite()?);
    out.push(homogeneity_suite(params, &grid.build()?)?);
    out.push(lieb_yau_suite(seed, sizes.lieb_yau_configs)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ALPHA_PHYSICAL;

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, v) = golden_section(|x| (x - 0.3) * (x - 0.3) + 2.0, -1.0, 4.0, 100);
        assert!((x - 0.3).abs() < 1e-7 && (v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn closed_form_minimum() {
        assert!(xi1_suite(5, 20).passed);
    }

    #[test]
    fn saturation() {
        let s = saturation_suite().unwrap();
        assert!(s.passed, "{s:?}");
    }

    #[test]
    fn homogeneity() {
        let q = ModelParams::from_lambda(0.2, ALPHA_PHYSICAL).unwrap();
        let s = homogeneity_suite(&q, &GridSpec::default().build().unwrap()).unwrap();
        assert!(s.passed, "{s:?}");
    }

    #[test]
    fn lieb_yau() {
        let s = lieb_yau_suite(3, 4).unwrap();
        assert!(s.passed, "{s:?}");
        assert!(s.worst_margin > 0.0);
    }
}

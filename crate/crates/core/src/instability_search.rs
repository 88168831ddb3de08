//! Variational search for densities with negative atomic energy, the
//! 1-homogeneity check, and a multi-center trial evaluator.
//!
//! Because `ξ(ρ_t) = t·ξ(ρ)` for `ρ_t(x) = t³ρ(tx)`, one negative value
//! means the infimum is `−∞`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{half_distances, nuclear_repulsion, MoleculeConfig, VoronoiInfo};
use crate::optimize::NelderMead;
use crate::quadrature::{atomic_energy, energy_terms, RadialDensity, RadialGrid};
use crate::{Error, ModelParams, Result};

pub const DEFAULT_BUDGET: usize = 5000;
pub const MIN_BUDGET: usize = 100;
pub const RESTARTS: usize = 20;
/// Smallest power-law exponent with finite Weizsäcker, L^{4/3} and Coulomb terms.
pub const MIN_EXPONENT: f64 = 4.0;
pub const MAX_EXPONENT: f64 = 16.0;

const LOG_AMPLITUDE: (f64, f64) = (-30.0, 40.0);
const AMPLITUDE_SCAN: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Shape {
    /// `e^{−r/s}`.
    Exponential,
    /// `(1 + r/s)^{−p}`.
    Power { p: f64 },
}

/// `A·shape(r/s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialFamily {
    #[serde(flatten)]
    pub shape: Shape,
    pub amplitude: f64,
    pub scale: f64,
}

impl TrialFamily {
    pub fn exponential(amplitude: f64, scale: f64) -> Self {
        Self {
            shape: Shape::Exponential,
            amplitude,
            scale,
        }
    }

    pub fn power(amplitude: f64, scale: f64, p: f64) -> Self {
        Self {
            shape: Shape::Power { p },
            amplitude,
            scale,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::OutOfRange {
                name: "amplitude",
                value: self.amplitude,
                low: 0.0,
                high: f64::INFINITY,
            });
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::NonPositive {
                name: "scale",
                value: self.scale,
            });
        }
        if let Shape::Power { p } = self.shape {
            if !(p >= MIN_EXPONENT && p.is_finite()) {
                return Err(Error::InvalidExponent { value: p });
            }
        }
        Ok(())
    }

    pub fn eval(&self, r: f64) -> f64 {
        let x = r / self.scale;
        match self.shape {
            Shape::Exponential => self.amplitude * (-x).exp(),
            Shape::Power { p } => self.amplitude * (1.0 + x).powf(-p),
        }
    }
}

pub fn trial_density(family: &TrialFamily, grid: &RadialGrid) -> Result<RadialDensity> {
    family.validate()?;
    RadialDensity::from_fn(grid.clone(), |r| family.eval(r))
}

/// `|ξ(ρ_t) − t·ξ(ρ)| / max(1, |ξ(ρ)|)`.
pub fn scaling_check(rho: &RadialDensity, t: f64, z: f64, params: &ModelParams) -> Result<f64> {
    let base = atomic_energy(rho, z, params)?;
    let scaled = atomic_energy(&rho.dilated(t)?, z, params)?;
    Ok((scaled - t * base).abs() / base.abs().max(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchVerdict {
    NegativeFound,
    NoneFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_energy: f64,
    pub best_params: TrialFamily,
    pub verdict: SearchVerdict,
    pub evaluations: usize,
    pub seed: u64,
    /// The best energy re-evaluated on a grid with twice the nodes.
    pub confirm_energy: f64,
}

/// Search box and grid for [`search_negative`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub budget: usize,
    pub seed: u64,
    pub grid: RadialGrid,
}

impl SearchOptions {
    pub fn new(budget: usize, seed: u64, grid: RadialGrid) -> Self {
        Self { budget, seed, grid }
    }
}

/// Restart-local objective: `[ln A, ln s]` or `[ln A, ln s, p]`.
fn family_at(x: &[f64]) -> TrialFamily {
    let (amplitude, scale) = (x[0].exp(), x[1].exp());
    if x.len() == 3 {
        TrialFamily::power(amplitude, scale, x[2])
    } else {
        TrialFamily::exponential(amplitude, scale)
    }
}

/// Minimizes the atomic energy over both trial families with
/// [`RESTARTS`] Nelder–Mead restarts sharing the evaluation budget.
///
/// The zero density is the baseline, so `best_energy ≤ 0` always.
pub fn search_negative(z: f64, params: &ModelParams, options: &SearchOptions) -> Result<SearchResult> {
    if options.budget < MIN_BUDGET {
        return Err(Error::BudgetTooSmall {
            budget: options.budget,
            minimum: MIN_BUDGET,
        });
    }
    if !(z >= 0.0 && z.is_finite()) {
        return Err(Error::OutOfRange {
            name: "z",
            value: z,
            low: 0.0,
            high: f64::INFINITY,
        });
    }
    let grid = &options.grid;
    let r_max = grid.r_max();
    let log_s = ((1e-4 * r_max).ln(), (0.1 * r_max).ln());
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);

    let mut best = (0.0, TrialFamily::exponential(0.0, 1.0), 0usize);
    let mut evaluations = 0usize;
    let quota = options.budget / RESTARTS;

    for restart in 0..RESTARTS {
        let power = restart % 2 == 1;
        let mut used = 0usize;
        let mut objective = |x: &[f64]| -> f64 {
            if used >= quota {
                return f64::INFINITY;
            }
            used += 1;
            trial_density(&family_at(x), grid)
                .and_then(|rho| atomic_energy(&rho, z, params))
                .unwrap_or(f64::INFINITY)
        };

        let mut start = vec![0.0, rng.random_range(log_s.0..log_s.1)];
        let (mut lower, mut upper) = (vec![LOG_AMPLITUDE.0, log_s.0], vec![LOG_AMPLITUDE.1, log_s.1]);
        let mut steps = vec![3.0, 1.0];
        if power {
            start.push(rng.random_range(MIN_EXPONENT..8.0));
            lower.push(MIN_EXPONENT);
            upper.push(MAX_EXPONENT);
            steps.push(2.0);
        }

        let mut scan_best = (f64::INFINITY, LOG_AMPLITUDE.0);
        for k in 0..AMPLITUDE_SCAN {
            start[0] = LOG_AMPLITUDE.0 + (LOG_AMPLITUDE.1 - LOG_AMPLITUDE.0) * k as f64 / (AMPLITUDE_SCAN - 1) as f64;
            let v = objective(&start);
            if v < scan_best.0 {
                scan_best = (v, start[0]);
            }
        }
        start[0] = scan_best.1;

        let nm = NelderMead {
            lower,
            upper,
            max_evals: quota,
            f_tol: 1e-12,
        };
        let found = nm.minimize(&mut objective, &start, &steps);
        evaluations += used;
        let candidate = (found.value, family_at(&found.x), used);
        if candidate.0 < best.0 || (candidate.0 == best.0 && candidate.2 < best.2) {
            best = candidate;
        }
    }

    let confirm_energy = if best.0 < 0.0 {
        atomic_energy(&trial_density(&best.1, &grid.refined(2)?)?, z, params)?
    } else {
        best.0
    };
    let verdict = if best.0 < 0.0 && confirm_energy < 0.0 {
        SearchVerdict::NegativeFound
    } else {
        SearchVerdict::NoneFound
    };
    Ok(SearchResult {
        best_energy: best.0,
        best_params: best.1,
        verdict,
        evaluations,
        seed: options.seed,
        confirm_energy,
    })
}

/// Compactly supported radial bump `A(1 − r²/w²)³` for `r < w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub amplitude: f64,
    pub width: f64,
}

/// Energy terms of a multi-center trial density made of disjoint bumps, one
/// per nucleus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MolecularTrialEnergy {
    /// Sum of single-center energies, each with its own nucleus only.
    pub atomic: f64,
    /// Attraction of each bump to the other nuclei.
    pub cross_attraction: f64,
    /// Hartree interaction between distinct bumps.
    pub cross_hartree: f64,
    pub repulsion: f64,
}

impl MolecularTrialEnergy {
    pub fn total(&self) -> f64 {
        self.atomic + self.cross_attraction + self.cross_hartree + self.repulsion
    }
}

/// `ξ(ρ) + U` for `ρ = Σ_j bump_j(x − R_j)`.
///
/// Each width must not exceed the half-distance to the nearest other
/// nucleus, so supports are disjoint and every cross term is exact by
/// Newton's theorem.
pub fn molecular_trial_energy(
    config: &MoleculeConfig,
    params: &ModelParams,
    bumps: &[Bump],
    nodes: usize,
) -> Result<MolecularTrialEnergy> {
    let nuclei = config.nuclei();
    if bumps.len() != nuclei.len() {
        return Err(Error::LengthMismatch {
            expected: nuclei.len(),
            found: bumps.len(),
        });
    }
    let reach = match half_distances(config) {
        VoronoiInfo::Bounded(d) => d,
        VoronoiInfo::Unbounded => vec![f64::INFINITY],
    };
    let mut atomic = 0.0;
    let mut masses = Vec::with_capacity(bumps.len());
    for (j, bump) in bumps.iter().enumerate() {
        if !(bump.width > 0.0 && bump.width <= reach[j] * (1.0 + 1e-12)) {
            return Err(Error::OutOfRange {
                name: "width",
                value: bump.width,
                low: 0.0,
                high: reach[j],
            });
        }
        if !(bump.amplitude >= 0.0 && bump.amplitude.is_finite()) {
            return Err(Error::NegativeDensity {
                index: j,
                value: bump.amplitude,
            });
        }
        let grid = RadialGrid::log_spaced(nodes, 1e-6 * bump.width, bump.width)?;
        let w2 = bump.width * bump.width;
        let rho = RadialDensity::from_fn(grid, |r| bump.amplitude * (1.0 - r * r / w2).max(0.0).powi(3))?;
        atomic += energy_terms(&rho, nuclei[j].z, params)?.total();
        masses.push(rho.total_charge());
    }
    let mut cross_attraction = 0.0;
    let mut cross_hartree = 0.0;
    for (j, nj) in nuclei.iter().enumerate() {
        for (k, nk) in nuclei.iter().enumerate() {
            if j == k {
                continue;
            }
            let d = crate::geometry::distance(&nj.position, &nk.position);
            cross_attraction -= params.alpha * nk.z * masses[j] / d;
            if j < k {
                cross_hartree += params.alpha * masses[j] * masses[k] / d;
            }
        }
    }
    Ok(MolecularTrialEnergy {
        atomic,
        cross_attraction,
        cross_hartree,
        repulsion: nuclear_repulsion(config, params.alpha),
    })
}

/// Minimizes [`molecular_trial_energy`] over per-nucleus log-amplitudes and
/// width fractions. Returns the lowest total found, never above `U`.
pub fn search_molecular(
    config: &MoleculeConfig,
    params: &ModelParams,
    budget: usize,
    seed: u64,
    nodes: usize,
) -> Result<(f64, Vec<Bump>)> {
    if budget < MIN_BUDGET {
        return Err(Error::BudgetTooSmall {
            budget,
            minimum: MIN_BUDGET,
        });
    }
    let k = config.len();
    let reach = match half_distances(config) {
        VoronoiInfo::Bounded(d) => d,
        VoronoiInfo::Unbounded => return Err(Error::UnboundedCell),
    };
    let bumps_at = |x: &[f64]| -> Vec<Bump> {
        (0..k)
            .map(|j| Bump {
                amplitude: x[j].exp(),
                width: reach[j] * x[k + j].exp(),
            })
            .collect()
    };
    let zero: Vec<Bump> = reach.iter().map(|d| Bump { amplitude: 0.0, width: *d }).collect();
    let mut best = (molecular_trial_energy(config, params, &zero, nodes)?.total(), zero);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let restarts = RESTARTS.min(budget / 50).max(1);
    let quota = budget / restarts;
    let lower: Vec<f64> = (0..2 * k).map(|i| if i < k { LOG_AMPLITUDE.0 } else { (1e-4f64).ln() }).collect();
    let upper: Vec<f64> = (0..2 * k).map(|i| if i < k { LOG_AMPLITUDE.1 } else { 0.0 }).collect();
    let steps: Vec<f64> = (0..2 * k).map(|i| if i < k { 3.0 } else { 1.0 }).collect();
    let energy = |x: &[f64]| {
        molecular_trial_energy(config, params, &bumps_at(x), nodes)
            .map(|e| e.total())
            .unwrap_or(f64::INFINITY)
    };
    for _ in 0..restarts {
        let mut start: Vec<f64> = (0..2 * k).map(|i| rng.random_range(lower[i]..upper[i])).collect();
        // Common amplitude scan, as in the atomic search.
        let mut scan_best = (f64::INFINITY, LOG_AMPLITUDE.0);
        for step in 0..AMPLITUDE_SCAN {
            let log_a = LOG_AMPLITUDE.0 + (LOG_AMPLITUDE.1 - LOG_AMPLITUDE.0) * step as f64 / (AMPLITUDE_SCAN - 1) as f64;
            start[..k].fill(log_a);
            let v = energy(&start);
            if v < scan_best.0 {
                scan_best = (v, log_a);
            }
        }
        start[..k].fill(scan_best.1);
        let nm = NelderMead {
            lower: lower.clone(),
            upper: upper.clone(),
            max_evals: quota.saturating_sub(AMPLITUDE_SCAN).max(1),
            f_tol: 1e-12,
        };
        let found = nm.minimize(energy, &start, &steps);
        if found.value < best.0 {
            best = (found.value, bumps_at(&found.x));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GridSpec;
    use crate::ALPHA_PHYSICAL;
    use core::f64::consts::PI;

    fn params() -> ModelParams {
        ModelParams::from_lambda(0.2, ALPHA_PHYSICAL).unwrap()
    }

    fn grid() -> RadialGrid {
        GridSpec::default().build().unwrap()
    }

    #[test]
    fn trial_charges() {
        let g = RadialGrid::log_spaced(4000, 1e-8, 80.0).unwrap();
        let e = trial_density(&TrialFamily::exponential(1.0, 1.0), &g).unwrap();
        assert!((e.total_charge() - 8.0 * PI).abs() < 1e-6);
        let g = RadialGrid::log_spaced(4000, 1e-8, 1e6).unwrap();
        let p = trial_density(&TrialFamily::power(1.0, 1.0, 4.0), &g).unwrap();
        // The tail beyond 1e6 carries about 4π·1e-6.
        assert!((p.total_charge() - 4.0 * PI / 3.0).abs() < 2e-5);
        let p = trial_density(&TrialFamily::power(1.0, 1.0, 6.0), &g).unwrap();
        assert!((p.total_charge() - 4.0 * PI / 30.0).abs() < 1e-6);
        let zero = trial_density(&TrialFamily::exponential(0.0, 1.0), &g).unwrap();
        assert!(zero.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn rejects_small_exponent() {
        let bad = TrialFamily::power(1.0, 1.0, 3.2);
        assert!(matches!(trial_density(&bad, &grid()), Err(Error::InvalidExponent { .. })));
        assert!(TrialFamily::exponential(1.0, 0.0).validate().is_err());
        assert!(TrialFamily::exponential(-1.0, 1.0).validate().is_err());
    }

    #[test]
    fn homogeneity() {
        let q = params();
        let g = grid();
        for family in [TrialFamily::exponential(3.0e3, 0.4), TrialFamily::power(2.0e4, 0.2, 5.0)] {
            let rho = trial_density(&family, &g).unwrap();
            assert_eq!(scaling_check(&rho, 1.0, 50.0, &q).unwrap(), 0.0);
            for t in [0.5, 2.0, 10.0] {
                assert!(scaling_check(&rho, t, 50.0, &q).unwrap() < 1e-6);
            }
        }
    }

    #[test]
    fn budget_floor() {
        let opts = SearchOptions::new(99, 1, grid());
        assert!(matches!(
            search_negative(80.0, &params(), &opts),
            Err(Error::BudgetTooSmall { .. })
        ));
    }

    #[test]
    fn zero_charge_finds_nothing() {
        let r = search_negative(0.0, &params(), &SearchOptions::new(400, 3, grid())).unwrap();
        assert_eq!(r.verdict, SearchVerdict::NoneFound);
        assert!(r.best_energy >= 0.0);
        assert!(r.evaluations <= 400);
    }

    #[test]
    fn supercritical_charge_is_unstable() {
        let r = search_negative(80.0, &params(), &SearchOptions::new(DEFAULT_BUDGET, 7, grid())).unwrap();
        assert_eq!(r.verdict, SearchVerdict::NegativeFound, "{r:?}");
        assert!(r.confirm_energy < 0.0);
        let g4 = grid().refined(4).unwrap();
        let e4 = atomic_energy(&trial_density(&r.best_params, &g4).unwrap(), 80.0, &params()).unwrap();
        assert!(e4 < 0.0);
    }

    #[test]
    fn subcritical_charge_finds_nothing() {
        let r = search_negative(70.0, &params(), &SearchOptions::new(DEFAULT_BUDGET, 7, grid())).unwrap();
        assert_eq!(r.verdict, SearchVerdict::NoneFound, "{r:?}");
    }

    #[test]
    fn deterministic() {
        let opts = SearchOptions::new(600, 42, grid());
        let a = search_negative(78.0, &params(), &opts).unwrap();
        let b = search_negative(78.0, &params(), &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bump_energy_terms() {
        let config = MoleculeConfig::new(vec![
            crate::geometry::Nucleus {
                z: 10.0,
                position: [0.0, 0.0, 0.0],
            },
            crate::geometry::Nucleus {
                z: 20.0,
                position: [4.0, 0.0, 0.0],
            },
        ])
        .unwrap();
        let q = params();
        let zero = [Bump { amplitude: 0.0, width: 2.0 }; 2];
        let e = molecular_trial_energy(&config, &q, &zero, 800).unwrap();
        assert_eq!(e.total(), e.repulsion);
        assert!((e.repulsion - q.alpha * 200.0 / 4.0).abs() < 1e-12);
        let bumps = [Bump { amplitude: 1.0, width: 1.0 }, Bump { amplitude: 2.0, width: 2.0 }];
        let e = molecular_trial_energy(&config, &q, &bumps, 2000).unwrap();
        // ∫(1 − r²)³ over the unit ball is 4π·16/315.
        let m0 = 4.0 * PI * 16.0 / 315.0;
        let m1 = 2.0 * m0 * 8.0;
        assert!((e.cross_attraction + q.alpha * (20.0 * m0 + 10.0 * m1) / 4.0).abs() < 1e-6);
        assert!((e.cross_hartree - q.alpha * m0 * m1 / 4.0).abs() < 1e-6);
        let wide = [Bump { amplitude: 1.0, width: 2.5 }, Bump { amplitude: 1.0, width: 1.0 }];
        assert!(molecular_trial_energy(&config, &q, &wide, 800).is_err());
    }
}

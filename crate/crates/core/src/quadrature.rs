//! Radial grids, quadrature, and the terms of the energy functional for
//! spherically symmetric densities.
//!
//! Grids are uniform in an auxiliary variable `u` (`u = ln r` for log-spaced
//! grids, `u = r` for linear ones). Integrals over `[r_first, r_max]` use the
//! trapezoidal rule in `u` with Euler–Maclaurin endpoint corrections, the
//! end derivatives being taken from fourth-order one-sided stencils. The
//! interval `[0, r_first]` is a separate head segment: the integrand is held
//! constant there on log grids, and linearly extrapolated on linear grids.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{Error, ModelParams, Result};

const MIN_NODES: usize = 6;

/// One-sided fourth-order first-derivative stencil, scaled by `12h`.
const EDGE_STENCIL: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    LogSpaced,
    Linear,
}

/// Serializable recipe for a [`RadialGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub kind: GridKind,
    pub points: usize,
    pub r_max: f64,
    /// `r_min / r_max` for log-spaced grids; ignored for linear grids.
    pub r_min_ratio: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            kind: GridKind::LogSpaced,
            points: 2000,
            r_max: 50.0,
            r_min_ratio: 1e-6,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<RadialGrid> {
        match self.kind {
            GridKind::LogSpaced => {
                RadialGrid::log_spaced(self.points, self.r_min_ratio * self.r_max, self.r_max)
            }
            GridKind::Linear => RadialGrid::linear(self.points, self.r_max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    kind: GridKind,
    step: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    /// `n` nodes with constant ratio between `r_min` and `r_max` (both included).
    pub fn log_spaced(n: usize, r_min: f64, r_max: f64) -> Result<Self> {
        check_count(n)?;
        positive("r_min", r_min)?;
        positive("r_max", r_max)?;
        if r_min >= r_max {
            return Err(Error::OutOfRange {
                name: "r_min",
                value: r_min,
                low: 0.0,
                high: r_max,
            });
        }
        let step = (r_max / r_min).ln() / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| r_min * (step * i as f64).exp()).collect();
        nodes[n - 1] = r_max;
        Ok(Self::assemble(GridKind::LogSpaced, step, nodes))
    }

    /// `n` equally spaced nodes `r_max/n, 2r_max/n, …, r_max`.
    pub fn linear(n: usize, r_max: f64) -> Result<Self> {
        check_count(n)?;
        positive("r_max", r_max)?;
        let step = r_max / n as f64;
        let mut nodes: Vec<f64> = (1..=n).map(|i| step * i as f64).collect();
        nodes[n - 1] = r_max;
        Ok(Self::assemble(GridKind::Linear, step, nodes))
    }

    /// Rebuilds a grid from tabulated radii, detecting the spacing.
    pub fn from_nodes(nodes: &[f64]) -> Result<Self> {
        let n = nodes.len();
        check_count(n)?;
        for (i, &r) in nodes.iter().enumerate() {
            if !(r.is_finite() && r > 0.0) || (i > 0 && r <= nodes[i - 1]) {
                return Err(Error::UnorderedNodes { index: i });
            }
        }
        let tol = 1e-7;
        let log_step = (nodes[n - 1] / nodes[0]).ln() / (n - 1) as f64;
        let is_log = nodes
            .windows(2)
            .all(|w| ((w[1] / w[0]).ln() - log_step).abs() <= tol * log_step);
        if is_log {
            return Ok(Self::assemble(GridKind::LogSpaced, log_step, nodes.to_vec()));
        }
        let lin_step = (nodes[n - 1] - nodes[0]) / (n - 1) as f64;
        let is_linear = nodes
            .windows(2)
            .all(|w| ((w[1] - w[0]) - lin_step).abs() <= tol * lin_step);
        // The head extrapolation keeps every weight positive only for r_first < 1.6 h.
        if is_linear && nodes[0] <= 1.5 * lin_step {
            return Ok(Self::assemble(GridKind::Linear, lin_step, nodes.to_vec()));
        }
        Err(Error::IrregularNodes)
    }

    fn assemble(kind: GridKind, step: f64, nodes: Vec<f64>) -> Self {
        let n = nodes.len();
        let mut weights = vec![step; n];
        weights[0] = 0.5 * step;
        weights[n - 1] = 0.5 * step;
        for (k, c) in EDGE_STENCIL.iter().enumerate() {
            weights[k] += step * c / 144.0;
            weights[n - 1 - k] += step * c / 144.0;
        }
        for (w, r) in weights.iter_mut().zip(&nodes) {
            *w *= jacobian(kind, *r);
        }
        let r0 = nodes[0];
        match kind {
            GridKind::LogSpaced => weights[0] += r0,
            GridKind::Linear => {
                let tilt = r0 * r0 / (2.0 * step);
                weights[0] += r0 + tilt;
                weights[1] -= tilt;
            }
        }
        Self {
            kind,
            step,
            nodes,
            weights,
        }
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    /// Spacing in the uniform variable (`ln r` or `r`).
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            kind: self.kind,
            points: self.len(),
            r_max: self.r_max(),
            r_min_ratio: self.r_min() / self.r_max(),
        }
    }

    /// Same range and kind with `factor` times finer spacing.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        let factor = factor.max(1);
        match self.kind {
            GridKind::LogSpaced => {
                Self::log_spaced((self.len() - 1) * factor + 1, self.r_min(), self.r_max())
            }
            GridKind::Linear => Self::linear(self.len() * factor, self.r_max()),
        }
    }

    /// All radii multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        positive("factor", factor)?;
        let nodes = self.nodes.iter().map(|r| r * factor).collect();
        let step = match self.kind {
            GridKind::LogSpaced => self.step,
            GridKind::Linear => self.step * factor,
        };
        Ok(Self::assemble(self.kind, step, nodes))
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&r| f(r)).collect()
    }

    fn check_len(&self, values: &[f64]) -> Result<()> {
        if values.len() == self.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.len(),
                found: values.len(),
            })
        }
    }

    /// `∫₀^{r_max} g(r) dr`.
    pub fn integrate(&self, g: &[f64]) -> Result<f64> {
        self.check_len(g)?;
        Ok(self.weights.iter().zip(g).map(|(w, v)| w * v).sum())
    }

    /// Running integrals `∫₀^{r_k} g(r) dr` at every node.
    pub fn cumulative(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.check_len(g)?;
        let n = self.len();
        let h = self.step;
        let big_g: Vec<f64> = g
            .iter()
            .zip(&self.nodes)
            .map(|(v, r)| v * jacobian(self.kind, *r))
            .collect();
        let slope = fourth_order_derivative(&big_g, h);
        let r0 = self.nodes[0];
        let head = match self.kind {
            GridKind::LogSpaced => r0 * g[0],
            GridKind::Linear => r0 * g[0] - r0 * r0 * (g[1] - g[0]) / (2.0 * h),
        };
        let mut out = Vec::with_capacity(n);
        let mut trapezoid = 0.0;
        out.push(head);
        for k in 1..n {
            trapezoid += 0.5 * h * (big_g[k - 1] + big_g[k]);
            out.push(head + trapezoid - h * h / 12.0 * (slope[k] - slope[0]));
        }
        Ok(out)
    }

    /// `dv/dr` by centered second-order differences in `u`, with one-sided
    /// second-order stencils at both ends.
    pub fn derivative(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        let n = self.len();
        let h = self.step;
        let mut dv = Vec::with_capacity(n);
        dv.push((-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h));
        for i in 1..n - 1 {
            dv.push((v[i + 1] - v[i - 1]) / (2.0 * h));
        }
        dv.push((3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h));
        for (d, r) in dv.iter_mut().zip(&self.nodes) {
            *d /= jacobian(self.kind, *r);
        }
        Ok(dv)
    }

    /// `dv/dr` by fourth-order differences in `u`.
    pub fn derivative_fourth_order(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        let mut dv = fourth_order_derivative(v, self.step);
        for (d, r) in dv.iter_mut().zip(&self.nodes) {
            *d /= jacobian(self.kind, *r);
        }
        Ok(dv)
    }
}

fn jacobian(kind: GridKind, r: f64) -> f64 {
    match kind {
        GridKind::LogSpaced => r,
        GridKind::Linear => 1.0,
    }
}

fn check_count(n: usize) -> Result<()> {
    if n < MIN_NODES {
        Err(Error::TooFewNodes {
            needed: MIN_NODES,
            found: n,
        })
    } else {
        Ok(())
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}

/// Fourth-order first derivative on a uniform grid of spacing `h`.
fn fourth_order_derivative(g: &[f64], h: f64) -> Vec<f64> {
    let n = g.len();
    let mut d = vec![0.0; n];
    for i in 0..n {
        d[i] = if i >= 2 && i + 2 < n {
            (-g[i + 2] + 8.0 * g[i + 1] - 8.0 * g[i - 1] + g[i - 2]) / (12.0 * h)
        } else if i < 2 {
            let s = i;
            // Five-point stencils anchored at the left edge.
            let c: [f64; 5] = if s == 0 {
                EDGE_STENCIL
            } else {
                [-3.0, -10.0, 18.0, -6.0, 1.0]
            };
            c.iter().zip(&g[0..5]).map(|(c, v)| c * v).sum::<f64>() / (12.0 * h)
        } else {
            let s = n - 1 - i;
            let c: [f64; 5] = if s == 0 {
                EDGE_STENCIL
            } else {
                [-3.0, -10.0, 18.0, -6.0, 1.0]
            };
            -c.iter()
                .zip(g[n - 5..].iter().rev())
                .map(|(c, v)| c * v)
                .sum::<f64>()
                / (12.0 * h)
        };
    }
    d
}

/// `∫₀^{r_max} f(r) 4πr² dr`.
pub fn integrate_radial(f: &[f64], grid: &RadialGrid) -> Result<f64> {
    grid.check_len(f)?;
    Ok(4.0
        * PI
        * grid
            .weights
            .iter()
            .zip(f)
            .zip(&grid.nodes)
            .map(|((w, v), r)| w * v * r * r)
            .sum::<f64>())
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// A nonnegative electron density sampled on a radial grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialDensity {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialDensity {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        grid.check_len(&values)?;
        for (index, &value) in values.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::NegativeDensity { index, value });
            }
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.sample(f);
        Self::new(grid, values)
    }

    pub fn zero(grid: RadialGrid) -> Self {
        let values = vec![0.0; grid.len()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `∫ρ = 4π∫ρ(r)r² dr`.
    pub fn total_charge(&self) -> f64 {
        integrate_radial(&self.values, &self.grid).unwrap_or(f64::NAN)
    }

    /// `ρ_t(x) = t³ρ(tx)`, represented on the grid contracted by `1/t`.
    pub fn dilated(&self, t: f64) -> Result<Self> {
        positive("t", t)?;
        let grid = self.grid.scaled(1.0 / t)?;
        let t3 = t * t * t;
        let values = self.values.iter().map(|v| t3 * v).collect();
        Ok(Self { grid, values })
    }

    pub fn scaled_by(&self, c: f64) -> Result<Self> {
        let values = self.values.iter().map(|v| c * v).collect();
        Self::new(self.grid.clone(), values)
    }
}

/// The four terms of the atomic functional, each reported as a nonnegative number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyTerms {
    pub weizsacker: f64,
    pub thomas_fermi: f64,
    pub attraction: f64,
    pub hartree: f64,
}

impl EnergyTerms {
    pub fn total(&self) -> f64 {
        self.weizsacker + self.thomas_fermi - self.attraction + self.hartree
    }
}

/// `a²∫(∇ρ^{1/3})²`.
pub fn weizsacker_term(rho: &RadialDensity, params: &ModelParams) -> Result<f64> {
    weizsacker_raw(&rho.grid, &rho.values).map(|w| params.a_squared() * w)
}

/// `b²∫ρ^{4/3}`.
pub fn tf_term(rho: &RadialDensity, params: &ModelParams) -> Result<f64> {
    tf_raw(&rho.grid, &rho.values).map(|t| params.b_squared() * t)
}

/// `zα∫ρ/|x|` (enters the functional with a minus sign).
pub fn attraction_term_atomic(rho: &RadialDensity, z: f64, params: &ModelParams) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::NegativeCharge { index: 0, value: z });
    }
    Ok(z * params.alpha * coulomb_moment(&rho.grid, &rho.values))
}

/// `D(ρ,ρ) = (α/2)∬ρ(x)ρ(y)/|x−y|`, by Newton's theorem for spherical shells.
pub fn hartree_radial(rho: &RadialDensity, params: &ModelParams) -> Result<f64> {
    hartree_raw(&rho.grid, &rho.values).map(|h| params.alpha * h)
}

pub fn energy_terms(rho: &RadialDensity, z: f64, params: &ModelParams) -> Result<EnergyTerms> {
    Ok(EnergyTerms {
        weizsacker: weizsacker_term(rho, params)?,
        thomas_fermi: tf_term(rho, params)?,
        attraction: attraction_term_atomic(rho, z, params)?,
        hartree: hartree_radial(rho, params)?,
    })
}

/// `ξ(ρ)` for a single nucleus of charge `z` at the origin.
pub fn atomic_energy(rho: &RadialDensity, z: f64, params: &ModelParams) -> Result<f64> {
    energy_terms(rho, z, params).map(|t| t.total())
}

pub(crate) fn weizsacker_raw(grid: &RadialGrid, values: &[f64]) -> Result<f64> {
    let cube_root: Vec<f64> = values.iter().map(|v| v.cbrt()).collect();
    let slope = grid.derivative(&cube_root)?;
    let squared: Vec<f64> = slope.iter().map(|d| d * d).collect();
    integrate_radial(&squared, grid)
}

pub(crate) fn tf_raw(grid: &RadialGrid, values: &[f64]) -> Result<f64> {
    let powered: Vec<f64> = values.iter().map(|v| v.powf(4.0 / 3.0)).collect();
    integrate_radial(&powered, grid)
}

/// `∫ρ/|x| = 4π∫ρ(r) r dr`.
pub(crate) fn coulomb_moment(grid: &RadialGrid, values: &[f64]) -> f64 {
    4.0 * PI
        * grid
            .weights
            .iter()
            .zip(values)
            .zip(&grid.nodes)
            .map(|((w, v), r)| w * v * r)
            .sum::<f64>()
}

/// `(1/2)∬ρρ/|x−y|` without the factor α.
pub(crate) fn hartree_raw(grid: &RadialGrid, values: &[f64]) -> Result<f64> {
    let potential = radial_potential(grid, values)?;
    let integrand: Vec<f64> = values.iter().zip(&potential).map(|(v, p)| v * p).collect();
    Ok(0.5 * integrate_radial(&integrand, grid)?)
}

/// Electrostatic potential `∫ρ(y)/|x−y| dy` of a spherical density at each node:
/// `4π[(1/r)∫₀^r ρs² ds + ∫_r^{r_max} ρs ds]`.
pub fn radial_potential(grid: &RadialGrid, values: &[f64]) -> Result<Vec<f64>> {
    let nodes = grid.nodes();
    let inner_integrand: Vec<f64> = values.iter().zip(nodes).map(|(v, r)| v * r * r).collect();
    let outer_integrand: Vec<f64> = values.iter().zip(nodes).map(|(v, r)| v * r).collect();
    let enclosed = grid.cumulative(&inner_integrand)?;
    let outer_running = grid.cumulative(&outer_integrand)?;
    let outer_total = grid.integrate(&outer_integrand)?;
    Ok(nodes
        .iter()
        .zip(enclosed.iter().zip(&outer_running))
        .map(|(r, (q, p))| 4.0 * PI * (q / r + (outer_total - p)))
        .collect())
}

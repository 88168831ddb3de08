//! Critical nuclear charges: the atomic stability window, the total-charge
//! condition, and the per-nucleus molecular bound.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{Error, ModelParams, Result};

/// Bracket and iteration cap for the molecular root.
const BRACKET: (f64, f64) = (1e-12, 1.0 - 1e-12);
const MAX_BISECTIONS: usize = 200;

/// Atomic stability window: stable below `lower`, unstable above `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomicBounds {
    /// `4ab/(3α)`.
    pub lower: f64,
    /// `7πa³/(6b³)`.
    pub gap: f64,
    pub upper: f64,
}

pub fn atomic_bounds(params: &ModelParams) -> AtomicBounds {
    let lower = params.critical_coefficient();
    let gap = 7.0 * PI * params.a.powi(3) / (6.0 * params.b.powi(3));
    AtomicBounds {
        lower,
        gap,
        upper: lower + gap,
    }
}

/// Sufficient condition on the summed charge, ignoring nuclear repulsion:
/// `Z ≤ 4ab/(3α)`.
pub fn total_charge_stable(total_z: f64, params: &ModelParams) -> bool {
    total_z <= params.critical_coefficient()
}

/// Per-nucleus molecular bound and the Thomas–Fermi coefficient split that realizes it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MolecularBound {
    /// Root in (0, 1) of `(1−x)/x³ = rhs`; equals `b₁²/b²`.
    pub x_root: f64,
    /// `(4ab/3α)·√(1−x_root)`.
    pub z_max: f64,
    pub rhs: f64,
    pub b1: f64,
    pub b2: f64,
}

/// `(b⁴/a²)(4/3)²/(2πα(4+9α⁴))`.
pub fn molecular_rhs(params: &ModelParams) -> f64 {
    let alpha = params.alpha;
    params.b_squared().powi(2) / params.a_squared() * (16.0 / 9.0)
        / (2.0 * PI * alpha * (4.0 + 9.0 * alpha.powi(4)))
}

pub fn molecular_x_root(params: &ModelParams) -> MolecularBound {
    let rhs = molecular_rhs(params);
    // g(x) = (1−x)/x³ − rhs is strictly decreasing on (0, 1).
    let g = |x: f64| (1.0 - x) / (x * x * x) - rhs;
    let (mut lo, mut hi) = BRACKET;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x_root = if g(lo).abs() <= g(hi).abs() { lo } else { hi };
    let z_max = params.critical_coefficient() * (1.0 - x_root).sqrt();
    MolecularBound {
        x_root,
        z_max,
        rhs,
        b1: params.b * x_root.sqrt(),
        b2: 3.0 * params.alpha * z_max / (4.0 * params.a),
    }
}

/// Left side of the `b₁`-only stability condition, `a²(b²−b₁²)/b₁⁶`.
pub fn d25_lhs(b1: f64, params: &ModelParams) -> f64 {
    params.a_squared() * (params.b_squared() - b1 * b1) / b1.powi(6)
}

/// Right side, `(4/3)²/(2π(4α+9α⁵))`.
pub fn d25_rhs(params: &ModelParams) -> f64 {
    let alpha = params.alpha;
    (16.0 / 9.0) / (2.0 * PI * (4.0 * alpha + 9.0 * alpha.powi(5)))
}

/// Whether the split `b₁` (with `b₂² = b² − b₁²`) yields a nonnegative margin.
pub fn d25_condition(b1: f64, params: &ModelParams) -> Result<bool> {
    if !(b1 > 0.0 && b1 < params.b) {
        return Err(Error::OutOfRange {
            name: "b1",
            value: b1,
            low: 0.0,
            high: params.b,
        });
    }
    Ok(d25_lhs(b1, params) <= d25_rhs(params))
}

/// Stability thresholds quoted in the literature for the three canonical
/// Weizsäcker coefficients, shown next to computed values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotedValues {
    pub lambda: f64,
    /// The atom is quoted stable for `z <` this value.
    pub atomic: f64,
    /// The molecule is quoted stable for each `z_i ≤` this value.
    pub molecular: f64,
}

pub const QUOTED: [QuotedValues; 3] = [
    QuotedValues {
        lambda: 1.0 / 9.0,
        atomic: 56.0,
        molecular: 55.0,
    },
    QuotedValues {
        lambda: 0.2,
        atomic: 75.0,
        molecular: 74.0,
    },
    QuotedValues {
        lambda: 0.185,
        atomic: 73.0,
        molecular: 71.0,
    },
];

/// Quoted values for `lambda`, if it is one of the canonical coefficients.
pub fn quoted_for(lambda: f64) -> Option<QuotedValues> {
    QUOTED
        .iter()
        .copied()
        .find(|q| (q.lambda - lambda).abs() <= 1e-9 * q.lambda)
}

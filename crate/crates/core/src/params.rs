//! Constants of the energy functional.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `(3/8π²)(3π²)^{2/3}`, the factor relating `a²` to the Weizsäcker coefficient λ.
pub fn a_squared_per_lambda() -> f64 {
    3.0 / (8.0 * PI * PI) * (3.0 * PI * PI).powf(2.0 / 3.0)
}

/// `(3/4)(3π²)^{1/3}`, the Thomas–Fermi coefficient `b²`. Independent of λ.
pub fn b_squared_physical() -> f64 {
    0.75 * (3.0 * PI * PI).cbrt()
}

/// The constants λ, α, a, b of the functional
/// `ξ(ρ) = a²∫(∇ρ^{1/3})² + b²∫ρ^{4/3} − ∫Vρ + D(ρ,ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub lambda: f64,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
}

fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}

impl ModelParams {
    /// Physical constants for a given Weizsäcker coefficient λ.
    pub fn from_lambda(lambda: f64, alpha: f64) -> Result<Self> {
        let lambda = check_positive("lambda", lambda)?;
        let alpha = check_positive("alpha", alpha)?;
        Ok(Self {
            lambda,
            alpha,
            a: (a_squared_per_lambda() * lambda).sqrt(),
            b: b_squared_physical().sqrt(),
        })
    }

    /// Arbitrary `a`, `b`; λ is recorded as the value that would produce this `a`.
    pub fn custom(a: f64, b: f64, alpha: f64) -> Result<Self> {
        let a = check_positive("a", a)?;
        let b = check_positive("b", b)?;
        let alpha = check_positive("alpha", alpha)?;
        Ok(Self {
            lambda: a * a / a_squared_per_lambda(),
            alpha,
            a,
            b,
        })
    }

    pub fn a_squared(&self) -> f64 {
        self.a * self.a
    }

    pub fn b_squared(&self) -> f64 {
        self.b * self.b
    }

    /// `4ab/(3α)`: below this charge the atom is stable.
    pub fn critical_coefficient(&self) -> f64 {
        4.0 * self.a * self.b / (3.0 * self.alpha)
    }
}

//! The Korányi kernels `f_s(x, t) = (x⁴ + t²)^{-s/4}` on ℝ² and their
//! Euclidean Fourier transforms.
//!
//! For `s ∈ (1, 3)` and `ξ₂ ≠ 0` the transform reduces to a one-dimensional
//! cosine integral of a Bessel profile (see [`transform`]). [`oracle`] computes
//! the same transform by direct nested quadrature without Bessel functions,
//! [`tuck`] checks the positivity hypotheses on the profile, [`scan`] measures
//! the constant in `f̂_s ≤ C f_{3-s}`, and [`duality`] compares the two sides of
//! the energy identity for mollified measures.

pub mod duality;
pub mod oracle;
pub mod scan;
pub mod transform;
pub mod tuck;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::gamma;

pub use duality::{energy_duality_check, DualityOptions, DualityReport, GridDensity};
pub use oracle::{fhat_oracle, OracleOptions, OracleResult};
pub use scan::{bound_scan, homogeneity_probe, BoundScanPoint, BoundScanReport, LogGrid};
pub use transform::{fhat, t_slice_transform, FourierProfile};
pub use tuck::{default_tuck_grid, tuck_check, TuckCondition, TuckReport};

/// Kernel exponent `s ∈ (0, 3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParam {
    s: f64,
}

impl KernelParam {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 3.0) {
            return Err(Error::domain(format!("kernel exponent s = {s} must lie in (0, 3)")));
        }
        Ok(Self { s })
    }

    pub fn s(self) -> f64 {
        self.s
    }

    /// The transform formulas need `s ∈ (1, 3)`.
    pub fn require_transform_range(self) -> Result<Self> {
        if self.s > 1.0 {
            Ok(self)
        } else {
            Err(Error::domain(format!(
                "transform operations need s ∈ (1, 3), got {}",
                self.s
            )))
        }
    }

    /// `3 - s`, the exponent of the comparison kernel.
    pub fn dual(self) -> Result<Self> {
        Self::new(3.0 - self.s)
    }
}

/// A frequency `(ξ₁, ξ₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreqPoint {
    pub xi1: f64,
    pub xi2: f64,
}

impl FreqPoint {
    pub fn new(xi1: f64, xi2: f64) -> Result<Self> {
        if !(xi1.is_finite() && xi2.is_finite()) {
            return Err(Error::domain("frequency components must be finite"));
        }
        Ok(Self { xi1, xi2 })
    }

    pub(crate) fn require_off_axis(self) -> Result<Self> {
        if self.xi2 == 0.0 {
            return Err(Error::precondition(
                "the transform formula needs ξ₂ ≠ 0; the t-integral diverges on that axis for s ≤ 2",
            ));
        }
        Ok(self)
    }

    /// Scale-free ratio `|ξ₁| / √|ξ₂|`, invariant under `(ξ₁, ξ₂) ↦ (λξ₁, λ²ξ₂)`.
    pub fn eta(self) -> f64 {
        self.xi1.abs() / self.xi2.abs().sqrt()
    }
}

/// `(x⁴ + t²)^{-s/4}`; `+∞` at the origin.
pub fn koranyi_kernel(s: KernelParam, x: f64, t: f64) -> f64 {
    let r4 = x.powi(4) + t * t;
    if r4 == 0.0 {
        return f64::INFINITY;
    }
    r4.powf(-0.25 * s.s())
}

/// `2 π^{s/4} / Γ(s/4)`.
pub fn transform_prefactor(s: KernelParam) -> f64 {
    let q = 0.25 * s.s();
    2.0 * std::f64::consts::PI.powf(q) / gamma(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_values() {
        let s2 = KernelParam::new(2.0).unwrap();
        assert_eq!(koranyi_kernel(s2, 1.0, 0.0), 1.0);
        let s = KernelParam::new(1.5).unwrap();
        assert!((koranyi_kernel(s, 0.0, 4.0) - 2f64.powf(-1.5)).abs() < 1e-15);
        assert!(koranyi_kernel(s, 0.0, 0.0).is_infinite());
    }

    #[test]
    fn kernel_parabolic_scaling() {
        let s = KernelParam::new(1.5).unwrap();
        let lhs = koranyi_kernel(s, 3.0, 9.0);
        let want = 3f64.powf(-1.5) * 2f64.powf(-0.375);
        assert!((lhs - want).abs() < 1e-15);
        assert!((lhs - 3f64.powf(-1.5) * koranyi_kernel(s, 1.0, 1.0)).abs() < 1e-15);
    }

    #[test]
    fn parameter_gates() {
        assert!(KernelParam::new(0.0).is_err());
        assert!(KernelParam::new(3.0).is_err());
        assert!(KernelParam::new(0.5).unwrap().require_transform_range().is_err());
        assert!(FreqPoint::new(1.0, 0.0).unwrap().require_off_axis().is_err());
    }

    #[test]
    fn prefactor_at_two_is_two() {
        let s = KernelParam::new(2.0).unwrap();
        assert!((transform_prefactor(s) - 2.0).abs() < 1e-14);
    }
}

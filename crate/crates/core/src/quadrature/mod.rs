//! Quadrature rules shared by the Bessel, transform and duality code.
//!
//! - [`TanhSinh`]: double-exponential rule on a finite interval. Handles
//!   algebraic and logarithmic endpoint singularities; error estimate from
//!   successive level differences.
//! - [`GaussLegendre`]: fixed-order rule for analytic panels.
//! - [`oscillatory`]: half-period panel sums for `∫ cos(ωt) g(t) dt` with
//!   iterated averaging of the alternating partial sums.

mod gauss_legendre;
pub mod oscillatory;
mod tanh_sinh;

pub use gauss_legendre::{gauss_legendre_20, GaussLegendre};
pub use tanh_sinh::TanhSinh;

/// Value of a quadrature together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

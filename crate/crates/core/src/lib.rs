//! Numerics for vertical projections in the first Heisenberg group.
//!
//! The crate is organised bottom-up:
//!
//! - [`gamma`] and [`quadrature`] supply the scalar machinery (Lanczos gamma,
//!   tanh-sinh and Gauss-Legendre rules, half-period oscillatory integration).
//! - [`bessel`] evaluates the modified Bessel functions `I_ν` and `K_ν` by three
//!   independent routes (power series, Basset's integral, large-argument form).
//! - [`koranyi`] evaluates the kernels `f_s(x,t) = (x⁴+t²)^{-s/4}` and their
//!   Euclidean Fourier transforms, with an independent 2-D oracle, positivity
//!   checks and the `f̂_s ≤ C f_{3-s}` scan.
//! - [`heisenberg`] holds the group law, Korányi and parabolic metrics,
//!   projections and the chord-phase function.
//! - [`measures`] builds discrete measures, energies, chaos-game samples and
//!   box-counting dimension estimates on top of the geometry.
//!
//! All public operations are pure; reductions use pairwise summation so that
//! results do not depend on the number of worker threads.

pub mod bessel;
pub mod error;
pub mod gamma;
pub mod heisenberg;
pub mod koranyi;
pub mod measures;
pub mod quadrature;
pub mod report;
pub mod summation;

pub use bessel::{
    bessel_i, bessel_i_eval, bessel_k, bessel_k_scaled, bessel_k_verified, bessel_k_with, kv_weighted_derivatives,
    BesselEval, BesselMethod, BesselOrder,
};
pub use error::{Error, Result};
pub use heisenberg::{Angle, HPoint, Metric, VerticalPoint};
pub use koranyi::{FreqPoint, KernelParam};
pub use measures::{DiscreteMeasure, DimensionFit, IfsSpec, PlanarPoint};
pub use report::{Estimate, ScanReport};

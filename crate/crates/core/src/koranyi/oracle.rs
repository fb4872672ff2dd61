//! Direct nested quadrature of `f̂_s`, independent of Bessel functions.
//!
//! ```text
//! f̂_s(ξ) = 2 ∫₀^∞ cos(2πξ₁x) T(x) dx,   T(x) = 2 ∫₀^∞ cos(2πξ₂t) (x⁴+t²)^{-s/4} dt.
//! ```
//!
//! The inner integral is summed over half periods of the cosine up to the
//! truncation `N` and the alternating partial sums are averaged. Its error is
//! the averaging bracket when the panel terms alternate, otherwise the
//! second-mean-value bound on the discarded tail,
//! `2^{2-s/4} / (π|ξ₂| (|x|^s + N^{s/2}))`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::oscillatory::{averaged_limit, cosine_zero, half_period_partial_sums};
use crate::quadrature::{gauss_legendre_20, TanhSinh};
use crate::summation::Neumaier;

use super::{FreqPoint, KernelParam};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleOptions {
    /// Truncation `N` of the inner integral over `t`.
    pub truncation: f64,
    /// Averaging passes over the inner partial sums.
    pub averaging_levels: usize,
    /// Fail unless the certified error is below this fraction of the value.
    pub rel_tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            truncation: 160.0,
            averaging_levels: 10,
            rel_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    pub certified_error: f64,
    /// Number of inner integrals whose tail fell back to the mean-value bound.
    pub inner_fallbacks: usize,
    pub inner_evaluations: usize,
}

struct Inner {
    s: f64,
    omega: f64,
    /// Half-period panels beyond `x²`; the integrand is flat up to `t ≈ x²`.
    panels: usize,
    levels: usize,
    model_const: f64,
}

impl Inner {
    fn g(&self, x4: f64, t: f64) -> f64 {
        (x4 + t * t).powf(-0.25 * self.s)
    }

    /// `∫₀^{z₀} cos(ωt) g(t) dt` with geometric panels from `x²`.
    fn head(&self, x: f64, ratio: f64) -> f64 {
        let gl = gauss_legendre_20();
        let z0 = cosine_zero(self.omega, 0);
        let x2 = x * x;
        let x4 = x2 * x2;
        let mut acc = Neumaier::default();
        let mut a = 0.0;
        if x2 < z0 {
            // t = x²v on [0, x²]
            let v = gl.integrate(
                |v| (1.0 + v * v).powf(-0.25 * self.s) * (self.omega * x2 * v).cos(),
                0.0,
                1.0,
            );
            acc.add(x2.powf(1.0 - 0.5 * self.s) * v);
            a = x2;
        }
        while a < z0 {
            let b = if a == 0.0 { z0 } else { (a * ratio).min(z0) };
            acc.add(gl.integrate(|t| (self.omega * t).cos() * self.g(x4, t), a, b));
            a = b;
        }
        acc.total()
    }

    /// `(T(x), certified error, fell back to the mean-value bound)`.
    fn eval(&self, x: f64) -> (f64, f64, bool) {
        let x4 = x.powi(4);
        let head = self.head(x, 8.0);
        let head_check = self.head(x, 4.0);
        let panels = self.panels + (x * x * self.omega / PI).ceil() as usize;
        let sums = half_period_partial_sums(|t| self.g(x4, t), self.omega, head, panels);
        let lim = averaged_limit(&sums, self.levels);
        let quad_err = (head - head_check).abs();
        if lim.alternating {
            (2.0 * lim.value, 2.0 * (lim.abs_error + quad_err), false)
        } else {
            let last = *sums.last().unwrap();
            let truncation = cosine_zero(self.omega, panels);
            let tail = self.model_const / (x.abs().powf(self.s) + truncation.powf(0.5 * self.s));
            (2.0 * last, 2.0 * quad_err + tail, true)
        }
    }
}

/// Direct quadrature of `f̂_s(ξ)` returning the value and a certified error
/// (up to the outer truncation, which is taken where `T` has decayed below
/// `e^{-45}` of its scale and charged with the last panel's size).
pub fn fhat_oracle(s: KernelParam, xi: FreqPoint, opts: OracleOptions) -> Result<OracleResult> {
    let s = s.require_transform_range()?;
    let xi = xi.require_off_axis()?;
    if !(opts.truncation > 0.0) {
        return Err(Error::domain("truncation must be positive"));
    }
    let sv = s.s();
    let xi2 = xi.xi2.abs();
    let xi1 = xi.xi1.abs();
    let omega = 2.0 * PI * xi2;
    let min_panels = opts.averaging_levels + 3;
    let panels = ((opts.truncation * omega / PI - 0.5).floor().max(0.0) as usize).max(min_panels);
    let inner = Inner {
        s: sv,
        omega,
        panels,
        levels: opts.averaging_levels,
        model_const: 2f64.powf(2.0 - 0.25 * sv) / (PI * xi2),
    };

    let mut evaluations = 0usize;
    let mut fallbacks = 0usize;
    let mut weighted_err = Neumaier::default();
    let mut total = Neumaier::default();

    let width = {
        let w = 0.25 / xi2.sqrt();
        if xi1 > 0.0 {
            w.min(0.5 / xi1)
        } else {
            w
        }
    };
    // First panel: T has an integrable singularity at x = 0 when s > 2.
    let outer_first = TanhSinh {
        rel_tol: 1e-10,
        min_relative_distance: 1e-30,
        max_level: 9,
        ..TanhSinh::default()
    };
    let mut first_err = 0.0;
    let r = outer_first.integrate(
        |x| {
            let (t, e, fb) = inner.eval(x);
            evaluations += 1;
            fallbacks += fb as usize;
            // Σ wᵢeᵢ ≤ width · max eᵢ: the weights are positive and sum to the width.
            first_err = f64::max(first_err, e);
            2.0 * (2.0 * PI * xi1 * x).cos() * t
        },
        0.0,
        width,
    )?;
    total.add(r.value);
    let mut quad_err = r.abs_error;
    weighted_err.add(2.0 * width * first_err);

    let x_end = (45.0 / (2.0 * PI * xi2)).sqrt() + width;
    let gl = gauss_legendre_20();
    let mut a = width;
    let mut last_panel = r.value.abs();
    while a < x_end {
        let b = a + width;
        let mut panel = Neumaier::default();
        for (x, w) in gl.mapped(a, b) {
            let (t, e, fb) = inner.eval(x);
            evaluations += 1;
            fallbacks += fb as usize;
            panel.add(w * 2.0 * (2.0 * PI * xi1 * x).cos() * t);
            weighted_err.add(2.0 * w * e);
        }
        last_panel = panel.total().abs();
        total.add(panel.total());
        a = b;
    }
    quad_err += 2.0 * last_panel;

    let value = total.total();
    let certified_error = weighted_err.total() + quad_err;
    if !(certified_error <= opts.rel_tol * value.abs()) {
        return Err(Error::Certification(format!(
            "oracle error {certified_error:e} exceeds {} of |{value:e}|",
            opts.rel_tol
        )));
    }
    Ok(OracleResult {
        value,
        certified_error,
        inner_fallbacks: fallbacks,
        inner_evaluations: evaluations,
    })
}

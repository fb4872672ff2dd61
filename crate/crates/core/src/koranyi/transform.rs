//! The transform `f̂_s` through the Bessel profile.
//!
//! Integrating out `t` first gives the t-slice transform
//! `C |x|^{1-s/2} |ξ₂|^{(s-2)/4} K_{(s-2)/4}(2π x² |ξ₂|)` with
//! `C = 2π^{s/4}/Γ(s/4)`. Substituting `x = y/√|ξ₂|` in the remaining
//! `x`-integral gives
//!
//! ```text
//! f̂_s(ξ) = C |ξ₂|^{(s-3)/2} G(η),   η = |ξ₁|/√|ξ₂|,
//! G(η)   = 2 ∫₀^∞ cos(2πηy) u(y) dy,   u(y) = y^{1-s/2} K_{(s-2)/4}(2πy²).
//! ```
//!
//! [`FourierProfile`] tabulates `u` once per `s` as piecewise Chebyshev
//! series (dyadic panels toward the origin, uniform panels further out) and
//! integrates `G` panel by panel between the zeros of the cosine. Below the
//! first panel `u` is replaced by its two-term small-argument expansion, whose
//! moments are exact; beyond `y = 3` the remainder is bounded through
//! `K_ν ≤ K_{1/2}`.

use std::f64::consts::PI;

use crate::bessel::k_unchecked;
use crate::error::{Error, Result};
use crate::gamma::{gamma, sin_pi};
use crate::quadrature::gauss_legendre_20;
use crate::report::Estimate;
use crate::summation::Neumaier;

use super::{transform_prefactor, FreqPoint, KernelParam};

const CHEB_N: usize = 24;
const FLOOR_EXPONENT: i32 = -30;
/// Dyadic panels run up to here, uniform panels beyond.
const DYADIC_END: f64 = 0.5;
const UNIFORM_WIDTH: f64 = 1.0 / 16.0;
const PROFILE_END: f64 = 3.0;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `(2π^{s/4}/Γ(s/4)) |x|^{1-s/2} |ξ₂|^{(s-2)/4} K_{(s-2)/4}(2πx²|ξ₂|)`, the
/// transform in `t` of `f_s(x, ·)` at frequency `ξ₂`.
pub fn t_slice_transform(s: KernelParam, x: f64, xi2: f64) -> Result<Estimate> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::domain("t-slice transform needs finite x ≠ 0"));
    }
    if xi2 == 0.0 || !xi2.is_finite() {
        return Err(Error::domain("t-slice transform needs finite ξ₂ ≠ 0"));
    }
    let sv = s.s();
    let nu = 0.25 * (sv - 2.0);
    let k = k_unchecked(nu, 2.0 * PI * x * x * xi2.abs())?;
    let scale =
        transform_prefactor(s) * x.abs().powf(1.0 - 0.5 * sv) * xi2.abs().powf(0.25 * (sv - 2.0));
    Ok(Estimate::new(
        scale * k.value,
        scale * k.abs_error_estimate + 4.0 * f64::EPSILON * scale * k.value,
    ))
}

/// `u(y) = y^{1-s/2} K_{(s-2)/4}(2πy²)` with its absolute error estimate.
pub fn profile_u(s: f64, y: f64) -> Result<(f64, f64)> {
    let k = k_unchecked(0.25 * (s - 2.0), 2.0 * PI * y * y)?;
    let p = y.powf(1.0 - 0.5 * s);
    Ok((p * k.value, p * k.abs_error_estimate + 2.0 * f64::EPSILON * p * k.value))
}

/// `-u'(y) = 4π y^{2-s/2} K_{(s+2)/4}(2πy²)`, a product of positive factors.
pub fn profile_minus_u_prime(s: f64, y: f64) -> Result<(f64, f64)> {
    let k = k_unchecked(0.25 * (s + 2.0), 2.0 * PI * y * y)?;
    let p = 4.0 * PI * y.powf(2.0 - 0.5 * s);
    Ok((p * k.value, p * k.abs_error_estimate + 2.0 * f64::EPSILON * p * k.value))
}

/// Chebyshev series of `u` on one panel.
#[derive(Debug, Clone)]
struct ChebPanel {
    a: f64,
    b: f64,
    coeffs: [f64; CHEB_N],
    abs_error: f64,
}

impl ChebPanel {
    fn build<F: FnMut(f64) -> Result<(f64, f64)>>(mut f: F, a: f64, b: f64) -> Result<Self> {
        let n = CHEB_N as f64;
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut values = [0.0; CHEB_N];
        let mut value_error = 0.0f64;
        for (j, v) in values.iter_mut().enumerate() {
            let t = (PI * (j as f64 + 0.5) / n).cos();
            let (fv, fe) = f(mid + half * t)?;
            *v = fv;
            value_error = value_error.max(fe);
        }
        let mut coeffs = [0.0; CHEB_N];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut acc = Neumaier::default();
            for (j, &v) in values.iter().enumerate() {
                acc.add(v * (PI * k as f64 * (j as f64 + 0.5) / n).cos());
            }
            *c = 2.0 / n * acc.total();
        }
        coeffs[0] *= 0.5;
        let mut panel = Self {
            a,
            b,
            coeffs,
            abs_error: 0.0,
        };
        // Check against direct evaluation away from the nodes.
        let mut check = 0.0f64;
        for t in [-0.83, -0.31, 0.17, 0.69] {
            let y = mid + half * t;
            let (fv, fe) = f(y)?;
            check = check.max((panel.eval(y) - fv).abs());
            value_error = value_error.max(fe);
        }
        let tail = coeffs[CHEB_N - 1].abs() + coeffs[CHEB_N - 2].abs();
        panel.abs_error = 2.0 * check + tail + value_error;
        Ok(panel)
    }

    fn eval(&self, y: f64) -> f64 {
        let t = (2.0 * y - self.a - self.b) / (self.b - self.a);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs[1..].iter().rev() {
            let b0 = c + 2.0 * t * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + t * b1 - b2
    }
}

/// `lnΓ(1+ν) - lnΓ(1-ν)` with full relative accuracy for small `ν`.
fn log_gamma_odd_part(nu: f64) -> f64 {
    if nu.abs() >= 0.05 {
        return gamma(1.0 + nu).ln() - gamma(1.0 - nu).ln();
    }
    const ZETA_ODD: [(i32, f64); 7] = [
        (3, 1.202_056_903_159_594_3),
        (5, 1.036_927_755_143_369_9),
        (7, 1.008_349_277_381_922_8),
        (9, 1.002_008_392_826_082_2),
        (11, 1.000_494_188_604_119_5),
        (13, 1.000_122_713_347_578_5),
        (15, 1.000_030_588_236_307_0),
    ];
    let mut v = -2.0 * EULER_GAMMA * nu;
    for (k, z) in ZETA_ODD {
        v -= 2.0 * z * nu.powi(k) / k as f64;
    }
    v
}

/// `∫₀^{y0} y^k u(y) dy` from `u(y) ≈ (π/(2 sin νπ)) [P y^{-4ν} - Q]` with
/// `P = π^{-ν}/Γ(1-ν)`, `Q = π^ν/Γ(1+ν)`, `ν = (s-2)/4`. The next terms are
/// smaller by a factor `(πy²)²`. Written through `expm1` so that `ν → 0`
/// (the logarithmic case `s = 2`) loses no accuracy.
fn small_y_moment(s: f64, y0: f64, k: i32) -> f64 {
    let nu = 0.25 * (s - 2.0);
    let kp1 = (k + 1) as f64;
    let base = y0.powi(k + 1) / kp1;
    if nu == 0.0 {
        return base * (-PI.ln() - 2.0 * y0.ln() - EULER_GAMMA + 2.0 / kp1);
    }
    let d = -2.0 * nu * PI.ln() - 4.0 * nu * y0.ln() + log_gamma_odd_part(nu)
        - (-4.0 * nu / kp1).ln_1p();
    let q = PI.powf(nu) / gamma(1.0 + nu);
    PI / (2.0 * sin_pi(nu)) * base * q * d.exp_m1()
}

/// Tabulated profile `u` for one kernel exponent. Immutable after
/// construction and cheap to share between threads.
#[derive(Debug, Clone)]
pub struct FourierProfile {
    s: KernelParam,
    prefactor: f64,
    y0: f64,
    moments: [f64; 3],
    panels: Vec<ChebPanel>,
    tail_bound: f64,
}

impl FourierProfile {
    pub fn new(s: KernelParam) -> Result<Self> {
        let s = s.require_transform_range()?;
        let sv = s.s();
        let y0 = 2f64.powi(FLOOR_EXPONENT);
        let mut edges = Vec::new();
        let mut y = y0;
        while y < DYADIC_END {
            edges.push(y);
            y *= 2.0;
        }
        let mut y = DYADIC_END;
        while y < PROFILE_END - 1e-12 {
            edges.push(y);
            y += UNIFORM_WIDTH;
        }
        edges.push(PROFILE_END);
        let panels = edges
            .windows(2)
            .map(|w| ChebPanel::build(|y| profile_u(sv, y), w[0], w[1]))
            .collect::<Result<Vec<_>>>()?;
        let moments = [
            small_y_moment(sv, y0, 0),
            small_y_moment(sv, y0, 2),
            small_y_moment(sv, y0, 4),
        ];
        // 2∫_Y^∞ u ≤ 2 · (Y^{-s/2}/2) · e^{-2πY²}/(4πY), using K_ν ≤ K_{1/2}.
        let yy = PROFILE_END;
        let tail_bound = yy.powf(-0.5 * sv) * (-2.0 * PI * yy * yy).exp() / (4.0 * PI * yy);
        Ok(Self {
            s,
            prefactor: transform_prefactor(s),
            y0,
            moments,
            panels,
            tail_bound,
        })
    }

    pub fn param(&self) -> KernelParam {
        self.s
    }

    /// Interpolated `u(y)` on the tabulated range.
    pub fn u_interpolated(&self, y: f64) -> Option<f64> {
        let i = self.panels.partition_point(|p| p.b < y);
        let p = self.panels.get(i)?;
        (y >= p.a).then(|| p.eval(y))
    }

    /// Largest panel error estimate relative to the panel's values.
    pub fn max_interpolation_error(&self) -> f64 {
        self.panels
            .iter()
            .map(|p| p.abs_error / p.eval(0.5 * (p.a + p.b)).abs())
            .fold(0.0, f64::max)
    }

    /// `G(η) = 2∫₀^∞ cos(2πηy) u(y) dy`.
    pub fn g(&self, eta: f64) -> Result<Estimate> {
        let eta = eta.abs();
        if !eta.is_finite() {
            return Err(Error::domain("η must be finite"));
        }
        let z = 2.0 * PI * eta;
        let zy = z * self.y0;
        if zy > 0.1 {
            return Err(Error::precondition(format!(
                "η = {eta:e} is beyond the resolved range of the profile"
            )));
        }
        let [m0, m2, m4] = self.moments;
        let mut total = Neumaier::default();
        total.add(2.0 * m0);
        total.add(-z * z * m2);
        total.add(z.powi(4) * m4 / 12.0);
        let mut err = 2.0 * zy.powi(6) / 720.0 * m0.abs() + 1e-15 * m0.abs();
        let mut magnitude = 2.0 * m0.abs();

        let gl = gauss_legendre_20();
        let piece = |a: f64, b: f64, p: &ChebPanel, total: &mut Neumaier| {
            let mut acc = Neumaier::default();
            for (y, w) in gl.mapped(a, b) {
                acc.add(w * (z * y).cos() * p.eval(y));
            }
            let v = 2.0 * acc.total();
            total.add(v);
            v.abs()
        };
        for p in &self.panels {
            err += 2.0 * p.abs_error * (p.b - p.a);
            if eta == 0.0 {
                magnitude += piece(p.a, p.b, p, &mut total);
                continue;
            }
            // Split at the zeros (k + ½)/(2η) of the cosine.
            let mut a = p.a;
            let mut k = (2.0 * eta * p.a - 0.5).ceil().max(0.0);
            loop {
                let zero = (k + 0.5) / (2.0 * eta);
                if zero >= p.b {
                    break;
                }
                if zero > a {
                    magnitude += piece(a, zero, p, &mut total);
                    a = zero;
                }
                k += 1.0;
            }
            magnitude += piece(a, p.b, p, &mut total);
        }
        err += self.tail_bound + 8.0 * f64::EPSILON * magnitude;
        Ok(Estimate::new(total.total(), err))
    }

    /// `f̂_s(ξ)`.
    pub fn fhat(&self, xi: FreqPoint) -> Result<Estimate> {
        let xi = xi.require_off_axis()?;
        let scale = self.prefactor * xi.xi2.abs().powf(0.5 * (self.s.s() - 3.0));
        let g = self.g(xi.eta())?;
        Ok(Estimate::new(
            scale * g.value,
            scale * g.abs_error + 4.0 * f64::EPSILON * (scale * g.value).abs(),
        ))
    }

    /// `f̂_s(ξ) / f_{3-s}(ξ)`, which depends on `η` only:
    /// `C G(η) (1 + η⁴)^{(3-s)/4}`.
    pub fn bound_ratio(&self, eta: f64) -> Result<Estimate> {
        let g = self.g(eta)?;
        let w = self.prefactor * (1.0 + eta.powi(4)).powf(0.25 * (3.0 - self.s.s()));
        Ok(Estimate::new(w * g.value, w * g.abs_error))
    }
}

/// `f̂_s(ξ)` for `s ∈ (1, 3)`, `ξ₂ ≠ 0`. Builds a [`FourierProfile`]; reuse
/// one directly when evaluating many frequencies.
pub fn fhat(s: KernelParam, xi: FreqPoint) -> Result<Estimate> {
    xi.require_off_axis()?;
    FourierProfile::new(s)?.fhat(xi)
}

//! Modified Bessel functions `I_ν` and `K_ν` of real order at real `x > 0`.
//!
//! `K_ν` has three independent routes:
//!
//! - the definition `π (I_{-ν} - I_ν) / (2 sin νπ)` with power series for `I`,
//! - Basset's integral `(x/2)^ν √π / Γ(ν+½) ∫₀^∞ e^{-x cosh φ} sinh^{2ν} φ dφ`,
//!   evaluated by tanh-sinh quadrature around the integrand's peak,
//! - the leading large-argument term `√(π/2x) e^{-x}`.
//!
//! [`bessel_k`] picks one route per regime; [`bessel_k_verified`] runs every
//! applicable route and insists they agree.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{gamma, sin_pi};
use crate::quadrature::TanhSinh;

/// Largest supported `|ν|` in the public API.
pub const MAX_ORDER: f64 = 2.0;
/// Internal ceiling; shifted orders `ν ± 1` of the derivative identities reach 2.75.
const MAX_INTERNAL_ORDER: f64 = 3.0;
/// Distance to the nearest integer below which the definition path is avoided.
const NEAR_INTEGER: f64 = 1e-3;
const SERIES_MAX_X: f64 = 2.0;
const BASSET_MAX_X: f64 = 30.0;
/// log of the peak ratio where the Basset integrand is truncated (≈ ln 1e18).
const BASSET_LOG_CUTOFF: f64 = 41.45;
const SERIES_MAX_TERMS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselOrder {
    nu: f64,
}

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu.abs() > MAX_ORDER {
            return Err(Error::domain(format!(
                "order ν = {nu} outside the supported range |ν| ≤ {MAX_ORDER}"
            )));
        }
        Ok(Self { nu })
    }

    pub fn nu(self) -> f64 {
        self.nu
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BesselMethod {
    Series,
    BassetQuadrature,
    Asymptotic,
}

impl BesselMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            BesselMethod::Series => "series",
            BesselMethod::BassetQuadrature => "basset_quadrature",
            BesselMethod::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselEval {
    pub value: f64,
    pub method: BesselMethod,
    pub abs_error_estimate: f64,
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("argument x = {x} must be finite and positive")))
    }
}

fn distance_to_integer(nu: f64) -> f64 {
    (nu - nu.round()).abs()
}

/// Power series with its summed rounding budget.
struct SeriesValue {
    value: f64,
    abs_error: f64,
}

fn i_series(nu: f64, x: f64) -> Result<SeriesValue> {
    let half = 0.5 * x;
    let q = half * half;
    let (mut n, mut term) = if nu < 0.0 && distance_to_integer(nu) == 0.0 {
        // 1/Γ(n+ν+1) vanishes for n < -ν; the sum starts at n = -ν.
        let m = (-nu).round() as usize;
        let mut fact = 1.0;
        for k in 1..=m {
            fact *= k as f64;
        }
        (m, half.powi(m as i32) / fact)
    } else {
        (0, half.powf(nu) / gamma(nu + 1.0))
    };
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for _ in 0..SERIES_MAX_TERMS {
        sum += term;
        abs_sum += term.abs();
        let nf = n as f64;
        let next = term * q / ((nf + 1.0) * (nf + 1.0 + nu));
        n += 1;
        // Terms decrease monotonically once n + ν + 1 > q.
        if next.abs() <= 1e-17 * sum.abs() && (n as f64 + nu) > q {
            sum += next;
            abs_sum += next.abs();
            return Ok(SeriesValue {
                value: sum,
                abs_error: 4.0 * f64::EPSILON * abs_sum + 1e-16 * sum.abs(),
            });
        }
        term = next;
    }
    Err(Error::NonConvergence {
        what: "I_ν power series",
        iterations: SERIES_MAX_TERMS,
    })
}

/// `I_ν(x)` by its power series. For negative integer `ν` the sum starts at
/// `n = -ν`; after reindexing it is term for term the series of `I_{-ν}`, which
/// is what gets summed.
pub fn bessel_i(order: BesselOrder, x: f64) -> Result<f64> {
    Ok(bessel_i_eval(order, x)?.value)
}

/// [`bessel_i`] with the series' rounding budget as error estimate.
pub fn bessel_i_eval(order: BesselOrder, x: f64) -> Result<BesselEval> {
    check_x(x)?;
    let nu = order.nu();
    let nu = if nu < 0.0 && nu == nu.round() { -nu } else { nu };
    let r = i_series(nu, x)?;
    Ok(BesselEval {
        value: r.value,
        method: BesselMethod::Series,
        abs_error_estimate: r.abs_error,
    })
}

fn k_series(nu: f64, x: f64) -> Result<BesselEval> {
    let s = sin_pi(nu);
    if s == 0.0 {
        return Err(Error::precondition(
            "the definition path is singular at integer order",
        ));
    }
    let ip = i_series(nu, x)?;
    let im = i_series(-nu, x)?;
    let factor = PI / (2.0 * s);
    let value = factor * (im.value - ip.value);
    let cancellation = f64::EPSILON * (im.value.abs() + ip.value.abs());
    let abs_error = factor.abs() * (im.abs_error + ip.abs_error + 2.0 * cancellation)
        + 2.0 * f64::EPSILON * value.abs();
    Ok(BesselEval {
        value,
        method: BesselMethod::Series,
        abs_error_estimate: abs_error,
    })
}

/// `ln` of the Basset integrand plus `x`: `-2x sinh²(φ/2) + 2ν ln sinh φ`.
fn basset_log_integrand(nu: f64, x: f64, phi: f64) -> f64 {
    let sh = (0.5 * phi).sinh();
    let mut v = -2.0 * x * sh * sh;
    if nu != 0.0 {
        v += 2.0 * nu * phi.sinh().ln();
    }
    v
}

/// Bisection for the point on `[lo, hi]` where the monotone function `f`
/// crosses `target`; `increasing` gives its direction.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, target: f64, increasing: bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let above = f(mid) > target;
        if above == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `(ln(e^x K_ν(x)), relative error)` from Basset's first integral, `ν ≥ 0`.
fn basset_log_scaled(nu: f64, x: f64) -> Result<(f64, f64)> {
    debug_assert!(nu >= 0.0);
    let c = (nu + (nu * nu + x * x).sqrt()) / x;
    let peak = if c > 1.0 { c.acosh() } else { 0.0 };
    let log_peak = if peak > 0.0 {
        basset_log_integrand(nu, x, peak)
    } else {
        0.0
    };
    let rel = |phi: f64| basset_log_integrand(nu, x, phi) - log_peak;

    let mut hi = peak + 1.0;
    while rel(hi) > -BASSET_LOG_CUTOFF {
        hi = peak + 2.0 * (hi - peak);
    }
    let hi = bisect(rel, peak, hi, -BASSET_LOG_CUTOFF, false);
    let lo = if peak > 0.0 && nu > 0.0 && rel(f64::MIN_POSITIVE.max(1e-300)) < -BASSET_LOG_CUTOFF {
        bisect(rel, 0.0, peak, -BASSET_LOG_CUTOFF, true)
    } else {
        0.0
    };

    let rule = TanhSinh {
        rel_tol: 1e-14,
        min_level: 3,
        max_level: 12,
        ..TanhSinh::default()
    };
    let integrand = |phi: f64| rel(phi).exp();
    let mut value = 0.0;
    let mut err = 0.0;
    if peak > lo {
        let r = rule.integrate(integrand, lo, peak)?;
        value += r.value;
        err += r.abs_error;
    }
    let r = rule.integrate(integrand, peak, hi)?;
    value += r.value;
    err += r.abs_error;
    if !(value > 0.0) {
        return Err(Error::NonConvergence {
            what: "Basset quadrature",
            iterations: 0,
        });
    }
    // Mass cut off beyond the truncation points, relative to the peak height.
    let truncation = (-BASSET_LOG_CUTOFF).exp() * (hi - lo + 1.0) / value;

    let log_prefactor = nu * (0.5 * x).ln() + 0.5 * PI.ln() - gamma(nu + 0.5).ln();
    let log_value = log_prefactor + log_peak + value.ln();
    let rel_err = err / value + truncation + 16.0 * f64::EPSILON * (1.0 + log_value.abs());
    Ok((log_value, rel_err))
}

fn k_basset(nu: f64, x: f64) -> Result<BesselEval> {
    let (log_scaled, rel_err) = basset_log_scaled(nu.abs(), x)?;
    let value = (log_scaled - x).exp();
    if value == 0.0 || !value.is_normal() {
        return Err(Error::Underflow(format!("K_{nu}({x}) is below the f64 range")));
    }
    Ok(BesselEval {
        value,
        method: BesselMethod::BassetQuadrature,
        abs_error_estimate: rel_err * value,
    })
}

/// First and second correction coefficients of the large-argument expansion.
fn asymptotic_corrections(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let first = (mu - 1.0) / (8.0 * x);
    let second = (mu - 1.0) * (mu - 9.0) / (128.0 * x * x);
    (first, second)
}

fn k_asymptotic(nu: f64, x: f64) -> BesselEval {
    let lead = (PI / (2.0 * x)).sqrt() * (-x).exp();
    let (first, second) = asymptotic_corrections(nu, x);
    BesselEval {
        value: lead,
        method: BesselMethod::Asymptotic,
        abs_error_estimate: lead * (first.abs() + second.abs() + 2.0 * f64::EPSILON),
    }
}

/// Dispatch without the public order gate; accepts `|ν| ≤ 3`.
pub(crate) fn k_unchecked(nu: f64, x: f64) -> Result<BesselEval> {
    check_x(x)?;
    if !nu.is_finite() || nu.abs() > MAX_INTERNAL_ORDER {
        return Err(Error::domain(format!("order ν = {nu} outside |ν| ≤ {MAX_INTERNAL_ORDER}")));
    }
    let nu = nu.abs();
    if x <= SERIES_MAX_X && distance_to_integer(nu) >= NEAR_INTEGER {
        return k_series(nu, x);
    }
    if x <= BASSET_MAX_X {
        return k_basset(nu, x);
    }
    let (first, second) = asymptotic_corrections(nu, x);
    if first.abs() + second.abs() <= 1e-12 {
        return Ok(k_asymptotic(nu, x));
    }
    // The leading term alone is too coarse here; quadrature with a guard
    // against the asymptotic envelope.
    let q = k_basset(nu, x)?;
    let lead = k_asymptotic(nu, x).value;
    let allowed = 2.0 * first.abs() + 2.0 * second.abs() + 1e-10;
    if ((q.value / lead) - 1.0).abs() > allowed {
        return Err(Error::CrossValidation(format!(
            "K_{nu}({x}) = {} departs from the asymptotic envelope {lead}",
            q.value
        )));
    }
    Ok(q)
}

/// `K_ν(x)` by the regime's method: the definition for `x ≤ 2` away from
/// integer order, Basset quadrature up to `x = 30` (and at near-integer
/// order), and for larger `x` the leading asymptotic term when its
/// corrections vanish, otherwise guarded quadrature.
pub fn bessel_k(order: BesselOrder, x: f64) -> Result<BesselEval> {
    k_unchecked(order.nu(), x)
}

/// `K_ν(x)` by a forced method. The asymptotic method returns the leading
/// term and reports the size of the first two corrections as its error.
pub fn bessel_k_with(method: BesselMethod, order: BesselOrder, x: f64) -> Result<BesselEval> {
    check_x(x)?;
    let nu = order.nu().abs();
    match method {
        BesselMethod::Series => k_series(nu, x),
        BesselMethod::BassetQuadrature => k_basset(nu, x),
        BesselMethod::Asymptotic => Ok(k_asymptotic(nu, x)),
    }
}

/// `e^x K_ν(x)` by Basset quadrature; finite far beyond the range where
/// `K_ν` itself underflows.
pub fn bessel_k_scaled(order: BesselOrder, x: f64) -> Result<BesselEval> {
    check_x(x)?;
    let (log_scaled, rel_err) = basset_log_scaled(order.nu().abs(), x)?;
    let value = log_scaled.exp();
    Ok(BesselEval {
        value,
        method: BesselMethod::BassetQuadrature,
        abs_error_estimate: rel_err * value,
    })
}

/// Evaluates `K_ν(x)` by every applicable method and fails if any two
/// disagree beyond their combined error estimates. Returns the dispatcher's
/// value with the largest error estimate seen.
pub fn bessel_k_verified(order: BesselOrder, x: f64) -> Result<BesselEval> {
    let primary = bessel_k(order, x)?;
    let nu = order.nu().abs();
    let mut evals = vec![primary];
    if primary.method != BesselMethod::BassetQuadrature {
        evals.push(k_basset(nu, x)?);
    }
    if primary.method != BesselMethod::Series
        && x <= SERIES_MAX_X
        && distance_to_integer(nu) >= NEAR_INTEGER
    {
        evals.push(k_series(nu, x)?);
    }
    let mut worst = primary.abs_error_estimate;
    for (i, a) in evals.iter().enumerate() {
        for b in &evals[i + 1..] {
            let allowed = 4.0 * (a.abs_error_estimate + b.abs_error_estimate)
                + 4.0 * f64::EPSILON * a.value.abs();
            if (a.value - b.value).abs() > allowed {
                return Err(Error::CrossValidation(format!(
                    "K_{nu}({x}): {} = {:e} vs {} = {:e}",
                    a.method.as_str(),
                    a.value,
                    b.method.as_str(),
                    b.value
                )));
            }
            worst = worst.max((a.value - b.value).abs());
        }
    }
    Ok(BesselEval {
        abs_error_estimate: worst,
        ..primary
    })
}

/// `(d/dx[x^ν K_ν(x)], d/dx[x^{-ν} K_ν(x)]) = (-x^ν K_{ν-1}(x), -x^{-ν} K_{ν+1}(x))`.
///
/// Requires `|ν| ≤ 1.75`; the shifted orders are evaluated internally even
/// where they exceed the public order range.
pub fn kv_weighted_derivatives(order: BesselOrder, x: f64) -> Result<(f64, f64)> {
    check_x(x)?;
    let nu = order.nu();
    if nu.abs() > 1.75 {
        return Err(Error::domain(format!(
            "kv_weighted_derivatives needs |ν| ≤ 1.75, got {nu}"
        )));
    }
    let below = k_unchecked(nu - 1.0, x)?.value;
    let above = k_unchecked(nu + 1.0, x)?.value;
    let xp = x.powf(nu);
    Ok((-xp * below, -above / xp))
}

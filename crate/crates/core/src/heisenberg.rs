//! The first Heisenberg group `ℍ = ℂ × ℝ` with
//! `(z, t) ∗ (ζ, τ) = (z + ζ, t + τ + 2ω(z, ζ))`, `ω(z, ζ) = Im(z ζ̄)`.
//!
//! Complex numbers are `(re, im)` pairs; `ω(z, ζ) = z_y ζ_x − z_x ζ_y`, so
//! `ω(1, i) = −1`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HPoint {
    pub zx: f64,
    pub zy: f64,
    pub t: f64,
}

impl HPoint {
    pub const IDENTITY: HPoint = HPoint { zx: 0.0, zy: 0.0, t: 0.0 };

    pub fn new(zx: f64, zy: f64, t: f64) -> Result<Self> {
        if !(zx.is_finite() && zy.is_finite() && t.is_finite()) {
            return Err(Error::domain("Heisenberg point components must be finite"));
        }
        Ok(Self { zx, zy, t })
    }

    pub fn z(self) -> (f64, f64) {
        (self.zx, self.zy)
    }

    pub fn z_norm_sq(self) -> f64 {
        self.zx * self.zx + self.zy * self.zy
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Koranyi,
    Parabolic,
}

/// Angle normalised to `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Angle {
    theta: f64,
}

impl Angle {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::domain("angle must be finite"));
        }
        let mut t = theta.rem_euclid(PI);
        if t >= PI {
            t = 0.0;
        }
        Ok(Self { theta: t })
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    /// `e^{iθ}`.
    pub fn unit(self) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (c, s)
    }

    /// `i e^{iθ}`.
    pub fn unit_perp(self) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (-s, c)
    }
}

/// `(λ₁ i e^{iθ}, λ₂)` in the vertical subgroup `V_θ^⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerticalPoint {
    pub lambda1: f64,
    pub lambda2: f64,
    pub theta: Angle,
}

impl VerticalPoint {
    pub fn embed(self) -> HPoint {
        let (px, py) = self.theta.unit_perp();
        HPoint {
            zx: self.lambda1 * px,
            zy: self.lambda1 * py,
            t: self.lambda2,
        }
    }
}

fn dot(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

/// `ω(z, ζ) = Im(z ζ̄)`.
pub fn omega(z: (f64, f64), zeta: (f64, f64)) -> f64 {
    z.1 * zeta.0 - z.0 * zeta.1
}

pub fn group_mul(p: HPoint, q: HPoint) -> HPoint {
    HPoint {
        zx: p.zx + q.zx,
        zy: p.zy + q.zy,
        t: p.t + q.t + 2.0 * omega(p.z(), q.z()),
    }
}

pub fn group_inv(p: HPoint) -> HPoint {
    HPoint {
        zx: -p.zx,
        zy: -p.zy,
        t: -p.t,
    }
}

/// `(|z|⁴ + t²)^{1/4}`.
pub fn koranyi_norm(p: HPoint) -> f64 {
    let r2 = p.z_norm_sq();
    (r2 * r2 + p.t * p.t).sqrt().sqrt()
}

/// Korányi: `‖q⁻¹ ∗ p‖`. Parabolic: `(|z − ζ|⁴ + |t − τ|²)^{1/4}`.
pub fn distance(p: HPoint, q: HPoint, metric: Metric) -> f64 {
    match metric {
        Metric::Koranyi => koranyi_norm(group_mul(group_inv(q), p)),
        Metric::Parabolic => koranyi_norm(HPoint {
            zx: p.zx - q.zx,
            zy: p.zy - q.zy,
            t: p.t - q.t,
        }),
    }
}

/// `(λz, λ²t)`.
pub fn dilate(lambda: f64, p: HPoint) -> HPoint {
    HPoint {
        zx: lambda * p.zx,
        zy: lambda * p.zy,
        t: lambda * lambda * p.t,
    }
}

/// `λ₁ = ⟨z, ie^{iθ}⟩`, `λ₂ = t + 2ω(π_θ z, z)` with `π_θ z = ⟨z, e^{iθ}⟩ e^{iθ}`.
pub fn vertical_projection(theta: Angle, p: HPoint) -> VerticalPoint {
    let e = theta.unit();
    let a = dot(p.z(), e);
    let lambda1 = dot(p.z(), theta.unit_perp());
    VerticalPoint {
        lambda1,
        lambda2: p.t + 2.0 * a * omega(e, p.z()),
        theta,
    }
}

/// `⟨z, e^{iθ}⟩`, the coordinate of the horizontal factor.
pub fn horizontal_projection(theta: Angle, p: HPoint) -> f64 {
    dot(p.z(), theta.unit())
}

/// `(λ e^{iθ}, 0)`.
pub fn embed_horizontal(lambda: f64, theta: Angle) -> HPoint {
    let (c, s) = theta.unit();
    HPoint {
        zx: lambda * c,
        zy: lambda * s,
        t: 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChordPhase {
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
}

/// `F(θ) = t − τ + 2ω(π_θ(z − ζ), z + ζ) − 2ω(z, ζ)` and its first two
/// θ-derivatives.
///
/// With `u = z − ζ`, `v = z + ζ`, `a = ⟨u, e⟩`, `a' = ⟨u, ie⟩`, `b = ⟨v, ie⟩`,
/// `b' = −⟨v, e⟩` one has `ω(π_θ u, v) = −ab`, so
/// `F = t − τ − 2ab − 2ω(z, ζ)`, `F' = −2(a'b + ab')`, `F'' = 4(ab − a'b')`.
/// Consequently `(F'/2)² + (F''/4)² = |u|²|v|²`.
pub fn chord_phase(theta: f64, p: HPoint, q: HPoint) -> ChordPhase {
    let (s, c) = theta.sin_cos();
    let e = (c, s);
    let ie = (-s, c);
    let u = (p.zx - q.zx, p.zy - q.zy);
    let v = (p.zx + q.zx, p.zy + q.zy);
    let a = dot(u, e);
    let a1 = dot(u, ie);
    let b = dot(v, ie);
    let b1 = -dot(v, e);
    ChordPhase {
        f: p.t - q.t - 2.0 * a * b - 2.0 * omega(p.z(), q.z()),
        f1: -2.0 * (a1 * b + a * b1),
        f2: 4.0 * (a * b - a1 * b1),
    }
}

/// `ω(π_θ z, z) − ω(π_θ ζ, ζ) − ω(z, ζ) − ω(π_θ(z + ζ), z − ζ)`, zero in
/// exact arithmetic.
pub fn omega_projection_identity_check(theta: Angle, p: HPoint, q: HPoint) -> f64 {
    let e = theta.unit();
    let proj = |w: (f64, f64)| {
        let a = dot(w, e);
        (a * e.0, a * e.1)
    };
    let z = p.z();
    let zeta = q.z();
    let sum = (z.0 + zeta.0, z.1 + zeta.1);
    let diff = (z.0 - zeta.0, z.1 - zeta.1);
    omega(proj(z), z) - omega(proj(zeta), zeta) - omega(z, zeta) - omega(proj(sum), diff)
}

/// Tolerance scale for [`omega_projection_identity_check`]:
/// `1 + |z|² + |ζ|²`.
pub fn identity_scale(p: HPoint, q: HPoint) -> f64 {
    1.0 + p.z_norm_sq() + q.z_norm_sq()
}

/// Lebesgue measure of `{θ ∈ [0, π) : |F(θ)| < ε}` from `samples` uniform
/// points `θ_k = kπ/samples`.
pub fn sublevel_measure(p: HPoint, q: HPoint, eps: f64, samples: usize) -> Result<f64> {
    Ok(sublevel_measures(p, q, &[eps], samples)?[0])
}

/// [`sublevel_measure`] for several thresholds sharing one sweep.
pub fn sublevel_measures(p: HPoint, q: HPoint, eps: &[f64], samples: usize) -> Result<Vec<f64>> {
    if samples < 1000 {
        return Err(Error::precondition("sublevel sampling needs at least 1000 points"));
    }
    if eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::domain("sublevel thresholds must be positive"));
    }
    let mut counts = vec![0usize; eps.len()];
    for k in 0..samples {
        let f = chord_phase(PI * k as f64 / samples as f64, p, q).f.abs();
        for (c, &e) in counts.iter_mut().zip(eps) {
            if f < e {
                *c += 1;
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|c| PI * c as f64 / samples as f64)
        .collect())
}

/// Least-squares slope of `ln y` against `ln x` over the pairs with `y > 0`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Option<(f64, f64, usize)> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(_, &v)| v > 0.0)
        .map(|(&a, &b)| (a.ln(), b.ln()))
        .collect();
    linear_fit(&pts).map(|(slope, residual)| (slope, residual, pts.len()))
}

/// Slope and RMS residual of the least-squares line through `pts`.
pub(crate) fn linear_fit(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum();
    Some((slope, (rss / n).sqrt()))
}

/// Worst scaled residual of one identity over a fuzz run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    /// `max |residual| / scale` over the samples.
    pub max_scaled_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Tolerance on scaled residuals of the exact identities.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Relative tolerance on `(F'/2)² + (F''/4)² = |z − ζ|²|z + ζ|²`.
pub const CHORD_TOL: f64 = 1e-9;

fn size(p: HPoint) -> f64 {
    1.0 + p.z_norm_sq() + p.t.abs()
}

fn gap(a: HPoint, b: HPoint) -> f64 {
    (a.zx - b.zx).abs().max((a.zy - b.zy).abs()).max((a.t - b.t).abs())
}

fn random_point(rng: &mut ChaCha8Rng, zr: f64, tr: f64) -> HPoint {
    HPoint {
        zx: rng.random_range(-zr..zr),
        zy: rng.random_range(-zr..zr),
        t: rng.random_range(-tr..tr),
    }
}

/// Fuzzes the group axioms, the vertical-horizontal decomposition, left
/// invariance, dilations, the ω-projection identity and the chord-phase
/// derivative identity with `z ∈ [-10, 10]²`, `t ∈ [-50, 50]`,
/// `θ ∈ [0, π)` and `λ` log-uniform in `[1e-2, 1e2]`.
///
/// Each residual is divided by a scale built from `1 + |z|² + |t|` of the
/// points involved (times `λ` or `λ²` for dilations).
pub fn identity_fuzz(samples: usize, seed: u64) -> Result<IdentityReport> {
    if samples == 0 {
        return Err(Error::domain("fuzz needs at least one sample"));
    }
    let names = [
        "associativity",
        "identity_element",
        "inverse",
        "vertical_horizontal_decomposition",
        "left_invariance",
        "dilation_norm",
        "dilation_automorphism",
        "omega_projection_identity",
        "chord_phase_derivative_identity",
    ];
    let mut worst = [0.0f64; 9];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let p = random_point(&mut rng, 10.0, 50.0);
        let q = random_point(&mut rng, 10.0, 50.0);
        let r = random_point(&mut rng, 10.0, 50.0);
        let th = Angle::new(rng.random_range(0.0..PI))?;
        let lambda = 10f64.powf(rng.random_range(-2.0..2.0));
        let (sp, sq, sr) = (size(p), size(q), size(r));

        let res = [
            gap(group_mul(group_mul(p, q), r), group_mul(p, group_mul(q, r))) / (sp * sq * sr),
            gap(group_mul(p, HPoint::IDENTITY), p).max(gap(group_mul(HPoint::IDENTITY, p), p)) / sp,
            gap(group_mul(p, group_inv(p)), HPoint::IDENTITY).max(gap(group_mul(group_inv(p), p), HPoint::IDENTITY))
                / sp,
            gap(
                group_mul(
                    vertical_projection(th, p).embed(),
                    embed_horizontal(horizontal_projection(th, p), th),
                ),
                p,
            ) / sp,
            (distance(group_mul(r, p), group_mul(r, q), Metric::Koranyi) - distance(p, q, Metric::Koranyi)).abs()
                / (sp * sq * sr),
            (koranyi_norm(dilate(lambda, p)) - lambda * koranyi_norm(p)).abs() / (lambda * sp),
            gap(
                group_mul(dilate(lambda, p), dilate(lambda, q)),
                dilate(lambda, group_mul(p, q)),
            ) / (lambda * lambda * sp * sq),
            omega_projection_identity_check(th, p, q).abs() / identity_scale(p, q),
            {
                let c = chord_phase(th.theta(), p, q);
                let u2 = (p.zx - q.zx).powi(2) + (p.zy - q.zy).powi(2);
                let v2 = (p.zx + q.zx).powi(2) + (p.zy + q.zy).powi(2);
                let lhs = (c.f1 / 2.0).powi(2) + (c.f2 / 4.0).powi(2);
                (lhs - u2 * v2).abs() / (u2 * v2).max(f64::MIN_POSITIVE)
            },
        ];
        for (w, r) in worst.iter_mut().zip(res) {
            *w = w.max(r);
        }
    }
    let checks = names
        .iter()
        .zip(worst)
        .enumerate()
        .map(|(i, (&name, w))| {
            let tolerance = if i == 8 { CHORD_TOL } else { IDENTITY_TOL };
            IdentityCheck {
                name,
                max_scaled_residual: w,
                tolerance,
                passed: w <= tolerance,
            }
        })
        .collect();
    Ok(IdentityReport {
        samples,
        seed,
        checks,
    })
}

/// Random pairs with `z, ζ ∈ [-1, 1]²`, `τ ∈ [-1, 1]` and `t` chosen so that
/// `F` vanishes at a random angle. Without a zero the sublevel sets are empty
/// for small `ε` and carry no exponent.
pub fn random_chord_pairs(n: usize, seed: u64) -> Vec<(HPoint, HPoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut p = random_point(&mut rng, 1.0, 1.0);
            let q = random_point(&mut rng, 1.0, 1.0);
            let th = rng.random_range(0.0..PI);
            p.t = 0.0;
            p.t = -chord_phase(th, p, q).f;
            (p, q)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SublevelFit {
    pub p: HPoint,
    pub q: HPoint,
    pub eps: Vec<f64>,
    pub measures: Vec<f64>,
    /// Least-squares slope of `ln m(ε)` against `ln ε` over `m > 0`.
    pub exponent: f64,
    pub residual: f64,
    pub points_used: usize,
}

pub fn sublevel_fit(p: HPoint, q: HPoint, eps: &[f64], samples: usize) -> Result<SublevelFit> {
    let measures = sublevel_measures(p, q, eps, samples)?;
    let (exponent, residual, points_used) = log_log_slope(eps, &measures).ok_or_else(|| {
        Error::InsufficientScales("fewer than two thresholds with a nonempty sublevel set".into())
    })?;
    Ok(SublevelFit {
        p,
        q,
        eps: eps.to_vec(),
        measures,
        exponent,
        residual,
        points_used,
    })
}

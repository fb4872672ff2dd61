//! Both sides of the energy identity `∫ f_s d(μ̃ ∗ μ) = ∫ f̂_s |μ̂|²` for a
//! mollified grid measure `μ`.
//!
//! The measure is `Σ_k w_k g_ε(· - p_k)` with `p_k` on a uniform grid and
//! `g_ε` the centred Gaussian with variance `ε²` per coordinate. Its
//! autocorrelation `A = μ̃ ∗ μ` is again a Gaussian mixture (variance `2ε²`),
//! and `|μ̂(ξ)|² = |Σ w_k e^{-2πi⟨p_k, ξ⟩}|² e^{-4π²ε²|ξ|²}`.
//!
//! Both integrals are taken in Korányi polar coordinates
//! `(x, t) = (r sin θ, r² cos θ √(1 + sin²θ))`, `θ ∈ [0, 2π)`, where
//! `x⁴ + t² = r⁴` and the Jacobian is `2r²/√(1 + sin²θ)`. The kernel becomes
//! `r^{-s}` and, by homogeneity, `f̂_s(ρ, θ) = ρ^{s-3} Ψ(θ)`; the angular
//! integrands are smooth and periodic, so the trapezoid rule converges
//! spectrally. The frequency integral stops at a cutoff `R` and adds the
//! bound `c M² ∫J dθ ∫_R^∞ ρ^{s-1} e^{-4π²ε²ρ²} dρ` with `c ≥ sup Ψ`
//! (from `f̂_s ≤ c f_{3-s}` and `f_{3-s} = 1` on the unit Korányi circle).

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre_20, TanhSinh};
use crate::report::Estimate;
use crate::summation::{pairwise_sum, Neumaier};

use super::transform::FourierProfile;
use super::{FreqPoint, KernelParam};

const THETA_START: usize = 64;
const THETA_MAX: usize = 1 << 14;
const THETA_REL_TOL: f64 = 1e-13;
/// Ratio between `c` in the tail bound and the largest sampled `Ψ`.
const TAIL_SAFETY: f64 = 1.5;

/// Mollified measure on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridDensity {
    pub x0: f64,
    pub t0: f64,
    pub h: f64,
    pub nx: usize,
    pub nt: usize,
    /// Weights in x-major order: `weights[i * nt + j]` sits at `(x0 + ih, t0 + jh)`.
    pub weights: Vec<f64>,
    pub eps: f64,
}

impl GridDensity {
    pub fn new(x0: f64, t0: f64, h: f64, nx: usize, nt: usize, weights: Vec<f64>, eps: f64) -> Result<Self> {
        if nx == 0 || nt == 0 || weights.len() != nx * nt {
            return Err(Error::domain("weights must fill the nx × nt grid"));
        }
        if !(h > 0.0 && eps > 0.0) {
            return Err(Error::domain("grid spacing and mollifier width must be positive"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::domain("weights must be finite and nonnegative"));
        }
        if !(weights.iter().sum::<f64>() > 0.0) {
            return Err(Error::DegenerateMeasure("total mass is zero".into()));
        }
        Ok(Self {
            x0,
            t0,
            h,
            nx,
            nt,
            weights,
            eps,
        })
    }

    /// Weights `ρ(p_k) h²` sampled from a density on an `n × n` grid over
    /// `[lo, lo + (n-1)h]²`, mollified at width `eps`.
    pub fn sample<F: Fn(f64, f64) -> f64>(density: F, lo: f64, n: usize, h: f64, eps: f64) -> Result<Self> {
        let mut weights = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                weights.push(density(lo + i as f64 * h, lo + j as f64 * h) * h * h);
            }
        }
        Self::new(lo, lo, h, n, n, weights, eps)
    }

    /// The three reference densities on a 9 × 9 grid over `[-1, 1]²` with
    /// `ε = h = 1/4`: a centred bump, two bumps a unit distance apart, and an
    /// anisotropic off-centre bump.
    pub fn reference_set() -> Vec<(&'static str, GridDensity)> {
        let h = 0.25;
        let g = |x: f64, t: f64, sx: f64, st: f64| (-(x * x) / (2.0 * sx * sx) - t * t / (2.0 * st * st)).exp();
        vec![
            (
                "single_bump",
                Self::sample(|x, t| g(x, t, 0.3, 0.3), -1.0, 9, h, h).unwrap(),
            ),
            (
                "two_bumps",
                Self::sample(|x, t| g(x - 0.5, t, 0.2, 0.2) + g(x + 0.5, t, 0.2, 0.2), -1.0, 9, h, h).unwrap(),
            ),
            (
                "anisotropic_offset",
                Self::sample(|x, t| g(x - 0.25, t + 0.15, 0.2, 0.45), -1.0, 9, h, h).unwrap(),
            ),
        ]
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// Same grid, weights multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.x0,
            self.t0,
            self.h,
            self.nx,
            self.nt,
            self.weights.iter().map(|w| c * w).collect(),
            self.eps,
        )
    }

    fn autocorrelation(&self) -> Vec<f64> {
        let (nx, nt) = (self.nx as isize, self.nt as isize);
        let cols = (2 * nt - 1) as usize;
        let mut c = vec![0.0; (2 * nx - 1) as usize * cols];
        for mx in -(nx - 1)..nx {
            for mt in -(nt - 1)..nt {
                let mut acc = Neumaier::default();
                for i in 0.max(-mx)..nx.min(nx - mx) {
                    for j in 0.max(-mt)..nt.min(nt - mt) {
                        acc.add(
                            self.weights[(i * nt + j) as usize]
                                * self.weights[((i + mx) * nt + j + mt) as usize],
                        );
                    }
                }
                c[(mx + nx - 1) as usize * cols + (mt + nt - 1) as usize] = acc.total();
            }
        }
        c
    }

    /// `|Σ w_k e^{-2πi⟨p_k, ξ⟩}|²`.
    fn weight_transform_sq(&self, xi1: f64, xi2: f64, et: &mut [(f64, f64)]) -> f64 {
        for (j, e) in et.iter_mut().enumerate() {
            let a = -2.0 * PI * (self.t0 + j as f64 * self.h) * xi2;
            *e = (a.cos(), a.sin());
        }
        let (mut re, mut im) = (0.0, 0.0);
        for i in 0..self.nx {
            let (mut rr, mut ri) = (0.0, 0.0);
            let row = &self.weights[i * self.nt..(i + 1) * self.nt];
            for (w, e) in row.iter().zip(et.iter()) {
                rr += w * e.0;
                ri += w * e.1;
            }
            let a = -2.0 * PI * (self.x0 + i as f64 * self.h) * xi1;
            let (c, s) = (a.cos(), a.sin());
            re += c * rr - s * ri;
            im += c * ri + s * rr;
        }
        re * re + im * im
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct DualityOptions {
    /// Frequency cutoff `R` in the Korányi radius `ρ`; chosen from the
    /// mollifier width when absent.
    pub freq_cutoff: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityReport {
    pub s: f64,
    pub lhs: Estimate,
    /// Includes `tail_bound`.
    pub rhs: Estimate,
    pub tail_bound: f64,
    pub freq_cutoff: f64,
    /// Constant used in the tail bound.
    pub c_bound: f64,
    pub radial_panels_lhs: usize,
    pub theta_nodes_rhs: usize,
}

impl DualityReport {
    /// `lhs ≤ rhs (1 + rel_slack)`.
    pub fn holds(&self, rel_slack: f64) -> bool {
        self.lhs.value <= self.rhs.value * (1.0 + rel_slack)
    }
}

/// Korányi polar angle data: `(sin θ, cos θ √(1+sin²θ), 2/√(1+sin²θ))`.
fn polar(theta: f64) -> (f64, f64, f64) {
    let (s, c) = theta.sin_cos();
    let root = (1.0 + s * s).sqrt();
    (s, c * root, 2.0 / root)
}

/// Offset keeps every node of every doubling level away from `θ = π/2, 3π/2`
/// (where `ξ₂ = 0`): node positions are `2π(k/M + 1/(3·64))`.
fn theta_offset() -> f64 {
    2.0 * PI / (3.0 * THETA_START as f64)
}

/// Periodic trapezoid rule on `[0, 2π)` with doubling until two levels agree.
/// Returns `(integral, error estimate, nodes)`.
fn periodic_trapezoid<F>(f: F) -> Result<(f64, f64, usize)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let offset = theta_offset();
    let eval = |nodes: Vec<f64>| -> Result<f64> {
        let vals = nodes.par_iter().map(|&th| f(th)).collect::<Result<Vec<f64>>>()?;
        Ok(pairwise_sum(&vals))
    };
    let mut m = THETA_START;
    let mut sum = eval((0..m).map(|k| offset + 2.0 * PI * k as f64 / m as f64).collect())?;
    let mut estimate = 2.0 * PI * sum / m as f64;
    while m < THETA_MAX {
        let add = eval((0..m).map(|k| offset + 2.0 * PI * (k as f64 + 0.5) / m as f64).collect())?;
        sum += add;
        m *= 2;
        let next = 2.0 * PI * sum / m as f64;
        let diff = (next - estimate).abs();
        estimate = next;
        if diff <= THETA_REL_TOL * estimate.abs() {
            return Ok((estimate, diff, m));
        }
    }
    Err(Error::NonConvergence {
        what: "angular trapezoid rule",
        iterations: m,
    })
}

struct Lhs<'a> {
    d: &'a GridDensity,
    corr: Vec<f64>,
    s: f64,
}

impl Lhs<'_> {
    /// Autocorrelation `A(x, t)`: Gaussian mixture with variance `2ε²`.
    fn a(&self, x: f64, t: f64, gx: &mut [f64], gt: &mut [f64]) -> f64 {
        let var = 2.0 * self.d.eps * self.d.eps;
        let norm = 1.0 / (2.0 * PI * var).sqrt();
        let (nx, nt) = (self.d.nx as isize, self.d.nt as isize);
        for (k, g) in gx.iter_mut().enumerate() {
            let c = (k as isize - (nx - 1)) as f64 * self.d.h;
            *g = norm * (-(x - c) * (x - c) / (2.0 * var)).exp();
        }
        for (k, g) in gt.iter_mut().enumerate() {
            let c = (k as isize - (nt - 1)) as f64 * self.d.h;
            *g = norm * (-(t - c) * (t - c) / (2.0 * var)).exp();
        }
        let cols = gt.len();
        let mut acc = 0.0;
        for (i, gxi) in gx.iter().enumerate() {
            if *gxi == 0.0 {
                continue;
            }
            let row = &self.corr[i * cols..(i + 1) * cols];
            let inner: f64 = row.iter().zip(gt.iter()).map(|(c, g)| c * g).sum();
            acc += gxi * inner;
        }
        acc
    }

    /// `∫₀^{2π} J(θ) A(r sin θ, r² q(θ)) dθ` with its error estimate.
    fn angular(&self, r: f64) -> Result<(f64, f64)> {
        let nx = 2 * self.d.nx - 1;
        let nt = 2 * self.d.nt - 1;
        let (v, e, _) = periodic_trapezoid(|th| {
            let (p, q, j) = polar(th);
            let mut gx = vec![0.0; nx];
            let mut gt = vec![0.0; nt];
            Ok(j * self.a(r * p, r * r * q, &mut gx, &mut gt))
        })?;
        Ok((v, e))
    }
}

fn energy_side(density: &GridDensity, s: f64) -> Result<(Estimate, usize)> {
    let lhs = Lhs {
        d: density,
        corr: density.autocorrelation(),
        s,
    };
    let reach = 14.0 * density.eps;
    let dx = (density.nx - 1) as f64 * density.h + reach;
    let dt = (density.nt - 1) as f64 * density.h + reach;
    let r_max = (dx.powi(4) + dt * dt).powf(0.25);
    let width = 0.5 * density.eps;
    let n_panels = (r_max / width).ceil() as usize;
    let rule = TanhSinh {
        rel_tol: 1e-12,
        min_level: 3,
        max_level: 9,
        ..TanhSinh::default()
    };
    let panels = (0..n_panels)
        .into_par_iter()
        .map(|k| {
            let a = k as f64 * width;
            let b = a + width;
            let mut rel = 0.0f64;
            let mut fail = None;
            let r = rule.integrate(
                |r| match lhs.angular(r) {
                    Ok((v, e)) => {
                        if v != 0.0 {
                            rel = rel.max(e / v.abs());
                        }
                        r.powf(2.0 - lhs.s) * v
                    }
                    Err(err) => {
                        fail = Some(err);
                        0.0
                    }
                },
                a,
                b,
            )?;
            if let Some(err) = fail {
                return Err(err);
            }
            Ok((r.value, r.abs_error + rel * r.value.abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = panels.iter().map(|p| p.0).collect();
    let errors: Vec<f64> = panels.iter().map(|p| p.1).collect();
    let value = pairwise_sum(&values);
    let err = pairwise_sum(&errors) + 1e-15 * value.abs();
    Ok((Estimate::new(value, err), n_panels))
}

/// `∫_R^∞ ρ^{s-1} e^{-aρ²} dρ ≤ max(1, R^{s-2}) e^{-aR²}/a` for `R ≥ 1`,
/// `R² ≥ (s-2)/a`.
fn radial_tail(s: f64, a: f64, r: f64) -> f64 {
    1f64.max(r.powf(s - 2.0)) * (-a * r * r).exp() / a
}

fn fourier_side(
    density: &GridDensity,
    profile: &FourierProfile,
    cutoff: Option<f64>,
) -> Result<(Estimate, f64, f64, f64, usize)> {
    let s = profile.param().s();
    let a = 4.0 * PI * PI * density.eps * density.eps;
    let r_cut = match cutoff {
        Some(r) => r,
        None => ((40.0 / a).sqrt() + 1.0).max(((s - 2.0).max(0.0) / a).sqrt()),
    };
    if !(r_cut >= 1.0 && r_cut * r_cut >= (s - 2.0) / a) {
        return Err(Error::domain(format!(
            "frequency cutoff {r_cut} too small for a certified tail bound"
        )));
    }
    let lx = (density.nx - 1) as f64 * density.h + density.x0.abs().max((density.x0 + (density.nx - 1) as f64 * density.h).abs());
    let lt = (density.nt - 1) as f64 * density.h + density.t0.abs().max((density.t0 + (density.nt - 1) as f64 * density.h).abs());
    let omega = 2.0 * PI * (lx + 2.0 * r_cut * lt);
    let width = (4.0 / omega).min(0.2);
    let n_panels = (r_cut / width).ceil() as usize;
    let width = r_cut / n_panels as f64;
    let first = TanhSinh {
        rel_tol: 1e-13,
        min_level: 3,
        max_level: 10,
        ..TanhSinh::default()
    };
    let gl = gauss_legendre_20();

    let radial = |p: f64, q: f64| -> Result<f64> {
        let mut et = vec![(0.0, 0.0); density.nt];
        let mut f = |rho: f64| {
            let (x1, x2) = (rho * p, rho * rho * q);
            rho.powf(s - 1.0)
                * density.weight_transform_sq(x1, x2, &mut et)
                * (-a * (x1 * x1 + x2 * x2)).exp()
        };
        let mut acc = Neumaier::default();
        acc.add(first.integrate(&mut f, 0.0, width)?.value);
        for k in 1..n_panels {
            let lo = k as f64 * width;
            acc.add(gl.integrate(&mut f, lo, lo + width));
        }
        Ok(acc.total())
    };

    let psi_max = std::sync::Mutex::new(0.0f64);
    let (value, err, nodes) = periodic_trapezoid(|th| {
        let (p, q, j) = polar(th);
        let psi = profile.fhat(FreqPoint { xi1: p, xi2: q })?.value;
        {
            let mut m = psi_max.lock().unwrap();
            *m = m.max(psi);
        }
        Ok(j * psi * radial(p, q)?)
    })?;
    let c_bound = TAIL_SAFETY * psi_max.into_inner().unwrap();
    let (w_theta, _, _) = periodic_trapezoid(|th| Ok(polar(th).2))?;
    let mass = density.total_mass();
    let tail = c_bound * mass * mass * w_theta * radial_tail(s, a, r_cut);
    Ok((
        Estimate::new(value + tail, err + tail + 1e-15 * value.abs()),
        tail,
        r_cut,
        c_bound,
        nodes,
    ))
}

/// Evaluates `lhs = ∫ f_s d(μ̃ ∗ μ)` and `rhs = ∫ f̂_s |μ̂|²` (plus its
/// certified tail). The two agree for mollified measures; the report's
/// [`DualityReport::holds`] checks the inequality direction.
pub fn energy_duality_check(
    density: &GridDensity,
    s: KernelParam,
    opts: DualityOptions,
) -> Result<DualityReport> {
    let profile = FourierProfile::new(s)?;
    let (lhs, radial_panels_lhs) = energy_side(density, s.s())?;
    let (rhs, tail_bound, freq_cutoff, c_bound, theta_nodes_rhs) =
        fourier_side(density, &profile, opts.freq_cutoff)?;
    if tail_bound > 1e-9 * rhs.value.abs() {
        return Err(Error::Certification(format!(
            "frequency tail bound {tail_bound:e} is not small against rhs {:e}; raise the cutoff",
            rhs.value
        )));
    }
    Ok(DualityReport {
        s: s.s(),
        lhs,
        rhs,
        tail_bound,
        freq_cutoff,
        c_bound,
        radial_panels_lhs,
        theta_nodes_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn autocorrelation_total_is_mass_squared() {
        let d = &GridDensity::reference_set()[2].1;
        let c = d.autocorrelation();
        let m = d.total_mass();
        assert!((pairwise_sum(&c) - m * m).abs() < 1e-14 * m * m);
    }

    #[test]
    fn polar_map_lies_on_unit_circle() {
        for k in 0..50 {
            let (p, q, _) = polar(0.13 * k as f64);
            assert!((p.powi(4) + q * q - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn weight_transform_at_zero_is_mass_squared() {
        let d = &GridDensity::reference_set()[1].1;
        let mut et = vec![(0.0, 0.0); d.nt];
        let m = d.total_mass();
        assert!((d.weight_transform_sq(0.0, 0.0, &mut et) - m * m).abs() < 1e-14 * m * m);
    }
}

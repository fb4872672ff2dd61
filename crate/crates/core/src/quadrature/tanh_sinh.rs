use std::f64::consts::FRAC_PI_2;

use super::QuadResult;
use crate::error::{Error, Result};

/// Nodes closer to an endpoint than this fraction of the interval are dropped.
/// Keeps arguments like `2πy²` normal while discarding at most
/// `O((1e-150)^{1+p})` of an integrand behaving like `d^p`, `p > -1`.
pub const DEFAULT_MIN_RELATIVE_DISTANCE: f64 = 1e-150;

#[derive(Debug, Clone, Copy)]
pub struct TanhSinh {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub min_level: u32,
    pub max_level: u32,
    /// Nodes nearer an endpoint than this fraction of `b - a` are skipped.
    pub min_relative_distance: f64,
}

impl Default for TanhSinh {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            min_level: 3,
            max_level: 10,
            min_relative_distance: DEFAULT_MIN_RELATIVE_DISTANCE,
        }
    }
}

impl TanhSinh {
    pub fn with_tolerance(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    /// ∫_a^b f. The integrand is never evaluated at either endpoint.
    ///
    /// Nodes are placed by their distance to the nearer endpoint, so a
    /// singularity at `a = 0` is resolved down to `min_relative_distance`; near
    /// any other endpoint the resolution stops at the float spacing there.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64) -> Result<QuadResult>
    where
        F: FnMut(f64) -> f64,
    {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::domain("tanh-sinh needs finite limits"));
        }
        if a == b {
            return Ok(QuadResult {
                value: 0.0,
                abs_error: 0.0,
                evaluations: 0,
            });
        }
        if b < a {
            let r = self.integrate(f, b, a)?;
            return Ok(QuadResult {
                value: -r.value,
                ..r
            });
        }

        let width = b - a;
        let half = 0.5 * width;
        let mut evaluations = 0usize;

        // Σ w(t) f(x(t)) over the nodes visited so far; the level-L estimate is h_L · raw.
        let mut raw = 0.0;
        let mut compensation = 0.0;
        let min_frac = self.min_relative_distance;
        let node = |t: f64, f: &mut F| -> Result<Option<f64>> {
            let v = FRAC_PI_2 * t.sinh();
            let e = (-2.0 * v.abs()).exp();
            let frac = e / (1.0 + e); // distance to the nearer endpoint over width
            if frac < min_frac {
                return Ok(None);
            }
            let d = width * frac;
            let x = if t < 0.0 { a + d } else { b - d };
            if x <= a || x >= b {
                return Ok(None);
            }
            // 1/cosh²v = 4e/(1+e)²
            let w = half * FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::domain(format!(
                    "integrand not finite at x = {x:e} on [{a:e}, {b:e}]"
                )));
            }
            Ok(Some(w * fx))
        };

        let add = |value: f64, raw: &mut f64, compensation: &mut f64| {
            let t = *raw + value;
            if raw.abs() >= value.abs() {
                *compensation += (*raw - t) + value;
            } else {
                *compensation += (value - t) + *raw;
            }
            *raw = t;
        };

        // level 0: integer t
        if let Some(c) = node(0.0, &mut f)? {
            evaluations += 1;
            add(c, &mut raw, &mut compensation);
        }
        for sign in [-1.0, 1.0] {
            let mut k = 1.0;
            while let Some(c) = node(sign * k, &mut f)? {
                evaluations += 1;
                add(c, &mut raw, &mut compensation);
                k += 1.0;
            }
        }

        let mut h = 1.0;
        let mut previous = h * (raw + compensation);
        let mut last_diff = f64::INFINITY;
        for level in 1..=self.max_level {
            h *= 0.5;
            for sign in [-1.0, 1.0] {
                let mut j = 0.0;
                loop {
                    let t = sign * (2.0 * j + 1.0) * h;
                    match node(t, &mut f)? {
                        Some(c) => {
                            evaluations += 1;
                            add(c, &mut raw, &mut compensation);
                        }
                        None => break,
                    }
                    j += 1.0;
                }
            }
            let current = h * (raw + compensation);
            let diff = (current - previous).abs();
            let tol = self.abs_tol.max(self.rel_tol * current.abs());
            if level >= self.min_level && (diff <= tol || (diff == 0.0 && last_diff == 0.0)) {
                return Ok(QuadResult {
                    value: current,
                    abs_error: diff + 4.0 * f64::EPSILON * current.abs(),
                    evaluations,
                });
            }
            previous = current;
            last_diff = diff;
        }
        Err(Error::NonConvergence {
            what: "tanh-sinh quadrature",
            iterations: self.max_level as usize,
        })
    }
}

//! Grid check of the positivity hypotheses for the Bessel profile
//! `u(x) = x^{1-s/2} K_{(s-2)/4}(2πx²)`:
//!
//! - (a) `u > 0`,
//! - (b) `-u' ≥ 0`, from `-u'(x) = 4π x^{2-s/2} K_{(s+2)/4}(2πx²)`,
//! - (c) `-u'` nonincreasing (u convex),
//! - (d) `x u(x) → 0` at the left end and `u, u' → 0` at the right end.
//!
//! Condition (d) at the left end is read as "`x u` is increasing over the
//! first decade of the grid": near zero `x u(x)` behaves like `x^{min(1, 3-s)}`,
//! so for `s` close to 3 it is not numerically small at any reachable `x`.

use serde::Serialize;

use crate::error::{Error, Result};

use super::transform::{profile_minus_u_prime, profile_u};
use super::KernelParam;

/// Relative slack allowed in the monotonicity check.
const MONOTONE_SLACK: f64 = 1e-10;
/// Right-end values must be below this fraction of the grid maximum.
const RIGHT_END_SMALL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuckCondition {
    pub name: &'static str,
    pub passed: bool,
    /// Grid point with the smallest margin.
    pub worst_x: f64,
    /// Positive when the condition holds there, with the meaning given in `name`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuckReport {
    pub s: f64,
    pub grid_len: usize,
    pub conditions: Vec<TuckCondition>,
}

impl TuckReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }
}

/// 40 points per decade on `[1e-4, 10]`.
pub fn default_tuck_grid() -> Vec<f64> {
    let per_decade = 40;
    (0..=5 * per_decade)
        .map(|k| 10f64.powf(-4.0 + k as f64 / per_decade as f64))
        .collect()
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

pub fn tuck_check(s: KernelParam, grid: &[f64]) -> Result<TuckReport> {
    let s = s.require_transform_range()?;
    let sv = s.s();
    if grid.len() < 3 || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::precondition("grid must be strictly increasing with at least 3 points"));
    }
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    if !(lo > 0.0 && lo <= 1e-4 * (1.0 + 1e-12) && hi >= 10.0 * (1.0 - 1e-12)) {
        return Err(Error::precondition("grid must be positive and span at least [1e-4, 10]"));
    }
    let u: Vec<f64> = grid.iter().map(|&x| profile_u(sv, x).map(|v| v.0)).collect::<Result<_>>()?;
    let du: Vec<f64> = grid
        .iter()
        .map(|&x| profile_minus_u_prime(sv, x).map(|v| v.0))
        .collect::<Result<_>>()?;

    let mut conditions = Vec::with_capacity(4);

    let i = argmin(&u);
    conditions.push(TuckCondition {
        name: "u_positive (margin: min u)",
        passed: u[i] > 0.0,
        worst_x: grid[i],
        margin: u[i],
    });

    let i = argmin(&du);
    conditions.push(TuckCondition {
        name: "u_decreasing (margin: min -u')",
        passed: du[i] > 0.0 || (du[i] == 0.0 && u[i] == 0.0),
        worst_x: grid[i],
        margin: du[i],
    });

    // Relative decrease of -u' between neighbours; must not be below -slack.
    let steps: Vec<f64> = du
        .windows(2)
        .map(|w| if w[0] > 0.0 { 1.0 - w[1] / w[0] } else { 0.0 })
        .collect();
    let i = argmin(&steps);
    conditions.push(TuckCondition {
        name: "u_convex (margin: min relative decrease of -u')",
        passed: steps[i] >= -MONOTONE_SLACK,
        worst_x: grid[i + 1],
        margin: steps[i],
    });

    let j = grid.partition_point(|&x| x < 10.0 * lo).min(grid.len() - 1);
    let slope = ((grid[j] * u[j]).ln() - (lo * u[0]).ln()) / (grid[j] / lo).ln();
    let u_max = u.iter().cloned().fold(0.0, f64::max);
    let du_max = du.iter().cloned().fold(0.0, f64::max);
    let n = grid.len() - 1;
    let right_u = u[n] / u_max;
    let right_du = du[n] / du_max;
    let right_margin = RIGHT_END_SMALL - right_u.max(right_du);
    let left_ok = slope > 0.0;
    let right_ok = right_margin >= 0.0;
    conditions.push(TuckCondition {
        name: "endpoint_limits (margin: left log-slope of x·u, or right-end slack)",
        passed: left_ok && right_ok,
        worst_x: if left_ok { grid[n] } else { lo },
        margin: if left_ok { right_margin } else { slope },
    });

    Ok(TuckReport {
        s: sv,
        grid_len: grid.len(),
        conditions,
    })
}

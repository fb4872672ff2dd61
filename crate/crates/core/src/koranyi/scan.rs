//! Scan of `f̂_s / f_{3-s}` over a logarithmic frequency grid.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{Estimate, ScanReport};

use super::transform::FourierProfile;
use super::{koranyi_kernel, FreqPoint, KernelParam};

/// Points `10^{lo + k/per_decade}`, `k = 0 ..= (hi - lo)·per_decade`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LogGrid {
    pub lo_decade: i32,
    pub hi_decade: i32,
    pub per_decade: usize,
}

impl LogGrid {
    pub fn new(lo_decade: i32, hi_decade: i32, per_decade: usize) -> Result<Self> {
        if hi_decade <= lo_decade || per_decade == 0 {
            return Err(Error::domain(format!(
                "log grid needs lo < hi and per_decade ≥ 1 (got {lo_decade}:{hi_decade}, {per_decade})"
            )));
        }
        Ok(Self {
            lo_decade,
            hi_decade,
            per_decade,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = (self.hi_decade - self.lo_decade) as usize * self.per_decade;
        (0..=n)
            .map(|k| 10f64.powf(self.lo_decade as f64 + k as f64 / self.per_decade as f64))
            .collect()
    }

    /// Same range, twice the resolution.
    pub fn doubled(&self) -> Self {
        Self {
            per_decade: 2 * self.per_decade,
            ..*self
        }
    }
}

impl FromStr for LogGrid {
    type Err = Error;

    /// Parses `lo:hi`, with 8 points per decade.
    fn from_str(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| Error::domain(format!("grid range `{s}` is not of the form lo:hi")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<i32>()
                .map_err(|_| Error::domain(format!("bad decade `{v}` in grid range")))
        };
        Self::new(parse(lo)?, parse(hi)?, 8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundScanPoint {
    pub xi: FreqPoint,
    pub fhat: Estimate,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundScanReport {
    pub s: f64,
    pub grid: LogGrid,
    pub points: Vec<BoundScanPoint>,
    /// Largest ratio `f̂_s / f_{3-s}` on the grid.
    pub c_s_estimate: f64,
    /// max/min of the ratio over grid points with `|ξ₁| ≤ |ξ₂|^{1/2}`.
    pub half_grid_spread: f64,
}

impl BoundScanReport {
    pub fn to_scan_report(&self) -> ScanReport {
        let mut r = ScanReport::new("bound-scan", &["xi1", "xi2", "fhat", "fhat_abs_error", "ratio"]);
        for p in &self.points {
            r.push_row(vec![p.xi.xi1, p.xi.xi2, p.fhat.value, p.fhat.abs_error, p.ratio]);
        }
        r.summary.insert("s".into(), self.s);
        r.summary.insert("c_s_estimate".into(), self.c_s_estimate);
        r.summary.insert("half_grid_spread".into(), self.half_grid_spread);
        r.summary.insert("points".into(), self.points.len() as f64);
        r.grid.insert("decades".into(), format!("{}:{}", self.grid.lo_decade, self.grid.hi_decade));
        r.grid.insert("per_decade".into(), self.grid.per_decade.to_string());
        r.grid.insert("axes".into(), "xi1 and xi2 both on the log grid".into());
        r
    }
}

/// Evaluates `f̂_s` at every `(ξ₁, ξ₂)` of the product grid (positive
/// components; the transform is even in both). A nonpositive sample is a
/// certification failure.
pub fn bound_scan(s: KernelParam, grid: LogGrid) -> Result<BoundScanReport> {
    let profile = FourierProfile::new(s)?;
    bound_scan_with(&profile, grid)
}

pub fn bound_scan_with(profile: &FourierProfile, grid: LogGrid) -> Result<BoundScanReport> {
    let s = profile.param();
    let dual = s.dual()?;
    let values = grid.values();
    let freqs: Vec<FreqPoint> = values
        .iter()
        .flat_map(|&xi2| values.iter().map(move |&xi1| FreqPoint { xi1, xi2 }))
        .collect();
    let points = freqs
        .par_iter()
        .map(|&xi| {
            let fhat = profile.fhat(xi)?;
            if !(fhat.value > 0.0) {
                return Err(Error::Certification(format!(
                    "nonpositive transform {:e} at ξ = ({:e}, {:e})",
                    fhat.value, xi.xi1, xi.xi2
                )));
            }
            let ratio = fhat.value / koranyi_kernel(dual, xi.xi1, xi.xi2);
            Ok(BoundScanPoint { xi, fhat, ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    let c_s_estimate = points.iter().map(|p| p.ratio).fold(0.0, f64::max);
    let half: Vec<f64> = points
        .iter()
        .filter(|p| p.xi.xi1 <= p.xi.xi2.sqrt())
        .map(|p| p.ratio)
        .collect();
    let half_grid_spread = if half.is_empty() {
        f64::NAN
    } else {
        half.iter().cloned().fold(0.0, f64::max) / half.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    Ok(BoundScanReport {
        s: s.s(),
        grid,
        points,
        c_s_estimate,
        half_grid_spread,
    })
}

/// `f̂_s(λξ₁, λ²ξ₂) λ^{3-s}` for each `λ`; constant for the exact transform.
pub fn homogeneity_probe(s: KernelParam, xi: FreqPoint, lambdas: &[f64]) -> Result<Vec<f64>> {
    let profile = FourierProfile::new(s)?;
    lambdas
        .iter()
        .map(|&l| {
            let v = profile.fhat(FreqPoint::new(l * xi.xi1, l * l * xi.xi2)?)?;
            Ok(v.value * l.powf(3.0 - s.s()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing_and_size() {
        let g: LogGrid = "-2:2".parse().unwrap();
        assert_eq!(g.values().len(), 33);
        assert_eq!(g.doubled().values().len(), 65);
        assert!((g.values()[0] - 0.01).abs() < 1e-18);
        assert!("2:-2".parse::<LogGrid>().is_err());
        assert!("abc".parse::<LogGrid>().is_err());
    }

    #[test]
    fn small_scan_is_positive() {
        let s = KernelParam::new(1.5).unwrap();
        let r = bound_scan(s, LogGrid::new(-1, 1, 2).unwrap()).unwrap();
        assert_eq!(r.points.len(), 25);
        assert!(r.points.iter().all(|p| p.fhat.value > 0.0));
        assert!(r.c_s_estimate.is_finite() && r.c_s_estimate > 0.0);
    }
}

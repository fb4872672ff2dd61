use std::collections::HashSet;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{linear_fit, HPoint};

use super::PlanarPoint;

const MIN_POINTS: usize = 100;
const MIN_SCALES: usize = 4;
const MIN_DECADES: f64 = 2.0;
/// Fraction of scales dropped at each end before fitting.
const TRIM: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxFamily {
    /// Cells `r × r²`.
    Parabolic,
    /// Cells `r × r`.
    Euclidean,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionFit {
    /// Box sizes in descending order.
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    /// Least-squares slope of `ln N(r)` against `ln(1/r)` over the window.
    pub slope: f64,
    pub r_window: (f64, f64),
    /// RMS residual of the fit in `ln N`.
    pub residual: f64,
}

fn validate(n_points: usize, scales: &[f64]) -> Result<Vec<f64>> {
    if n_points < MIN_POINTS {
        return Err(Error::precondition(format!(
            "box counting needs at least {MIN_POINTS} points, got {n_points}"
        )));
    }
    if scales.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::domain("box sizes must be positive and finite"));
    }
    let mut sorted = scales.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.dedup();
    if sorted.len() < MIN_SCALES {
        return Err(Error::InsufficientScales(format!(
            "{} distinct box sizes, need {MIN_SCALES}",
            sorted.len()
        )));
    }
    let decades = (sorted[0] / sorted[sorted.len() - 1]).log10();
    if decades < MIN_DECADES - 1e-9 {
        return Err(Error::InsufficientScales(format!(
            "box sizes span {decades:.3} decades, need {MIN_DECADES}"
        )));
    }
    Ok(sorted)
}

fn count_cells<T, K, F>(points: &[T], cell: F) -> usize
where
    T: Sync,
    K: Hash + Eq,
    F: Fn(&T) -> K,
{
    points.iter().map(cell).collect::<HashSet<K>>().len()
}

fn fit(scales: Vec<f64>, counts: Vec<usize>) -> DimensionFit {
    let n = scales.len();
    let k = (TRIM * n as f64).floor() as usize;
    let window = k..n - k;
    let pts: Vec<(f64, f64)> = window
        .clone()
        .map(|i| ((1.0 / scales[i]).ln(), (counts[i] as f64).ln()))
        .collect();
    let (slope, residual) = linear_fit(&pts).unwrap_or((0.0, 0.0));
    DimensionFit {
        r_window: (scales[window.end - 1], scales[window.start]),
        scales,
        counts,
        slope,
        residual,
    }
}

/// Box-counting slope of a planar point set on a grid anchored at the origin.
pub fn box_dimension(points: &[PlanarPoint], family: BoxFamily, scales: &[f64]) -> Result<DimensionFit> {
    let scales = validate(points.len(), scales)?;
    let counts = scales
        .par_iter()
        .map(|&r| {
            let h = match family {
                BoxFamily::Parabolic => r * r,
                BoxFamily::Euclidean => r,
            };
            count_cells(points, |p| ((p.l1 / r).floor() as i64, (p.l2 / h).floor() as i64))
        })
        .collect();
    Ok(fit(scales, counts))
}

/// Box-counting slope of a set in ℍ with cells `r × r × r²`.
pub fn box_dimension_ambient(points: &[HPoint], scales: &[f64]) -> Result<DimensionFit> {
    let scales = validate(points.len(), scales)?;
    let counts = scales
        .par_iter()
        .map(|&r| {
            let h = r * r;
            count_cells(points, |p| {
                (
                    (p.zx / r).floor() as i64,
                    (p.zy / r).floor() as i64,
                    (p.t / h).floor() as i64,
                )
            })
        })
        .collect();
    Ok(fit(scales, counts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decade_scales() -> Vec<f64> {
        (0..=20).map(|k| 10f64.powf(-0.1 * k as f64)).collect()
    }

    #[test]
    fn single_point_has_dimension_zero() {
        let pts = vec![PlanarPoint { l1: 0.3, l2: 0.7 }; 100];
        let f = box_dimension(&pts, BoxFamily::Parabolic, &decade_scales()).unwrap();
        assert!(f.counts.iter().all(|&c| c == 1));
        assert_eq!(f.slope, 0.0);
    }

    #[test]
    fn vertical_grid_segment() {
        let pts: Vec<PlanarPoint> = (0..20_000)
            .map(|k| PlanarPoint {
                l1: 0.0,
                l2: (k as f64 + 0.5) / 20_000.0,
            })
            .collect();
        let scales = decade_scales();
        let p = box_dimension(&pts, BoxFamily::Parabolic, &scales).unwrap();
        let e = box_dimension(&pts, BoxFamily::Euclidean, &scales).unwrap();
        assert!((p.slope - 2.0).abs() < 0.1, "{p:?}");
        assert!((e.slope - 1.0).abs() < 0.1, "{e:?}");
        assert!(p.counts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_thin_inputs() {
        let pts = vec![PlanarPoint::default(); 100];
        assert!(matches!(
            box_dimension(&pts, BoxFamily::Parabolic, &[1.0, 0.5, 0.2, 0.1]),
            Err(Error::InsufficientScales(_))
        ));
        assert!(matches!(
            box_dimension(&pts, BoxFamily::Parabolic, &[1.0, 0.01]),
            Err(Error::InsufficientScales(_))
        ));
        assert!(box_dimension(&pts[..10], BoxFamily::Parabolic, &decade_scales()).is_err());
    }
}

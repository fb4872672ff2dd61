use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::pairwise_sum;

use super::{DiscreteMeasure, MeasurePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyMetric {
    Koranyi,
    Parabolic,
    /// `((Δλ₁)⁴ + (Δλ₂)²)^{1/4}` on coordinate differences, with no twist.
    VerticalPlane,
}

/// Off-diagonal Riesz energy `Σ_{i≠j} wᵢ wⱼ d(pᵢ, pⱼ)^{-s}`.
///
/// Distinct indices at distance zero make the energy infinite.
pub fn riesz_energy<P: MeasurePoint>(
    mu: &DiscreteMeasure<P>,
    s: f64,
    metric: EnergyMetric,
) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("energy exponent must be positive, got {s}")));
    }
    let pts = mu.points();
    let w = mu.weights();
    let p0 = pts[0];
    if pts.iter().all(|p| p0.metric_distance(p, metric) == 0.0) {
        return Err(Error::DegenerateMeasure("all points coincide".into()));
    }
    let rows: Vec<f64> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            if w[i] == 0.0 {
                return 0.0;
            }
            let terms: Vec<f64> = (0..pts.len())
                .filter(|&j| j != i && w[j] != 0.0)
                .map(|j| w[j] * pts[i].metric_distance(&pts[j], metric).powf(-s))
                .collect();
            w[i] * pairwise_sum(&terms)
        })
        .collect();
    Ok(pairwise_sum(&rows))
}

/// `max_{i, r} μ(B̄(pᵢ, r)) / r^s` over support points and the given radii,
/// with closed balls in the Korányi metric (vertical-plane metric for planar
/// points).
pub fn frostman_constant<P: MeasurePoint>(
    mu: &DiscreteMeasure<P>,
    s: f64,
    scales: &[f64],
) -> Result<f64> {
    if scales.is_empty() {
        return Err(Error::InsufficientScales("no radii given".into()));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("Frostman exponent must be positive, got {s}")));
    }
    if scales.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::domain("radii must be positive and finite"));
    }
    if scales.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::precondition("radii must be sorted in descending order"));
    }
    let pts = mu.points();
    let w = mu.weights();
    let best = (0..pts.len())
        .into_par_iter()
        .filter(|&i| w[i] > 0.0)
        .map(|i| {
            let mut by_dist: Vec<(f64, f64)> = pts
                .iter()
                .zip(w)
                .map(|(q, &wq)| (pts[i].ball_distance(q), wq))
                .collect();
            by_dist.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut cumulative = Vec::with_capacity(by_dist.len());
            let mut acc = 0.0;
            for &(_, wq) in &by_dist {
                acc += wq;
                cumulative.push(acc);
            }
            scales
                .iter()
                .map(|&r| {
                    let k = by_dist.partition_point(|e| e.0 <= r);
                    let mass = if k == 0 { 0.0 } else { cumulative[k - 1] };
                    mass / r.powf(s)
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{dilate, HPoint};

    fn segment(n: usize) -> DiscreteMeasure<HPoint> {
        let pts = (0..n)
            .map(|k| HPoint::new((k as f64 + 0.5) / n as f64, 0.0, 0.0).unwrap())
            .collect();
        DiscreteMeasure::uniform(pts).unwrap()
    }

    #[test]
    fn single_pair() {
        let mu = DiscreteMeasure::counting(vec![HPoint::IDENTITY, HPoint::new(1.0, 0.0, 0.0).unwrap()])
            .unwrap();
        assert_eq!(riesz_energy(&mu, 1.0, EnergyMetric::Koranyi).unwrap(), 2.0);
        let half = mu.scale_weights(0.5).unwrap();
        assert_eq!(riesz_energy(&half, 1.0, EnergyMetric::Koranyi).unwrap(), 0.5);
    }

    #[test]
    fn coincident_points_are_degenerate() {
        let mu = DiscreteMeasure::counting(vec![HPoint::IDENTITY; 3]).unwrap();
        assert!(matches!(
            riesz_energy(&mu, 1.0, EnergyMetric::Koranyi),
            Err(Error::DegenerateMeasure(_))
        ));
        assert!(riesz_energy(&segment(4), 0.0, EnergyMetric::Koranyi).is_err());
    }

    #[test]
    fn dilation_scales_energy() {
        let pts: Vec<HPoint> = (0..20)
            .map(|k| HPoint::new((k as f64).sin(), (k as f64 * 0.7).cos(), 0.1 * k as f64).unwrap())
            .collect();
        let mu = DiscreteMeasure::counting(pts.clone()).unwrap();
        let nu = DiscreteMeasure::counting(pts.iter().map(|&p| dilate(2.0, p)).collect()).unwrap();
        let s = 1.3;
        let a = riesz_energy(&mu, s, EnergyMetric::Koranyi).unwrap();
        let b = riesz_energy(&nu, s, EnergyMetric::Koranyi).unwrap();
        assert!((b - a * 2f64.powf(-s)).abs() < 1e-12 * a);
    }

    #[test]
    fn frostman_examples() {
        let atom = DiscreteMeasure::counting(vec![HPoint::IDENTITY]).unwrap();
        let c = frostman_constant(&atom, 1.0, &[1.0, 0.1, 0.01]).unwrap();
        assert!(c >= 100.0);
        assert!(frostman_constant(&atom, 1.0, &[]).is_err());
        assert!(frostman_constant(&atom, 1.0, &[0.1, 1.0]).is_err());

        let mu = segment(1000);
        let c_hi = frostman_constant(&mu, 1.0, &[0.3, 0.1]).unwrap();
        let c_lo = frostman_constant(&mu, 1.0, &[0.03, 0.01]).unwrap();
        assert!(c_hi / c_lo < 2.0 && c_lo / c_hi < 2.0);
        let c2_hi = frostman_constant(&mu, 2.0, &[0.1]).unwrap();
        let c2_lo = frostman_constant(&mu, 2.0, &[0.01]).unwrap();
        assert!(c2_lo / c2_hi > 5.0);
    }
}

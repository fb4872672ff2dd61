//! Discrete measures on ℍ and on vertical planes, their energies, chaos-game
//! samples and box-counting dimension estimates.

mod boxcount;
mod energy;
mod ifs;
mod scan;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{distance, koranyi_norm, vertical_projection, Angle, HPoint, Metric};

pub use boxcount::{box_dimension, box_dimension_ambient, BoxFamily, DimensionFit};
pub use energy::{frostman_constant, riesz_energy, EnergyMetric};
pub use ifs::{ifs_sample, IfsMap, IfsSpec};
pub use scan::{default_scan_angles, theorem_bound_scan, theorem_floor, PROJECTED_DIM_CAP};

/// A point `(λ₁, λ₂)` of a vertical plane `V_θ^⊥`, in the coordinates of
/// [`crate::heisenberg::vertical_projection`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub l1: f64,
    pub l2: f64,
}

/// Points that carry a metric for energies and Frostman balls.
pub trait MeasurePoint: Copy + Send + Sync {
    fn metric_distance(&self, other: &Self, metric: EnergyMetric) -> f64;
    /// The metric used for Frostman balls.
    fn ball_distance(&self, other: &Self) -> f64;
}

/// `((Δz)⁴ + (Δt)²)^{1/4}` without the group twist.
fn untwisted(p: &HPoint, q: &HPoint) -> f64 {
    distance(*p, *q, Metric::Parabolic)
}

impl MeasurePoint for HPoint {
    fn metric_distance(&self, other: &Self, metric: EnergyMetric) -> f64 {
        match metric {
            EnergyMetric::Koranyi => distance(*self, *other, Metric::Koranyi),
            EnergyMetric::Parabolic | EnergyMetric::VerticalPlane => untwisted(self, other),
        }
    }

    fn ball_distance(&self, other: &Self) -> f64 {
        distance(*self, *other, Metric::Koranyi)
    }
}

impl MeasurePoint for PlanarPoint {
    /// All three metrics agree on a vertical plane: the twist `ω` vanishes
    /// between points of a common line through the origin.
    fn metric_distance(&self, other: &Self, _metric: EnergyMetric) -> f64 {
        self.ball_distance(other)
    }

    fn ball_distance(&self, other: &Self) -> f64 {
        let d1 = self.l1 - other.l1;
        let d2 = self.l2 - other.l2;
        koranyi_norm(HPoint {
            zx: d1,
            zy: 0.0,
            t: d2,
        })
    }
}

/// Weighted finite point set with nonnegative finite weights and positive mass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteMeasure<P = HPoint> {
    points: Vec<P>,
    weights: Vec<f64>,
}

impl<P: MeasurePoint> DiscreteMeasure<P> {
    pub fn new(points: Vec<P>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::domain(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::domain("weights must be finite and nonnegative"));
        }
        if !(weights.iter().sum::<f64>() > 0.0) {
            return Err(Error::DegenerateMeasure("total mass must be positive".into()));
        }
        Ok(Self { points, weights })
    }

    /// Unit weight on every point.
    pub fn counting(points: Vec<P>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0; n])
    }

    /// Weight `1/n` on every point.
    pub fn uniform(points: Vec<P>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        crate::summation::pairwise_sum(&self.weights)
    }

    pub fn scale_weights(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.points.clone(),
            self.weights.iter().map(|w| w * factor).collect(),
        )
    }
}

/// Pushforward under `vertical_projection(θ, ·)`.
pub fn project_measure(mu: &DiscreteMeasure<HPoint>, theta: Angle) -> DiscreteMeasure<PlanarPoint> {
    DiscreteMeasure {
        points: project_points(mu.points(), theta),
        weights: mu.weights.clone(),
    }
}

pub fn project_points(points: &[HPoint], theta: Angle) -> Vec<PlanarPoint> {
    points
        .iter()
        .map(|&p| {
            let v = vertical_projection(theta, p);
            PlanarPoint {
                l1: v.lambda1,
                l2: v.lambda2,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::VerticalPoint;

    #[test]
    fn measure_validation() {
        let p = vec![HPoint::IDENTITY];
        assert!(DiscreteMeasure::new(p.clone(), vec![]).is_err());
        assert!(DiscreteMeasure::new(p.clone(), vec![-1.0]).is_err());
        assert!(DiscreteMeasure::new(p.clone(), vec![f64::NAN]).is_err());
        assert!(matches!(
            DiscreteMeasure::new(p.clone(), vec![0.0]),
            Err(Error::DegenerateMeasure(_))
        ));
        assert_eq!(DiscreteMeasure::new(p, vec![2.0]).unwrap().total_mass(), 2.0);
    }

    #[test]
    fn projection_fixes_the_vertical_plane() {
        let th = Angle::new(1.1).unwrap();
        let pts: Vec<HPoint> = (0..10)
            .map(|k| {
                VerticalPoint {
                    lambda1: 0.3 * k as f64 - 1.0,
                    lambda2: 0.1 * k as f64,
                    theta: th,
                }
                .embed()
            })
            .collect();
        let mu = DiscreteMeasure::counting(pts).unwrap();
        let pr = project_measure(&mu, th);
        for (k, q) in pr.points().iter().enumerate() {
            assert!((q.l1 - (0.3 * k as f64 - 1.0)).abs() < 1e-15);
            assert!((q.l2 - 0.1 * k as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn horizontal_segment_projects_to_lambda1_zero_at_theta_zero() {
        let pts: Vec<HPoint> = (0..50).map(|k| HPoint::new(k as f64 / 49.0, 0.0, 0.0).unwrap()).collect();
        let mu = DiscreteMeasure::uniform(pts).unwrap();
        let pr = project_measure(&mu, Angle::new(0.0).unwrap());
        assert!(pr.points().iter().all(|q| q.l1 == 0.0));
        assert!((pr.total_mass() - mu.total_mass()).abs() < 1e-15);
    }
}

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::Result;
use crate::heisenberg::Angle;
use crate::report::ScanReport;

use super::boxcount::{box_dimension, box_dimension_ambient, BoxFamily};
use super::ifs::{ifs_sample, IfsSpec};
use super::project_points;

/// Vertical planes have Korányi dimension 3; projected estimates are capped here.
pub const PROJECTED_DIM_CAP: f64 = 3.0;

/// `min{(1 + dim)/2, 2}`.
pub fn theorem_floor(dim: f64) -> f64 {
    ((1.0 + dim) / 2.0).min(2.0)
}

/// `θ_k = (k + ½)π/16`, `k = 0..16`.
pub fn default_scan_angles() -> Vec<Angle> {
    (0..16)
        .map(|k| Angle::new((k as f64 + 0.5) * PI / 16.0).expect("finite angle"))
        .collect()
}

/// Samples the IFS, estimates its dimension with `r × r × r²` boxes, then the
/// dimension of each vertical projection with parabolic planar boxes.
///
/// Rows: `theta, projected_dim, floor, residual, clamped`.
pub fn theorem_bound_scan(
    spec: &IfsSpec,
    thetas: &[Angle],
    scales: &[f64],
    n_points: usize,
) -> Result<ScanReport> {
    let points = ifs_sample(spec, n_points)?;
    let ambient = box_dimension_ambient(&points, scales)?;
    let floor = theorem_floor(ambient.slope);
    let fits = thetas
        .par_iter()
        .map(|&th| box_dimension(&project_points(&points, th), BoxFamily::Parabolic, scales))
        .collect::<Result<Vec<_>>>()?;

    let mut report = ScanReport::new(
        "theorem-bound-scan",
        &["theta", "projected_dim", "floor", "residual", "clamped"],
    );
    let mut min_projected = f64::INFINITY;
    for (th, fit) in thetas.iter().zip(&fits) {
        let clamped = fit.slope > PROJECTED_DIM_CAP;
        let est = fit.slope.min(PROJECTED_DIM_CAP);
        min_projected = min_projected.min(est);
        report.push_row(vec![th.theta(), est, floor, fit.residual, clamped as u8 as f64]);
    }
    report.summary.insert("ambient_dim".into(), ambient.slope);
    report.summary.insert("ambient_residual".into(), ambient.residual);
    report.summary.insert("floor".into(), floor);
    report.summary.insert("min_projected_dim".into(), min_projected);
    report.summary.insert("min_margin".into(), min_projected - floor);
    report.summary.insert("n_points".into(), n_points as f64);
    report.grid.insert("thetas".into(), thetas.len().to_string());
    report.grid.insert(
        "scales".into(),
        format!("{:e}..{:e} ({})", ambient.scales[0], ambient.scales[ambient.scales.len() - 1], ambient.scales.len()),
    );
    report.grid.insert(
        "fit_window".into(),
        format!("{:e}..{:e}", ambient.r_window.0, ambient.r_window.1),
    );
    report.grid.insert("seed".into(), spec.seed.to_string());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_and_floor() {
        let a = default_scan_angles();
        assert_eq!(a.len(), 16);
        assert!((a[0].theta() - PI / 32.0).abs() < 1e-15);
        assert_eq!(theorem_floor(1.0), 1.0);
        assert_eq!(theorem_floor(5.0), 2.0);
    }

    #[test]
    fn small_segment_scan() {
        let scales: Vec<f64> = (0..=10).map(|k| 10f64.powf(-0.5 - 0.2 * k as f64)).collect();
        let r = theorem_bound_scan(&IfsSpec::horizontal_segment(3), &default_scan_angles()[..4], &scales, 20_000)
            .unwrap();
        assert_eq!(r.rows.len(), 4);
        assert!(r.column("projected_dim").unwrap().iter().all(|&d| d <= PROJECTED_DIM_CAP));
    }
}

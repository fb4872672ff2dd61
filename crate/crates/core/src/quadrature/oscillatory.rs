//! Half-period panel sums for `∫₀^∞ cos(ωt) g(t) dt` with `g` positive and
//! decreasing, and iterated averaging of the resulting alternating partial sums.

use super::gauss_legendre_20;
use crate::summation::Neumaier;

/// Limit extracted from a window of partial sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedLimit {
    pub value: f64,
    /// Half the gap between the last two averaged sums. Bounds the error when
    /// the averaged terms keep alternating with decreasing magnitude.
    pub abs_error: f64,
    /// Number of averaging passes that preserved alternation.
    pub levels_used: usize,
    /// False when the raw panel terms did not alternate with decreasing
    /// magnitude; `abs_error` is then infinite.
    pub alternating: bool,
}

/// Iterated (Euler) averaging over the last `levels + 2` partial sums.
///
/// Each pass replaces the sequence by the means of neighbours. A pass is kept
/// only while the differences of its input still alternate with nonincreasing
/// magnitude; under that pattern the limit lies between consecutive entries.
pub fn averaged_limit(partial_sums: &[f64], levels: usize) -> AveragedLimit {
    let n = partial_sums.len();
    assert!(n >= 2, "need at least two partial sums");
    let window = (levels + 2).min(n);
    let mut seq: Vec<f64> = partial_sums[n - window..].to_vec();
    let last = *seq.last().unwrap();
    let scale = seq.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 8.0 * f64::EPSILON * scale;

    if !alternates(&seq, floor) {
        return AveragedLimit {
            value: last,
            abs_error: f64::INFINITY,
            levels_used: 0,
            alternating: false,
        };
    }
    let bracket = |s: &[f64]| {
        let a = s[s.len() - 2];
        let b = s[s.len() - 1];
        (0.5 * (a + b), 0.5 * (b - a).abs() + floor)
    };
    let (mut value, mut abs_error) = bracket(&seq);
    let mut levels_used = 0;
    while seq.len() > 2 {
        let next: Vec<f64> = seq.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        if !alternates(&next, floor) {
            break;
        }
        seq = next;
        levels_used += 1;
        let (v, e) = bracket(&seq);
        if e > abs_error {
            break;
        }
        value = v;
        abs_error = e;
    }
    AveragedLimit {
        value,
        abs_error,
        levels_used,
        alternating: true,
    }
}

/// Differences strictly alternate and do not grow. Differences below `floor`
/// count as converged and end the check.
fn alternates(seq: &[f64], floor: f64) -> bool {
    let diffs: Vec<f64> = seq.windows(2).map(|w| w[1] - w[0]).collect();
    for w in diffs.windows(2) {
        if w[0].abs() <= floor || w[1].abs() <= floor {
            return true;
        }
        if w[0].signum() == w[1].signum() || w[1].abs() > w[0].abs() * (1.0 + 1e-12) {
            return false;
        }
    }
    true
}

/// Zero `k` of `cos(ωt)` on the positive axis: `(k + ½)π/ω`.
pub fn cosine_zero(omega: f64, k: usize) -> f64 {
    (k as f64 + 0.5) * std::f64::consts::PI / omega
}

/// Partial sums `S_k = head + Σ_{j=1..k} ∫_{z_{j-1}}^{z_j} cos(ωt) g(t) dt`
/// for `k = 0..=panels`, where `z_j` are the positive zeros of the cosine and
/// `head` is the caller's value of `∫₀^{z_0}`. Each panel uses the 20-point
/// Gauss-Legendre rule; the cosine is evaluated relative to the panel start,
/// so large `t` loses no phase accuracy.
pub fn half_period_partial_sums<G: FnMut(f64) -> f64>(
    mut g: G,
    omega: f64,
    head: f64,
    panels: usize,
) -> Vec<f64> {
    let gl = gauss_legendre_20();
    let half = std::f64::consts::PI / omega;
    let mut sums = Vec::with_capacity(panels + 1);
    let mut acc = Neumaier::default();
    acc.add(head);
    sums.push(acc.total());
    for k in 1..=panels {
        let a = cosine_zero(omega, k - 1);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        // cos(ω(a + δ)) = (-1)^k sin(ωδ)
        let mut panel = Neumaier::default();
        for (&x, &w) in gl.nodes().iter().zip(gl.weights()) {
            let delta = 0.5 * half * (1.0 + x);
            panel.add(w * (omega * delta).sin() * g(a + delta));
        }
        acc.add(sign * 0.5 * half * panel.total());
        sums.push(acc.total());
    }
    sums
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn averaging_accelerates_alternating_harmonic_series() {
        // Σ (-1)^{k}/(k+1) = ln 2
        let mut s = 0.0;
        let partial: Vec<f64> = (0..30)
            .map(|k| {
                s += if k % 2 == 0 { 1.0 } else { -1.0 } / (k as f64 + 1.0);
                s
            })
            .collect();
        let r = averaged_limit(&partial, 12);
        assert!(r.alternating);
        assert!((r.value - 2f64.ln()).abs() <= r.abs_error);
        assert!(r.abs_error < 1e-8, "{}", r.abs_error);
    }

    #[test]
    fn non_alternating_sums_are_flagged() {
        let partial = [1.0, 2.0, 3.0, 4.0];
        let r = averaged_limit(&partial, 2);
        assert!(!r.alternating);
        assert!(r.abs_error.is_infinite());
    }

    #[test]
    fn cosine_transform_of_exponential() {
        // ∫₀^∞ cos(ωt) e^{-t} dt = 1/(1+ω²)
        let omega = 3.0;
        let z0 = cosine_zero(omega, 0);
        let head = super::super::TanhSinh::default()
            .integrate(|t| (omega * t).cos() * (-t).exp(), 0.0, z0)
            .unwrap()
            .value;
        let sums = half_period_partial_sums(|t| (-t).exp(), omega, head, 25);
        let r = averaged_limit(&sums, 8);
        let exact = 1.0 / (1.0 + omega * omega);
        assert!((r.value - exact).abs() < 1e-12, "{} vs {exact}", r.value);
    }

    #[test]
    fn cosine_transform_of_slowly_decaying_power() {
        // ∫₀^∞ cos(t) t^{-1/2} dt = sqrt(π/2)
        let omega = 1.0;
        let z0 = cosine_zero(omega, 0);
        let head = super::super::TanhSinh::with_tolerance(1e-14)
            .integrate(|t| t.cos() / t.sqrt(), 0.0, z0)
            .unwrap()
            .value;
        let sums = half_period_partial_sums(|t| 1.0 / t.sqrt(), omega, head, 60);
        let r = averaged_limit(&sums, 10);
        let exact = (std::f64::consts::PI / 2.0).sqrt();
        assert!(r.alternating);
        assert!((r.value - exact).abs() <= r.abs_error.max(1e-13), "{} vs {exact} ± {}", r.value, r.abs_error);
        assert!(r.abs_error < 1e-8);
    }
}

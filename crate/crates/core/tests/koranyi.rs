use std::f64::consts::PI;

use heiskor_core::bessel::bessel_k;
use heiskor_core::koranyi::{
    bound_scan, default_tuck_grid, energy_duality_check, fhat, fhat_oracle, homogeneity_probe,
    koranyi_kernel, t_slice_transform, tuck_check, DualityOptions, FourierProfile, GridDensity,
    LogGrid, OracleOptions,
};
use heiskor_core::quadrature::oscillatory::{averaged_limit, half_period_partial_sums};
use heiskor_core::quadrature::TanhSinh;
use heiskor_core::{BesselOrder, FreqPoint, KernelParam};
use proptest::prelude::*;

fn sp(s: f64) -> KernelParam {
    KernelParam::new(s).unwrap()
}

fn xi(a: f64, b: f64) -> FreqPoint {
    FreqPoint::new(a, b).unwrap()
}

#[test]
fn kernel_examples() {
    assert_eq!(koranyi_kernel(sp(2.0), 1.0, 0.0), 1.0);
    assert!((koranyi_kernel(sp(1.5), 0.0, 4.0) - 2f64.powf(-1.5)).abs() < 1e-15);
    let lhs = koranyi_kernel(sp(1.5), 3.0, 9.0);
    assert!((lhs - 3f64.powf(-1.5) * 2f64.powf(-0.375)).abs() < 1e-15);
    assert!(koranyi_kernel(sp(1.0), 0.0, 0.0).is_infinite());
    assert!(KernelParam::new(3.0).is_err());
    assert!(KernelParam::new(0.0).is_err());
}

#[test]
fn t_slice_examples() {
    let k0 = bessel_k(BesselOrder::new(0.0).unwrap(), 2.0 * PI).unwrap().value;
    let v = t_slice_transform(sp(2.0), 1.0, 1.0).unwrap().value;
    assert!((v - 2.0 * k0).abs() < 1e-14);

    // ∫ e^{-2πit} (1+t²)^{-1/2} dt by half-period averaging
    let omega = 2.0 * PI;
    let g = |t: f64| (1.0 + t * t).powf(-0.5);
    let head = TanhSinh::default()
        .integrate(|t| g(t) * (omega * t).cos(), 0.0, 0.25)
        .unwrap()
        .value;
    let lim = averaged_limit(&half_period_partial_sums(g, omega, head, 200), 10);
    assert!((2.0 * lim.value - v).abs() < 1e-6);

    let a = t_slice_transform(sp(1.5), 0.7, 0.3).unwrap().value;
    let b = t_slice_transform(sp(1.5), 0.7, -0.3).unwrap().value;
    assert_eq!(a, b);
    assert!(t_slice_transform(sp(1.5), 0.0, 0.3).is_err());
    assert!(t_slice_transform(sp(1.5), 1.0, 0.0).is_err());
}

#[test]
fn fhat_at_zero_first_frequency() {
    let s = 1.5;
    let direct = TanhSinh::with_tolerance(1e-12)
        .integrate(
            |x| x.powf(0.25) * bessel_k(BesselOrder::new(-0.125).unwrap(), 2.0 * PI * x * x).unwrap().value,
            0.0,
            6.0,
        )
        .unwrap()
        .value;
    let pref = heiskor_core::koranyi::transform_prefactor(sp(s));
    let v = fhat(sp(s), xi(0.0, 1.0)).unwrap();
    assert!(v.value > 0.0);
    assert!((v.value - 2.0 * pref * direct).abs() < 1e-9 * v.value);
}

#[test]
fn fhat_is_even_and_rejects_axis() {
    let a = fhat(sp(1.5), xi(1.0, 1.0)).unwrap().value;
    assert_eq!(a, fhat(sp(1.5), xi(-1.0, 1.0)).unwrap().value);
    assert_eq!(a, fhat(sp(1.5), xi(1.0, -1.0)).unwrap().value);
    assert!(fhat(sp(1.5), xi(1.0, 0.0)).is_err());
    assert!(fhat(sp(0.9), xi(1.0, 1.0)).is_err());
}

#[test]
fn oracle_agrees_at_cross_check_point() {
    let p = xi(2.0, 0.5);
    let f = fhat(sp(1.75), p).unwrap();
    let o = fhat_oracle(sp(1.75), p, OracleOptions::default()).unwrap();
    assert!((f.value - o.value).abs() <= f.abs_error + o.certified_error);
    assert!((f.value - o.value).abs() <= 1e-4 * f.value);
}

#[test]
fn oracle_truncation_doubling_is_self_consistent() {
    let runs: Vec<_> = [10.0, 20.0, 40.0]
        .iter()
        .map(|&n| {
            fhat_oracle(
                sp(1.5),
                xi(0.0, 1.0),
                OracleOptions {
                    truncation: n,
                    ..OracleOptions::default()
                },
            )
            .unwrap()
        })
        .collect();
    for w in runs.windows(2) {
        assert!((w[1].value - w[0].value).abs() <= w[0].certified_error + w[1].certified_error);
        assert!(w[1].certified_error <= w[0].certified_error);
    }
}

#[test]
fn oracle_matches_t_slice_route_at_s_two() {
    // f̂_2(0, 1) = 2 ∫₀^∞ T(x) dx with T(x) = 2K₀(2πx²)
    let via_slice = 2.0
        * TanhSinh::with_tolerance(1e-12)
            .integrate(|x| t_slice_transform(sp(2.0), x, 1.0).unwrap().value, 0.0, 4.0)
            .unwrap()
            .value;
    let o = fhat_oracle(sp(2.0), xi(0.0, 1.0), OracleOptions::default()).unwrap();
    assert!((o.value - via_slice).abs() <= o.certified_error + 1e-10);
}

#[test]
fn oracle_point_respects_scan_constant() {
    let s = sp(1.25);
    let o = fhat_oracle(s, xi(5.0, 0.2), OracleOptions::default()).unwrap();
    let scan = bound_scan(s, LogGrid::new(-2, 2, 4).unwrap()).unwrap();
    assert!(o.value > 0.0);
    assert!(o.value <= scan.c_s_estimate * koranyi_kernel(sp(1.75), 5.0, 0.2));
}

#[test]
fn tuck_passes_across_range() {
    for s in [1.01, 1.05, 1.25, 1.5, 1.75, 2.0, 2.5, 2.9] {
        let r = tuck_check(sp(s), &default_tuck_grid()).unwrap();
        assert!(r.passed(), "s = {s}: {r:?}");
    }
}

#[test]
fn scan_positive_and_stable() {
    let s = sp(1.5);
    let grid = LogGrid::new(-2, 2, 4).unwrap();
    let a = bound_scan(s, grid).unwrap();
    let b = bound_scan(s, grid.doubled()).unwrap();
    assert!(a.points.iter().all(|p| p.fhat.value > 0.0));
    assert!((b.c_s_estimate / a.c_s_estimate - 1.0).abs() < 0.05);
    assert!(a.half_grid_spread < 10.0);
}

#[test]
fn duality_holds_and_is_bilinear() {
    for (name, d) in GridDensity::reference_set() {
        let s = if name == "two_bumps" { 1.25 } else { 1.5 };
        let r = energy_duality_check(&d, sp(s), DualityOptions::default()).unwrap();
        assert!(r.holds(1e-6), "{name}: {r:?}");
    }
    let (_, d) = GridDensity::reference_set().remove(0);
    let r1 = energy_duality_check(&d, sp(1.5), DualityOptions::default()).unwrap();
    let r2 = energy_duality_check(&d.scaled(2.0).unwrap(), sp(1.5), DualityOptions::default()).unwrap();
    assert!((r2.lhs.value / r1.lhs.value - 4.0).abs() < 1e-12);
    assert!((r2.rhs.value / r1.rhs.value - 4.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_scaling(s in 0.1f64..2.9, x in -3.0f64..3.0, t in -3.0f64..3.0, l in 0.1f64..10.0) {
        prop_assume!(x != 0.0 || t != 0.0);
        let a = koranyi_kernel(sp(s), l * x, l * l * t);
        let b = l.powf(-s) * koranyi_kernel(sp(s), x, t);
        prop_assert!((a - b).abs() <= 1e-13 * b);
    }

    #[test]
    fn homogeneity(s in 1.1f64..2.9, a in 0.01f64..10.0, b in 0.01f64..10.0) {
        let v = homogeneity_probe(sp(s), xi(a, b), &[0.25, 0.5, 1.0, 2.0, 4.0]).unwrap();
        for w in &v {
            prop_assert!((w / v[2] - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn fhat_positive_and_even(s in 1.05f64..2.95, a in -30.0f64..30.0, b in 0.01f64..30.0) {
        let profile = FourierProfile::new(sp(s)).unwrap();
        let v = profile.fhat(xi(a, b)).unwrap().value;
        prop_assert!(v > 0.0);
        prop_assert_eq!(v, profile.fhat(xi(-a, -b)).unwrap().value);
    }
}

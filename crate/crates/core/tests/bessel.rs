use std::f64::consts::PI;

use heiskor_core::bessel::{bessel_i, bessel_k, bessel_k_verified, bessel_k_with, kv_weighted_derivatives};
use heiskor_core::{BesselMethod, BesselOrder};
use proptest::prelude::*;

fn ord(nu: f64) -> BesselOrder {
    BesselOrder::new(nu).unwrap()
}

fn k(nu: f64, x: f64) -> f64 {
    bessel_k(ord(nu), x).unwrap().value
}

fn k_half(x: f64) -> f64 {
    (PI / (2.0 * x)).sqrt() * (-x).exp()
}

#[test]
fn i_closed_forms() {
    assert!((bessel_i(ord(0.0), 1e-8).unwrap() - 1.0).abs() < 1e-12);
    for x in [0.1, 1.0, 3.0] {
        let sinh = (2.0 / (PI * x)).sqrt() * x.sinh();
        let cosh = (2.0 / (PI * x)).sqrt() * x.cosh();
        assert!((bessel_i(ord(0.5), x).unwrap() / sinh - 1.0).abs() < 1e-13);
        assert!((bessel_i(ord(-0.5), x).unwrap() / cosh - 1.0).abs() < 1e-13);
    }
    assert_eq!(bessel_i(ord(-1.0), 2.0).unwrap(), bessel_i(ord(1.0), 2.0).unwrap());
}

#[test]
fn k_closed_forms() {
    let e = bessel_k(ord(0.5), 1.0).unwrap();
    assert!((e.value - (PI / 2.0).sqrt() / 1f64.exp()).abs() < 1e-12);
    assert!((e.value - 0.461_069).abs() < 1e-6);
    for x in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0] {
        assert!((k(0.5, x) / k_half(x) - 1.0).abs() < 1e-10, "x = {x}");
        // K_{3/2}(x) = K_{1/2}(x)(1 + 1/x)
        assert!((k(1.5, x) / (k_half(x) * (1.0 + 1.0 / x)) - 1.0).abs() < 1e-10, "x = {x}");
    }
    assert_eq!(k(-0.25, 2.0), k(0.25, 2.0));
}

#[test]
fn integer_orders_match_references() {
    // Reference digits from a 30-digit evaluation.
    let cases = [
        (0.0, 1.0, 0.421_024_438_240_708_3),
        (1.0, 1.0, 0.601_907_230_197_234_6),
        (2.0, 1.5, 0.583_655_963_256_650_8),
        (0.0, 10.0, 1.778_006_231_616_765_2e-5),
    ];
    for (nu, x, want) in cases {
        assert!((k(nu, x) / want - 1.0).abs() < 1e-10, "K_{nu}({x})");
    }
}

#[test]
fn integer_order_continuity() {
    for x in [0.3, 1.0, 4.0] {
        let k0 = k(0.0, x);
        let mut last = f64::INFINITY;
        for h in [1e-2, 1e-3, 1e-4] {
            let d = (k(h, x) - k0).abs();
            assert!(d < last, "x = {x}, h = {h}");
            last = d;
        }
        assert!(last < 1e-7);
    }
}

#[test]
fn asymptotic_ratio_at_one_hundred() {
    let lead = (PI / 200.0).sqrt() * (-100f64).exp();
    for nu in [0.0, 0.25, -0.25, 0.5, -0.5, 1.0, 1.25] {
        let r = k(nu, 100.0) / lead;
        assert!((0.98..=1.02).contains(&r), "ν = {nu}: {r}");
    }
}

#[test]
fn logarithmic_bound() {
    assert!(k(0.0, 0.01) <= 1.0 + 2f64.ln() + 0.01f64.ln().abs());
    for i in 0..1000 {
        let x = 10f64.powf(-6.0 + 7.0 * (i as f64 + 1.0) / 1000.0);
        assert!(k(0.0, x) <= 1.0 + 2f64.ln() + x.ln().abs(), "x = {x}");
    }
}

#[test]
fn weighted_derivative_examples() {
    let (a, b) = kv_weighted_derivatives(ord(0.0), 1.0).unwrap();
    assert_eq!(a, b);
    assert!((a + k(1.0, 1.0)).abs() < 1e-14);
    let (a, _) = kv_weighted_derivatives(ord(0.5), 2.0).unwrap();
    let want = -(2f64.sqrt()) * (PI / 4.0).sqrt() * (-2f64).exp();
    assert!((a - want).abs() < 1e-13);
    let g = |x: f64| x.powf(0.25) * k(0.25, x);
    let h = 1e-5;
    let fd = (g(1.0 + h) - g(1.0 - h)) / (2.0 * h);
    let (a, _) = kv_weighted_derivatives(ord(0.25), 1.0).unwrap();
    assert!((fd - a).abs() < 1e-6);
    assert!(kv_weighted_derivatives(ord(1.8), 1.0).is_err());
}

#[test]
fn methods_agree_on_overlap_grid() {
    for i in 0..40 {
        let nu = -1.95 + 0.1 * i as f64;
        for x in [0.05, 0.3, 1.0, 1.7, 2.0] {
            let s = bessel_k_with(BesselMethod::Series, ord(nu), x).unwrap().value;
            let b = bessel_k_with(BesselMethod::BassetQuadrature, ord(nu), x).unwrap().value;
            assert!((s / b - 1.0).abs() < 1e-8, "ν = {nu}, x = {x}: {s} vs {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn positive(nu in -2.0f64..=2.0, x in 1e-3f64..=100.0) {
        prop_assert!(k(nu, x) > 0.0);
    }

    #[test]
    fn symmetric_within_error(nu in 0.0f64..=1.75, x in 1e-3f64..=30.0) {
        let a = bessel_k(ord(nu), x).unwrap();
        let b = bessel_k(ord(-nu), x).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.abs_error_estimate + b.abs_error_estimate);
    }

    #[test]
    fn verified_dispatch(nu in -2.0f64..=2.0, x in 1e-2f64..=60.0) {
        prop_assert!(bessel_k_verified(ord(nu), x).is_ok());
    }

    #[test]
    fn derivative_identities_match_finite_differences(nu in -1.75f64..=1.75, x in 0.05f64..=30.0) {
        let (first, second) = kv_weighted_derivatives(ord(nu), x).unwrap();
        let h = 1e-5 * x;
        let up = |p: f64| (x + h).powf(p) * k(nu, x + h);
        let dn = |p: f64| (x - h).powf(p) * k(nu, x - h);
        let fd1 = (up(nu) - dn(nu)) / (2.0 * h);
        let fd2 = (up(-nu) - dn(-nu)) / (2.0 * h);
        prop_assert!((fd1 - first).abs() <= 1e-6 * first.abs().max(1e-300), "{fd1} vs {first}");
        prop_assert!((fd2 - second).abs() <= 1e-6 * second.abs().max(1e-300), "{fd2} vs {second}");
    }
}

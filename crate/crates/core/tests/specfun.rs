use std::f64::consts::PI;

use hetnet_core::specfun::{g_kernel, gamma_fn, gamma_upper_inc, hyp1f1, hyp2f1_special, sinc_fn, ComplexVal};
use hetnet_oracles as oracle;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> ComplexVal {
    ComplexVal::new(re, im)
}

fn rel(a: ComplexVal, b: ComplexVal) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn gamma_known_values() {
    assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-15);
    assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
    assert!(gamma_fn(0.0).is_err());
    assert!(gamma_fn(-2.0).is_err());
    for i in 0..=110 {
        let a = -0.99 + i as f64 * 0.1;
        if (a - a.round()).abs() < 1e-9 && a <= 0.0 {
            continue;
        }
        let g = gamma_fn(a).unwrap();
        let o = oracle::gamma(a);
        assert!(((g - o) / o).abs() < 1e-12, "a={a}: {g} vs {o}");
    }
}

#[test]
fn gamma_reflection_at_two_thirds() {
    let x = 2.0 / 3.0;
    let lhs = gamma_fn(1.0 + x).unwrap() * gamma_fn(1.0 - x).unwrap();
    let rhs = PI * x / (PI * x).sin();
    assert!((lhs - rhs).abs() < 1e-12 * rhs);
    let lhs = gamma_fn(1.0 / 3.0).unwrap() * gamma_fn(5.0 / 3.0).unwrap();
    assert!((lhs - rhs).abs() < 1e-12 * rhs);
}

#[test]
fn sinc_and_reflection_identity() {
    assert_eq!(sinc_fn(0.0), 1.0);
    assert!(sinc_fn(PI).abs() < 1e-16);
    assert!((sinc_fn(2.0 * PI / 3.0) - 0.413_496_671_566_344_4).abs() < 1e-12);
    for i in 1..=60 {
        let eps = 2.0 + 0.1 * i as f64;
        let a = 2.0 / eps;
        let lhs = 1.0 / (gamma_fn(1.0 + a).unwrap() * sinc_fn(PI * a));
        let rhs = gamma_fn(1.0 - a).unwrap();
        assert!((lhs - rhs).abs() < 1e-10 * rhs, "eps={eps}");
    }
}

#[test]
fn upper_incomplete_gamma_examples() {
    let v = gamma_upper_inc(-0.5, c(1.0, 0.0)).unwrap();
    assert!((v.re - 0.178_147_711_971_037_7).abs() < 1e-9, "{v}");
    assert!(v.im.abs() < 1e-15);
    assert!(gamma_upper_inc(-0.5, c(0.0, 0.0)).is_err());
    assert!(gamma_upper_inc(-0.5, c(800.0, 0.0)).unwrap().norm() == 0.0);
    assert!(gamma_upper_inc(-0.5, c(50.0, 0.0)).unwrap().norm() < 1e-23);
}

fn incgamma_grid() -> Vec<(f64, ComplexVal)> {
    let mut g = Vec::new();
    for &a in &[-0.2, -0.5, -2.0 / 3.0, -0.9] {
        for &z in &[c(0.3, 0.0), c(2.0, 0.0), c(0.0, 2.4), c(1.0, 3.0), c(0.0, 9.0)] {
            g.push((a, z));
        }
    }
    g
}

#[test]
fn upper_incomplete_gamma_matches_quadrature_grid() {
    let grid = incgamma_grid();
    assert_eq!(grid.len(), 20);
    for (a, z) in grid {
        let v = gamma_upper_inc(a, z).unwrap();
        let o = oracle::gamma_upper_inc(a, z);
        assert!(rel(v, o) < 1e-9, "a={a} z={z}: {v} vs {o}");
    }
}

#[test]
fn hyp1f1_examples() {
    assert_eq!(hyp1f1(-0.5, 0.5, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    let v = hyp1f1(0.7, 0.7, c(0.0, 1.0)).unwrap();
    assert!(rel(v, c(0.0, 1.0).exp()) < 1e-14);
    let v = hyp1f1(-0.5, 0.5, c(0.0, 2.0)).unwrap();
    let o = oracle::hyp1f1_series(-0.5, 0.5, c(0.0, 2.0));
    assert!(rel(v, o) < 1e-10, "{v} vs {o}");
    assert!(hyp1f1(0.5, -1.0, c(0.0, 1.0)).is_err());
}

#[test]
fn hyp1f1_matches_integral_oracles_grid() {
    let mut n = 0;
    for &d in &[0.4, 0.5, 2.0 / 3.0, 0.8] {
        for &w in &[0.5, 7.0, 38.0, 45.0, 600.0] {
            let v = hyp1f1(-d, 1.0 - d, c(0.0, w)).unwrap();
            let o = oracle::hyp1f1_shifted(d, w);
            assert!(rel(v, o) < 1e-8, "d={d} w={w}: {v} vs {o}");
            n += 1;
        }
    }
    assert_eq!(n, 20);
    for &w in &[-3.0, 20.0, 39.9, 40.1, 250.0] {
        let v = hyp1f1(0.3, 1.7, c(0.0, w)).unwrap();
        let o = oracle::hyp1f1_euler(0.3, 1.7, w);
        assert!(rel(v, o) < 1e-8, "w={w}: {v} vs {o}");
    }
}

#[test]
fn hyp1f1_far_field_matches_incomplete_gamma_relation() {
    // 1F1(-d; 1-d; z) = (-z)^d [Gamma(1-d) + d Gamma(-d, -z)]
    for &d in &[0.5, 2.0 / 3.0] {
        for &w in &[100.0, 1e3, 1e4] {
            let z = c(0.0, w);
            let v = hyp1f1(-d, 1.0 - d, z).unwrap();
            let o = (-z).powf(d) * (gamma_fn(1.0 - d).unwrap() + d * gamma_upper_inc(-d, -z).unwrap());
            assert!(rel(v, o) < 1e-8, "d={d} w={w}: {v} vs {o}");
        }
    }
}

#[test]
fn hyp2f1_examples_and_grid() {
    assert_eq!(hyp2f1_special(0.5, 0.0).unwrap(), 1.0);
    assert!((hyp2f1_special(0.5, -1.0).unwrap() - PI / 4.0).abs() < 1e-12);
    let v = hyp2f1_special(2.0 / 3.0, -0.5).unwrap();
    assert!((v - oracle::hyp2f1_series(2.0 / 3.0, -0.5)).abs() < 1e-10 * v);
    let mut n = 0;
    for &a in &[0.25, 0.4, 2.0 / 3.0, 0.8] {
        for &x in &[-0.05, -0.3, -0.6, -0.9, -0.99] {
            let v = hyp2f1_special(a, x).unwrap();
            let o = oracle::hyp2f1_series(a, x);
            assert!((v - o).abs() < 1e-10 * o, "a={a} x={x}: {v} vs {o}");
            n += 1;
        }
    }
    assert_eq!(n, 20);
}

#[test]
fn hyp2f1_beyond_minus_one_uses_arctan_identity() {
    for &u in &[1.5, 3.0, 10.0, 100.0] {
        let v = hyp2f1_special(0.5, -u * u).unwrap();
        let o = u.atan() / u;
        assert!((v - o).abs() < 1e-10 * o, "u={u}: {v} vs {o}");
    }
    assert!(hyp2f1_special(0.5, 1.0).is_err());
    assert!(hyp2f1_special(1.0, -0.5).is_err());
}

#[test]
fn g_kernel_examples_and_grid() {
    assert_eq!(g_kernel(0.0, 0.5).unwrap(), c(0.0, 0.0));
    let v = g_kernel(2.5, 0.4).unwrap();
    let w = g_kernel(-2.5, 0.4).unwrap();
    assert!((v.conj() - w).norm() < 1e-15);
    assert!(g_kernel(1.0, 1.0).is_err());
    let mut n = 0;
    for &a in &[0.3, 0.5, 2.0 / 3.0, 0.8] {
        for &w in &[-3.0, 0.1, 1.0, 4.0, 20.0] {
            let v = g_kernel(w, a).unwrap();
            let o = oracle::g_kernel(w, a);
            assert!((v - o).norm() < 1e-6 * o.norm().max(1.0), "a={a} w={w}: {v} vs {o}");
            assert!(v.re > 0.0);
            n += 1;
        }
    }
    assert_eq!(n, 20);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incomplete_gamma_recurrence(a in -0.95f64..-0.05, x in 0.0f64..6.0, y in -20.0f64..20.0) {
        let z = c(x, y);
        prop_assume!(z.norm() > 1e-3);
        let lhs = gamma_upper_inc(a, z).unwrap();
        let rhs = (gamma_upper_inc(a + 1.0, z).unwrap() - z.powf(a) * (-z).exp()) / a;
        prop_assert!(rel(lhs, rhs) < 1e-9, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn hyp1f1_conjugate_symmetry(d in 0.2f64..0.95, w in 0.0f64..3000.0) {
        let p = hyp1f1(-d, 1.0 - d, c(0.0, w)).unwrap();
        let m = hyp1f1(-d, 1.0 - d, c(0.0, -w)).unwrap();
        prop_assert!(rel(m, p.conj()) < 1e-12);
        prop_assert!(p.re >= 1.0 - 1e-9);
    }

    #[test]
    fn f_kernel_ingredient_bounded(a in 0.2f64..0.95, x in -50.0f64..0.0) {
        let v = hyp2f1_special(a, x).unwrap();
        prop_assert!(v > 0.0 && v <= 1.0 + 1e-12);
    }
}

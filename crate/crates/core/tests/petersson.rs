use cusptaylor::numerics::{coeff_via_theorem41, eisenstein, eval_delta, SeriesContext};
use cusptaylor::petersson::*;
use cusptaylor::zerofinder::{find_zeros, SearchRegion, ZeroKind};
use cusptaylor::Error;
use num_complex::Complex64;
use std::f64::consts::PI;

fn c(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn fact(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

#[test]
fn norm_of_delta() {
    let nd = petersson_norm_delta(1e-9).unwrap();
    assert!(nd.rel_change < 1e-9);
    // tabulated value, as a sanity check only
    assert!((nd.value / 1.0353620568e-6 - 1.0).abs() < 1e-8, "{}", nd.value);
    assert!(nd.above_six < 1e-15);
}

#[test]
fn parabolic_ratio_and_normalisation() {
    let p = TruncationPolicy::uniform(40);
    let z = c(0.0, 2.0);
    let p1 = parabolic_poincare(1, z, 12, &p).unwrap();
    let p2 = parabolic_poincare(2, z, 12, &p).unwrap();
    assert!(rel(p1.value / p2.value, c(-2048.0 / 24.0, 0.0)) < 1e-9);

    let ctx = SeriesContext::new(40);
    let norm = norm_delta();
    for w in [c(0.1, 1.2), c(-0.4, 0.95)] {
        let delta = eval_delta(w, &ctx).unwrap();
        for m in 1..=3u32 {
            let lhs = parabolic_poincare(m as i64, w, 12, &p).unwrap().value;
            let rhs = tau(m as u64) as f64 * fact(10) / (4.0 * PI * m as f64).powi(11) * delta / norm;
            assert!(rel(lhs, rhs) < 1e-9, "m={m} {lhs} {rhs}");
        }
    }
}

#[test]
fn f_series_at_half_weight_is_parabolic() {
    let p = TruncationPolicy::uniform(30);
    let z = c(0.27, 1.05);
    for n in 1..=3 {
        let f = fks(12, z, n, 6.0, &p).unwrap().value;
        let q = parabolic_poincare(n, z, 12, &p).unwrap().value;
        assert!(rel(f, q) < 1e-13);
    }
}

#[test]
fn raising_operator_chain() {
    let p = TruncationPolicy::uniform(30);
    let (k, n, s) = (12u32, 1i64, 7.0);
    let z = c(0.1, 1.1);
    let h = 1e-4;
    let f = |w: Complex64| fks(k, w, n, s, &p).unwrap().value;
    let fx = (f(z + h) - f(z - h)) / (2.0 * h);
    let fy = (f(z + c(0.0, h)) - f(z - c(0.0, h))) / (2.0 * h);
    let dz = (fx - Complex64::i() * fy) / 2.0;
    let lhs = dz / (2.0 * PI * Complex64::i()) - k as f64 / (4.0 * PI * z.im) * f(z);
    let rhs = n as f64 * fks(k + 2, z, n, s + 1.0, &p).unwrap().value
        - (s + k as f64 / 2.0) / (4.0 * PI) * fks(k + 2, z, n, s, &p).unwrap().value;
    assert!(rel(lhs, rhs) < 1e-6, "{lhs} {rhs}");
}

#[test]
fn weight_sixteen_is_e4_delta() {
    let p = TruncationPolicy::uniform(30);
    let ctx = SeriesContext::new(40);
    let ratio = |w: Complex64| {
        let e = eisenstein(w, &ctx).unwrap();
        parabolic_poincare(1, w, 16, &p).unwrap().value / (e.e4 * e.delta)
    };
    let (r1, r2) = (ratio(c(0.0, 1.3)), ratio(c(0.35, 0.97)));
    assert!(rel(r1, r2) < 1e-9);
}

#[test]
fn elliptic_series_transforms_with_weight() {
    let p = TruncationPolicy::uniform(30);
    let z0 = c(0.1, 1.2);
    let z = c(0.2, 1.3);
    let sz = -1.0 / z;
    let a = elliptic_poincare(z0, 1, sz, 12, &p).unwrap().value;
    let b = elliptic_poincare(z0, 1, z, 12, &p).unwrap().value;
    assert!(rel(a, z.powi(12) * b) < 1e-9);
    let tz = z + 1.0;
    let t = elliptic_poincare(z0, 1, tz, 12, &p).unwrap().value;
    assert!(rel(t, b) < 1e-9);
}

#[test]
fn elliptic_series_is_a_multiple_of_delta() {
    let p = TruncationPolicy::uniform(30);
    let ctx = SeriesContext::new(40);
    let z0 = c(-0.15, 1.05);
    let w = c(0.3, 1.4);
    for m in 0..=3u32 {
        let lhs = elliptic_poincare(z0, m, w, 12, &p).unwrap().value;
        let cz = coeff_via_theorem41(z0, m, &ctx).unwrap().conj();
        let rhs = cz * fact(10) * fact(m) * PI / (512.0 * fact(m + 11)) * eval_delta(w, &ctx).unwrap() / norm_delta();
        assert!(rel(lhs, rhs) < 1e-9, "m={m}");
    }
}

#[test]
fn trivial_vanishing_at_elliptic_points() {
    let p = TruncationPolicy::uniform(30);
    let w = c(0.2, 1.3);
    let i = c(0.0, 1.0);
    let omega = c(-0.5, 3f64.sqrt() / 2.0);
    for m in [1u32, 3, 5] {
        let v = elliptic_poincare(i, m, w, 12, &p).unwrap();
        assert!(v.value.norm() < 1e-10 * v.abs_sum, "i m={m}");
    }
    for m in [1u32, 2, 4, 5] {
        let v = elliptic_poincare(omega, m, w, 12, &p).unwrap();
        assert!(v.value.norm() < 1e-10 * v.abs_sum, "omega m={m}");
    }
    let v = elliptic_poincare(omega, 3, w, 12, &p).unwrap();
    assert!(v.value.norm() > 1e-6 * v.abs_sum);
}

#[test]
fn g_series_routes_agree() {
    let p = TruncationPolicy::uniform(25);
    let z0 = c(0.1, 1.2);
    for (k, m, l, z) in [(16, 1, 1, c(0.0, 2.0)), (14, 2, 0, c(0.3, 1.1)), (20, 0, 3, c(-0.2, 1.5))] {
        let a = gk(k, z, z0, m, l, &p).unwrap();
        let b = gk_conjugated(k, z, z0, m, l, &p).unwrap();
        assert!((a.value - b.value).norm() < 1e-12 * a.abs_sum, "k={k} m={m} l={l}");
    }
    let z = c(0.0, 2.0);
    assert!(matches!(gk(12, z, z0, 0, 4, &p), Err(Error::OutOfRange(_))));
    assert!(matches!(gk_conjugated(16, z, z0, 0, 6, &p), Err(Error::OutOfRange(_))));
    assert!(!matches!(gk(16, z, z0, 0, 5, &p), Err(Error::OutOfRange(_))));
}

#[test]
fn cusp_coefficient_routes() {
    let p = TruncationPolicy::uniform(40);
    let z0 = c(0.1, 1.2);
    for (m, n) in [(0u32, 1i64), (1, 1), (2, 2)] {
        let cc = coeff_of_elliptic_at_infty(z0, m, n, 12, &p).unwrap();
        assert!(cc.rel_diff < 1e-10, "m={m} n={n}");
    }
    let cc = coeff_of_elliptic_at_infty(z0, 1, 1, 12, &p).unwrap();
    let f = coeff_of_elliptic_by_fourier(z0, 1, 1, 12, 1.0, 16, &TruncationPolicy::uniform(40)).unwrap();
    assert!(rel(f, cc.via_f_series) < 1e-9, "{f} {}", cc.via_f_series);
    for n in [0, -1, -5] {
        let zero = coeff_of_elliptic_at_infty(z0, 1, n, 12, &p).unwrap();
        assert_eq!(zero.via_f_series, Complex64::default());
    }
}

#[test]
fn parabolic_elliptic_identity() {
    let p = TruncationPolicy::uniform(40);
    for (z0, m, n) in [(c(0.1, 1.2), 0, 1), (c(0.1, 1.2), 1, 1), (c(-0.3, 1.0), 2, 3), (c(0.0, 1.5), 3, 2)] {
        let r = verify_parabolic_elliptic(z0, m, n, &p).unwrap();
        assert!(r.rel_err < 1e-9, "{r:?}");
    }
}

#[test]
fn elliptic_elliptic_identity() {
    let p = TruncationPolicy::uniform(25);
    for (z0, z1, m, n) in
        [(c(0.1, 1.2), c(-0.2, 1.1), 1, 2), (c(0.0, 1.3), c(0.25, 1.0), 2, 1), (c(0.3, 1.0), c(0.3, 1.0), 2, 2)]
    {
        let r = verify_elliptic_elliptic(z0, z1, m, n, &p).unwrap();
        assert!(r.rel_err < 1e-9, "{r:?}");
    }
}

#[test]
fn vanishing_criterion_at_zero_of_cal_e2() {
    let ctx = SeriesContext::default();
    let zs = find_zeros(2, &ctx, &SearchRegion::default()).unwrap();
    let z0 = zs.records.iter().find(|r| r.kind == ZeroKind::LineRe0).unwrap().location.z();
    assert!((z0.im - 1.344).abs() < 1e-3);
    let p = TruncationPolicy::uniform(30);
    let at_zero = vanishing_criterion_sum(z0, 2, &p).unwrap();
    assert!(at_zero.value.norm() < 1e-11 * at_zero.abs_sum, "{at_zero:?}");
    let away = vanishing_criterion_sum(c(0.0, 1.5), 2, &p).unwrap();
    assert!(away.value.norm() > 1e-4 * away.abs_sum);
}

#[test]
fn policies_refuse_large_tails() {
    let p = TruncationPolicy { max_tail: 1e-40, ..TruncationPolicy::uniform(10) };
    assert!(matches!(fks(12, c(0.0, 1.0), 1, 6.0, &p), Err(Error::PolicyRejected(_))));
    assert!(matches!(elliptic_poincare(c(0.0, 1.2), 1, c(0.0, 1.0), 12, &p), Err(Error::PolicyRejected(_))));
}

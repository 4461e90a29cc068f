use cusptaylor::cmdata::chowla_selberg;
use cusptaylor::numerics::{eval_cal_e, SeriesContext};
use cusptaylor::zerofinder::*;
use num_complex::Complex64;

fn zeros(m: u32) -> ZeroSet {
    find_zeros(m, &SeriesContext::default(), &SearchRegion::default()).unwrap()
}

fn has(set: &ZeroSet, kind: ZeroKind, x: f64, y: f64, tol: f64) -> bool {
    set.records.iter().any(|r| r.kind == kind && (r.location.x - x).abs() < tol && (r.location.y - y).abs() < tol)
}

#[test]
fn counts() {
    for (m, n) in [(1, 2), (2, 3), (3, 4), (6, 9), (7, 13), (8, 18)] {
        let s = zeros(m);
        assert_eq!(s.count, n, "m={m}: {:#?}", s.records);
        assert!(s.clear_above_cutoff);
        for r in &s.records {
            assert!(r.residual_norm < 1e-6 * 12f64.powi(m as i32), "{r:?}");
        }
    }
}

#[test]
fn printed_locations() {
    let s = zeros(2);
    assert!(has(&s, ZeroKind::LineRe0, 0.0, 1.344, 5e-4));
    assert!(has(&s, ZeroKind::LineRehalf, -0.5, 1.29, 5e-3));
    let s = zeros(3);
    assert!(has(&s, ZeroKind::LineRe0, 0.0, 1.666, 5e-4));
    assert!(has(&s, ZeroKind::LineRehalf, -0.5, 1.642, 5e-4));
    assert!(has(&s, ZeroKind::LineRehalf, -0.5, 1.155, 5e-4));
    let s = zeros(7);
    assert!(has(&s, ZeroKind::InteriorPair, -0.302, 1.18, 5e-3));
    assert_eq!(s.records.iter().filter(|r| r.kind == ZeroKind::InteriorPair).count(), 1);
    let s = zeros(6);
    assert!(s.records.iter().all(|r| r.kind != ZeroKind::InteriorPair));
}

#[test]
fn mirrors_are_zeros() {
    let ctx = SeriesContext::default();
    for m in [7, 8] {
        for r in zeros(m).records.iter().filter(|r| r.kind == ZeroKind::InteriorPair) {
            let w = r.mirror.unwrap();
            assert!((w.x + r.location.x).abs() < 1e-12 && (w.y - r.location.y).abs() < 1e-12);
            assert!(eval_cal_e(m, w.z(), &ctx).unwrap().norm() < 1e-6 * 12f64.powi(m as i32));
        }
    }
}

#[test]
fn forced_zeros_follow_parity() {
    let ctx = SeriesContext::default();
    let i = Complex64::new(0.0, 1.0);
    let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    for m in 1..=12u32 {
        let s = 12f64.powi(m as i32);
        let at_i = eval_cal_e(m, i, &ctx).unwrap().norm() / s;
        let at_w = eval_cal_e(m, w, &ctx).unwrap().norm() / s;
        assert_eq!(at_i < 1e-9, m % 2 == 1, "m={m} |E(i)|={at_i:e}");
        assert_eq!(at_w < 1e-9, m % 3 != 0, "m={m} |E(w)|={at_w:e}");
    }
}

#[test]
fn certificate_between_cm_points() {
    let ctx = SeriesContext::default();
    let c = sign_change_certificate(2, Restriction::Re0, 1.0, 2f64.sqrt(), &ctx).unwrap();
    let o4 = chowla_selberg(-4).unwrap();
    let o8 = chowla_selberg(-8).unwrap();
    assert!((c.value_a + 144.0 * o4.powi(4)).abs() < 1e-9);
    assert!((c.value_b - 72.0 * o8.powi(4)).abs() < 1e-9);
    assert!(sign_change_certificate(3, Restriction::Re0, 1.5, 1.8, &ctx).is_ok());
    assert!(matches!(
        sign_change_certificate(2, Restriction::Re0, 1.5, 1.6, &ctx),
        Err(cusptaylor::Error::MarginTooSmall(_))
    ));
}

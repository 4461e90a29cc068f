use cusptaylor::cmdata::{all_specs, check_table, registry};
use cusptaylor::numerics::{coeff_via_cm_exact, compare_routes, SeriesContext};
use num_complex::Complex64;

#[test]
fn cm_table_matches_q_expansions() {
    let ctx = SeriesContext::default();
    for spec in all_specs() {
        let c = check_table(&spec, &ctx).unwrap();
        println!("{c:?}");
        assert!(c.max_err() < 1e-10, "{c:?}");
    }
}

#[test]
fn three_routes_at_cm_points() {
    let ctx = SeriesContext::default();
    for spec in all_specs() {
        for m in 0..=12 {
            if !spec.is_nontrivial(m as u64) {
                continue;
            }
            let r = compare_routes(spec.point(), m, Some(&spec), &ctx).unwrap();
            println!(
                "D={} m={m} {:?} {:?} {:?} {:.2e}",
                spec.disc, r.theorem, r.derivative, r.cm, r.max_rel_disagreement
            );
            assert!(r.max_rel_disagreement < 1e-8);
        }
    }
}

#[test]
fn d20_display() {
    let ctx = SeriesContext::default();
    let spec = registry(-20).unwrap();
    let want = [-0.0063, 0.1019, -0.6803, 2.3012, -3.4187];
    for (m, w) in want.iter().enumerate() {
        let c = coeff_via_cm_exact(&spec, m as u32, &ctx).unwrap();
        println!("{m} {c}");
        assert!((c - Complex64::new(*w, 0.0)).norm() < 5e-5);
    }
}

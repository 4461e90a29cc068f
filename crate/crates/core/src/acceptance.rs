//! End-to-end acceptance checks, one per criterion, each reporting
//! pass, fail or skipped with a short detail line.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cmdata::{all_specs, check_table, chowla_selberg, registry, CMPointSpec};
use crate::exactalg::{is_prime, FieldSpec, IntPoly, ResidueRing, TruncPoly};
use crate::numerics::{coeff_via_cm_exact, compare_routes, eval_cal_e, SeriesContext};
use crate::periodicity::{
    analyze, build_psi, certify_nonvanishing, psi_orbit_period, residue_criterion_scan, verify_certificate, Budget,
    Verdict,
};
use crate::petersson::{
    coeff_of_elliptic_at_infty, vanishing_criterion_sum, verify_elliptic_elliptic, verify_parabolic_elliptic,
    TruncationPolicy,
};
use crate::recurrences::{bseq, pseq, qseq_omega, ModRecursion, QRPoly};
use crate::zerofinder::{find_zeros, sign_change_certificate, Restriction, SearchRegion, ZeroKind, ZeroSet};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub elapsed_ms: u64,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        };
        write!(f, "[{s}] {:>2} {}: {} ({} ms)", self.id, self.name, self.detail, self.elapsed_ms)
    }
}

#[derive(Clone, Debug)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub budget: Budget,
    /// Step cap for re-deriving the extreme period by direct recursion; 0 skips it.
    pub verify_steps: u64,
    /// `None` skips the Poincaré series checks.
    pub petersson: Option<TruncationPolicy>,
    /// Primes for the residue scan and Ψ shapes run below this bound.
    pub prime_bound: u32,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            seed: 0x5eed,
            budget: Budget::default(),
            verify_steps: 30_000_000,
            petersson: Some(TruncationPolicy::default()),
            prime_bound: 100,
        }
    }
}

pub const NAMES: [&str; 12] = [
    "exact sequences",
    "B-polynomials",
    "mod-l propositions",
    "non-vanishing certificates",
    "extreme period",
    "residue criterion",
    "Psi shape",
    "coefficient routes",
    "CM table",
    "zeros",
    "Poincare identities",
    "property suites",
];

struct Outcome {
    status: Status,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { status: Status::Pass, detail: detail.into() })
}

fn fail(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { status: Status::Fail, detail: detail.into() })
}

fn skipped(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { status: Status::Skipped, detail: detail.into() })
}

pub fn run_criterion(id: u32, cfg: &AcceptanceConfig) -> CriterionResult {
    let start = Instant::now();
    let out = match id {
        1 => exact_sequences(),
        2 => b_polynomials(),
        3 => mod_l_propositions(),
        4 => certificates(cfg),
        5 => extreme_period(cfg),
        6 => residue_criterion(cfg),
        7 => psi_shape(cfg),
        8 => coefficient_routes(cfg),
        9 => cm_table(&all_specs()),
        10 => zeros(),
        11 => poincare_identities(cfg),
        12 => property_suites(cfg),
        _ => Err(Error::OutOfRange(format!("no criterion {id}"))),
    };
    let out = out.unwrap_or_else(|e| match e {
        Error::BudgetExceeded { .. } | Error::DeadlineExceeded => {
            Outcome { status: Status::Skipped, detail: format!("budget: {e}") }
        }
        e => Outcome { status: Status::Fail, detail: format!("error: {e}") },
    });
    CriterionResult {
        id,
        name: NAMES.get(id as usize - 1).copied().unwrap_or("unknown"),
        status: out.status,
        detail: out.detail,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CriterionResult> {
    (1..=12).map(|id| run_criterion(id, cfg)).collect()
}

fn ints(v: &[i64]) -> Vec<num_bigint::BigInt> {
    v.iter().map(|&x| x.into()).collect()
}

fn exact_sequences() -> Result<Outcome> {
    let p: Vec<_> = (0..12).map(|n| pseq(n).eval_zero()).collect();
    let q: Vec<_> = (0..15).map(|n| qseq_omega(n).eval_zero()).collect();
    let want_p = ints(&[1, 0, -12, 0, 216, 0, 10368, 0, -2052864, 0, 47029248, 0]);
    let want_q = ints(&[1, 0, 0, 48, 0, 0, 18432, 0, 0, 13271040, 0, 0, 1974730752, 0, 0]);
    if p != want_p {
        return fail(format!("p_n(0) = {p:?}"));
    }
    if q != want_q {
        return fail(format!("q_n(0) = {q:?}"));
    }
    pass("p_0..p_11 and q_0..q_14 at t = 0 match")
}

fn b_polynomials() -> Result<Outcome> {
    let m = QRPoly::monomial;
    let want = [m(-12, 0, 1), m(48, 1, 0), m(216, 0, 2), m(-4608, 1, 1), m(1152 * 9, 0, 3).add(&m(1152 * 16, 2, 0))];
    for (i, w) in want.iter().enumerate() {
        let got = bseq(i as u32 + 2);
        if &got != w {
            return fail(format!("B_{} differs", i + 2));
        }
    }
    pass("B_2..B_6 match")
}

/// (coefficient, power) lists.
type Table = &'static [&'static [(i64, usize)]];

#[rustfmt::skip]
const MOD5: Table = &[
    &[(1, 0)], &[], &[(3, 0)], &[(3, 1)],
    &[(1, 0)], &[(2, 1)], &[(3, 0), (2, 2)], &[(1, 1)],
    &[(1, 0)], &[(2, 1)], &[(3, 0), (1, 2)], &[(3, 1), (2, 3)],
    &[(1, 0), (4, 2), (2, 4)], &[(2, 3)], &[(3, 0), (1, 2)], &[(4, 1), (4, 3)],
    &[(1, 0), (2, 2), (2, 4)], &[(1, 1), (4, 3), (4, 5)], &[(3, 0), (3, 2), (4, 4), (4, 6)], &[(4, 1), (4, 3)],
];

#[rustfmt::skip]
const MOD7: Table = &[
    &[(1, 0)], &[], &[(2, 1)], &[(6, 0)], &[(6, 2)], &[(5, 1)],
    &[(1, 0), (1, 3)], &[(5, 2)], &[(2, 1), (5, 4)], &[(6, 0), (4, 3)], &[(2, 2)], &[(5, 1), (4, 4)],
    &[(1, 0), (6, 3), (4, 6)], &[(1, 2), (2, 5)], &[(2, 1), (2, 4)], &[(6, 0), (4, 3), (4, 6)], &[(4, 5), (4, 8)], &[(5, 1), (5, 4)],
    &[(1, 0), (1, 3), (1, 6)], &[(2, 2), (2, 5)], &[(2, 1), (2, 4)], &[(6, 0)], &[], &[(5, 1)],
    &[(1, 0)], &[(1, 2)], &[(2, 1)], &[(6, 0), (6, 3)], &[(2, 2)], &[(5, 1), (2, 4)],
    &[(1, 0), (3, 3)], &[(5, 2)], &[(2, 1), (3, 4)], &[(6, 0), (1, 3), (3, 6)], &[(6, 2), (5, 5)], &[(5, 1), (5, 4)],
    &[(1, 0), (3, 3), (3, 6)], &[(3, 5), (3, 8)], &[(2, 1), (2, 4)], &[(6, 0), (6, 3), (6, 6)], &[(5, 2), (5, 5)], &[(5, 1), (5, 4)],
];

fn table_poly(ring: ResidueRing, row: &[(i64, usize)]) -> TruncPoly {
    let mut v = vec![(0i64, 0i64); ring.l as usize];
    for &(c, k) in row {
        if k < v.len() {
            v[k].0 = c;
        }
    }
    TruncPoly::from_pairs(ring, &v)
}

fn mod_l_propositions() -> Result<Outcome> {
    let r5 = ResidueRing::new(5, FieldSpec::Rational)?;
    let r7 = ResidueRing::new(7, FieldSpec::Rational)?;
    let reduce = |p: IntPoly, r: ResidueRing| p.reduce(r);
    for (n, row) in MOD5.iter().enumerate() {
        if reduce(pseq(n as u32), r5) != table_poly(r5, row) {
            return fail(format!("p_{n} mod 5 differs from the table"));
        }
    }
    for (n, row) in MOD7.iter().enumerate() {
        if reduce(qseq_omega(n as u32), r7) != table_poly(r7, row) {
            return fail(format!("q_{n} mod 7 differs from the table"));
        }
    }
    if reduce(pseq(20), r5) != TruncPoly::one(r5) || !reduce(pseq(21), r5).is_zero() {
        return fail("p_20, p_21 mod 5 do not restart the cycle");
    }
    if reduce(qseq_omega(42), r7) != TruncPoly::one(r7) || !reduce(qseq_omega(43), r7).is_zero() {
        return fail("q_42, q_43 mod 7 do not restart the cycle");
    }
    let a5 = analyze(&registry(-4)?, 5, &Budget::default())?;
    let a7 = analyze(&registry(-3)?, 7, &Budget::default())?;
    for m in 0..40u64 {
        let want5 = if m % 2 == 0 { 1 } else { 3 };
        let want7 = if m % 2 == 0 { 1 } else { 6 };
        if a5.constant(2 * m).pair() != (want5, 0) || a7.constant(3 * m).pair() != (want7, 0) {
            return fail(format!("constant-term cycle broken at m = {m}"));
        }
    }
    pass("20-entry mod-5 and 42-entry mod-7 arrays match; cycles 1,3 and 1,6 hold")
}

fn certificates(cfg: &AcceptanceConfig) -> Result<Outcome> {
    let pairs = [(-3, 7), (-4, 5), (-7, 23), (-8, 17), (-11, 23), (-15, 17), (-19, 7), (-20, 7), (-24, 5)];
    for (d, l) in pairs {
        let c = certify_nonvanishing(&registry(d)?, l, &cfg.budget)?;
        if c.verdict != Verdict::AllNonzero {
            return fail(format!("D={d} l={l}: {:?}", c.verdict));
        }
    }
    // (i0, j0, unit, order, least period); None where only part is pinned down
    let shortcut = |d: i64, l: u32| -> Result<(u64, u64, (u32, u32), u64, u64)> {
        let an = analyze(&registry(d)?, l, &cfg.budget)?;
        let s = an.shortcut();
        Ok((s.i0, s.j0, s.unit.pair(), s.order, an.beta))
    };
    let mut bad = Vec::new();
    if shortcut(-7, 23)? != (12, 265, (8, 0), 11, 2783) {
        bad.push("D=-7");
    }
    // the relation q̄_{n+272} = 2q̄_n is also checked from n = 278 on
    let an8 = analyze(&registry(-8)?, 17, &cfg.budget)?;
    let two = an8.ring().elt(2, 0);
    let s8 = an8.shortcut();
    let later = (278..300).all(|n| an8.poly(n + 272) == an8.poly(n).scale(two));
    if !(later && s8.j0 - s8.i0 == 272 && s8.unit.pair() == (2, 0) && s8.order == 8) {
        bad.push("D=-8");
    }
    let (i0, j0, u, ord, _) = shortcut(-11, 23)?;
    if (j0 - i0, u, ord) != (253, (14, 0), 22) {
        bad.push("D=-11");
    }
    let (_, _, u, ord, _) = shortcut(-15, 17)?;
    if (u, ord) != ((13, 10), 144) {
        bad.push("D=-15");
    }
    let (i0, j0, u, ord, _) = shortcut(-19, 7)?;
    if (j0 - i0, u, ord) != (21, (4, 0), 3) {
        bad.push("D=-19");
    }
    let (i0, j0, u, ord, _) = shortcut(-20, 7)?;
    if (j0 - i0, u, ord) != (21, (4, 6), 24) {
        bad.push("D=-20");
    }
    if shortcut(-24, 5)?.4 != 48 {
        bad.push("D=-24");
    }
    let ttz = certify_nonvanishing(&registry(-4)?, 7, &cfg.budget)?.verdict;
    if ttz != Verdict::TendsToZero {
        bad.push("(-4,7)");
    }
    if !bad.is_empty() {
        return fail(format!("shortcut data differs for {}", bad.join(", ")));
    }
    pass("nine pairs ALL_NONZERO with the expected shortcut data; (-4,7) tends to zero")
}

fn extreme_period(cfg: &AcceptanceConfig) -> Result<Outcome> {
    let spec = registry(-15)?;
    let an = analyze(&spec, 83, &cfg.budget)?;
    let psi = build_psi(&spec, 83)?;
    let orbit = psi_orbit_period(&psi, &cfg.budget)?;
    let s = orbit.shortcut;
    let mut detail = format!(
        "beta = {}, constant period = {}, Psi^{}(1) = ({}+{}√5)Psi^{}(1) with order {}",
        an.beta, an.constant_period, s.j0, s.unit.a, s.unit.b, s.i0, s.order
    );
    let expected = an.beta == 23_439_864
        && an.constant_period == 282_408
        && (s.i0, s.j0, s.unit.pair(), s.order) == (1, 83, (11, 57), 3444)
        && orbit.period == 82 * 3444;
    if !expected {
        return fail(detail);
    }
    if cfg.verify_steps == 0 {
        detail.push_str("; direct recheck skipped");
        return pass(detail);
    }
    let rep = verify_certificate(&spec, &an.certificate(), 4, cfg.seed, cfg.verify_steps)?;
    if !rep.ok() {
        return fail(format!("{detail}; direct recursion disagrees at {:?}", rep.failures));
    }
    detail.push_str(&format!("; q̄(n+beta) = q̄(n) at {} random n <= {}", rep.samples, rep.horizon));
    pass(detail)
}

fn primes_below(bound: u32) -> Vec<u32> {
    (5..bound).filter(|&l| is_prime(l as u64)).collect()
}

fn residue_criterion(cfg: &AcceptanceConfig) -> Result<Outcome> {
    let mut rows = 0;
    for d in crate::cmdata::DISCRIMINANTS {
        for r in residue_criterion_scan(d, cfg.prime_bound - 1, &cfg.budget)? {
            rows += 1;
            let nonresidue = r.legendre == -1;
            if r.tends_to_zero != nonresidue || !r.agrees {
                return fail(format!("mismatch at D={d} l={}", r.prime));
            }
        }
    }
    pass(format!("{rows} (D, l) pairs, no mismatches"))
}

fn psi_shape(cfg: &AcceptanceConfig) -> Result<Outcome> {
    let mut count = 0;
    for d in crate::cmdata::DISCRIMINANTS {
        let spec = registry(d)?;
        for l in primes_below(cfg.prime_bound) {
            if d.unsigned_abs() % l as u64 == 0 {
                continue;
            }
            if build_psi(&spec, l)?.compact.is_none() {
                return fail(format!("Psi is not of the form aX + bX' at D={d} l={l}"));
            }
            count += 1;
        }
    }
    // D = −4: (a, b/ā₃) for l = 5, 7, 11, 13
    let forms: [(u32, &[(i64, usize)], &[(i64, usize)]); 4] = [
        (5, &[(2, 1)], &[(1, 0)]),
        (7, &[(5, 1)], &[(1, 2)]),
        (11, &[(7, 3), (5, 1)], &[(1, 2)]),
        (13, &[(5, 3), (7, 1)], &[(12, 4), (5, 2), (10, 0)]),
    ];
    let spec = registry(-4)?;
    for (l, a, f) in forms {
        let psi = build_psi(&spec, l)?;
        let rec = ModRecursion::for_spec(&spec, l)?;
        let ring = psi.ring;
        let (ga, gb) = psi.compact.clone().expect("compact form");
        let want_b = table_poly(ring, f).trunc_mul(&rec.coeff_poly(3))?;
        if ga != table_poly(ring, a) || gb != want_b {
            return fail(format!("D=-4 l={l} form differs"));
        }
    }
    pass(format!("{count} (D, l) pairs of compact shape; D=-4 forms for l = 5, 7, 11, 13 match"))
}

fn reduced_point(rng: &mut ChaCha8Rng) -> Complex64 {
    let x: f64 = rng.gen_range(-0.5..0.5);
    let lo = (1.0 - x * x).sqrt();
    Complex64::new(x, rng.gen_range(lo..2.5))
}

fn coefficient_routes(cfg: &AcceptanceConfig) -> Result<Outcome> {
    let ctx = SeriesContext::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let z = reduced_point(&mut rng);
        for m in 0..=10 {
            let r = compare_routes(z, m, None, &ctx)?;
            worst = worst.max(r.max_rel_disagreement);
            if r.max_rel_disagreement >= 1e-8 {
                return fail(format!("z = {z}, m = {m}: {:.2e}", r.max_rel_disagreement));
            }
        }
    }
    let mut worst_cm: f64 = 0.0;
    for spec in all_specs() {
        for m in (0..=12).filter(|&m| spec.is_nontrivial(m as u64)) {
            let r = compare_routes(spec.point(), m, Some(&spec), &ctx)?;
            worst_cm = worst_cm.max(r.max_rel_disagreement);
            if r.max_rel_disagreement >= 1e-8 {
                return fail(format!("D={} m={m}: {:.2e}", spec.disc, r.max_rel_disagreement));
            }
        }
    }
    let spec = registry(-20)?;
    let want = [-0.0063, 0.1019, -0.6803, 2.3012, -3.4187];
    for (m, w) in want.iter().enumerate() {
        let c = coeff_via_cm_exact(&spec, m as u32, &ctx)?;
        if (c.re * 1e4).round() / 1e4 != *w || c.im.abs() > 5e-5 {
            return fail(format!("D=-20 m={m}: {c}"));
        }
    }
    pass(format!(
        "random points (seed {}): worst {worst:.1e}; CM points: worst {worst_cm:.1e}; D=-20 display matches",
        cfg.seed
    ))
}

fn cm_table(specs: &[CMPointSpec]) -> Result<Outcome> {
    let ctx = SeriesContext::default();
    let mut worst: f64 = 0.0;
    for spec in specs {
        let c = check_table(spec, &ctx)?;
        let err = c.max_err();
        if !(err < 1e-10) {
            return fail(format!("D={}: numeric mismatch {err:.2e}", spec.disc));
        }
        worst = worst.max(err);
    }
    pass(format!("{} rows, worst {worst:.1e}", specs.len()))
}

/// The table check alone, for arbitrary registry rows (a corrupted row must fail).
pub fn cm_table_status(specs: &[CMPointSpec]) -> Status {
    cm_table(specs).map(|o| o.status).unwrap_or(Status::Fail)
}

/// A zero of the given kind matching the printed decimals to within half a unit of the last digit.
fn has(set: &ZeroSet, kind: ZeroKind, x: f64, y: f64, tol: f64) -> bool {
    set.records.iter().any(|r| r.kind == kind && (r.location.x - x).abs() < tol && (r.location.y - y).abs() < tol)
}

fn forced_at(set: &ZeroSet, y: f64) -> bool {
    set.records.iter().any(|r| r.kind == ZeroKind::EllipticForced && (r.location.y - y).abs() < 1e-9)
}

fn zeros() -> Result<Outcome> {
    let ctx = SeriesContext::default();
    let region = SearchRegion::default();
    let z: Vec<ZeroSet> = [2, 3, 6, 7, 8].iter().map(|&m| find_zeros(m, &ctx, &region)).collect::<Result<_>>()?;
    let pairs = |s: &ZeroSet| s.records.iter().filter(|r| r.kind == ZeroKind::InteriorPair).count();
    let checks = [
        ("E2 at 1.344i", has(&z[0], ZeroKind::LineRe0, 0.0, 1.344, 5e-4)),
        ("E2 at -0.5+1.29i", has(&z[0], ZeroKind::LineRehalf, -0.5, 1.29, 5e-3)),
        ("E2 forced at omega", forced_at(&z[0], 3f64.sqrt() / 2.0)),
        ("E2 count 3", z[0].count == 3),
        ("E3 at 1.666i", has(&z[1], ZeroKind::LineRe0, 0.0, 1.666, 5e-4)),
        ("E3 at -0.5+1.642i", has(&z[1], ZeroKind::LineRehalf, -0.5, 1.642, 5e-4)),
        ("E3 at -0.5+1.155i", has(&z[1], ZeroKind::LineRehalf, -0.5, 1.155, 5e-4)),
        ("E3 forced at i", forced_at(&z[1], 1.0)),
        ("E6 count 9", z[2].count == 9),
        ("E7 count 13", z[3].count == 13),
        ("E7 pair at -0.302+1.18i", pairs(&z[3]) == 1 && has(&z[3], ZeroKind::InteriorPair, -0.302, 1.18, 5e-3)),
        ("E8 count 18", z[4].count == 18),
        ("E8 three pairs", pairs(&z[4]) == 3),
        ("clear above cutoff", z.iter().all(|s| s.clear_above_cutoff)),
    ];
    if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
        return fail(format!("{name} not found"));
    }
    let c = sign_change_certificate(2, Restriction::Re0, 1.0, 2f64.sqrt(), &ctx)?;
    let (o4, o8) = (chowla_selberg(-4)?, chowla_selberg(-8)?);
    let exact = (c.value_a + 144.0 * o4.powi(4)).abs() < 1e-9 && (c.value_b - 72.0 * o8.powi(4)).abs() < 1e-9;
    if !exact {
        return fail(format!("endpoint values {} {}", c.value_a, c.value_b));
    }
    pass("printed zeros, counts 9/13/18 and the sign change between i and i√2 confirmed")
}

fn poincare_identities(cfg: &AcceptanceConfig) -> Result<Outcome> {
    let Some(policy) = cfg.petersson else {
        return skipped("no truncation policy configured");
    };
    let z0 = Complex64::new(0.0, 1.2);
    let mut worst_pe: f64 = 0.0;
    for m in 0..=2 {
        for n in 1..=2 {
            let r = verify_parabolic_elliptic(z0, m, n, &policy)?;
            let tol = if m == 0 { 1e-6 } else { 1e-3 };
            if !(r.rel_err < tol) {
                return fail(format!("parabolic-elliptic m={m} n={n}: {:.2e}", r.rel_err));
            }
            worst_pe = worst_pe.max(r.rel_err);
        }
    }
    let mut worst_ee: f64 = 0.0;
    for m in 0..=1 {
        let r = verify_elliptic_elliptic(z0, z0, m, m, &policy)?;
        let real_pos = r.rhs.re > 0.0 && r.rhs.im.abs() < 1e-6 * r.rhs.re && r.lhs.re > 0.0;
        if !real_pos || !(r.rel_err < 1e-3) {
            return fail(format!("elliptic-elliptic m={m}: {:?} vs {:?}", r.lhs, r.rhs));
        }
        worst_ee = worst_ee.max(r.rel_err);
    }
    let mut worst_routes: f64 = 0.0;
    for m in 0..=2 {
        for n in 1..=2 {
            let c = coeff_of_elliptic_at_infty(z0, m, n, 12, &policy)?;
            if !(c.rel_diff < 1e-6) {
                return fail(format!("cusp coefficient routes m={m} n={n}: {:.2e}", c.rel_diff));
            }
            worst_routes = worst_routes.max(c.rel_diff);
        }
    }
    let zs = find_zeros(2, &SeriesContext::default(), &SearchRegion::default())?;
    let zero = zs
        .records
        .iter()
        .find(|r| r.kind == ZeroKind::LineRe0)
        .ok_or_else(|| Error::NoConvergence("no zero of E2 on the imaginary axis".into()))?
        .location
        .z();
    let g = vanishing_criterion_sum(zero, 2, &policy)?;
    if !(g.value.norm() <= g.error_bound()) {
        return fail(format!("G-sum {:.2e} exceeds its error bound {:.2e}", g.value.norm(), g.error_bound()));
    }
    // away from the zero the same sum is clearly nonzero
    let away = vanishing_criterion_sum(Complex64::new(0.0, 1.5), 2, &policy)?;
    if away.value.norm() <= away.error_bound() {
        return fail("G-sum does not separate the zero from 1.5i");
    }
    pass(format!(
        "parabolic-elliptic worst {worst_pe:.1e}, elliptic-elliptic worst {worst_ee:.1e}, routes {worst_routes:.1e}, \
         G-sum at {:.6}i is {:.1e} (bound {:.1e})",
        zero.im,
        g.value.norm(),
        g.error_bound()
    ))
}

fn property_suites(cfg: &AcceptanceConfig) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let specs = all_specs();
    let primes = primes_below(60);
    let mut checked = 0;
    for _ in 0..24 {
        let spec = &specs[rng.gen_range(0..specs.len())];
        let l = primes[rng.gen_range(0..primes.len())];
        if spec.disc.unsigned_abs().is_multiple_of(l as u64) {
            continue;
        }
        let ring = ResidueRing::new(l, spec.field)?;
        // reduction commutes with the recursion
        let n = rng.gen_range(2..40u32);
        let exact = crate::recurrences::cm_qseq(spec, n)?;
        let modular = crate::recurrences::cm_qseq_mod(spec, l, n as u64)?;
        if exact.reduce(ring) != modular[n as usize] {
            return fail(format!("reduction does not commute at D={} l={l} n={n}", spec.disc));
        }
        // Ψ iterates agree with direct stepping
        let psi = build_psi(spec, l)?;
        let k = rng.gen_range(1..6usize);
        let direct = crate::recurrences::cm_qseq_mod(spec, l, (k * l as usize) as u64)?;
        let orbit = crate::periodicity::psi_orbit(&psi, k + 1);
        if orbit[k] != direct[k * l as usize] {
            return fail(format!("Psi^{k}(1) differs from direct stepping at D={} l={l}", spec.disc));
        }
        // derivation law in 𝓡_l
        let f = random_poly(&mut rng, ring);
        let g = random_poly(&mut rng, ring);
        let lhs = f.trunc_mul(&g)?.trunc_derivative();
        let rhs = f.trunc_derivative().trunc_mul(&g)?.add(&f.trunc_mul(&g.trunc_derivative())?)?;
        if lhs != rhs {
            return fail(format!("derivation law fails in R_{l}"));
        }
        checked += 1;
    }
    // triviality of c_i(Δ, odd) and c_ω(Δ, m ≢ 0 mod 3)
    let ctx = SeriesContext::default();
    let i = Complex64::new(0.0, 1.0);
    let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    for m in 1..=12u32 {
        let s = 12f64.powi(m as i32);
        let at_i = eval_cal_e(m, i, &ctx)?.norm() / s < 1e-9;
        let at_w = eval_cal_e(m, w, &ctx)?.norm() / s < 1e-9;
        if at_i != (m % 2 == 1) || at_w != (m % 3 != 0) {
            return fail(format!("trivial-vanishing pattern broken at m={m}"));
        }
    }
    pass(format!("{checked} random (D, l) cases with seed {}; vanishing pattern at i and omega holds", cfg.seed))
}

fn random_poly(rng: &mut ChaCha8Rng, ring: ResidueRing) -> TruncPoly {
    let l = ring.l as i64;
    let d = if ring.field == FieldSpec::Rational { 0 } else { l };
    let v: Vec<(i64, i64)> =
        (0..ring.l).map(|_| (rng.gen_range(0..l), if d > 0 { rng.gen_range(0..d) } else { 0 })).collect();
    TruncPoly::from_pairs(ring, &v)
}

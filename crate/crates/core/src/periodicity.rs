//! Eventual periodicity of q̄ₙ modulo l: cycle detection with the
//! scalar-multiple shortcut, least periods, the l-step map Ψ, and the
//! non-vanishing certificates built on top of them.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cmdata::{registry, CMPointSpec};
use crate::exactalg::{factorize, legendre, FieldSpec, ResidueElt, ResidueRing, TruncPoly};
use crate::recurrences::ModRecursion;
use crate::{Error, Result};

/// Step and wall-clock limits for the searches in this module.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_steps: u64,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: 100_000_000, deadline: None }
    }
}

impl Budget {
    fn check(&self, steps: u64, bound: impl FnOnce() -> String) -> Result<()> {
        if steps > self.max_steps {
            return Err(Error::BudgetExceeded { steps, bound: bound() });
        }
        if steps.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Error::DeadlineExceeded);
        }
        Ok(())
    }
}

#[derive(Default)]
struct IdHasher(u64);

impl Hasher for IdHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, _: &[u8]) {
        unreachable!("only u64 keys are hashed")
    }
    fn write_u64(&mut self, v: u64) {
        self.0 = v;
    }
}

type IdMap<V> = HashMap<u64, V, BuildHasherDefault<IdHasher>>;

#[inline]
fn mix(h: u64, v: u64) -> u64 {
    (h.rotate_left(5) ^ v).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95)
}

/// A relation x_{n+shift} = u·x_n for n ≥ i0 found on a stored prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Shortcut {
    pub i0: u64,
    pub j0: u64,
    #[serde(serialize_with = "ser_unit")]
    pub unit: ResidueElt,
    pub order: u64,
}

fn ser_unit<S: serde::Serializer>(u: &ResidueElt, s: S) -> std::result::Result<S::Ok, S::Error> {
    [u.a, u.b].serialize(s)
}

/// An eventually periodic sequence of coefficient vectors of width `w`,
/// stored up to the first scalar repeat.
struct ScaledCycle {
    ring: ResidueRing,
    w: usize,
    data: Vec<(u32, u32)>,
    cut: Shortcut,
    upow: Vec<ResidueElt>,
}

impl ScaledCycle {
    fn new(ring: ResidueRing, w: usize, data: Vec<(u32, u32)>, i0: u64, j0: u64, unit: ResidueElt) -> Self {
        let order = unit.mult_order().expect("shortcut scalar is a unit");
        let mut upow = Vec::with_capacity(order as usize);
        let mut p = ring.one();
        for _ in 0..order {
            upow.push(p);
            p = p * unit;
        }
        ScaledCycle { ring, w, data, cut: Shortcut { i0, j0, unit, order }, upow }
    }

    fn shift(&self) -> u64 {
        self.cut.j0 - self.cut.i0
    }

    /// A period valid from i0.
    fn period_multiple(&self) -> u64 {
        self.shift() * self.cut.order
    }

    /// (stored index, power of u) with x_n = u^k·x_{base}.
    #[inline]
    fn locate(&self, n: u64) -> (usize, u64) {
        if n < self.cut.i0 {
            return (n as usize, 0);
        }
        let s = self.shift();
        let off = n - self.cut.i0;
        ((self.cut.i0 + off % s) as usize, (off / s) % self.cut.order)
    }

    #[inline]
    fn stored(&self, base: usize) -> &[(u32, u32)] {
        &self.data[base * self.w..(base + 1) * self.w]
    }

    fn get(&self, n: u64) -> Vec<(u32, u32)> {
        let (b, k) = self.locate(n);
        let u = self.upow[k as usize].pair();
        self.stored(b).iter().map(|&x| self.ring.mul_raw(x, u)).collect()
    }

    fn eq(&self, a: u64, b: u64) -> bool {
        let (ia, ka) = self.locate(a);
        let (ib, kb) = self.locate(b);
        let ord = self.cut.order;
        let s = self.upow[((kb + ord - ka) % ord) as usize].pair();
        let (xa, xb) = (self.stored(ia), self.stored(ib));
        if s == (1, 0) {
            return xa == xb;
        }
        xa.iter().zip(xb).all(|(&p, &q)| p == self.ring.mul_raw(q, s))
    }

    /// Component `c` of x_n.
    fn component(&self, n: u64, c: usize) -> ResidueElt {
        let (b, k) = self.locate(n);
        let (x, y) = self.stored(b)[c];
        ResidueElt::new(x, y, self.ring) * self.upow[k as usize]
    }

    fn is_period(&self, p: u64, eq: &impl Fn(u64, u64) -> bool) -> bool {
        let start = self.cut.i0;
        (start..start + self.period_multiple()).all(|m| eq(m + p, m))
    }

    /// Least period valid from i0 under the given equality.
    fn least_period(&self, eq: impl Fn(u64, u64) -> bool) -> u64 {
        let mut p = self.period_multiple();
        for (q, _) in factorize(p) {
            while p.is_multiple_of(q) && self.is_period(p / q, &eq) {
                p /= q;
            }
        }
        p
    }

    /// Least α with x_{n+p} = x_n for all n ≥ α.
    fn preperiod(&self, p: u64, eq: impl Fn(u64, u64) -> bool) -> u64 {
        let mut a = self.cut.i0;
        while a > 0 && eq(a - 1 + p, a - 1) {
            a -= 1;
        }
        a
    }
}

/// Scans windows x_n = data[n·stride .. n·stride + w] for the first pair
/// i < j with x_j = u·x_i (and i ≡ j mod `residue`), producing entries of
/// width `stride` on demand.
fn projective_search(
    ring: ResidueRing,
    stride: usize,
    w: usize,
    residue: Option<u64>,
    data: &mut Vec<(u32, u32)>,
    budget: &Budget,
    bound: impl Fn() -> String,
    mut produce: impl FnMut(&mut Vec<(u32, u32)>, u64),
) -> Result<(u64, u64, ResidueElt)> {
    let mut seen: IdMap<Vec<u64>> = IdMap::default();
    let mut produced = (data.len() / stride) as u64;
    let mut n = 0u64;
    loop {
        while data.len() < n as usize * stride + w {
            produce(data, produced - 1);
            produced += 1;
            budget.check(produced, &bound)?;
        }
        let win = &data[n as usize * stride..n as usize * stride + w];
        let pivot = win.iter().position(|&c| ResidueElt::new(c.0, c.1, ring).is_unit());
        let r = residue.map_or(0, |m| n % m);
        let (scale, flag) = match pivot {
            Some(p) => (ResidueElt::new(win[p].0, win[p].1, ring), 1u64),
            None => (ring.one(), 2u64),
        };
        let inv = scale.invert().unwrap().pair();
        let mut h = mix(mix(0, flag), r);
        for &c in win {
            let v = ring.mul_raw(c, inv);
            h = mix(h, (v.0 as u64) << 32 | v.1 as u64);
        }
        let entry = seen.entry(h).or_default();
        for &i in entry.iter() {
            let prev = &data[i as usize * stride..i as usize * stride + w];
            let u = match pivot {
                Some(p) => {
                    let ci = ResidueElt::new(prev[p].0, prev[p].1, ring);
                    if !ci.is_unit() {
                        continue;
                    }
                    scale * ci.invert().unwrap()
                }
                None => ring.one(),
            };
            let up = u.pair();
            if residue.map_or(0, |m| i % m) == r && win.iter().zip(prev).all(|(&a, &b)| a == ring.mul_raw(b, up)) {
                data.truncate((n as usize) * stride + w);
                return Ok((i, n, u));
            }
        }
        entry.push(n);
        n += 1;
    }
}

/// Non-vanishing verdict for the constant terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    AllNonzero,
    TendsToZero,
    HasZeroAt(u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodCertificate {
    pub disc: i64,
    pub prime: u32,
    pub field: String,
    pub alpha: u64,
    pub beta: u64,
    pub constant_period: u64,
    pub constant_preperiod: u64,
    pub shortcut: Option<Shortcut>,
    pub verdict: Verdict,
    pub checked_upto: u64,
    pub wall_time_ms: Option<u64>,
}

/// The reduced sequence with its detected cycle, kept for further queries.
pub struct CycleAnalysis {
    pub spec: CMPointSpec,
    pub rec: ModRecursion,
    cyc: ScaledCycle,
    pub alpha: u64,
    pub beta: u64,
    pub constant_period: u64,
    pub constant_preperiod: u64,
}

impl CycleAnalysis {
    pub fn ring(&self) -> ResidueRing {
        self.rec.ring
    }

    pub fn poly(&self, n: u64) -> TruncPoly {
        TruncPoly::from_pairs(
            self.ring(),
            &self.cyc.get(n).iter().map(|&(a, b)| (a as i64, b as i64)).collect::<Vec<_>>(),
        )
    }

    pub fn constant(&self, n: u64) -> ResidueElt {
        self.cyc.component(n, 0)
    }

    pub fn shortcut(&self) -> Shortcut {
        self.cyc.cut
    }

    /// True if q̄ₙ(0) = 0 for all large n.
    pub fn tends_to_zero(&self) -> bool {
        let i0 = self.cyc.cut.i0;
        (i0..i0 + self.cyc.shift()).all(|n| self.constant(n).is_zero())
    }

    pub fn certificate(&self) -> PeriodCertificate {
        let n = self.spec.elliptic_order as u64;
        let span = self.beta / gcd(self.beta, n) * n;
        let upto = self.alpha + span;
        let verdict = if self.tends_to_zero() {
            Verdict::TendsToZero
        } else {
            match (0..upto).find(|&k| self.spec.is_nontrivial(k) && self.constant(k).is_zero()) {
                Some(k) => Verdict::HasZeroAt(k),
                None => Verdict::AllNonzero,
            }
        };
        PeriodCertificate {
            disc: self.spec.disc,
            prime: self.ring().l,
            field: self.spec.field.to_string(),
            alpha: self.alpha,
            beta: self.beta,
            constant_period: self.constant_period,
            constant_preperiod: self.constant_preperiod,
            shortcut: Some(self.cyc.cut),
            verdict,
            checked_upto: upto,
            wall_time_ms: None,
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// log₁₀ of the box-principle bound l·|𝒪_K/l|^l.
pub fn box_bound_log10(ring: ResidueRing) -> f64 {
    let l = ring.l as f64;
    l.log10() + l * (ring.size() as f64).log10()
}

fn bound_string(ring: ResidueRing) -> String {
    format!("l*|O/l|^l = 10^{:.1}", box_bound_log10(ring))
}

/// Detects the cycle of (q̄ₙ, q̄ₙ₊₁, n mod l) and computes least periods.
pub fn analyze(spec: &CMPointSpec, l: u32, budget: &Budget) -> Result<CycleAnalysis> {
    let rec = ModRecursion::for_spec(spec, l)?;
    let ring = rec.ring;
    let w = l as usize;
    let mut data: Vec<(u32, u32)> = Vec::new();
    data.extend(TruncPoly::one(ring).raw());
    let mut out = vec![(0, 0); w];
    let zero = vec![(0, 0); w];
    let (i0, j0, u) = projective_search(
        ring,
        w,
        2 * w,
        Some(l as u64),
        &mut data,
        budget,
        || bound_string(ring),
        |d, k| {
            // entry k+1 from entries k−1 and k at index k
            let cur = &d[k as usize * w..(k as usize + 1) * w];
            let prev = if k == 0 { &zero[..] } else { &d[(k as usize - 1) * w..k as usize * w] };
            rec.step_raw(prev, cur, k, &mut out);
            d.extend_from_slice(&out);
        },
    )?;
    // keep entries up to j0 + 1 so that every base index is stored
    let cyc = ScaledCycle::new(ring, w, data, i0, j0, u);
    let beta = cyc.least_period(|a, b| cyc.eq(a, b));
    let alpha = cyc.preperiod(beta, |a, b| cyc.eq(a, b));
    let ceq = |a: u64, b: u64| cyc.component(a, 0) == cyc.component(b, 0);
    let constant_period = cyc.least_period(ceq);
    let constant_preperiod = cyc.preperiod(constant_period, ceq);
    Ok(CycleAnalysis { spec: spec.clone(), rec, cyc, alpha, beta, constant_period, constant_preperiod })
}

pub fn detect_cycle(spec: &CMPointSpec, l: u32, budget: &Budget) -> Result<PeriodCertificate> {
    let start = Instant::now();
    let mut cert = analyze(spec, l, budget)?.certificate();
    cert.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    Ok(cert)
}

/// Runs the cycle detection and the constant-term scan.
pub fn certify_nonvanishing(spec: &CMPointSpec, l: u32, budget: &Budget) -> Result<PeriodCertificate> {
    detect_cycle(spec, l, budget)
}

/// Result of re-checking a certificate by direct recursion.
#[derive(Clone, Debug, Serialize)]
pub struct SoundnessReport {
    pub samples: usize,
    pub horizon: u64,
    pub failures: Vec<u64>,
}

impl SoundnessReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks q̄_{n+β} = q̄ₙ at random n ∈ [α, α+10β] by stepping the recursion
/// from the start, independently of the detection path. The sampling range
/// is capped so that at most `max_steps` steps are taken.
pub fn verify_certificate(
    spec: &CMPointSpec,
    cert: &PeriodCertificate,
    samples: usize,
    seed: u64,
    max_steps: u64,
) -> Result<SoundnessReport> {
    let rec = ModRecursion::for_spec(spec, cert.prime)?;
    let mut hi = cert.alpha + 10 * cert.beta;
    if hi + cert.beta > max_steps {
        hi = max_steps.saturating_sub(cert.beta).max(cert.alpha);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ns: Vec<u64> = (0..samples).map(|_| rng.gen_range(cert.alpha..=hi)).collect();
    ns.sort_unstable();
    let mut want: HashMap<u64, Option<Vec<(u32, u32)>>> = HashMap::new();
    for &n in &ns {
        want.insert(n, None);
        want.insert(n + cert.beta, None);
    }
    let last = ns.last().copied().unwrap_or(0) + cert.beta;
    let w = cert.prime as usize;
    let mut prev = vec![(0, 0); w];
    let mut cur = TruncPoly::one(rec.ring).raw().to_vec();
    let mut next = vec![(0, 0); w];
    for k in 0..=last {
        if let Some(slot) = want.get_mut(&k) {
            *slot = Some(cur.clone());
        }
        rec.step_raw(&prev, &cur, k, &mut next);
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    let failures = ns.iter().copied().filter(|n| want[n] != want[&(n + cert.beta)]).collect();
    Ok(SoundnessReport { samples, horizon: hi, failures })
}

/// The l-step map Ψ on (𝒪_K/l)[t]/(tˡ) and the constant-term functionals
/// c_r with q̄_{ml+r}(0) = ⟨c_r, Ψᵐ(1)⟩.
#[derive(Clone, Debug)]
pub struct PsiMap {
    pub ring: ResidueRing,
    /// Column j is Ψ(tʲ).
    pub columns: Vec<TruncPoly>,
    /// Ψ(X) = aX + bX′ when that form holds.
    pub compact: Option<(TruncPoly, TruncPoly)>,
    pub const_functionals: Vec<Vec<(u32, u32)>>,
}

impl PsiMap {
    pub fn apply(&self, v: &TruncPoly) -> TruncPoly {
        let mut out = vec![(0, 0); self.ring.l as usize];
        self.apply_raw(v.raw(), &mut out);
        TruncPoly::from_raw(self.ring, out)
    }

    fn apply_raw(&self, v: &[(u32, u32)], out: &mut [(u32, u32)]) {
        let ring = self.ring;
        let l = ring.l as u64;
        let d = ring.d();
        let mut acc = vec![(0u64, 0u64, 0u64); out.len()];
        for (j, &(va, vb)) in v.iter().enumerate() {
            if (va, vb) == (0, 0) {
                continue;
            }
            for (e, &(ca, cb)) in acc.iter_mut().zip(self.columns[j].raw()) {
                e.0 += va as u64 * ca as u64;
                e.1 += va as u64 * cb as u64 + vb as u64 * ca as u64;
                e.2 += vb as u64 * cb as u64;
            }
            if j % 64 == 63 {
                for e in acc.iter_mut() {
                    *e = (e.0 % l, e.1 % l, e.2 % l);
                }
            }
        }
        for (o, e) in out.iter_mut().zip(acc) {
            *o = (((e.0 + d * (e.2 % l)) % l) as u32, (e.1 % l) as u32);
        }
    }

    /// ⟨c_r, v⟩.
    pub fn constant_term(&self, r: usize, v: &TruncPoly) -> ResidueElt {
        self.constant_term_raw(r, v.raw())
    }

    fn constant_term_raw(&self, r: usize, v: &[(u32, u32)]) -> ResidueElt {
        let ring = self.ring;
        let mut s = ring.zero();
        for (&c, &x) in self.const_functionals[r].iter().zip(v) {
            let (a, b) = ring.mul_raw(c, x);
            s = s + ResidueElt::new(a, b, ring);
        }
        s
    }
}

/// Builds Ψ by pushing each basis vector through l recursion steps from an
/// index ≡ 0 mod l, where the n(n+11)a₄ term vanishes.
pub fn build_psi(spec: &CMPointSpec, l: u32) -> Result<PsiMap> {
    let rec = ModRecursion::for_spec(spec, l)?;
    Ok(psi_from_recursion(&rec))
}

pub fn psi_from_recursion(rec: &ModRecursion) -> PsiMap {
    let ring = rec.ring;
    let w = ring.l as usize;
    let mut columns = Vec::with_capacity(w);
    let mut const_functionals = vec![vec![(0, 0); w]; w];
    for j in 0..w {
        let mut prev = vec![(0, 0); w];
        let mut cur = vec![(0, 0); w];
        cur[j] = (1, 0);
        let mut next = vec![(0, 0); w];
        for r in 0..w {
            const_functionals[r][j] = cur[0];
            rec.step_raw(&prev, &cur, r as u64, &mut next);
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
        }
        columns.push(TruncPoly::from_raw(ring, cur));
    }
    let mut psi = PsiMap { ring, columns, compact: None, const_functionals };
    psi.compact = compact_form(&psi);
    psi
}

/// Finds a, b with Ψ(X) = aX + bX′ on every basis vector, if they exist.
fn compact_form(psi: &PsiMap) -> Option<(TruncPoly, TruncPoly)> {
    let ring = psi.ring;
    let a = psi.columns[0].clone();
    let w = ring.l as usize;
    let t = TruncPoly::monomial(ring.one(), 1);
    let at = a.trunc_mul(&t).ok()?;
    let neg_at = at.scale(ring.elt(-1, 0));
    let b = if w > 1 { psi.columns[1].add(&neg_at).ok()? } else { TruncPoly::zero(ring) };
    for j in 0..w {
        let x = TruncPoly::monomial(ring.one(), j);
        let want = a.trunc_mul(&x).ok()?.add(&b.trunc_mul(&x.trunc_derivative()).ok()?).ok()?;
        if want != psi.columns[j] {
            return None;
        }
    }
    Some((a, b))
}

/// Cycle structure of the orbit m ↦ Ψᵐ(1).
#[derive(Clone, Debug, Serialize)]
pub struct OrbitPeriod {
    pub preperiod: u64,
    pub period: u64,
    pub shortcut: Shortcut,
}

struct OrbitAnalysis {
    cyc: ScaledCycle,
    period: OrbitPeriod,
}

fn analyze_orbit(psi: &PsiMap, budget: &Budget) -> Result<OrbitAnalysis> {
    let ring = psi.ring;
    let w = ring.l as usize;
    let mut data: Vec<(u32, u32)> = TruncPoly::one(ring).raw().to_vec();
    let mut out = vec![(0, 0); w];
    let (i0, j0, u) = projective_search(
        ring,
        w,
        w,
        None,
        &mut data,
        budget,
        || format!("|O/l|^l = 10^{:.1}", (ring.size() as f64).log10() * ring.l as f64),
        |d, k| {
            let cur = d[k as usize * w..(k as usize + 1) * w].to_vec();
            psi.apply_raw(&cur, &mut out);
            d.extend_from_slice(&out);
        },
    )?;
    let cyc = ScaledCycle::new(ring, w, data, i0, j0, u);
    let period = cyc.least_period(|a, b| cyc.eq(a, b));
    let preperiod = cyc.preperiod(period, |a, b| cyc.eq(a, b));
    let period = OrbitPeriod { preperiod, period, shortcut: cyc.cut };
    Ok(OrbitAnalysis { cyc, period })
}

pub fn psi_orbit_period(psi: &PsiMap, budget: &Budget) -> Result<OrbitPeriod> {
    Ok(analyze_orbit(psi, budget)?.period)
}

/// Ψᵐ(1) for m = 0..count, by repeated application.
pub fn psi_orbit(psi: &PsiMap, count: usize) -> Vec<TruncPoly> {
    let mut v = TruncPoly::one(psi.ring);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let next = psi.apply(&v);
        out.push(std::mem::replace(&mut v, next));
    }
    out
}

/// Whether q̄ₙ(0) is eventually zero, decided on the Ψ orbit.
pub fn tends_to_zero(spec: &CMPointSpec, l: u32, budget: &Budget) -> Result<bool> {
    let psi = build_psi(spec, l)?;
    let orbit = analyze_orbit(&psi, budget)?;
    let cut = orbit.cyc.cut;
    let w = l as usize;
    Ok((cut.i0..cut.j0).all(|m| {
        let v = orbit.cyc.stored(m as usize);
        (0..w).all(|r| psi.constant_term_raw(r, v).is_zero())
    }))
}

/// Whether (ā₂(0), ā₄(0)) generates the whole residue ring.
pub fn ideal_condition(spec: &CMPointSpec, l: u32) -> Result<bool> {
    let rec = ModRecursion::for_spec(spec, l)?;
    let ring = rec.ring;
    let a2 = rec.coeff_poly(2).constant_term();
    let a4 = rec.coeff_poly(4).constant_term();
    Ok(match ring.field {
        FieldSpec::Rational => !a2.is_zero() || !a4.is_zero(),
        FieldSpec::Quad(_) => {
            // the ideal is the 𝔽_l-span of x, x√d, y, y√d inside 𝔽_l²
            let sqrt_d = ring.elt(0, 1);
            let gens = [a2, a2 * sqrt_d, a4, a4 * sqrt_d];
            let lm = ring.l as u64;
            gens.iter().enumerate().any(|(i, x)| {
                gens[i + 1..].iter().any(|y| {
                    let det = (x.a as u64 * y.b as u64 + lm * lm - x.b as u64 * y.a as u64 % lm) % lm;
                    det != 0
                })
            })
        }
    })
}

/// Outcome of the period-relation checks for one (D, l).
#[derive(Clone, Debug, Serialize)]
pub struct PeriodRelations {
    pub disc: i64,
    pub prime: u32,
    pub ideal_condition: bool,
    pub tends_to_zero: bool,
    pub hypotheses_met: bool,
    pub poly_period: u64,
    pub constant_period: u64,
    pub orbit_period: u64,
    pub poly_is_l_times_constant: bool,
    pub poly_is_l_times_orbit: bool,
}

pub fn period_relations_check(spec: &CMPointSpec, l: u32, budget: &Budget) -> Result<PeriodRelations> {
    let an = analyze(spec, l, budget)?;
    let psi = build_psi(spec, l)?;
    let orbit = psi_orbit_period(&psi, budget)?;
    let ideal = ideal_condition(spec, l)?;
    let ttz = an.tends_to_zero();
    let l64 = l as u64;
    Ok(PeriodRelations {
        disc: spec.disc,
        prime: l,
        ideal_condition: ideal,
        tends_to_zero: ttz,
        hypotheses_met: ideal && !ttz,
        poly_period: an.beta,
        constant_period: an.constant_period,
        orbit_period: orbit.period,
        poly_is_l_times_constant: an.beta == l64 * an.constant_period,
        poly_is_l_times_orbit: an.beta == l64 * orbit.period,
    })
}

/// Check of the statement that l ∤ β forces ā₂q̄ₙ → 0 and ā₄q̄ₙ → 0.
#[derive(Clone, Debug, Serialize)]
pub struct AnnihilationReport {
    pub applies: bool,
    pub a2_annihilates: bool,
    pub a4_annihilates: bool,
    pub ideal_condition: bool,
    pub tends_to_zero: bool,
    pub violation: bool,
}

pub fn annihilation_check(an: &CycleAnalysis) -> Result<AnnihilationReport> {
    let l = an.ring().l;
    let applies = !an.beta.is_multiple_of(l as u64);
    let ideal = ideal_condition(&an.spec, l)?;
    let ttz = an.tends_to_zero();
    let (a2, a4) = (an.rec.coeff_poly(2), an.rec.coeff_poly(4));
    let window = an.alpha..an.alpha + an.beta;
    let kills = |a: &TruncPoly| window.clone().all(|n| a.trunc_mul(&an.poly(n)).unwrap().is_zero());
    let (a2k, a4k) = if applies { (kills(&a2), kills(&a4)) } else { (false, false) };
    Ok(AnnihilationReport {
        applies,
        a2_annihilates: a2k,
        a4_annihilates: a4k,
        ideal_condition: ideal,
        tends_to_zero: ttz,
        violation: applies && (!a2k || !a4k || (ideal && !ttz)),
    })
}

/// The congruence-class description of when q̄ₙ(0) does not tend to zero.
pub fn class_rule(d: i64, l: u32) -> bool {
    let m = d.unsigned_abs() as u32;
    let r = l % m;
    match d {
        -4 => r == 1,
        -3 | -7 | -11 | -19 => legendre(r as i64, m) == 1,
        -8 => matches!(r, 1 | 3),
        -15 => matches!(r, 1 | 2 | 4 | 8),
        -20 => matches!(r, 1 | 3 | 7 | 9),
        -24 => matches!(r, 1 | 5 | 7 | 11),
        _ => false,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueRow {
    pub disc: i64,
    pub prime: u32,
    pub tends_to_zero: bool,
    pub legendre: i32,
    pub class_rule_nonzero: bool,
    pub agrees: bool,
}

/// Primes 3 < l ≤ lmax with l ∤ |D|, each checked against (D|l) and the class rule.
pub fn residue_criterion_scan(d: i64, lmax: u32, budget: &Budget) -> Result<Vec<ResidueRow>> {
    let spec = registry(d)?;
    let primes: Vec<u32> =
        (5..=lmax).filter(|&l| crate::exactalg::is_prime(l as u64) && !d.unsigned_abs().is_multiple_of(l as u64)).collect();
    primes
        .par_iter()
        .map(|&l| {
            let ttz = tends_to_zero(&spec, l, budget)?;
            let leg = legendre(d, l);
            let cls = class_rule(d, l);
            Ok(ResidueRow {
                disc: d,
                prime: l,
                tends_to_zero: ttz,
                legendre: leg,
                class_rule_nonzero: cls,
                agrees: (ttz == (leg != 1)) && (cls == !ttz),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: i64) -> CMPointSpec {
        registry(d).unwrap()
    }

    #[test]
    fn d4_mod5() {
        let an = analyze(&spec(-4), 5, &Budget::default()).unwrap();
        assert_eq!((an.alpha, an.beta, an.constant_period), (0, 20, 4));
        assert_eq!(an.certificate().verdict, Verdict::AllNonzero);
    }

    #[test]
    fn d4_mod7_tends_to_zero() {
        let c = certify_nonvanishing(&spec(-4), 7, &Budget::default()).unwrap();
        assert_eq!(c.verdict, Verdict::TendsToZero);
        assert!(tends_to_zero(&spec(-4), 7, &Budget::default()).unwrap());
        assert!(!tends_to_zero(&spec(-4), 5, &Budget::default()).unwrap());
    }

    #[test]
    fn small_moduli_vanish() {
        // l | |D|
        assert!(tends_to_zero(&spec(-7), 7, &Budget::default()).unwrap());
        assert!(tends_to_zero(&spec(-3), 3, &Budget::default()).unwrap());
    }

    #[test]
    fn d7_shortcut() {
        let an = analyze(&spec(-7), 23, &Budget::default()).unwrap();
        let s = an.shortcut();
        assert_eq!((s.i0, s.j0, s.unit.a, s.order), (12, 265, 8, 11));
        assert_eq!(an.beta, 2783);
    }

    #[test]
    fn budget_exceeded() {
        let b = Budget { max_steps: 50, deadline: None };
        assert!(matches!(analyze(&spec(-7), 23, &b), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn psi_d4_l5() {
        let psi = build_psi(&spec(-4), 5).unwrap();
        let ring = psi.ring;
        let (a, b) = psi.compact.clone().unwrap();
        assert_eq!(a, TruncPoly::from_pairs(ring, &[(0, 0), (2, 0)]));
        assert_eq!(b, TruncPoly::from_pairs(ring, &[(-6, 0), (0, 0), (6, 0)]));
    }

    #[test]
    fn identity_orbit() {
        let ring = ResidueRing::new(5, FieldSpec::Rational).unwrap();
        let columns = (0..5).map(|j| TruncPoly::monomial(ring.one(), j)).collect();
        let psi = PsiMap { ring, columns, compact: None, const_functionals: vec![vec![(0, 0); 5]; 5] };
        let o = psi_orbit_period(&psi, &Budget::default()).unwrap();
        assert_eq!((o.preperiod, o.period), (0, 1));
    }

    #[test]
    fn ideal_examples() {
        assert!(ideal_condition(&spec(-4), 5).unwrap());
        assert!(ideal_condition(&spec(-7), 23).unwrap());
        for d in [-11, -19, -24] {
            assert!(!ideal_condition(&spec(d), 5).unwrap(), "D={d}");
        }
    }
}

//! Exact recursion engines for 𝓑ₙ, pₙ, qₙ and the CM-point sequences
//! q_{n,𝔷}, plus their reductions modulo l.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cmdata::CMPointSpec;
use crate::exactalg::{FieldSpec, IntPoly, QuadElt, QuadPoly, QuadRat, ResidueRing, TruncPoly};
use crate::{Error, Result};

/// Polynomial in Q = E₄ and R = E₆, keyed by (power of R, power of Q).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QRPoly {
    pub terms: BTreeMap<(u32, u32), BigInt>,
}

impl QRPoly {
    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    /// c·RᵃQᵇ.
    pub fn monomial(c: i64, a: u32, b: u32) -> Self {
        let mut p = QRPoly::default();
        p.add_term(a, b, BigInt::from(c));
        p
    }

    fn add_term(&mut self, a: u32, b: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((a, b)).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn add(&self, o: &QRPoly) -> QRPoly {
        let mut r = self.clone();
        for (&(a, b), c) in &o.terms {
            r.add_term(a, b, c.clone());
        }
        r
    }

    pub fn scale(&self, k: &BigInt) -> QRPoly {
        let mut r = QRPoly::default();
        for (&(a, b), c) in &self.terms {
            r.add_term(a, b, c * k);
        }
        r
    }

    pub fn coeff(&self, a: u32, b: u32) -> BigInt {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True if every monomial RᵃQᵇ has 6a + 4b = k.
    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms.keys().all(|&(a, b)| 6 * a + 4 * b == k)
    }

    /// Evaluate at numeric values of R and Q.
    pub fn eval<T>(&self, r: T, q: T) -> T
    where
        T: Copy + std::ops::Mul<Output = T> + std::ops::Add<Output = T> + From<f64>,
    {
        let mut acc = T::from(0.0);
        for (&(a, b), c) in &self.terms {
            let mut m = T::from(crate::exactalg::big_to_f64(c));
            for _ in 0..a {
                m = m * r;
            }
            for _ in 0..b {
                m = m * q;
            }
            acc = acc + m;
        }
        acc
    }
}

impl fmt::Display for QRPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(a, b), c)| {
                let mut s = c.to_string();
                if a > 0 {
                    s += &format!("·R^{a}");
                }
                if b > 0 {
                    s += &format!("·Q^{b}");
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// 12ϑ applied to a weight-k polynomial in Q, R, where
/// ϑ = −(R/3)∂/∂Q − (Q²/2)∂/∂R. The factor 12 keeps coefficients integral.
pub fn theta_action(p: &QRPoly, k: u32) -> Result<QRPoly> {
    if !p.is_homogeneous(k) {
        return Err(Error::NonHomogeneous(k));
    }
    let mut r = QRPoly::default();
    for (&(a, b), c) in &p.terms {
        if b > 0 {
            // 12·(−R/3)·b Q^{b−1}
            r.add_term(a + 1, b - 1, c * BigInt::from(-4 * b as i64));
        }
        if a > 0 {
            // 12·(−Q²/2)·a R^{a−1}
            r.add_term(a - 1, b + 2, c * BigInt::from(-6 * a as i64));
        }
    }
    Ok(r)
}

/// Streams 𝓑₀, 𝓑₁, 𝓑₂, ...
#[derive(Clone, Debug)]
pub struct BSeq {
    prev: QRPoly,
    cur: QRPoly,
    n: u32,
}

impl BSeq {
    pub fn new() -> Self {
        BSeq { prev: QRPoly::default(), cur: QRPoly::one(), n: 0 }
    }
}

impl Default for BSeq {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for BSeq {
    type Item = QRPoly;
    fn next(&mut self) -> Option<QRPoly> {
        let out = self.cur.clone();
        let n = self.n;
        let next = if n == 0 {
            QRPoly::default()
        } else {
            let t = theta_action(&self.cur, 2 * n).expect("𝓑ₙ is homogeneous");
            let mut q_prev = QRPoly::default();
            for (&(a, b), c) in &self.prev.terms {
                q_prev.add_term(a, b + 1, c.clone());
            }
            t.add(&q_prev.scale(&BigInt::from(-(n as i64) * (n as i64 + 11))))
        };
        self.prev = std::mem::replace(&mut self.cur, next);
        self.n += 1;
        Some(out)
    }
}

pub fn bseq(n: u32) -> QRPoly {
    BSeq::new().nth(n as usize).unwrap()
}

/// Streams a three-term integer recursion
/// s_{n+1} = −2n tᵉ sₙ + c(tʰ − 1)s′ₙ − n(n+11)tᶠ s_{n−1}.
#[derive(Clone, Debug)]
pub struct IntSeq {
    prev: IntPoly,
    cur: IntPoly,
    n: u64,
    shape: (usize, i64, usize, usize),
}

impl IntSeq {
    /// pₙ: p_{n+1} = −2nt pₙ + 6(t²−1)p′ₙ − n(n+11)p_{n−1}.
    pub fn p() -> Self {
        IntSeq { prev: IntPoly::from_coeffs(vec![]), cur: IntPoly::constant(1), n: 0, shape: (1, 6, 2, 0) }
    }

    /// qₙ: q_{n+1} = −2nt² qₙ + 4(t³−1)q′ₙ − n(n+11)t q_{n−1}.
    pub fn q() -> Self {
        IntSeq { prev: IntPoly::from_coeffs(vec![]), cur: IntPoly::constant(1), n: 0, shape: (2, 4, 3, 1) }
    }
}

impl Iterator for IntSeq {
    type Item = IntPoly;
    fn next(&mut self) -> Option<IntPoly> {
        let out = self.cur.clone();
        let (e, c, h, f) = self.shape;
        let n = self.n as i64;
        let mut acc = Vec::new();
        IntPoly::axpy_shift(&mut acc, &self.cur, &BigInt::from(-2 * n), e);
        let d = self.cur.derivative();
        IntPoly::axpy_shift(&mut acc, &d, &BigInt::from(c), h);
        IntPoly::axpy_shift(&mut acc, &d, &BigInt::from(-c), 0);
        IntPoly::axpy_shift(&mut acc, &self.prev, &BigInt::from(-n * (n + 11)), f);
        let next = IntPoly::from_coeffs(acc);
        self.prev = std::mem::replace(&mut self.cur, next);
        self.n += 1;
        Some(out)
    }
}

pub fn pseq(n: u32) -> IntPoly {
    IntSeq::p().nth(n as usize).unwrap()
}

pub fn qseq_omega(n: u32) -> IntPoly {
    IntSeq::q().nth(n as usize).unwrap()
}

/// The four coefficient polynomials of a recursion
/// q_{n+1} = (a₁ + n a₂)qₙ + a₃q′ₙ + n(n+11)a₄q_{n−1}, q₀ = 1, q₁ = a₁.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionCoeffs {
    pub field: FieldSpec,
    pub a: [QuadPoly; 4],
}

impl RecursionCoeffs {
    fn from_ints(field: FieldSpec, a: [&[i64]; 4]) -> Self {
        let mk = |c: &[i64]| QuadPoly::from_coeffs(field, c.iter().map(|&x| QuadElt::int(x, field)).collect());
        RecursionCoeffs { field, a: [mk(a[0]), mk(a[1]), mk(a[2]), mk(a[3])] }
    }
}

/// Polynomials over K with rational coefficients; only used while building
/// recursion coefficients, which must come out integral.
#[derive(Clone, Debug)]
struct RatPoly(Vec<QuadRat>);

impl RatPoly {
    fn coeff(&self, i: usize, field: FieldSpec) -> QuadRat {
        self.0.get(i).cloned().unwrap_or_else(|| QuadRat::int(0, field))
    }

    fn add(&self, o: &RatPoly, field: FieldSpec) -> RatPoly {
        let n = self.0.len().max(o.0.len());
        RatPoly((0..n).map(|i| self.coeff(i, field).add(&o.coeff(i, field))).collect())
    }

    fn mul(&self, o: &RatPoly, field: FieldSpec) -> RatPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return RatPoly(vec![]);
        }
        let mut out = vec![QuadRat::int(0, field); self.0.len() + o.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            for (j, y) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        RatPoly(out)
    }

    fn scale(&self, c: &QuadRat) -> RatPoly {
        RatPoly(self.0.iter().map(|x| x.mul(c)).collect())
    }

    fn to_integral(&self, field: FieldSpec) -> Option<QuadPoly> {
        let c = self.0.iter().map(|x| x.to_integral()).collect::<Option<Vec<_>>>()?;
        Some(QuadPoly::from_coeffs(field, c))
    }
}

/// a₁(t)..a₄(t) for the CM point of `spec`.
pub fn cm_recursion_coeffs(spec: &CMPointSpec) -> Result<RecursionCoeffs> {
    let f = spec.field;
    match spec.disc {
        -4 => return Ok(RecursionCoeffs::from_ints(f, [&[], &[0, -2], &[-6, 0, 6], &[-1]])),
        -3 => return Ok(RecursionCoeffs::from_ints(f, [&[], &[0, 0, -2], &[-4, 0, 0, 4], &[0, -1]])),
        d if d < -4 => {}
        d => return Err(Error::UnknownDiscriminant(d)),
    }
    let r = |x: &QuadElt| x.to_rat();
    let n = QuadRat::int(spec.disc.abs(), f);
    let (k0, k2, k3, m1, m2) = (r(&spec.k0), r(&spec.k2), spec.k3.clone(), r(&spec.m1), r(&spec.m2));
    let k04 = k0.pow(4);
    let k08 = k0.pow(8);
    let u = RatPoly(vec![k3, QuadRat::int(1, f)]);
    let u2 = u.mul(&u, f);
    let c = |v: i64| QuadRat::int(v, f);

    let a1 = u.scale(&c(12).mul(&k04).mul(&k2).mul(&m1).mul(&n));
    let a2 = u.scale(&c(2).mul(&k04).mul(&k2).mul(&m1.sub(&m2)).mul(&n));
    let a3 = u2.scale(&k2.mul(&n)).add(&RatPoly(vec![c(0).sub(&k2.pow(4))]), f).scale(&c(6).mul(&k04).mul(&m2));
    let a4_const = c(0).sub(&k08.mul(&k2.pow(5)).mul(&m2).mul(&m2.sub(&c(6).mul(&m1))).mul(&n));
    let a4_quad = c(0).sub(&k08.mul(&k2.pow(2)).mul(&m1).mul(&c(4).mul(&m2).add(&m1)).mul(&n).mul(&n));
    let a4 = RatPoly(vec![a4_const]).add(&u2.scale(&a4_quad), f);

    let int = |p: RatPoly, name: &str| {
        p.to_integral(f).ok_or_else(|| Error::OutOfRange(format!("{name} not integral for D={}", spec.disc)))
    };
    Ok(RecursionCoeffs { field: f, a: [int(a1, "a1")?, int(a2, "a2")?, int(a3, "a3")?, int(a4, "a4")?] })
}

/// Streams the exact sequence of a three-term recursion over 𝒪_K[t].
#[derive(Clone, Debug)]
pub struct QuadSeq {
    coeffs: RecursionCoeffs,
    prev: QuadPoly,
    cur: QuadPoly,
    n: u64,
}

impl QuadSeq {
    pub fn new(coeffs: RecursionCoeffs) -> Self {
        let f = coeffs.field;
        QuadSeq { prev: QuadPoly::zero(f), cur: QuadPoly::constant(QuadElt::one(f)), n: 0, coeffs }
    }

    /// The next term from (q_{n−1}, qₙ) at index n.
    pub fn step(c: &RecursionCoeffs, prev: &QuadPoly, cur: &QuadPoly, n: u64) -> QuadPoly {
        let nb = BigInt::from(n);
        let lin = c.a[0].add(&c.a[1].scale_int(&nb));
        let mut next = lin.mul(cur).add(&c.a[2].mul(&cur.derivative()));
        if n > 0 {
            let k = BigInt::from(n) * BigInt::from(n + 11);
            next = next.add(&c.a[3].mul(prev).scale_int(&k));
        }
        next
    }
}

impl Iterator for QuadSeq {
    type Item = QuadPoly;
    fn next(&mut self) -> Option<QuadPoly> {
        let out = self.cur.clone();
        let next = Self::step(&self.coeffs, &self.prev, &self.cur, self.n);
        self.prev = std::mem::replace(&mut self.cur, next);
        self.n += 1;
        Some(out)
    }
}

pub fn cm_qseq_iter(spec: &CMPointSpec) -> Result<QuadSeq> {
    Ok(QuadSeq::new(cm_recursion_coeffs(spec)?))
}

pub fn cm_qseq(spec: &CMPointSpec, n: u32) -> Result<QuadPoly> {
    Ok(cm_qseq_iter(spec)?.nth(n as usize).unwrap())
}

/// Recursion coefficients of the auxiliary sequence with p₀ = 1, p₁ = 12m₁t.
pub fn general_coeffs(m1: &QuadElt, m2: &QuadElt) -> RecursionCoeffs {
    let f = m1.field;
    let i = |v: i64| QuadElt::int(v, f);
    let t = |c: QuadElt| QuadPoly::from_coeffs(f, vec![i(0), c]);
    let a1 = t(&i(12) * m1);
    let a2 = t(&i(2) * &(m1 - m2));
    let a3 = QuadPoly::from_coeffs(f, vec![&i(-6) * m2, i(0), &i(6) * m2]);
    let c0 = -&(m2 * &(m2 - &(&i(6) * m1)));
    let c2 = -&(&(&(&i(4) * m1) * m2) + &(m1 * m1));
    let a4 = QuadPoly::from_coeffs(f, vec![c0, i(0), c2]);
    RecursionCoeffs { field: f, a: [a1, a2, a3, a4] }
}

pub fn general_pseq(m1: &QuadElt, m2: &QuadElt, n: u32) -> QuadPoly {
    QuadSeq::new(general_coeffs(m1, m2)).nth(n as usize).unwrap()
}

/// Checks q_{n,𝔷}(t) = (k₀⁴k₂²√(k₂|D|))ⁿ pₙ((√(k₂|D|)/k₂²)(t+k₃)) as an exact
/// polynomial identity for n ≤ `n_max`, with pₙ from [`general_pseq`]. The
/// square root cancels because pₙ only has powers of parity n.
pub fn linkage_holds(spec: &CMPointSpec, n_max: u32) -> Result<bool> {
    let f = spec.field;
    let q_iter = cm_qseq_iter(spec)?;
    let p_iter = QuadSeq::new(general_coeffs(&spec.m1, &spec.m2));
    let k2 = spec.k2.to_rat();
    let s2 = k2.mul(&QuadRat::int(spec.disc.abs(), f));
    let k04 = spec.k0.to_rat().pow(4);
    let shift = RatPoly(vec![spec.k3.clone(), QuadRat::int(1, f)]);
    for (n, (q, p)) in q_iter.zip(p_iter).take(n_max as usize + 1).enumerate() {
        let n = n as u32;
        let mut acc = RatPoly(vec![]);
        let mut shift_pow = RatPoly(vec![QuadRat::int(1, f)]);
        for j in 0..=n {
            let c = p.coeff(j as usize);
            if !c.is_zero() {
                if (n + j) % 2 == 1 {
                    return Ok(false);
                }
                let scalar = c.to_rat().mul(&k04.pow(n)).mul(&k2.pow(2 * (n - j))).mul(&s2.pow((n + j) / 2));
                acc = acc.add(&shift_pow.scale(&scalar), f);
            }
            shift_pow = shift_pow.mul(&shift, f);
        }
        match acc.to_integral(f) {
            Some(poly) if poly == q => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// A recursion reduced modulo l, with every coefficient polynomial stored as a
/// short vector of residue pairs.
#[derive(Clone, Debug)]
pub struct ModRecursion {
    pub ring: ResidueRing,
    a: [Vec<(u32, u32)>; 4],
}

impl ModRecursion {
    pub fn new(c: &RecursionCoeffs, ring: ResidueRing) -> Self {
        let red = |p: &QuadPoly| -> Vec<(u32, u32)> {
            p.coeffs.iter().take(ring.l as usize).map(|x| x.reduce(ring).pair()).collect()
        };
        ModRecursion { ring, a: [red(&c.a[0]), red(&c.a[1]), red(&c.a[2]), red(&c.a[3])] }
    }

    pub fn for_spec(spec: &CMPointSpec, l: u32) -> Result<Self> {
        let ring = ResidueRing::new(l, spec.field)?;
        Ok(Self::new(&cm_recursion_coeffs(spec)?, ring))
    }

    /// āᵢ(t) as truncated polynomials (i = 1..4).
    pub fn coeff_poly(&self, i: usize) -> TruncPoly {
        let mut v = self.a[i - 1].clone();
        v.resize(self.ring.l as usize, (0, 0));
        TruncPoly::from_raw(self.ring, v)
    }

    /// Writes q̄_{n+1} into `out` given q̄_{n−1} = `prev` and q̄ₙ = `cur`.
    pub fn step_raw(&self, prev: &[(u32, u32)], cur: &[(u32, u32)], n: u64, out: &mut [(u32, u32)]) {
        let ring = self.ring;
        let l = ring.l as u64;
        let d = ring.d();
        let len = cur.len();
        let nm = n % l;
        let c4 = nm * ((n + 11) % l) % l;
        // rational part, cross part, √d-part; l < 2¹⁶ keeps every sum below 2⁶⁴
        let mut sa = vec![0u64; len];
        let mut sb = vec![0u64; len];
        let mut sd = vec![0u64; len];
        fn conv(
            acc: (&mut [u64], &mut [u64], &mut [u64]),
            x: (u64, u64),
            src: &[(u32, u32)],
            shift: usize,
            weight: impl Fn(usize) -> u64,
        ) {
            let (sa, sb, sd) = acc;
            let end = sa.len().min(shift + src.len());
            for k in shift..end {
                let (ca, cb) = src[k - shift];
                let w = weight(k - shift);
                let (ca, cb) = (ca as u64 * w, cb as u64 * w);
                sa[k] += x.0 * ca;
                sd[k] += x.1 * cb;
                sb[k] += x.0 * cb + x.1 * ca;
            }
        }
        let lin_len = self.a[0].len().max(self.a[1].len());
        for i in 0..lin_len {
            let x = self.a[0].get(i).copied().unwrap_or((0, 0));
            let y = self.a[1].get(i).copied().unwrap_or((0, 0));
            let e = ((x.0 as u64 + nm * y.0 as u64) % l, (x.1 as u64 + nm * y.1 as u64) % l);
            if e != (0, 0) {
                conv((&mut sa, &mut sb, &mut sd), e, cur, i, |_| 1);
            }
        }
        // a₃·q′: coefficient k of t^j·q′ is (k−j+1)·cur[k−j+1]
        for (j, &(xa, xb)) in self.a[2].iter().enumerate() {
            if (xa, xb) == (0, 0) || len < 2 {
                continue;
            }
            conv((&mut sa, &mut sb, &mut sd), (xa as u64, xb as u64), &cur[1..], j, |i| (i + 1) as u64);
        }
        if c4 != 0 {
            for (j, &(xa, xb)) in self.a[3].iter().enumerate() {
                let x = (xa as u64 * c4 % l, xb as u64 * c4 % l);
                if x != (0, 0) {
                    conv((&mut sa, &mut sb, &mut sd), x, prev, j, |_| 1);
                }
            }
        }
        for k in 0..len {
            out[k] = (((sa[k] + d * sd[k]) % l) as u32, (sb[k] % l) as u32);
        }
    }

    pub fn step(&self, prev: &TruncPoly, cur: &TruncPoly, n: u64) -> TruncPoly {
        let mut out = vec![(0, 0); self.ring.l as usize];
        self.step_raw(prev.raw(), cur.raw(), n, &mut out);
        TruncPoly::from_raw(self.ring, out)
    }

    pub fn iter(&self) -> ModSeq<'_> {
        ModSeq { rec: self, prev: TruncPoly::zero(self.ring), cur: TruncPoly::one(self.ring), n: 0 }
    }
}

/// Streams q̄₀, q̄₁, ... in the truncated ring.
pub struct ModSeq<'a> {
    rec: &'a ModRecursion,
    prev: TruncPoly,
    cur: TruncPoly,
    n: u64,
}

impl Iterator for ModSeq<'_> {
    type Item = TruncPoly;
    fn next(&mut self) -> Option<TruncPoly> {
        let next = self.rec.step(&self.prev, &self.cur, self.n);
        let out = std::mem::replace(&mut self.cur, next);
        self.prev = out.clone();
        self.n += 1;
        Some(out)
    }
}

/// q̄₀, ..., q̄_{n_max} for the CM point of `spec` modulo l.
pub fn cm_qseq_mod(spec: &CMPointSpec, l: u32, n_max: u64) -> Result<Vec<TruncPoly>> {
    let rec = ModRecursion::for_spec(spec, l)?;
    Ok(rec.iter().take(n_max as usize + 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmdata::registry;

    #[test]
    fn theta_examples() {
        let delta_dir = QRPoly::monomial(1, 0, 3).add(&QRPoly::monomial(-1, 2, 0));
        assert!(theta_action(&delta_dir, 12).unwrap().is_zero());
        assert!(theta_action(&QRPoly::one(), 0).unwrap().is_zero());
        assert_eq!(theta_action(&QRPoly::monomial(1, 0, 1), 4).unwrap(), QRPoly::monomial(-4, 1, 0));
        assert!(theta_action(&QRPoly::monomial(1, 0, 1), 6).is_err());
    }

    #[test]
    fn first_b_polys() {
        let b: Vec<QRPoly> = BSeq::new().take(7).collect();
        assert_eq!(b[0], QRPoly::one());
        assert!(b[1].is_zero());
        assert_eq!(b[2], QRPoly::monomial(-12, 0, 1));
        assert_eq!(b[3], QRPoly::monomial(48, 1, 0));
        assert_eq!(b[4], QRPoly::monomial(216, 0, 2));
        assert_eq!(b[5], QRPoly::monomial(-4608, 1, 1));
        assert_eq!(b[6], QRPoly::monomial(1152 * 9, 0, 3).add(&QRPoly::monomial(1152 * 16, 2, 0)));
    }

    #[test]
    fn p2_is_constant() {
        assert_eq!(pseq(2), IntPoly::constant(-12));
        assert_eq!(pseq(3), IntPoly::from_coeffs(vec![0.into(), 48.into()]));
    }

    #[test]
    fn d7_coefficients() {
        let spec = registry(-7).unwrap();
        let c = cm_recursion_coeffs(&spec).unwrap();
        assert_eq!(c.a[0].to_i64_pairs().unwrap(), vec![(170100, 0), (6300, 0)]);
        // a₂ = 105(−32)(t+27), a₃ = 126(105(t+27)² − 15⁴)
        assert_eq!(c.a[1].to_i64_pairs().unwrap(), vec![(-105 * 32 * 27, 0), (-105 * 32, 0)]);
        let a3 = c.a[2].to_i64_pairs().unwrap();
        assert_eq!(a3, vec![(126 * (105 * 729 - 50625), 0), (126 * 105 * 54, 0), (126 * 105, 0)]);
        // a₄ from the general formula: 15⁴·19845 − 4906125(t+27)²
        let a4 = c.a[3].to_i64_pairs().unwrap();
        let q = 4_906_125i64;
        assert_eq!(a4, vec![(50625 * 19845 - q * 729, 0), (-q * 54, 0), (-q, 0)]);
    }

    #[test]
    fn q_one_is_a_one() {
        let spec = registry(-7).unwrap();
        let c = cm_recursion_coeffs(&spec).unwrap();
        assert_eq!(cm_qseq(&spec, 1).unwrap(), c.a[0]);
        assert_eq!(cm_qseq(&spec, 0).unwrap(), QuadPoly::constant(QuadElt::one(spec.field)));
    }

    #[test]
    fn d4_and_d3_match_integer_sequences() {
        let s4 = registry(-4).unwrap();
        let s3 = registry(-3).unwrap();
        for (n, (a, b)) in cm_qseq_iter(&s4).unwrap().zip(IntSeq::p()).take(25).enumerate() {
            assert_eq!(a, b.to_quad(s4.field), "n={n}");
        }
        for (a, b) in cm_qseq_iter(&s3).unwrap().zip(IntSeq::q()).take(25) {
            assert_eq!(a, b.to_quad(s3.field));
        }
    }

    #[test]
    fn general_p1() {
        let f = FieldSpec::Rational;
        let p1 = general_pseq(&QuadElt::int(5, f), &QuadElt::int(21, f), 1);
        assert_eq!(p1.to_i64_pairs().unwrap(), vec![(0, 0), (60, 0)]);
    }

    #[test]
    fn d8_reduced_example() {
        let spec = registry(-8).unwrap();
        let seq = cm_qseq_mod(&spec, 17, 550).unwrap();
        let r = seq[0].ring;
        let expect = TruncPoly::from_pairs(r, &[(6, 0), (11, 0), (9, 0)]);
        assert_eq!(seq[550], expect);
        assert_eq!(seq[278].scale(r.elt(2, 0)), expect);
    }
}

//! Exact arithmetic in ℤ[√d], its residue rings modulo an odd prime l,
//! and the truncated polynomial rings (𝒪_K/l)[t]/(tˡ).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::Error;

/// The base field: ℚ or ℚ(√d) with d squarefree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FieldSpec {
    Rational,
    Quad(u32),
}

impl FieldSpec {
    /// The radicand, or `None` for ℚ.
    pub fn radicand(self) -> Option<u32> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Quad(d) => Some(d),
        }
    }

    fn d_big(self) -> BigInt {
        BigInt::from(self.radicand().unwrap_or(0))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Quad(d) => write!(f, "Q(sqrt{d})"),
        }
    }
}

/// a + b√d with integer a, b.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElt {
    pub a: BigInt,
    pub b: BigInt,
    pub field: FieldSpec,
}

impl QuadElt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, field: FieldSpec) -> Self {
        let b = b.into();
        debug_assert!(field != FieldSpec::Rational || b.is_zero());
        QuadElt { a: a.into(), b, field }
    }

    pub fn int(a: impl Into<BigInt>, field: FieldSpec) -> Self {
        QuadElt { a: a.into(), b: BigInt::zero(), field }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Self::int(0, field)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::int(1, field)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn checked_add(&self, o: &QuadElt) -> Result<QuadElt, Error> {
        same_field(self.field, o.field)?;
        Ok(QuadElt { a: &self.a + &o.a, b: &self.b + &o.b, field: self.field })
    }

    pub fn checked_mul(&self, o: &QuadElt) -> Result<QuadElt, Error> {
        same_field(self.field, o.field)?;
        let d = self.field.d_big();
        Ok(QuadElt { a: &self.a * &o.a + d * &self.b * &o.b, b: &self.a * &o.b + &self.b * &o.a, field: self.field })
    }

    pub fn scale(&self, k: &BigInt) -> QuadElt {
        QuadElt { a: &self.a * k, b: &self.b * k, field: self.field }
    }

    pub fn pow(&self, e: u32) -> QuadElt {
        let mut r = QuadElt::one(self.field);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Reduction modulo l.
    pub fn reduce(&self, ring: ResidueRing) -> ResidueElt {
        assert_eq!(self.field, ring.field, "field mismatch in reduction");
        ResidueElt::new(mod_big(&self.a, ring.l), mod_big(&self.b, ring.l), ring)
    }

    /// Numerical value, √d taken positive.
    pub fn to_f64(&self) -> f64 {
        let s = self.field.radicand().map(|d| (d as f64).sqrt()).unwrap_or(0.0);
        big_to_f64(&self.a) + big_to_f64(&self.b) * s
    }

    pub fn to_rat(&self) -> QuadRat {
        QuadRat {
            a: BigRational::from_integer(self.a.clone()),
            b: BigRational::from_integer(self.b.clone()),
            field: self.field,
        }
    }
}

fn same_field(x: FieldSpec, y: FieldSpec) -> Result<(), Error> {
    if x == y {
        Ok(())
    } else {
        Err(Error::FieldMismatch(x, y))
    }
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn mod_big(x: &BigInt, l: u32) -> u32 {
    x.mod_floor(&BigInt::from(l)).to_u32().unwrap()
}

impl Add for &QuadElt {
    type Output = QuadElt;
    fn add(self, o: &QuadElt) -> QuadElt {
        self.checked_add(o).expect("field mismatch")
    }
}

impl Sub for &QuadElt {
    type Output = QuadElt;
    fn sub(self, o: &QuadElt) -> QuadElt {
        self.checked_add(&-o).expect("field mismatch")
    }
}

impl Mul for &QuadElt {
    type Output = QuadElt;
    fn mul(self, o: &QuadElt) -> QuadElt {
        self.checked_mul(o).expect("field mismatch")
    }
}

impl Neg for &QuadElt {
    type Output = QuadElt;
    fn neg(self) -> QuadElt {
        QuadElt { a: -&self.a, b: -&self.b, field: self.field }
    }
}

impl fmt::Display for QuadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            FieldSpec::Rational => write!(f, "{}", self.a),
            FieldSpec::Quad(d) => write!(f, "{}{:+}√{}", self.a, self.b, d),
        }
    }
}

/// a + b√d with rational a, b. Used for constants such as 42 + 63/√5.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadRat {
    pub a: BigRational,
    pub b: BigRational,
    pub field: FieldSpec,
}

impl QuadRat {
    pub fn new(a: BigRational, b: BigRational, field: FieldSpec) -> Self {
        QuadRat { a, b, field }
    }

    pub fn int(a: i64, field: FieldSpec) -> Self {
        QuadRat { a: BigRational::from_integer(a.into()), b: BigRational::zero(), field }
    }

    pub fn add(&self, o: &QuadRat) -> QuadRat {
        assert_eq!(self.field, o.field);
        QuadRat { a: &self.a + &o.a, b: &self.b + &o.b, field: self.field }
    }

    pub fn sub(&self, o: &QuadRat) -> QuadRat {
        assert_eq!(self.field, o.field);
        QuadRat { a: &self.a - &o.a, b: &self.b - &o.b, field: self.field }
    }

    pub fn mul(&self, o: &QuadRat) -> QuadRat {
        assert_eq!(self.field, o.field);
        let d = BigRational::from_integer(self.field.d_big());
        QuadRat { a: &self.a * &o.a + d * &self.b * &o.b, b: &self.a * &o.b + &self.b * &o.a, field: self.field }
    }

    pub fn pow(&self, e: u32) -> QuadRat {
        let mut r = QuadRat::int(1, self.field);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Converts to an integral element, or `None` if a denominator remains.
    pub fn to_integral(&self) -> Option<QuadElt> {
        self.is_integral().then(|| QuadElt { a: self.a.to_integer(), b: self.b.to_integer(), field: self.field })
    }

    pub fn to_f64(&self) -> f64 {
        let s = self.field.radicand().map(|d| (d as f64).sqrt()).unwrap_or(0.0);
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * s
    }
}

fn rat_to_f64(x: &BigRational) -> f64 {
    big_to_f64(x.numer()) / big_to_f64(x.denom())
}

/// The residue ring 𝒪_K/l𝒪_K, modelled as (ℤ/l)[√d].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    pub l: u32,
    pub field: FieldSpec,
}

impl ResidueRing {
    pub fn new(l: u32, field: FieldSpec) -> Result<Self, Error> {
        if l == 2 || l >= 1 << 16 || !is_prime(l as u64) {
            return Err(Error::BadModulus(l));
        }
        Ok(ResidueRing { l, field })
    }

    #[inline]
    pub fn d(self) -> u64 {
        self.field.radicand().unwrap_or(0) as u64
    }

    pub fn elt(self, a: i64, b: i64) -> ResidueElt {
        let l = self.l as i64;
        ResidueElt::new(a.rem_euclid(l) as u32, b.rem_euclid(l) as u32, self)
    }

    pub fn zero(self) -> ResidueElt {
        ResidueElt::new(0, 0, self)
    }

    pub fn one(self) -> ResidueElt {
        ResidueElt::new(1, 0, self)
    }

    /// Order of the unit group.
    pub fn unit_group_order(self) -> u64 {
        let l = self.l as u64;
        match self.field {
            FieldSpec::Rational => l - 1,
            FieldSpec::Quad(d) => {
                if (d as u64).is_multiple_of(l) {
                    l * (l - 1)
                } else if legendre(d as i64, self.l) == 1 {
                    (l - 1) * (l - 1)
                } else {
                    l * l - 1
                }
            }
        }
    }

    /// Number of elements: l for ℚ, l² otherwise.
    pub fn size(self) -> u64 {
        match self.field {
            FieldSpec::Rational => self.l as u64,
            FieldSpec::Quad(_) => (self.l as u64).pow(2),
        }
    }

    /// Every element of the ring, in (a, b) lexicographic order.
    pub fn elements(self) -> Vec<ResidueElt> {
        let bmax = if self.field == FieldSpec::Rational { 1 } else { self.l };
        (0..self.l).flat_map(|a| (0..bmax).map(move |b| ResidueElt::new(a, b, self))).collect()
    }

    #[inline]
    pub(crate) fn mul_raw(self, x: (u32, u32), y: (u32, u32)) -> (u32, u32) {
        let l = self.l as u64;
        let (a1, b1, a2, b2) = (x.0 as u64, x.1 as u64, y.0 as u64, y.1 as u64);
        (((a1 * a2 + self.d() * ((b1 * b2) % l)) % l) as u32, ((a1 * b2 + a2 * b1) % l) as u32)
    }
}

/// An element a + b√d of (ℤ/l)[√d].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueElt {
    pub a: u32,
    pub b: u32,
    pub ring: ResidueRing,
}

impl ResidueElt {
    pub fn new(a: u32, b: u32, ring: ResidueRing) -> Self {
        debug_assert!(a < ring.l && b < ring.l);
        debug_assert!(ring.field != FieldSpec::Rational || b == 0);
        ResidueElt { a, b, ring }
    }

    #[inline]
    pub fn pair(self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_one(self) -> bool {
        self.a == 1 && self.b == 0
    }

    /// a² − d b² mod l.
    pub fn norm(self) -> u32 {
        let l = self.ring.l as u64;
        let a2 = (self.a as u64 * self.a as u64) % l;
        let b2 = (self.ring.d() * ((self.b as u64 * self.b as u64) % l)) % l;
        ((a2 + l - b2) % l) as u32
    }

    pub fn is_unit(self) -> bool {
        self.norm() != 0
    }

    /// Multiplicative inverse, if `self` is a unit.
    pub fn invert(self) -> Result<ResidueElt, Error> {
        let n = self.norm();
        if n == 0 {
            return Err(Error::NonUnit(self.to_string()));
        }
        let l = self.ring.l;
        let ni = inv_mod(n, l);
        let a = (self.a as u64 * ni as u64 % l as u64) as u32;
        let b = ((l - self.b) % l) as u64 * ni as u64 % l as u64;
        Ok(ResidueElt::new(a, b as u32, self.ring))
    }

    pub fn pow(self, mut e: u64) -> ResidueElt {
        let mut base = self;
        let mut r = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                r = r * base;
            }
            base = base * base;
            e >>= 1;
        }
        r
    }

    /// Least e ≥ 1 with selfᵉ = 1.
    pub fn mult_order(self) -> Result<u64, Error> {
        if !self.is_unit() {
            return Err(Error::NonUnit(self.to_string()));
        }
        let n = self.ring.unit_group_order();
        debug_assert!(self.pow(n).is_one());
        let mut e = n;
        for (p, _) in factorize(n) {
            while e.is_multiple_of(p) && self.pow(e / p).is_one() {
                e /= p;
            }
        }
        Ok(e)
    }
}

impl Add for ResidueElt {
    type Output = ResidueElt;
    fn add(self, o: ResidueElt) -> ResidueElt {
        debug_assert_eq!(self.ring, o.ring);
        let l = self.ring.l;
        ResidueElt::new((self.a + o.a) % l, (self.b + o.b) % l, self.ring)
    }
}

impl Sub for ResidueElt {
    type Output = ResidueElt;
    fn sub(self, o: ResidueElt) -> ResidueElt {
        self + (-o)
    }
}

impl Neg for ResidueElt {
    type Output = ResidueElt;
    fn neg(self) -> ResidueElt {
        let l = self.ring.l;
        ResidueElt::new((l - self.a) % l, (l - self.b) % l, self.ring)
    }
}

impl Mul for ResidueElt {
    type Output = ResidueElt;
    fn mul(self, o: ResidueElt) -> ResidueElt {
        debug_assert_eq!(self.ring, o.ring);
        let (a, b) = self.ring.mul_raw(self.pair(), o.pair());
        ResidueElt::new(a, b, self.ring)
    }
}

impl fmt::Display for ResidueElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ring.field {
            FieldSpec::Rational => write!(f, "{} mod {}", self.a, self.ring.l),
            FieldSpec::Quad(d) => write!(f, "{}+{}√{} mod {}", self.a, self.b, d, self.ring.l),
        }
    }
}

/// An element of (𝒪_K/l)[t]/(tˡ): exactly l coefficients, index i holding tⁱ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    pub ring: ResidueRing,
    coeffs: Vec<(u32, u32)>,
}

impl TruncPoly {
    pub fn zero(ring: ResidueRing) -> Self {
        TruncPoly { ring, coeffs: vec![(0, 0); ring.l as usize] }
    }

    pub fn one(ring: ResidueRing) -> Self {
        Self::monomial(ring.one(), 0)
    }

    /// c·tᵏ, or zero if k ≥ l.
    pub fn monomial(c: ResidueElt, k: usize) -> Self {
        let mut p = Self::zero(c.ring);
        if k < p.coeffs.len() {
            p.coeffs[k] = c.pair();
        }
        p
    }

    /// Builds from small signed integer pairs (a_i, b_i), dropping degrees ≥ l.
    pub fn from_pairs(ring: ResidueRing, pairs: &[(i64, i64)]) -> Self {
        let mut p = Self::zero(ring);
        for (i, &(a, b)) in pairs.iter().enumerate().take(ring.l as usize) {
            p.coeffs[i] = ring.elt(a, b).pair();
        }
        p
    }

    pub(crate) fn from_raw(ring: ResidueRing, coeffs: Vec<(u32, u32)>) -> Self {
        debug_assert_eq!(coeffs.len(), ring.l as usize);
        TruncPoly { ring, coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> ResidueElt {
        let (a, b) = self.coeffs[i];
        ResidueElt::new(a, b, self.ring)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = ResidueElt> + '_ {
        self.coeffs.iter().map(move |&(a, b)| ResidueElt::new(a, b, self.ring))
    }

    pub(crate) fn raw(&self) -> &[(u32, u32)] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> ResidueElt {
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == (0, 0))
    }

    fn check(&self, o: &TruncPoly) -> Result<(), Error> {
        if self.ring != o.ring {
            return Err(Error::ModulusMismatch(self.ring.l, o.ring.l));
        }
        Ok(())
    }

    pub fn add(&self, o: &TruncPoly) -> Result<TruncPoly, Error> {
        self.check(o)?;
        let l = self.ring.l;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| ((x.0 + y.0) % l, (x.1 + y.1) % l)).collect();
        Ok(TruncPoly { ring: self.ring, coeffs })
    }

    pub fn scale(&self, c: ResidueElt) -> TruncPoly {
        let coeffs = self.coeffs.iter().map(|&x| self.ring.mul_raw(x, c.pair())).collect();
        TruncPoly { ring: self.ring, coeffs }
    }

    /// Product in the truncated ring; all degrees ≥ l are discarded.
    pub fn trunc_mul(&self, o: &TruncPoly) -> Result<TruncPoly, Error> {
        self.check(o)?;
        let n = self.coeffs.len();
        let l = self.ring.l as u64;
        let d = self.ring.d();
        let mut acc = vec![(0u64, 0u64); n];
        for (i, &(a1, b1)) in self.coeffs.iter().enumerate() {
            if (a1, b1) == (0, 0) {
                continue;
            }
            for (j, &(a2, b2)) in o.coeffs[..n - i].iter().enumerate() {
                let e = &mut acc[i + j];
                e.0 = (e.0 + a1 as u64 * a2 as u64 + d * ((b1 as u64 * b2 as u64) % l)) % l;
                e.1 = (e.1 + a1 as u64 * b2 as u64 + a2 as u64 * b1 as u64) % l;
            }
        }
        let coeffs = acc.into_iter().map(|(a, b)| (a as u32, b as u32)).collect();
        Ok(TruncPoly { ring: self.ring, coeffs })
    }

    /// Formal derivative; the top coefficient of the result is always 0.
    pub fn trunc_derivative(&self) -> TruncPoly {
        let n = self.coeffs.len();
        let l = self.ring.l as u64;
        let mut coeffs = vec![(0, 0); n];
        for i in 1..n {
            let (a, b) = self.coeffs[i];
            coeffs[i - 1] = ((a as u64 * i as u64 % l) as u32, (b as u64 * i as u64 % l) as u32);
        }
        TruncPoly { ring: self.ring, coeffs }
    }

    /// Index of the first coefficient that is a unit, if any.
    pub fn first_unit(&self) -> Option<usize> {
        self.coeffs().position(|c| c.is_unit())
    }

    pub fn to_pairs(&self) -> Vec<(u32, u32)> {
        self.coeffs.clone()
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = match self.ring.field {
                FieldSpec::Rational => format!("{}", c.a),
                FieldSpec::Quad(_) if c.b == 0 => format!("{}", c.a),
                FieldSpec::Quad(d) => format!("({}+{}√{})", c.a, c.b, d),
            };
            match i {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}t")?,
                _ => write!(f, "{cs}t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Polynomial in t with ℤ[√d] coefficients; index i holds tⁱ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadPoly {
    pub field: FieldSpec,
    pub coeffs: Vec<QuadElt>,
}

impl QuadPoly {
    pub fn zero(field: FieldSpec) -> Self {
        QuadPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(c: QuadElt) -> Self {
        let field = c.field;
        QuadPoly { field, coeffs: vec![c] }.trimmed()
    }

    pub fn from_coeffs(field: FieldSpec, coeffs: Vec<QuadElt>) -> Self {
        QuadPoly { field, coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> QuadElt {
        self.coeffs.get(i).cloned().unwrap_or_else(|| QuadElt::zero(self.field))
    }

    pub fn eval_zero(&self) -> QuadElt {
        self.coeff(0)
    }

    pub fn add(&self, o: &QuadPoly) -> QuadPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect();
        QuadPoly::from_coeffs(self.field, coeffs)
    }

    pub fn mul(&self, o: &QuadPoly) -> QuadPoly {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return QuadPoly::zero(self.field);
        }
        let mut out = vec![QuadElt::zero(self.field); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        QuadPoly::from_coeffs(self.field, out)
    }

    pub fn scale(&self, c: &QuadElt) -> QuadPoly {
        QuadPoly::from_coeffs(self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn scale_int(&self, k: &BigInt) -> QuadPoly {
        QuadPoly::from_coeffs(self.field, self.coeffs.iter().map(|x| x.scale(k)).collect())
    }

    pub fn derivative(&self) -> QuadPoly {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale(&BigInt::from(i))).collect();
        QuadPoly::from_coeffs(self.field, coeffs)
    }

    pub fn reduce(&self, ring: ResidueRing) -> TruncPoly {
        let mut p = TruncPoly::zero(ring);
        for (i, c) in self.coeffs.iter().enumerate().take(ring.l as usize) {
            p.coeffs[i] = c.reduce(ring).pair();
        }
        p
    }

    /// Coefficients as (a, b) pairs of machine integers, if they fit.
    pub fn to_i64_pairs(&self) -> Option<Vec<(i64, i64)>> {
        self.coeffs.iter().map(|c| Some((c.a.to_i64()?, c.b.to_i64()?))).collect()
    }
}

impl fmt::Display for QuadPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Polynomial in t with integer coefficients; index i holds tⁱ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    pub coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![BigInt::from(c)])
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn eval_zero(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> IntPoly {
        Self::from_coeffs(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// self·c·tˢ added into `acc`.
    pub(crate) fn axpy_shift(acc: &mut Vec<BigInt>, p: &IntPoly, c: &BigInt, s: usize) {
        if acc.len() < p.coeffs.len() + s {
            acc.resize(p.coeffs.len() + s, BigInt::zero());
        }
        for (i, x) in p.coeffs.iter().enumerate() {
            acc[i + s] += x * c;
        }
    }

    pub fn to_quad(&self, field: FieldSpec) -> QuadPoly {
        QuadPoly::from_coeffs(field, self.coeffs.iter().map(|c| QuadElt::int(c.clone(), field)).collect())
    }

    pub fn reduce(&self, ring: ResidueRing) -> TruncPoly {
        self.to_quad(ring.field).reduce(ring)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}t"),
                _ => format!("{c}t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Trial-division factorization into (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn inv_mod(x: u32, l: u32) -> u32 {
    let eg = (x as i64).extended_gcd(&(l as i64));
    debug_assert_eq!(eg.gcd, 1);
    eg.x.rem_euclid(l as i64) as u32
}

/// Legendre symbol (a|l) for an odd prime l.
pub fn legendre(a: i64, l: u32) -> i32 {
    let r = a.rem_euclid(l as i64) as u64;
    if r == 0 {
        return 0;
    }
    let mut e = (l as u64 - 1) / 2;
    let (mut base, mut acc) = (r, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % l as u64;
        }
        base = base * base % l as u64;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol (D|n) for a discriminant D and n ≥ 1.
pub fn kronecker(d: i64, mut n: u64) -> i32 {
    let mut result = 1;
    while n.is_multiple_of(2) {
        n /= 2;
        if d % 2 == 0 {
            return 0;
        }
        if matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    for (p, e) in factorize(n) {
        let s = legendre(d, p as u32);
        if e % 2 == 1 {
            result *= s;
        } else if s == 0 {
            return 0;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5(a: i64, b: i64) -> QuadElt {
        QuadElt::new(a, b, FieldSpec::Quad(5))
    }

    #[test]
    fn quad_products() {
        assert_eq!(&q5(13, 30) * &q5(70, 21), q5(4060, 2373));
        let r2 = QuadElt::new(0, 1, FieldSpec::Quad(2));
        assert_eq!(&r2 * &r2, QuadElt::new(2, 0, FieldSpec::Quad(2)));
        assert_eq!(&q5(1, 0) * &q5(1, 0), q5(1, 0));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let x = QuadElt::new(1, 1, FieldSpec::Quad(2));
        assert!(matches!(x.checked_mul(&q5(1, 1)), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn truncated_product_mod_5() {
        let r = ResidueRing::new(5, FieldSpec::Rational).unwrap();
        let p = TruncPoly::from_pairs(r, &[(3, 0), (3, 0)]);
        let q = TruncPoly::from_pairs(r, &[(1, 0), (2, 0)]);
        assert_eq!(p.trunc_mul(&q).unwrap(), TruncPoly::from_pairs(r, &[(3, 0), (4, 0), (1, 0)]));
        let top = TruncPoly::monomial(r.one(), 4);
        let t = TruncPoly::monomial(r.one(), 1);
        assert!(top.trunc_mul(&t).unwrap().is_zero());
    }

    #[test]
    fn derivative_mod_5() {
        let r = ResidueRing::new(5, FieldSpec::Rational).unwrap();
        let p = TruncPoly::from_pairs(r, &[(0, 0), (3, 0), (0, 0), (2, 0)]);
        assert_eq!(p.trunc_derivative(), TruncPoly::from_pairs(r, &[(3, 0), (0, 0), (1, 0)]));
        let top = TruncPoly::monomial(r.one(), 4);
        assert_eq!(top.trunc_derivative(), TruncPoly::monomial(r.elt(4, 0), 3));
    }

    #[test]
    fn orders() {
        let q = |l| ResidueRing::new(l, FieldSpec::Rational).unwrap();
        assert_eq!(q(23).elt(8, 0).mult_order().unwrap(), 11);
        assert_eq!(q(17).elt(2, 0).mult_order().unwrap(), 8);
        assert_eq!(q(17).one().mult_order().unwrap(), 1);
        let r = ResidueRing::new(17, FieldSpec::Quad(5)).unwrap();
        assert_eq!(r.elt(13, 10).mult_order().unwrap(), 144);
        let r = ResidueRing::new(83, FieldSpec::Quad(5)).unwrap();
        assert_eq!(r.elt(11, 57).mult_order().unwrap(), 3444);
    }

    #[test]
    fn inverses() {
        let r5 = ResidueRing::new(5, FieldSpec::Rational).unwrap();
        assert_eq!(r5.elt(2, 0).invert().unwrap(), r5.elt(3, 0));
        let r = ResidueRing::new(5, FieldSpec::Quad(5)).unwrap();
        assert!(r.elt(0, 1).invert().is_err());
        assert!(r.elt(0, 1).mult_order().is_err());
    }

    #[test]
    fn symbols() {
        assert_eq!(legendre(-7, 23), 1);
        assert_eq!(legendre(-19, 41), -1);
        assert_eq!(kronecker(-4, 1), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-8, 3), 1);
        assert_eq!(kronecker(-15, 2), 1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
    }

    #[test]
    fn even_modulus_rejected() {
        assert!(ResidueRing::new(2, FieldSpec::Rational).is_err());
        assert!(ResidueRing::new(9, FieldSpec::Rational).is_err());
    }
}

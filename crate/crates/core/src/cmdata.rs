//! CM-point constants for the nine discriminants and the derived
//! normalization data κ, λ and the Chowla–Selberg period Ω_D.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::exactalg::{kronecker, FieldSpec, QuadElt, QuadRat};
use crate::numerics::{self, SeriesContext};
use crate::recurrences::{cm_recursion_coeffs, RecursionCoeffs};
use crate::{Error, Result};

/// The discriminants covered by the registry.
pub const DISCRIMINANTS: [i64; 9] = [-3, -4, -7, -8, -11, -15, -19, -20, -24];

#[derive(Clone, Debug, PartialEq)]
pub struct CMPointSpec {
    pub disc: i64,
    pub field: FieldSpec,
    pub k0: QuadElt,
    pub k1: QuadElt,
    pub k2: QuadElt,
    pub k3: QuadRat,
    /// Zero for D = −3, −4, where the general recursion is not used.
    pub m1: QuadElt,
    pub m2: QuadElt,
    /// Class number as (numerator, denominator): 1/3, 1/2, 1 or 2.
    pub class_number: (u32, u32),
    /// Order N of the stabilizer modulo ±1.
    pub elliptic_order: u32,
}

impl CMPointSpec {
    /// 𝔷_D = √D/2 for even D, (1+√D)/2 for odd D.
    pub fn point(&self) -> Complex64 {
        let s = (self.disc.abs() as f64).sqrt();
        if self.disc % 2 == 0 {
            Complex64::new(0.0, s / 2.0)
        } else {
            Complex64::new(0.5, s / 2.0)
        }
    }

    pub fn recursion_coeffs(&self) -> Result<RecursionCoeffs> {
        cm_recursion_coeffs(self)
    }

    /// True for n with n ≡ −6 mod N, the only indices whose coefficient can be nonzero.
    pub fn is_nontrivial(&self, n: u64) -> bool {
        n.is_multiple_of(self.elliptic_order as u64)
    }

    pub fn class_number_f64(&self) -> f64 {
        self.class_number.0 as f64 / self.class_number.1 as f64
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The registry row for D.
pub fn registry(d: i64) -> Result<CMPointSpec> {
    let q = FieldSpec::Rational;
    let f5 = FieldSpec::Quad(5);
    let f2 = FieldSpec::Quad(2);
    let e = |a: i64, b: i64, f: FieldSpec| QuadElt::new(a, b, f);
    let row = |f: FieldSpec, k: [(i64, i64); 2], k3: QuadRat, m: [(i64, i64); 2], h: u32| CMPointSpec {
        disc: d,
        field: f,
        k0: QuadElt::one(f),
        k1: e(k[0].0, k[0].1, f),
        k2: e(k[1].0, k[1].1, f),
        k3,
        m1: e(m[0].0, m[0].1, f),
        m2: e(m[1].0, m[1].1, f),
        class_number: (h, 1),
        elliptic_order: 1,
    };
    let zero = [(0, 0), (0, 0)];
    let spec = match d {
        -3 => CMPointSpec {
            class_number: (1, 3),
            elliptic_order: 3,
            ..row(q, [(0, 0), (0, 0)], QuadRat::int(24, q), zero, 1)
        },
        -4 => CMPointSpec {
            class_number: (1, 2),
            elliptic_order: 2,
            ..row(q, [(0, 0), (12, 0)], QuadRat::int(0, q), zero, 1)
        },
        -7 => row(q, [(3, 0), (15, 0)], QuadRat::int(27, q), [(5, 0), (21, 0)], 1),
        -8 => row(q, [(4, 0), (20, 0)], QuadRat::int(28, q), [(5, 0), (14, 0)], 1),
        -11 => row(q, [(8, 0), (32, 0)], QuadRat::int(56, q), [(32, 0), (77, 0)], 1),
        -15 => row(f5, [(6, 3), (15, 12)], QuadRat::new(rat(42, 1), rat(63, 5), f5), [(30, 13), (70, 21)], 2),
        -19 => row(q, [(24, 0), (96, 0)], QuadRat::int(216, q), [(32, 0), (57, 0)], 1),
        -20 => row(f5, [(12, 4), (40, 12)], QuadRat::new(rat(72, 1), rat(112, 5), f5), [(45, 19), (90, 28)], 2),
        -24 => row(f2, [(12, 12), (60, 24)], QuadRat::new(rat(84, 1), rat(72, 1), f2), [(9, 7), (14, 12)], 2),
        _ => return Err(Error::UnknownDiscriminant(d)),
    };
    Ok(spec)
}

pub fn all_specs() -> Vec<CMPointSpec> {
    DISCRIMINANTS.iter().map(|&d| registry(d).unwrap()).collect()
}

/// Recomputes (m₁, m₂) from k₀²k₁k₂ and k₀²|D|k₃ by removing the common
/// integer factor. Returns the removed factor with the pair, or `None`
/// if either product is not integral.
pub fn derived_m(spec: &CMPointSpec) -> Option<(BigInt, QuadElt, QuadElt)> {
    let k02 = spec.k0.to_rat().pow(2);
    let x = k02.mul(&spec.k1.to_rat()).mul(&spec.k2.to_rat()).to_integral()?;
    let y = k02.mul(&QuadRat::int(spec.disc.abs(), spec.field)).mul(&spec.k3).to_integral()?;
    let g = [&x.a, &x.b, &y.a, &y.b].iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() {
        return None;
    }
    let div = |v: &QuadElt| QuadElt::new(&v.a / &g, &v.b / &g, v.field);
    Some((g.abs(), div(&x), div(&y)))
}

/// Lanczos approximation (g = 7, nine terms), about 15 significant digits.
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Ω_D = (2π|D|)^{−1/2} [∏_{j<|D|} Γ(j/|D|)^{(D|j)}]^{1/(2h)}.
pub fn chowla_selberg(d: i64) -> Result<f64> {
    let spec = registry(d)?;
    let n = d.unsigned_abs();
    let mut log_prod = 0.0;
    for j in 1..n {
        let chi = kronecker(d, j);
        if chi != 0 {
            log_prod += chi as f64 * gamma(j as f64 / n as f64).ln();
        }
    }
    let h = spec.class_number_f64();
    Ok((2.0 * PI * n as f64).powf(-0.5) * (log_prod / (2.0 * h)).exp())
}

/// κ, λ and Ω for a CM point: c_𝔷(Δ,m) = κ λᵐ q_m(0)/m!.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Normalization {
    pub kappa: Complex64,
    pub lambda: Complex64,
    pub omega: f64,
}

pub fn normalization(spec: &CMPointSpec, ctx: &SeriesContext) -> Result<Normalization> {
    let omega = chowla_selberg(spec.disc)?;
    let n3 = (spec.disc.abs() as f64).powi(3);
    let (delta, lambda) = match spec.disc {
        -4 => (Complex64::new(omega.powi(12), 0.0), -2.0 * PI * omega * omega / 3f64.sqrt()),
        -3 => (Complex64::new(-omega.powi(12), 0.0), -PI * omega * omega),
        _ => {
            let delta = numerics::eval_delta(spec.point(), ctx)?;
            let k04 = spec.k0.pow(4).to_f64();
            let k22 = spec.k2.pow(2).to_f64();
            (delta, -PI * omega * omega / (6.0 * k04 * k22 * spec.m2.to_f64()))
        }
    };
    Ok(Normalization { kappa: -n3 * delta, lambda: Complex64::new(lambda, 0.0), omega })
}

/// Numeric comparison of the table against the q-expansion evaluator.
#[derive(Clone, Debug, Serialize)]
pub struct TableCheck {
    pub disc: i64,
    pub e2star_err: f64,
    pub q_err: f64,
    pub r_err: f64,
    /// |E₂* − (m₁/m₂)R/Q| at the point; `None` for D = −3, −4.
    pub should_have_zero: Option<f64>,
}

impl TableCheck {
    pub fn max_err(&self) -> f64 {
        [self.e2star_err, self.q_err, self.r_err, self.should_have_zero.unwrap_or(0.0)].into_iter().fold(0.0, f64::max)
    }
}

pub fn check_table(spec: &CMPointSpec, ctx: &SeriesContext) -> Result<TableCheck> {
    let omega = chowla_selberg(spec.disc)?;
    let v = numerics::eisenstein(spec.point(), ctx)?;
    let sd = (spec.disc.abs() as f64).sqrt();
    let e2 = spec.k1.to_f64() / sd * omega.powi(2);
    let q = spec.k2.to_f64() * omega.powi(4);
    let r = spec.k3.to_f64() * sd * omega.powi(6);
    let should_have_zero = (spec.disc < -4).then(|| {
        let ratio = spec.m1.to_f64() / spec.m2.to_f64();
        (v.e2star - ratio * v.e6 / v.e4).norm()
    });
    Ok(TableCheck {
        disc: spec.disc,
        e2star_err: (v.e2star - e2).norm(),
        q_err: (v.e4 - q).norm(),
        r_err: (v.e6 - r).norm(),
        should_have_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-11);
        assert!((gamma(0.25) - 3.625_609_908_221_908).abs() < 1e-13);
    }

    #[test]
    fn omega_values() {
        let o4 = chowla_selberg(-4).unwrap();
        let closed = gamma(0.25).powi(2) / (4.0 * PI.powf(1.5));
        assert!((o4 - closed).abs() < 1e-14);
        assert!((o4 - 0.5902).abs() < 1e-4);
        assert!((chowla_selberg(-3).unwrap() - 0.6409).abs() < 1e-4);
    }

    #[test]
    fn d7_gcd() {
        let (g, m1, m2) = derived_m(&registry(-7).unwrap()).unwrap();
        assert_eq!(g, BigInt::from(9));
        assert_eq!(m1, QuadElt::int(5, FieldSpec::Rational));
        assert_eq!(m2, QuadElt::int(21, FieldSpec::Rational));
    }

    #[test]
    fn registry_rows() {
        let s = registry(-24).unwrap();
        assert_eq!(s.m1, QuadElt::new(9, 7, FieldSpec::Quad(2)));
        assert!(registry(-23).is_err());
        assert!(registry(-4).unwrap().is_nontrivial(4));
        assert!(!registry(-4).unwrap().is_nontrivial(3));
        assert!(!registry(-3).unwrap().is_nontrivial(5));
        assert!((0..10).all(|n| registry(-7).unwrap().is_nontrivial(n)));
    }
}

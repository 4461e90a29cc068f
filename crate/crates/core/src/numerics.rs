//! Floating-point evaluation of E₂*, E₄, E₆, Δ and 𝓔_m, and three routes to
//! the Taylor coefficients c_z(Δ, m).

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::cmdata::{normalization, CMPointSpec};
use crate::exactalg::big_to_f64;
use crate::recurrences::{cm_qseq_iter, BSeq};
use crate::{Error, Result};

/// Largest order accepted by the 𝓔_m and coefficient routes.
pub const MAX_ORDER: u32 = 64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A point x + iy with y > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Self {
        assert!(y > 0.0, "point must lie in the upper half-plane");
        UpperHalfPoint { x, y }
    }

    pub fn z(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

impl From<Complex64> for UpperHalfPoint {
    fn from(z: Complex64) -> Self {
        UpperHalfPoint::new(z.re, z.im)
    }
}

/// Truncation data for q-expansions: σ₁, σ₃, σ₅ and τ up to `n_terms`.
#[derive(Clone, Debug)]
pub struct SeriesContext {
    pub n_terms: usize,
    s1: Vec<f64>,
    s3: Vec<f64>,
    s5: Vec<f64>,
    tau: Vec<f64>,
}

impl SeriesContext {
    pub fn new(n_terms: usize) -> Self {
        let n_terms = n_terms.max(1);
        let sig = |k| (1..=n_terms as u64).map(|n| sigma_sums(k, n) as f64).collect();
        let tau = delta_q_coeffs(n_terms).into_iter().map(|t| t as f64).collect();
        SeriesContext { n_terms, s1: sig(2), s3: sig(4), s5: sig(6), tau }
    }

    /// Bound on the omitted tail of the E₆ series (the largest of the four)
    /// at height y, from σ₅(n) ≤ n⁶.
    pub fn tail_bound(&self, y: f64) -> f64 {
        let r = (-2.0 * PI * y).exp();
        let n0 = self.n_terms as f64 + 1.0;
        let ratio = r * ((n0 + 1.0) / n0).powi(6);
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        504.0 * n0.powi(6) * r.powf(n0) / (1.0 - ratio)
    }
}

impl Default for SeriesContext {
    fn default() -> Self {
        SeriesContext::new(25)
    }
}

/// σ_{k−1}(n), the divisor sum attached to E_k.
pub fn sigma_sums(k: u32, n: u64) -> u128 {
    assert!(n >= 1);
    let e = k - 1;
    let mut s = 0u128;
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += (d as u128).pow(e);
            if d * d != n {
                s += ((n / d) as u128).pow(e);
            }
        }
        d += 1;
    }
    s
}

/// τ(1), ..., τ(N), from Δ = q(∏(1−qⁿ)³)⁸ with Jacobi's series for the cube.
pub fn delta_q_coeffs(n: usize) -> Vec<i128> {
    // coefficients of ∏(1−qⁿ)^24 up to q^{n−1}
    let mut eta3 = vec![0i128; n];
    let mut k = 0i128;
    loop {
        let e = (k * (k + 1) / 2) as usize;
        if e >= n {
            break;
        }
        eta3[e] = if k % 2 == 0 { 2 * k + 1 } else { -(2 * k + 1) };
        k += 1;
    }
    let square = |p: &[i128]| {
        let mut out = vec![0i128; n];
        for (i, &a) in p.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in p[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    };
    let p6 = square(&eta3);
    let p12 = square(&p6);
    square(&p12)
}

/// Values of the basic forms at one point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EisensteinValues {
    pub e2: Complex64,
    pub e2star: Complex64,
    pub e4: Complex64,
    pub e6: Complex64,
    pub delta: Complex64,
    pub tail_bound: f64,
}

fn require_reduced(z: Complex64) -> Result<()> {
    if z.im < 3f64.sqrt() / 2.0 - 1e-9 {
        return Err(Error::NotReduced(z.im));
    }
    Ok(())
}

/// E₂, E₂*, E₄, E₆ and Δ at z, which must have y ≥ √3/2.
pub fn eisenstein(z: Complex64, ctx: &SeriesContext) -> Result<EisensteinValues> {
    require_reduced(z)?;
    let q = (2.0 * PI * I * z).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    let (mut s2, mut s4, mut s6, mut d) =
        (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
    for n in 0..ctx.n_terms {
        qn *= q;
        s2 += ctx.s1[n] * qn;
        s4 += ctx.s3[n] * qn;
        s6 += ctx.s5[n] * qn;
        d += ctx.tau[n] * qn;
    }
    let e2 = 1.0 - 24.0 * s2;
    Ok(EisensteinValues {
        e2,
        e2star: e2 - 3.0 / (PI * z.im),
        e4: 1.0 + 240.0 * s4,
        e6: 1.0 - 504.0 * s6,
        delta: d,
        tail_bound: ctx.tail_bound(z.im),
    })
}

pub fn eval_e2star(z: Complex64, ctx: &SeriesContext) -> Result<Complex64> {
    Ok(eisenstein(z, ctx)?.e2star)
}

pub fn eval_e4(z: Complex64, ctx: &SeriesContext) -> Result<Complex64> {
    Ok(eisenstein(z, ctx)?.e4)
}

pub fn eval_e6(z: Complex64, ctx: &SeriesContext) -> Result<Complex64> {
    Ok(eisenstein(z, ctx)?.e6)
}

/// Δ(z) anywhere in ℍ, reducing to the fundamental domain when needed.
pub fn eval_delta(z: Complex64, ctx: &SeriesContext) -> Result<Complex64> {
    if z.im >= 3f64.sqrt() / 2.0 {
        return Ok(eisenstein(z, ctx)?.delta);
    }
    let (w, g) = reduce_to_fundamental(z);
    let j = g.j(z);
    Ok(eisenstein(w, ctx)?.delta / j.powi(12))
}

/// An element of SL(2,ℤ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sl2z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2z {
    pub const IDENTITY: Sl2z = Sl2z { a: 1, b: 0, c: 0, d: 1 };

    pub fn act(self, z: Complex64) -> Complex64 {
        (self.a as f64 * z + self.b as f64) / (self.c as f64 * z + self.d as f64)
    }

    /// The automorphy factor cz + d.
    pub fn j(self, z: Complex64) -> Complex64 {
        self.c as f64 * z + self.d as f64
    }

    pub fn mul(self, o: Sl2z) -> Sl2z {
        Sl2z {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// Returns (z′, γ) with γz = z′ in the standard fundamental domain.
pub fn reduce_to_fundamental(z: Complex64) -> (Complex64, Sl2z) {
    let mut w = z;
    let mut g = Sl2z::IDENTITY;
    for _ in 0..10_000 {
        let n = (w.re + 0.5).floor() as i64;
        if n != 0 {
            w -= n as f64;
            g = Sl2z { a: 1, b: -n, c: 0, d: 1 }.mul(g);
        }
        if w.norm_sqr() < 1.0 - 1e-15 {
            w = -1.0 / w;
            g = Sl2z { a: 0, b: -1, c: 1, d: 0 }.mul(g);
        } else {
            break;
        }
    }
    (w, g)
}

struct BTable {
    /// For each r: (power of R, power of Q, coefficient).
    polys: Vec<Vec<(u32, u32, f64)>>,
}

fn b_table() -> &'static BTable {
    static T: OnceLock<BTable> = OnceLock::new();
    T.get_or_init(|| BTable {
        polys: BSeq::new()
            .take(MAX_ORDER as usize + 1)
            .map(|p| p.terms.iter().map(|(&(a, b), c)| (a, b, big_to_f64(c))).collect())
            .collect(),
    })
}

fn eval_b(r: usize, q: Complex64, rr: Complex64) -> Complex64 {
    b_table().polys[r].iter().map(|&(a, b, c)| c * rr.powu(a) * q.powu(b)).sum()
}

fn binom(n: u32, k: u32) -> f64 {
    let mut r = 1u128;
    for i in 0..k as u128 {
        r = r * (n as u128 - i) / (i + 1);
    }
    r as f64
}

fn check_order(m: u32) -> Result<()> {
    if m > MAX_ORDER {
        return Err(Error::OrderTooLarge(m));
    }
    Ok(())
}

/// Σ_r (1/r!) C(m+11, r+11) (E₂*)^{m−r} 𝓑_r evaluated from given values.
fn weighted_b_sum(m: u32, v: &EisensteinValues) -> Complex64 {
    let mut acc = Complex64::default();
    let mut rfact = 1.0;
    for r in 0..=m {
        if r > 0 {
            rfact *= r as f64;
        }
        let b = eval_b(r as usize, v.e4, v.e6);
        acc += binom(m + 11, r + 11) / rfact * v.e2star.powu(m - r) * b;
    }
    acc
}

fn factorial(m: u32) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

/// 𝓔_m(z) = Σ (m!/r!) C(m+11, r+11) (E₂*)^{m−r} 𝓑_r.
pub fn eval_cal_e(m: u32, z: Complex64, ctx: &SeriesContext) -> Result<Complex64> {
    check_order(m)?;
    let v = eisenstein(z, ctx)?;
    Ok(factorial(m) * weighted_b_sum(m, &v))
}

/// c_z(Δ,m) = Δ(z)(πi/6)ᵐ(z−z̄)^{m+6} Σ (1/r!) C(m+11,r+11)(E₂*)^{m−r}𝓑_r.
pub fn coeff_via_theorem41(z: Complex64, m: u32, ctx: &SeriesContext) -> Result<Complex64> {
    check_order(m)?;
    let v = eisenstein(z, ctx)?;
    let zz = Complex64::new(0.0, 2.0 * z.im);
    Ok(v.delta * (PI * I / 6.0).powu(m) * zz.powu(m + 6) * weighted_b_sum(m, &v))
}

/// Generalized Laguerre polynomial L_m^{(α)}(t) = Σ_r C(m+α, m−r)(−t)^r/r!,
/// by the three-term recurrence (the explicit sum cancels badly for t ≳ 10).
pub fn laguerre(m: u32, alpha: f64, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - t);
    if m == 0 {
        return prev;
    }
    for k in 1..m {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - t) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// c_z(Δ,m) = (2iy)⁶ Σ τ(n)qⁿ Σ_r C(m+11,r+11)(−4πny)^r/r!; the inner sum is L_m^{(11)}(4πny).
pub fn coeff_via_derivatives(z: Complex64, m: u32, ctx: &SeriesContext) -> Result<Complex64> {
    check_order(m)?;
    require_reduced(z)?;
    let y = z.im;
    let q = (2.0 * PI * I * z).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::default();
    for n in 1..=ctx.n_terms {
        qn *= q;
        let inner = laguerre(m, 11.0, 4.0 * PI * n as f64 * y);
        acc += ctx.tau[n - 1] * qn * inner;
    }
    Ok(Complex64::new(0.0, 2.0 * y).powu(6) * acc)
}

/// c_𝔷(Δ,m) = κ λᵐ q_m(0)/m! from the exact sequence.
pub fn coeff_via_cm_exact(spec: &CMPointSpec, m: u32, ctx: &SeriesContext) -> Result<Complex64> {
    check_order(m)?;
    let norm = normalization(spec, ctx)?;
    let qm = cm_qseq_iter(spec)?.nth(m as usize).unwrap().eval_zero().to_f64();
    Ok(norm.kappa * norm.lambda.powu(m) * qm / factorial(m))
}

/// All coefficient routes at once, with their largest pairwise relative gap.
#[derive(Clone, Debug, Serialize)]
pub struct RouteComparison {
    pub m: u32,
    pub theorem: Option<Complex64>,
    pub derivative: Option<Complex64>,
    pub cm: Option<Complex64>,
    pub max_rel_disagreement: f64,
}

pub fn compare_routes(
    z: Complex64,
    m: u32,
    spec: Option<&CMPointSpec>,
    ctx: &SeriesContext,
) -> Result<RouteComparison> {
    let theorem = Some(coeff_via_theorem41(z, m, ctx)?);
    let derivative = Some(coeff_via_derivatives(z, m, ctx)?);
    let cm = spec.map(|s| coeff_via_cm_exact(s, m, ctx)).transpose()?;
    let vals: Vec<Complex64> = [theorem, derivative, cm].into_iter().flatten().collect();
    let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            if scale > 0.0 {
                worst = worst.max((vals[i] - vals[j]).norm() / scale);
            }
        }
    }
    Ok(RouteComparison { m, theorem, derivative, cm, max_rel_disagreement: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmdata::chowla_selberg;

    fn ctx() -> SeriesContext {
        SeriesContext::default()
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_sums(2, 1), 1);
        assert_eq!(sigma_sums(4, 2), 9);
        assert_eq!(sigma_sums(6, 3), 244);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(delta_q_coeffs(5), vec![1, -24, 252, -1472, 4830]);
        let t = delta_q_coeffs(12);
        assert_eq!(t[10], 534612);
        assert_eq!(t[11], -370944);
    }

    #[test]
    fn values_at_i_and_omega() {
        let o4 = chowla_selberg(-4).unwrap();
        let v = eisenstein(I, &ctx()).unwrap();
        assert!(v.e2star.norm() < 1e-10);
        assert!((v.e4 - 12.0 * o4.powi(4)).norm() < 1e-10);
        assert!(v.e6.norm() < 1e-10);
        assert!((v.delta - o4.powi(12)).norm() < 1e-10);
        let o3 = chowla_selberg(-3).unwrap();
        let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        let v = eisenstein(w, &ctx()).unwrap();
        assert!(v.e4.norm() < 1e-10);
        assert!((v.e6 - 24.0 * 3f64.sqrt() * o3.powi(6)).norm() < 1e-10);
        assert!((v.delta + o3.powi(12)).norm() < 1e-10);
    }

    #[test]
    fn unreduced_point_rejected() {
        assert!(matches!(eisenstein(Complex64::new(0.0, 0.5), &ctx()), Err(Error::NotReduced(_))));
    }

    #[test]
    fn reduction_examples() {
        let (w, g) = reduce_to_fundamental(Complex64::new(5.0, 1.0));
        assert!((w - I).norm() < 1e-14);
        assert_eq!(g, Sl2z { a: 1, b: -5, c: 0, d: 1 });
        let (w, _) = reduce_to_fundamental(Complex64::new(0.0, 0.5));
        assert!((w - 2.0 * I).norm() < 1e-14);
    }

    #[test]
    fn closed_forms_at_2i() {
        let z = 2.0 * I;
        let v = eisenstein(z, &ctx()).unwrap();
        let (e, q, r) = (v.e2star, v.e4, v.e6);
        let forms = [
            12.0 * e,
            12.0 * (13.0 * e * e - q),
            24.0 * (91.0 * e.powu(3) - 21.0 * e * q + 2.0 * r),
            72.0 * (455.0 * e.powu(4) - 210.0 * e * e * q + 40.0 * e * r + 3.0 * q * q),
        ];
        for (m, f) in forms.iter().enumerate() {
            let got = eval_cal_e(m as u32 + 1, z, &ctx()).unwrap();
            assert!((got - f).norm() / f.norm() < 1e-8, "m={}", m + 1);
        }
    }

    #[test]
    fn limit_at_infinity() {
        // E₂* = 1 − 3/(πy) converges like 1/y, so the limit is only visible far up
        let v = eval_cal_e(3, Complex64::new(0.3, 1e10), &ctx()).unwrap();
        assert!((v - 1728.0).norm() < 1e-6);
        let near = eval_cal_e(3, Complex64::new(0.3, 10.0), &ctx()).unwrap();
        let far = eval_cal_e(3, Complex64::new(0.3, 100.0), &ctx()).unwrap();
        assert!((far - 1728.0).norm() < (near - 1728.0).norm() / 5.0);
    }

    #[test]
    fn laguerre_matches_explicit_sum() {
        for m in 0..8u32 {
            let t = 1.7;
            let mut explicit = 0.0;
            let mut term = 1.0;
            for r in 0..=m {
                if r > 0 {
                    term *= -t / r as f64;
                }
                explicit += binom(m + 11, r + 11) * term;
            }
            assert!((laguerre(m, 11.0, t) - explicit).abs() < 1e-10 * explicit.abs().max(1.0));
        }
    }

    #[test]
    fn order_guard() {
        assert!(eval_cal_e(65, 2.0 * I, &ctx()).is_err());
    }

    #[test]
    fn m0_collapses() {
        let z = Complex64::new(0.3, 1.2);
        let d = eval_delta(z, &ctx()).unwrap();
        let expect = Complex64::new(0.0, 2.4).powu(6) * d;
        assert!((coeff_via_theorem41(z, 0, &ctx()).unwrap() - expect).norm() < 1e-15);
        assert!((coeff_via_derivatives(z, 0, &ctx()).unwrap() - expect).norm() < 1e-15);
    }
}

//! Truncated Poincaré-type series for SL(2,ℤ) and numeric checks of the
//! averaged coefficient identities at weight 12.
//!
//! Sums over Γ_∞\Γ run over bottom rows (c, d) taken modulo ±1. Sums over
//! all of Γ are computed as twice the sum over Γ/±1, which is valid for even
//! weight since γ and −γ contribute equally.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::cmdata::gamma;
use crate::numerics::{coeff_via_theorem41, delta_q_coeffs, eval_delta, SeriesContext};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Truncation of the infinite sums, with the largest tail bound accepted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationPolicy {
    pub c_max: u32,
    /// dMax(c) = d_factor·max(1, c).
    pub d_factor: u32,
    pub entry_max: u32,
    pub t_max: u32,
    pub max_tail: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { c_max: 150, d_factor: 150, entry_max: 150, t_max: 60, max_tail: 1e-10 }
    }
}

impl TruncationPolicy {
    /// Same shape as the default with every bound set to `n` (t_max to n/2 + 10).
    pub fn uniform(n: u32) -> Self {
        TruncationPolicy { c_max: n, d_factor: n, entry_max: n, t_max: n / 2 + 10, ..Self::default() }
    }

    pub fn d_max(&self, c: i64) -> i64 {
        self.d_factor as i64 * c.max(1)
    }

    pub fn doubled(&self) -> Self {
        TruncationPolicy {
            c_max: 2 * self.c_max,
            d_factor: 2 * self.d_factor,
            entry_max: 2 * self.entry_max,
            t_max: 2 * self.t_max,
            max_tail: self.max_tail,
        }
    }
}

/// A coset of Γ_∞\Γ: bottom row (c, d) with a completion (a, b), ad − bc = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CosetRep {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl CosetRep {
    pub fn new(c: i64, d: i64) -> Option<Self> {
        if c < 0 || (c == 0 && d != 1) {
            return None;
        }
        let eg = d.extended_gcd(&c);
        if eg.gcd != 1 {
            return None;
        }
        // d·x + c·y = 1, so a = x, b = −y
        Some(CosetRep { a: eg.x, b: -eg.y, c, d })
    }

    /// The completion changed by a left translation (a + tc, b + td).
    pub fn shifted(self, t: i64) -> Self {
        CosetRep { a: self.a + t * self.c, b: self.b + t * self.d, ..self }
    }

    pub fn act(self, z: Complex64) -> Complex64 {
        (self.a as f64 * z + self.b as f64) / self.j(z)
    }

    pub fn j(self, z: Complex64) -> Complex64 {
        self.c as f64 * z + self.d as f64
    }
}

/// A truncated series value with its tail bound and the sum of absolute
/// values of the included terms (for a rounding estimate).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub abs_sum: f64,
    pub terms: u64,
}

impl SeriesValue {
    /// Tail bound plus a generous floating-point rounding allowance.
    pub fn error_bound(&self) -> f64 {
        self.tail_bound + 1e-13 * self.abs_sum
    }
}

#[derive(Clone, Copy, Default)]
struct Acc {
    value: Complex64,
    abs_sum: f64,
    terms: u64,
    /// Σ|j|^{−σ} over included bottom rows, used by the translate tail.
    row_weight: f64,
}

impl Acc {
    fn add(&mut self, v: Complex64) {
        self.value += v;
        self.abs_sum += v.norm();
        self.terms += 1;
    }

    fn merge(mut self, o: Acc) -> Acc {
        self.value += o.value;
        self.abs_sum += o.abs_sum;
        self.terms += o.terms;
        self.row_weight += o.row_weight;
        self
    }
}

/// √π Γ((σ−1)/2)/Γ(σ/2) = ∫_ℝ (1+u²)^{−σ/2} du.
fn line_integral(sigma: f64) -> f64 {
    PI.sqrt() * gamma((sigma - 1.0) / 2.0) / gamma(sigma / 2.0)
}

/// Bound on Σ|cz+d|^{−σ} over coset reps outside {c ≤ C, |d + c·round(x)| ≤ dMax(c)}.
fn quotient_majorant(z: Complex64, sigma: f64, c_max: i64, d_max: impl Fn(i64) -> i64) -> f64 {
    let (x, y) = ((z.re - z.re.round()).abs(), z.im);
    let cf = c_max as f64;
    let k = line_integral(sigma);
    let mut tail = y.powf(-sigma) * cf.powf(1.0 - sigma) / (sigma - 1.0)
        + k * y.powf(1.0 - sigma) * cf.powf(2.0 - sigma) / (sigma - 2.0);
    for c in 1..=c_max {
        let gap = d_max(c) as f64 - c as f64 * x;
        if gap <= 1.0 {
            return f64::INFINITY;
        }
        tail += 2.0 * gap.powf(1.0 - sigma) / (sigma - 1.0);
    }
    tail
}

/// Deterministic sum over Γ_∞\Γ: one partial sum per c, added in order.
/// The d-window is centred on −c·shift.
fn sum_quotient(policy: &TruncationPolicy, shift: i64, term: impl Fn(CosetRep) -> Complex64 + Sync) -> Acc {
    let parts: Vec<Acc> = (0..=policy.c_max as i64)
        .into_par_iter()
        .map(|c| {
            let mut acc = Acc::default();
            if c == 0 {
                acc.add(term(CosetRep::new(0, 1).unwrap()));
                return acc;
            }
            let dm = policy.d_max(c);
            for d in -c * shift - dm..=-c * shift + dm {
                if let Some(g) = CosetRep::new(c, d) {
                    acc.add(term(g));
                }
            }
            acc
        })
        .collect();
    parts.into_iter().fold(Acc::default(), Acc::merge)
}

fn check_policy(v: SeriesValue, policy: &TruncationPolicy) -> Result<SeriesValue> {
    if !(v.tail_bound <= policy.max_tail) {
        return Err(Error::PolicyRejected(format!("tail estimate {:e} exceeds {:e}", v.tail_bound, policy.max_tail)));
    }
    Ok(v)
}

/// F_k(z,n,s) = Σ_{Γ_∞\Γ} Im(γz)^{s−k/2} j(γ,z)^{−k} e^{2πinγz}.
pub fn fks(k: u32, z: Complex64, n: i64, s: f64, policy: &TruncationPolicy) -> Result<SeriesValue> {
    if s <= 1.0 {
        return Err(Error::OutOfRange(format!("F_k needs s > 1, got {s}")));
    }
    let e = s - k as f64 / 2.0;
    let acc = sum_quotient(policy, z.re.round() as i64, |g| {
        let w = g.act(z);
        w.im.powf(e) * g.j(z).powi(-(k as i32)) * (2.0 * PI * I * n as f64 * w).exp()
    });
    let tail = z.im.powf(e) * quotient_majorant(z, 2.0 * s, policy.c_max as i64, |c| policy.d_max(c));
    check_policy(SeriesValue { value: acc.value, tail_bound: tail, abs_sum: acc.abs_sum, terms: acc.terms }, policy)
}

/// P_m(z) = Σ_{Γ_∞\Γ} e^{2πimγz}/j(γ,z)^k.
pub fn parabolic_poincare(m: i64, z: Complex64, k: u32, policy: &TruncationPolicy) -> Result<SeriesValue> {
    if k < 12 || k % 2 == 1 {
        return Err(Error::OutOfRange(format!("weight {k} must be even and at least 12")));
    }
    let acc = sum_quotient(policy, z.re.round() as i64, |g| {
        (2.0 * PI * I * m as f64 * g.act(z)).exp() / g.j(z).powi(k as i32)
    });
    let tail = quotient_majorant(z, k as f64, policy.c_max as i64, |c| policy.d_max(c));
    check_policy(SeriesValue { value: acc.value, tail_bound: tail, abs_sum: acc.abs_sum, terms: acc.terms }, policy)
}

/// Deterministic sum over Γ/±1 with translates centred on Re z₀; `term`
/// receives γ and γz. The returned value is doubled for ±γ.
fn sum_full(
    z: Complex64,
    z0: Complex64,
    sigma: f64,
    policy: &TruncationPolicy,
    term: impl Fn(CosetRep, Complex64) -> Complex64 + Sync,
) -> Acc {
    let e = policy.entry_max as i64;
    let tm = policy.t_max as i64;
    let shift = z.re.round() as i64;
    let parts: Vec<Acc> = (0..=e)
        .into_par_iter()
        .map(|c| {
            let mut acc = Acc::default();
            let ds: Vec<i64> = if c == 0 { vec![1] } else { (-c * shift - e..=-c * shift + e).collect() };
            for d in ds {
                let Some(g0) = CosetRep::new(c, d) else { continue };
                let w0 = g0.act(z);
                acc.row_weight += g0.j(z).norm().powf(-sigma);
                let tc = -(w0.re - z0.re).round() as i64;
                for t in tc - tm..=tc + tm {
                    let g = CosetRep { a: g0.a + t * c, b: g0.b + t * d, c, d };
                    acc.add(2.0 * term(g, w0 + t as f64));
                }
            }
            acc
        })
        .collect();
    parts.into_iter().fold(Acc::default(), Acc::merge)
}

/// Tail bound for a full-Γ sum whose terms are bounded by
/// pref·|γz − z̄₀|^{−σ}|j|^{−σ}.
fn full_tail(z: Complex64, z0: Complex64, sigma: f64, pref: f64, row_weight: f64, policy: &TruncationPolicy) -> f64 {
    let beta = z0.im;
    let e = policy.entry_max as i64;
    let rows = quotient_majorant(z, sigma, e, |_| e);
    let along = beta.powf(-sigma) + line_integral(sigma) * beta.powf(1.0 - sigma);
    let t = policy.t_max as f64;
    let trans = if t > 1.0 { 2.0 * (t - 0.5).powf(1.0 - sigma) / (sigma - 1.0) } else { f64::INFINITY };
    2.0 * pref * (rows * along + row_weight * trans)
}

/// G_k(z,z₀;m,l) = Σ_Γ (Q_{m,l}|_k σ_{z₀}⁻¹γ)(z), Q_{m,l}(w) = wᵐ(w̄/(|w|²−1))ˡ.
pub fn gk(k: u32, z: Complex64, z0: Complex64, m: u32, l: u32, policy: &TruncationPolicy) -> Result<SeriesValue> {
    if k % 2 == 1 || 2 * l + 4 >= k {
        return Err(Error::OutOfRange(format!("G_k needs even k and 0 <= l < k/2 - 2 (k={k}, l={l})")));
    }
    let beta = z0.im;
    let pre = (2.0 * I * beta).powi(k as i32 / 2);
    let ki = k as i32;
    let acc = sum_full(z, z0, (k - 2 * l) as f64, policy, |g, w| {
        let u = (w - z0) / (w - z0.conj());
        let r = u.norm_sqr();
        let q = u.powu(m) * (u.conj() / (r - 1.0)).powu(l);
        pre * q / ((w - z0.conj()).powi(ki) * g.j(z).powi(ki))
    });
    let sigma = (k - 2 * l) as f64;
    let pref = (2.0 * beta).powf(k as f64 / 2.0) * (4.0 * beta * z.im).powi(-(l as i32));
    let tail = full_tail(z, z0, sigma, pref, acc.row_weight, policy);
    check_policy(SeriesValue { value: acc.value, tail_bound: tail, abs_sum: acc.abs_sum, terms: acc.terms }, policy)
}

/// P_{z₀,m}(z) = (2iβ)^{k/2} Σ_Γ (γz−z₀)ᵐ/((γz−z̄₀)^{m+k} j(γ,z)^k).
pub fn elliptic_poincare(
    z0: Complex64,
    m: u32,
    z: Complex64,
    k: u32,
    policy: &TruncationPolicy,
) -> Result<SeriesValue> {
    if k < 12 || k % 2 == 1 {
        return Err(Error::OutOfRange(format!("weight {k} must be even and at least 12")));
    }
    let beta = z0.im;
    let pre = (2.0 * I * beta).powi(k as i32 / 2);
    let ki = k as i32;
    let acc = sum_full(z, z0, k as f64, policy, |g, w| {
        pre * (w - z0).powu(m) / ((w - z0.conj()).powi(ki + m as i32) * g.j(z).powi(ki))
    });
    let pref = (2.0 * beta).powf(k as f64 / 2.0);
    let tail = full_tail(z, z0, k as f64, pref, acc.row_weight, policy);
    check_policy(SeriesValue { value: acc.value, tail_bound: tail, abs_sum: acc.abs_sum, terms: acc.terms }, policy)
}

/// G_k through the sum over σ_{z₀}⁻¹Γσ_z of d^{−k}(b/d)^{m−l}(|b/d|²/(|b/d|²−1))ˡ.
pub fn gk_conjugated(
    k: u32,
    z: Complex64,
    z0: Complex64,
    m: u32,
    l: u32,
    policy: &TruncationPolicy,
) -> Result<SeriesValue> {
    if k % 2 == 1 || 2 * l + 4 >= k {
        return Err(Error::OutOfRange(format!("G_k needs even k and 0 <= l < k/2 - 2 (k={k}, l={l})")));
    }
    let y = z.im;
    // σ_z = (1/(2iy))·(−z̄, z; −1, 1); σ_{z₀}⁻¹ = (1, −z₀; 1, −z̄₀)
    let s = 1.0 / (2.0 * I * y);
    let sz = [[-z.conj() * s, z * s], [-s, s]];
    let ki = k as i32;
    let acc = sum_full(z, z0, (k - 2 * l) as f64, policy, |g, _| {
        let (a, b, c, d) = (g.a as f64, g.b as f64, g.c as f64, g.d as f64);
        // σ_{z₀}⁻¹γ
        let r0 = [a - z0 * c, b - z0 * d];
        let r1 = [a - z0.conj() * c, b - z0.conj() * d];
        let bb = r0[0] * sz[0][1] + r0[1] * sz[1][1];
        let dd = r1[0] * sz[0][1] + r1[1] * sz[1][1];
        let u = bb / dd;
        let r = u.norm_sqr();
        dd.powi(-ki) * u.powi(m as i32 - l as i32) * (r / (r - 1.0)).powi(l as i32)
    });
    let pre = (2.0 * I * z0.im).powi(ki / 2) / (2.0 * I * y).powi(ki);
    let sigma = (k - 2 * l) as f64;
    let pref = (2.0 * z0.im).powf(k as f64 / 2.0) * (4.0 * z0.im * y).powi(-(l as i32));
    let tail = full_tail(z, z0, sigma, pref, acc.row_weight, policy);
    check_policy(
        SeriesValue { value: pre * acc.value, tail_bound: tail, abs_sum: pre.norm() * acc.abs_sum, terms: acc.terms },
        policy,
    )
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binom(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// τ(n) for n ≥ 1.
pub fn tau(n: u64) -> i128 {
    delta_q_coeffs(n as usize)[n as usize - 1]
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormDelta {
    pub value: f64,
    /// Relative change between the two quadrature levels.
    pub rel_change: f64,
    /// Share of the integral above y = 6 (bounded by the q-decay).
    pub above_six: f64,
}

fn norm_quadrature(order: usize, panels: usize, ctx: &SeriesContext) -> Result<(f64, f64)> {
    let gl = GaussLegendre::new(NonZeroUsize::new(order).unwrap());
    let y_top = 8.0;
    let integrand = |x: f64, y: f64| -> f64 {
        eval_delta(Complex64::new(x, y), ctx).map(|d| d.norm_sqr() * y.powi(10)).unwrap_or(f64::NAN)
    };
    let y_breaks: Vec<f64> = {
        let mut v = vec![1.5];
        let h = 0.5 / panels as f64;
        while *v.last().unwrap() < y_top - 1e-12 {
            v.push(v.last().unwrap() + h);
        }
        v
    };
    let col = |x: f64| -> f64 {
        let lo = (1.0 - x * x).sqrt();
        let mut s = 0.0;
        for p in 0..panels {
            let a = lo + (1.5 - lo) * p as f64 / panels as f64;
            let b = lo + (1.5 - lo) * (p + 1) as f64 / panels as f64;
            s += gl.integrate(a, b, |y| integrand(x, y));
        }
        for w in y_breaks.windows(2) {
            s += gl.integrate(w[0], w[1], |y| integrand(x, y));
        }
        s
    };
    let mut total = 0.0;
    for p in 0..panels {
        let a = 0.5 * p as f64 / panels as f64;
        let b = 0.5 * (p + 1) as f64 / panels as f64;
        total += gl.integrate(a, b, col);
    }
    let above = 2.0 * gl.integrate(0.0, 0.5, |x| gl.integrate(6.0, y_top, |y| integrand(x, y)));
    Ok((2.0 * total, above))
}

/// ‖Δ‖² = ∫_𝓕 |Δ|² y¹² dx dy/y², by Gauss–Legendre panels on the half domain,
/// accepted when two refinement levels agree to `tol` relative.
pub fn petersson_norm_delta(tol: f64) -> Result<NormDelta> {
    let ctx = SeriesContext::new(30);
    let (coarse, _) = norm_quadrature(20, 2, &ctx)?;
    let (fine, above) = norm_quadrature(30, 4, &ctx)?;
    let rel_change = ((fine - coarse) / fine).abs();
    if !(rel_change <= tol) {
        return Err(Error::NoConvergence(format!("relative change {rel_change:e} above {tol:e}")));
    }
    Ok(NormDelta { value: fine, rel_change, above_six: above / fine })
}

/// ‖Δ‖² at tolerance 10⁻⁹, computed once per process.
pub fn norm_delta() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| petersson_norm_delta(1e-9).expect("quadrature converges").value)
}

/// Left side, right side and their discrepancy for one identity.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_err: f64,
    pub tail_bound: f64,
    pub policy: TruncationPolicy,
}

fn report(lhs: Complex64, rhs: Complex64, tail_bound: f64, policy: &TruncationPolicy) -> IdentityReport {
    let rel_err = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
    IdentityReport { lhs, rhs, rel_err, tail_bound, policy: *policy }
}

fn check_reduced(z0: Complex64) -> Result<()> {
    if z0.im < 3f64.sqrt() / 2.0 - 1e-9 {
        return Err(Error::NotReduced(z0.im));
    }
    Ok(())
}

/// τ(n)c_{z₀}(Δ,m) against (64/10!)‖Δ‖²β^{m+6} Σ_j C(m+11,m−j)(−4πn)^{j+11}/j! F_{2m+12}(z₀,n,j+6).
pub fn verify_parabolic_elliptic(z0: Complex64, m: u32, n: u64, policy: &TruncationPolicy) -> Result<IdentityReport> {
    check_reduced(z0)?;
    let ctx = SeriesContext::new(40);
    let lhs = tau(n) as f64 * coeff_via_theorem41(z0, m, &ctx)?;
    let beta = z0.im;
    let mut sum = Complex64::default();
    let mut tail = 0.0;
    for j in 0..=m {
        let f = fks(2 * m + 12, z0, n as i64, j as f64 + 6.0, policy)?;
        let w = binom(m + 11, m - j) * (-4.0 * PI * n as f64).powi(j as i32 + 11) / factorial(j);
        sum += w * f.value;
        tail += w.abs() * f.tail_bound;
    }
    let scale = 64.0 / factorial(10) * norm_delta() * beta.powi(m as i32 + 6);
    Ok(report(lhs, scale * sum, scale * tail, policy))
}

/// conj(c_{z₀}(Δ,m))c_{z₀′}(Δ,n)/‖Δ‖² against the G-series side.
pub fn verify_elliptic_elliptic(
    z0: Complex64,
    z0p: Complex64,
    m: u32,
    n: u32,
    policy: &TruncationPolicy,
) -> Result<IdentityReport> {
    check_reduced(z0)?;
    check_reduced(z0p)?;
    let ctx = SeriesContext::new(40);
    let lhs = coeff_via_theorem41(z0, m, &ctx)?.conj() * coeff_via_theorem41(z0p, n, &ctx)? / norm_delta();
    let mut sum = Complex64::default();
    let mut tail = 0.0;
    for j in 0..=n.min(m) {
        let g = gk(12 + 2 * n, z0p, z0, m - j, n - j, policy)?;
        let w = binom(m, j) * binom(n + 11, n - j);
        sum += w * g.value;
        tail += w * g.tail_bound;
    }
    let scale = 2f64.powi(9) * factorial(m + 11) / (PI * factorial(m) * factorial(10))
        * Complex64::new(0.0, 2.0 * z0p.im).powu(n + 6);
    Ok(report(lhs, scale * sum, scale.norm() * tail, policy))
}

/// Σ_j C(m,j)C(m+11,j) G_{2m+12}(z₀,z₀;j,j), which vanishes exactly when P_{z₀,m} ≡ 0.
pub fn vanishing_criterion_sum(z0: Complex64, m: u32, policy: &TruncationPolicy) -> Result<SeriesValue> {
    let mut out = SeriesValue { value: Complex64::default(), tail_bound: 0.0, abs_sum: 0.0, terms: 0 };
    for j in 0..=m {
        let g = gk(2 * m + 12, z0, z0, j, j, policy)?;
        let w = binom(m, j) * binom(m + 11, j);
        out.value += w * g.value;
        out.tail_bound += w * g.tail_bound;
        out.abs_sum += w * g.abs_sum;
        out.terms += g.terms;
    }
    Ok(out)
}

/// c_∞(P_{z₀,m}, n) at weight k by the F-series formula and by the
/// cosine-free Lemma sum over Γ/Γ_∞.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CuspCoefficient {
    pub via_f_series: Complex64,
    pub via_coset_sum: Complex64,
    pub rel_diff: f64,
    pub tail_bound: f64,
}

pub fn coeff_of_elliptic_at_infty(
    z0: Complex64,
    m: u32,
    n: i64,
    k: u32,
    policy: &TruncationPolicy,
) -> Result<CuspCoefficient> {
    if n <= 0 {
        let zero = Complex64::default();
        return Ok(CuspCoefficient { via_f_series: zero, via_coset_sum: zero, rel_diff: 0.0, tail_bound: 0.0 });
    }
    let beta = z0.im;
    let nf = n as f64;
    let kh = k as i32 / 2;
    // F-series route, which gives the conjugate
    let mut a = Complex64::default();
    let mut tail = 0.0;
    for j in 0..=m {
        let f = fks(k + 2 * m, z0, n, (kh + j as i32) as f64, policy)?;
        let w = binom(m, j) * (-4.0 * PI * nf).powi(k as i32 + j as i32) / factorial(j + k - 1);
        a += w * f.value;
        tail += w.abs() * f.tail_bound;
    }
    let pre_a = 2.0 * beta.powi(m as i32 + kh) / (nf * Complex64::new(0.0, -2.0).powi(kh));
    let via_f = (pre_a * a).conj();
    // coset route: σ_{z₀}⁻¹γ = (A, B; C, D) with γ = (−d, b; c, −a) from each rep
    let sums: Vec<Complex64> = (0..=m)
        .map(|j| {
            sum_quotient(policy, z0.re.round() as i64, |g| {
                let (al, be, ga, de) = (-g.d as f64, g.b as f64, g.c as f64, -g.a as f64);
                let aa = al - z0 * ga;
                let cc = al - z0.conj() * ga;
                let dd = be - z0.conj() * de;
                aa.powi((m - j) as i32) / cc.powi((k + m + j) as i32) * (2.0 * PI * I * nf * dd / cc).exp()
            })
            .value
        })
        .collect();
    let mut b = Complex64::default();
    for (j, s) in sums.iter().enumerate() {
        let j = j as u32;
        b += beta.powi(kh + j as i32) * binom(m, j) * (-4.0 * PI * nf).powi(k as i32 + j as i32) / factorial(k + j - 1)
            * s;
    }
    let via_c = 2.0 / (nf * Complex64::new(0.0, 2.0).powi(kh)) * b;
    let rel_diff = (via_f - via_c).norm() / via_f.norm().max(via_c.norm()).max(f64::MIN_POSITIVE);
    Ok(CuspCoefficient { via_f_series: via_f, via_coset_sum: via_c, rel_diff, tail_bound: pre_a.norm() * tail })
}

/// c_∞(P_{z₀,m}, n) from e^{2πny}∫₀¹ P_{z₀,m}(x+iy)e^{−2πinx}dx by the
/// trapezoid rule on `samples` points (exact up to aliasing for periodic P).
pub fn coeff_of_elliptic_by_fourier(
    z0: Complex64,
    m: u32,
    n: i64,
    k: u32,
    y: f64,
    samples: usize,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let mut acc = Complex64::default();
    for s in 0..samples {
        let x = s as f64 / samples as f64;
        let p = elliptic_poincare(z0, m, Complex64::new(x, y), k, policy)?.value;
        acc += p * (-2.0 * PI * I * n as f64 * x).exp();
    }
    Ok(acc / samples as f64 * (2.0 * PI * n as f64 * y).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_completion() {
        for c in 0..20 {
            for d in -30..30 {
                if let Some(g) = CosetRep::new(c, d) {
                    assert_eq!(g.a * g.d - g.b * g.c, 1);
                    let h = g.shifted(3);
                    assert_eq!(h.a * h.d - h.b * h.c, 1);
                }
            }
        }
        assert!(CosetRep::new(4, 6).is_none());
        assert!(CosetRep::new(0, -1).is_none());
    }

    #[test]
    fn completion_choice_is_irrelevant() {
        let z = Complex64::new(0.3, 1.1);
        for (c, d) in [(1, 0), (3, -7), (5, 2)] {
            let g = CosetRep::new(c, d).unwrap();
            let (w1, w2) = (g.act(z), g.shifted(-4).act(z));
            assert!((w1.im - w2.im).abs() < 1e-14);
            let e = |w: Complex64| (2.0 * PI * I * w).exp();
            assert!((e(w1) - e(w2)).norm() < 1e-13);
        }
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(1), 1);
        assert_eq!(tau(2), -24);
        assert_eq!(tau(12), -370944);
    }

    #[test]
    fn g_precondition() {
        let p = TruncationPolicy::uniform(5);
        let z = Complex64::new(0.0, 2.0);
        assert!(matches!(gk(12, z, z, 1, 4, &p), Err(Error::OutOfRange(_))));
        assert!(matches!(fks(12, z, 1, 1.0, &p), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn policy_rejection() {
        let p = TruncationPolicy { max_tail: 1e-30, ..TruncationPolicy::uniform(4) };
        let z = Complex64::new(0.0, 1.0);
        assert!(matches!(parabolic_poincare(1, z, 12, &p), Err(Error::PolicyRejected(_))));
    }
}

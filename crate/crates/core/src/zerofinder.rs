//! Zeros of 𝓔_m in the fundamental domain: sign changes on the three
//! real-valued boundary restrictions, a grid-and-Newton search in the
//! interior, and sign-change existence certificates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::numerics::{eval_cal_e, SeriesContext, UpperHalfPoint};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroKind {
    LineRe0,
    LineRehalf,
    Arc,
    InteriorPair,
    EllipticForced,
}

impl ZeroKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroKind::LineRe0 => "line_re0",
            ZeroKind::LineRehalf => "line_rehalf",
            ZeroKind::Arc => "arc",
            ZeroKind::InteriorPair => "interior_pair",
            ZeroKind::EllipticForced => "elliptic_forced",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroRecord {
    pub m: u32,
    pub location: UpperHalfPoint,
    pub kind: ZeroKind,
    pub residual_norm: f64,
    pub mirror: Option<UpperHalfPoint>,
    /// False for interior candidates where Newton did not converge.
    pub confirmed: bool,
}

impl ZeroRecord {
    /// Number of zeros this record stands for.
    pub fn multiplicity(&self) -> usize {
        if self.kind == ZeroKind::InteriorPair {
            2
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchRegion {
    pub y_max: f64,
    pub grid_step: f64,
    pub tolerance: f64,
}

impl Default for SearchRegion {
    fn default() -> Self {
        let y_max = f64::max(3.5, 11.0 / (2.0 * PI) * 13f64.ln() + 1.0);
        SearchRegion { y_max, grid_step: 0.01, tolerance: 1e-6 }
    }
}

/// The three boundary pieces on which 𝓔_m (suitably rotated) is real.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    /// x = 0, parameter y.
    Re0,
    /// x = −1/2, parameter y.
    ReHalf,
    /// z = e^{iθ}, parameter θ.
    Arc,
}

impl Restriction {
    pub fn point(self, s: f64) -> Complex64 {
        match self {
            Restriction::Re0 => Complex64::new(0.0, s),
            Restriction::ReHalf => Complex64::new(-0.5, s),
            Restriction::Arc => Complex64::from_polar(1.0, s),
        }
    }

    /// The real value of the restriction at parameter s.
    pub fn value(self, m: u32, s: f64, ctx: &SeriesContext) -> Result<f64> {
        let e = eval_cal_e(m, self.point(s), ctx)?;
        Ok(match self {
            Restriction::Arc => (Complex64::from_polar(1.0, m as f64 * s) * e).re,
            _ => e.re,
        })
    }

    fn kind(self) -> ZeroKind {
        match self {
            Restriction::Re0 => ZeroKind::LineRe0,
            Restriction::ReHalf => ZeroKind::LineRehalf,
            Restriction::Arc => ZeroKind::Arc,
        }
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

fn omega() -> Complex64 {
    Complex64::new(-0.5, 3f64.sqrt() / 2.0)
}

fn scale(m: u32) -> f64 {
    12f64.powi(m as i32)
}

fn bisect(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a)?;
    while b - a > tol {
        let c = 0.5 * (a + b);
        let fc = f(c)?;
        if (fc > 0.0) == (fa > 0.0) {
            a = c;
            fa = fc;
        } else {
            b = c;
        }
    }
    Ok(0.5 * (a + b))
}

/// Parameter roots of a restriction on [a, b] found by sign changes over
/// `steps` equal pieces.
fn scan_restriction(m: u32, r: Restriction, a: f64, b: f64, steps: usize, ctx: &SeriesContext) -> Result<Vec<f64>> {
    let h = (b - a) / steps as f64;
    let vals: Vec<f64> =
        (0..=steps).into_par_iter().map(|i| r.value(m, a + h * i as f64, ctx)).collect::<Result<_>>()?;
    let mut roots = Vec::new();
    for i in 0..steps {
        if vals[i] == 0.0 || (vals[i] > 0.0) != (vals[i + 1] > 0.0) {
            let lo = a + h * i as f64;
            roots.push(bisect(|s| r.value(m, s, ctx), lo, lo + h, 1e-12)?);
        }
    }
    Ok(roots)
}

fn forced(m: u32, ctx: &SeriesContext) -> Result<Vec<ZeroRecord>> {
    let mut out = Vec::new();
    for (z, hit) in [(I, m % 2 == 1), (omega(), !m.is_multiple_of(3))] {
        if hit {
            out.push(ZeroRecord {
                m,
                location: z.into(),
                kind: ZeroKind::EllipticForced,
                residual_norm: eval_cal_e(m, z, ctx)?.norm(),
                mirror: None,
                confirmed: true,
            });
        }
    }
    Ok(out)
}

fn near_elliptic(z: Complex64) -> bool {
    (z - I).norm() < 1e-4 || (z - omega()).norm() < 1e-4
}

/// Forced zeros and sign-change zeros on x = 0 (y ∈ [1, yMax]),
/// x = −1/2 (y ∈ [√3/2, yMax]) and the arc θ ∈ (π/2, 2π/3].
pub fn boundary_zeros(m: u32, ctx: &SeriesContext, region: &SearchRegion) -> Result<Vec<ZeroRecord>> {
    let mut out = forced(m, ctx)?;
    let eps = 1e-5;
    let lo_half = 3f64.sqrt() / 2.0;
    let pieces = [
        (Restriction::Re0, 1.0 + eps, region.y_max),
        (Restriction::ReHalf, lo_half + eps, region.y_max),
        (Restriction::Arc, PI / 2.0 + eps, 2.0 * PI / 3.0 - eps),
    ];
    for (r, a, b) in pieces {
        let steps = ((b - a) / 0.002).ceil() as usize;
        for s in scan_restriction(m, r, a, b, steps, ctx)? {
            let z = r.point(s);
            if near_elliptic(z) {
                continue;
            }
            out.push(ZeroRecord {
                m,
                location: z.into(),
                kind: r.kind(),
                residual_norm: eval_cal_e(m, z, ctx)?.norm(),
                mirror: None,
                confirmed: true,
            });
        }
    }
    Ok(out)
}

/// True if neither vertical line changes sign on [yMax, 3·yMax].
pub fn no_zeros_above(m: u32, ctx: &SeriesContext, region: &SearchRegion) -> Result<bool> {
    for r in [Restriction::Re0, Restriction::ReHalf] {
        if !scan_restriction(m, r, region.y_max, 3.0 * region.y_max, 2000, ctx)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn in_left_interior(z: Complex64, margin: f64) -> bool {
    z.re > -0.5 + margin && z.re < -margin && z.norm() > 1.0 + margin
}

/// Damped Newton on (Re 𝓔_m, Im 𝓔_m) with a finite-difference Jacobian.
fn newton(m: u32, z0: Complex64, ctx: &SeriesContext) -> Result<(Complex64, f64, bool)> {
    let f = |z: Complex64| eval_cal_e(m, z, ctx);
    let target = 1e-10 * scale(m);
    let mut z = z0;
    let mut fz = f(z)?;
    for _ in 0..60 {
        if fz.norm() < target {
            return Ok((z, fz.norm(), true));
        }
        let h = 1e-6;
        let diffs =
            (|| Ok::<_, Error>(((f(z + h)? - f(z - h)?) / (2.0 * h), (f(z + I * h)? - f(z - I * h)?) / (2.0 * h))))();
        let Ok((fx, fy)) = diffs else {
            return Ok((z, fz.norm(), false));
        };
        let det = fx.re * fy.im - fy.re * fx.im;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (fy.im * fz.re - fy.re * fz.im) / det;
        let dy = (fx.re * fz.im - fx.im * fz.re) / det;
        let mut t = 1.0;
        loop {
            let cand = z - Complex64::new(dx, dy) * t;
            if cand.im > 0.8 {
                if let Ok(fc) = f(cand) {
                    if fc.norm() < fz.norm() {
                        z = cand;
                        fz = fc;
                        break;
                    }
                }
            }
            t *= 0.5;
            if t < 1e-6 {
                return Ok((z, fz.norm(), false));
            }
        }
    }
    Ok((z, fz.norm(), fz.norm() < target))
}

/// Grid search of |𝓔_m| on the open left half of the domain, minima below
/// 0.05·12^m refined by Newton and mirrored by z ↦ −z̄.
pub fn interior_zeros(m: u32, ctx: &SeriesContext, region: &SearchRegion) -> Result<Vec<ZeroRecord>> {
    let h = region.grid_step;
    let tube = h;
    let nx = (0.5 / h).round() as usize;
    let ny = ((region.y_max - 0.85) / h).ceil() as usize;
    let point = |i: usize, j: usize| Complex64::new(-0.5 + h * i as f64, 0.85 + h * j as f64);
    let cells: Vec<(usize, usize)> = (0..=nx).flat_map(|i| (0..=ny).map(move |j| (i, j))).collect();
    let vals: Vec<f64> = cells
        .par_iter()
        .map(|&(i, j)| {
            let z = point(i, j);
            if in_left_interior(z, tube) {
                eval_cal_e(m, z, ctx).map(|v| v.norm())
            } else {
                Ok(f64::INFINITY)
            }
        })
        .collect::<Result<_>>()?;
    let at = |i: usize, j: usize| vals[i * (ny + 1) + j];
    let threshold = 0.05 * scale(m);
    let mut seeds = Vec::new();
    for i in 1..nx {
        for j in 1..ny {
            let v = at(i, j);
            if v >= threshold {
                continue;
            }
            let is_min = (-1i64..=1).all(|di| {
                (-1i64..=1).all(|dj| (di, dj) == (0, 0) || at((i as i64 + di) as usize, (j as i64 + dj) as usize) >= v)
            });
            if is_min {
                seeds.push(point(i, j));
            }
        }
    }
    let mut out: Vec<ZeroRecord> = Vec::new();
    for seed in seeds {
        let (z, res, ok) = newton(m, seed, ctx)?;
        if ok && !in_left_interior(z, 1e-4) {
            // converged to a boundary zero
            continue;
        }
        let z = if ok { z } else { seed };
        if out.iter().any(|r| (r.location.z() - z).norm() < 1e-6) {
            continue;
        }
        out.push(ZeroRecord {
            m,
            location: z.into(),
            kind: ZeroKind::InteriorPair,
            residual_norm: res,
            mirror: Some(UpperHalfPoint::new(-z.re, z.im)),
            confirmed: ok,
        });
    }
    Ok(out)
}

/// All zeros found in the domain, with the count of zeros they represent.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroSet {
    pub m: u32,
    pub records: Vec<ZeroRecord>,
    pub count: usize,
    pub clear_above_cutoff: bool,
}

pub fn find_zeros(m: u32, ctx: &SeriesContext, region: &SearchRegion) -> Result<ZeroSet> {
    let mut records = boundary_zeros(m, ctx, region)?;
    records.extend(interior_zeros(m, ctx, region)?.into_iter().filter(|r| r.confirmed));
    let count = records.iter().map(ZeroRecord::multiplicity).sum();
    Ok(ZeroSet { m, records, count, clear_above_cutoff: no_zeros_above(m, ctx, region)? })
}

/// Two endpoint evaluations of opposite strict sign on a real restriction.
#[derive(Clone, Debug, Serialize)]
pub struct SignChangeCertificate {
    pub m: u32,
    pub restriction: Restriction,
    pub a: f64,
    pub b: f64,
    pub value_a: f64,
    pub value_b: f64,
    pub tail_bound: f64,
}

pub fn sign_change_certificate(
    m: u32,
    r: Restriction,
    a: f64,
    b: f64,
    ctx: &SeriesContext,
) -> Result<SignChangeCertificate> {
    let (va, vb) = (r.value(m, a, ctx)?, r.value(m, b, ctx)?);
    let low = match r {
        Restriction::Arc => 3f64.sqrt() / 2.0,
        _ => a.min(b),
    };
    let tail = ctx.tail_bound(low);
    let margin = 1e3 * tail;
    if (va > 0.0) == (vb > 0.0) || va.abs() <= margin || vb.abs() <= margin {
        return Err(Error::MarginTooSmall(format!("values {va:e}, {vb:e} with margin {margin:e}")));
    }
    Ok(SignChangeCertificate { m, restriction: r, a, b, value_a: va, value_b: vb, tail_bound: tail })
}

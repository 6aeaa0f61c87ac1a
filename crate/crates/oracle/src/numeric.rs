//! Inflection points of a curve instantiated at a small real `t`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use tropinflect_core::rational::{fmt_rat, parse_rat, to_f64};
use tropinflect_core::{PuiseuxNumber, Rat};

use crate::classical::ClassicalCurve;
use crate::error::{OracleError, Result};
use crate::exact::{coeff_in_w, content_free, degree, gcd, remove_factor, resultant_w, UPoly};
use crate::mp::{f_to_rat, horner, int_to_f, isolated, log2_abs, rat_to_f, roots, sci, Cx, Root, F};
use crate::mpoly::{dehomogenize, hessian3, homogenize, MPoly};

pub const DEFAULT_PREC: usize = 256;
/// Required accuracy of every root, in bits relative to its modulus.
pub const MIN_ACCURACY_BITS: f64 = 60.0;
/// A root is real when `|Im z|` is below this multiple of its inclusion radius.
pub const REAL_FACTOR: f64 = 1e3;
/// Non-real roots with `|Im z| < 2^{-40} |z|` are flagged instead of classified.
pub const BORDERLINE_BITS: f64 = 40.0;

/// Parses `"1e-3"`, `"0.001"` or `"1/1000"` exactly.
pub fn parse_t(text: &str) -> Result<Rat> {
    let s = text.trim();
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| OracleError::Invalid(format!("bad exponent in `{text}`")))?),
        None => (s, 0),
    };
    let m = parse_rat(mant)?;
    let ten = Rat::from_integer(BigInt::from(10));
    let t = if exp >= 0 { m * num_traits::pow(ten, exp as usize) } else { m / num_traits::pow(ten, (-exp) as usize) };
    if t <= Rat::zero() || t >= Rat::one() {
        return Err(OracleError::Invalid(format!("t must lie in (0, 1), got {text}")));
    }
    Ok(t)
}

/// `t^r`: exact for integer `r`, otherwise rounded to `prec` bits.
fn t_power(t: &Rat, r: &Rat, prec: usize) -> Rat {
    if r.is_integer() {
        let k = r.to_integer();
        let e: usize = k.abs().try_into().expect("exponent fits");
        let p = num_traits::pow(t.clone(), e);
        return if k.is_negative() { p.recip() } else { p };
    }
    let work = prec + 64;
    let lt = rat_to_f(t, work).ln();
    f_to_rat(&(rat_to_f(r, work) * lt).exp().with_precision(prec).value())
}

/// Value of a Puiseux sum at `t`; Gaussian coefficients are rejected.
pub fn eval_at(c: &PuiseuxNumber, t: &Rat, prec: usize) -> Result<Rat> {
    if !(Rat::zero() < *t && *t < Rat::one()) {
        return Err(OracleError::Invalid("evaluation needs 0 < t < 1".into()));
    }
    let mut acc = Rat::zero();
    for (r, a) in c.terms() {
        if !a.im.is_zero() {
            return Err(OracleError::NotReal(format!("coefficient {c}")));
        }
        acc += &a.re * t_power(t, r, prec);
    }
    Ok(acc)
}

/// `P` at `t` as a primitive integer polynomial.
pub fn instantiate(x: &ClassicalCurve, t: &Rat, prec: usize) -> Result<MPoly<BigInt, 2>> {
    let mut vals = Vec::new();
    for (e, c) in x.terms() {
        let v = eval_at(c, t, prec)?;
        if v.is_zero() {
            return Err(OracleError::IllConditioned(format!("coefficient of z^{}w^{} vanishes at t", e.i, e.j)));
        }
        vals.push(([e.i as u32, e.j as u32], v));
    }
    let l = vals.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let ints = vals.into_iter().map(|(e, v)| (e, (v * Rat::from_integer(l.clone())).to_integer()));
    Ok(content_free(&MPoly::from_terms(ints)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Realness {
    Real,
    NonReal,
    Borderline,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NumericInflection {
    /// `[re, im]` in scientific notation.
    pub z: [String; 2],
    pub w: [String; 2],
    /// `(ln|z|, ln|w|) / ln(1/t)`.
    pub val: [f64; 2],
    pub realness: Realness,
    /// `log₂(radius / |z|)` of the certified disk around `z`.
    pub radius_log2: f64,
}

/// Intersections of the curve with its Hessian outside the torus.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Escapes {
    pub z_zero: usize,
    pub w_zero: usize,
    pub w_infinity: usize,
    /// Bézout total minus everything seen in the affine `z`-line.
    pub z_infinity: i64,
}

impl Escapes {
    pub fn total(&self) -> i64 {
        (self.z_zero + self.w_zero + self.w_infinity) as i64 + self.z_infinity
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NumericReport {
    pub t: String,
    pub prec: usize,
    pub degree: u32,
    /// `3d(d−2)`.
    pub expected: i64,
    /// `d · 3(d−2)` intersections of the curve with its Hessian in the projective plane.
    pub bezout: i64,
    pub torus: usize,
    pub escapes: Escapes,
    pub points: Vec<NumericInflection>,
}

impl NumericReport {
    pub fn real_count(&self) -> usize {
        self.points.iter().filter(|p| p.realness == Realness::Real).count()
    }

    pub fn borderline_count(&self) -> usize {
        self.points.iter().filter(|p| p.realness == Realness::Borderline).count()
    }
}

fn deg_w(p: &MPoly<BigInt, 2>) -> u32 {
    p.terms().keys().map(|e| e[1]).max().unwrap_or(0)
}

fn to_cx(p: &[BigInt], prec: usize) -> Vec<Cx> {
    p.iter().map(|c| Cx::real(int_to_f(c, prec))).collect()
}

/// Coefficients of `p(z₀, w)` in `w`.
fn specialize(p: &MPoly<BigInt, 2>, z0: &Cx, prec: usize) -> Vec<Cx> {
    (0..=deg_w(p)).map(|j| horner(&to_cx(&coeff_in_w(p, j), prec), z0).0).collect()
}

/// `|p(z₀, w₀)| / Σ |c_ij| |z₀|^i |w₀|^j`, as a base-2 logarithm.
fn relative_residual(p: &MPoly<BigInt, 2>, z0: &Cx, w0: &Cx, prec: usize) -> f64 {
    let (az, aw) = (z0.abs(), w0.abs());
    let mut val = Cx::zero();
    let mut mag = F::ZERO;
    for (e, c) in p.terms() {
        let cf = int_to_f(c, prec);
        let mut term = Cx::real(cf.clone());
        let mut m = cf.clone();
        if c.is_negative() {
            m = -m;
        }
        for _ in 0..e[0] {
            term = term.mul(z0);
            m = m * &az;
        }
        for _ in 0..e[1] {
            term = term.mul(w0);
            m = m * &aw;
        }
        val = val.add(&term);
        mag = mag + m;
    }
    val.log2_abs() - log2_abs(&mag)
}

fn classify(root: &Root) -> Realness {
    let im = log2_abs(&root.z.im);
    if im < log2_abs(&root.radius) + REAL_FACTOR.log2() {
        Realness::Real
    } else if im < root.z.log2_abs() - BORDERLINE_BITS {
        Realness::Borderline
    } else {
        Realness::NonReal
    }
}

/// Torus intersections of `X_t` with its Hessian curve.
///
/// The Hessian of the homogenized polynomial is eliminated against `P` by an exact resultant
/// in `ℤ[z]`; roots coming from `z = 0`, `w = 0` or `w = ∞` are divided out exactly before
/// the remaining factor is solved.
pub fn numeric_inflections(x: &ClassicalCurve, t: &Rat, prec: usize) -> Result<NumericReport> {
    let prec = prec.max(128);
    let d = x.degree();
    let p = instantiate(x, t, prec)?;
    let h = dehomogenize(&hessian3(&homogenize(&p, d)));
    if h.is_zero() {
        return Err(OracleError::ZeroHessian);
    }
    let h = content_free(&h);
    let bezout = d as i64 * 3 * (d as i64 - 2);
    let res = resultant_w(&p, &h);
    let Some(top) = degree(&res) else {
        return Err(OracleError::CommonFactor);
    };
    let z_zero = res.iter().position(|c| !c.is_zero()).expect("non-zero");
    let mut r: UPoly = res[z_zero..=top].to_vec();

    let g0 = gcd(&coeff_in_w(&p, 0), &coeff_in_w(&h, 0));
    let (r1, k0) = remove_factor(&r, &g0);
    r = r1;
    let ginf = gcd(&coeff_in_w(&p, deg_w(&p)), &coeff_in_w(&h, deg_w(&h)));
    let (r2, kinf) = remove_factor(&r, &ginf);
    r = r2;
    let w_zero = k0 * degree(&g0).unwrap_or(0);
    let w_infinity = kinf * degree(&ginf).unwrap_or(0);
    let torus = degree(&r).unwrap_or(0);
    let escapes = Escapes {
        z_zero,
        w_zero,
        w_infinity,
        z_infinity: bezout - (z_zero + w_zero + w_infinity + torus) as i64,
    };

    let zs = roots(&to_cx(&r, prec), prec)?;
    if !isolated(&zs) {
        return Err(OracleError::IllConditioned("root disks overlap".into()));
    }
    let ln_inv_t = -to_f64(t).log2();
    let mut points = Vec::with_capacity(zs.len());
    for root in &zs {
        let acc = -root.relative_radius_log2();
        if acc < MIN_ACCURACY_BITS {
            return Err(OracleError::IllConditioned(format!("root certified to only {acc:.0} bits")));
        }
        let ws = roots(&specialize(&p, &root.z, prec), prec)?;
        let mut scored: Vec<(f64, &Root)> = ws.iter().map(|w| (relative_residual(&h, &root.z, &w.z, prec), w)).collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0));
        let Some(&(best, w)) = scored.first() else {
            return Err(OracleError::IllConditioned("no w above a root".into()));
        };
        let cutoff = -(prec as f64) / 2.0;
        if best > cutoff || scored.get(1).is_some_and(|s| s.0 <= cutoff) {
            return Err(OracleError::IllConditioned("back-substitution is ambiguous".into()));
        }
        points.push(NumericInflection {
            z: [sci(&root.z.re), sci(&root.z.im)],
            w: [sci(&w.z.re), sci(&w.z.im)],
            val: [root.z.log2_abs() / ln_inv_t, w.z.log2_abs() / ln_inv_t],
            realness: classify(root),
            radius_log2: root.relative_radius_log2(),
        });
    }
    Ok(NumericReport {
        t: fmt_rat(t),
        prec,
        degree: d,
        expected: 3 * d as i64 * (d as i64 - 2),
        bezout,
        torus,
        escapes,
        points,
    })
}

//! Multiprecision complex arithmetic and simultaneous root finding with inclusion radii.

use dashu_base::{BitTest, SquareRoot, UnsignedAbs};
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use tropinflect_core::Rat;

use crate::error::{OracleError, Result};

pub type F = FBig;

const MAX_ITER: usize = 800;

pub fn int_to_f(x: &BigInt, prec: usize) -> F {
    let (s, bytes) = x.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    let v = if s == Sign::Minus { -mag } else { mag };
    F::from_parts(v, 0).with_precision(prec).value()
}

pub fn rat_to_f(r: &Rat, prec: usize) -> F {
    int_to_f(r.numer(), prec) / int_to_f(r.denom(), prec)
}

/// Exact rational value of a binary float.
pub fn f_to_rat(x: &F) -> Rat {
    let repr = x.repr();
    let s = repr.significand();
    let (sign, bytes) = (s.sign(), s.clone().unsigned_abs().to_le_bytes());
    let mag = BigInt::from_bytes_le(Sign::Plus, &bytes);
    let m = if sign == dashu_base::Sign::Negative { -mag } else { mag };
    let e = repr.exponent();
    let two = BigInt::from(2);
    if e >= 0 {
        Rat::from_integer(m * num_traits::pow(two, e as usize))
    } else {
        Rat::new(m, num_traits::pow(two, (-e) as usize))
    }
}

/// `log₂|x|`, `−∞` at zero.
pub fn log2_abs(x: &F) -> f64 {
    let repr = x.repr();
    if repr.is_zero() {
        return f64::NEG_INFINITY;
    }
    let mag = repr.significand().clone().unsigned_abs();
    let bits = mag.bit_len();
    let shift = bits.saturating_sub(60);
    let top: u64 = (mag >> shift).try_into().expect("60 bits fit");
    (top as f64).log2() + shift as f64 + repr.exponent() as f64
}

/// `2^e` with the given precision.
fn pow2(e: isize, prec: usize) -> F {
    F::from_parts(IBig::from(1), e).with_precision(prec).value()
}

/// `m · 2^e` for a double `m`.
fn scaled(m: f64, e: isize, prec: usize) -> F {
    let mi = (m * (1u64 << 52) as f64).round() as i64;
    F::from_parts(IBig::from(mi), e - 52).with_precision(prec).value()
}

/// Scientific notation with 12 significant digits.
pub fn sci(x: &F) -> String {
    let l = log2_abs(x);
    if l == f64::NEG_INFINITY {
        return "0".into();
    }
    let l10 = l * std::f64::consts::LOG10_2;
    let e = l10.floor();
    let m = 10f64.powf(l10 - e);
    let sign = if x.repr().significand().sign() == dashu_base::Sign::Negative { "-" } else { "" };
    format!("{sign}{m:.12}e{e}")
}

#[derive(Clone, Debug)]
pub struct Cx {
    pub re: F,
    pub im: F,
}

impl Cx {
    pub fn new(re: F, im: F) -> Self {
        Cx { re, im }
    }

    pub fn real(re: F) -> Self {
        Cx { re, im: F::ZERO }
    }

    pub fn zero() -> Self {
        Cx { re: F::ZERO, im: F::ZERO }
    }

    pub fn add(&self, o: &Cx) -> Cx {
        Cx::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        Cx::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        Cx::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn norm2(&self) -> F {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> F {
        self.norm2().sqrt()
    }

    pub fn div(&self, o: &Cx) -> Cx {
        let n = o.norm2();
        Cx::new(
            (&self.re * &o.re + &self.im * &o.im) / &n,
            (&self.im * &o.re - &self.re * &o.im) / &n,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.repr().is_zero() && self.im.repr().is_zero()
    }

    /// `log₂|z|`.
    pub fn log2_abs(&self) -> f64 {
        0.5 * log2_abs(&self.norm2())
    }

    pub fn with_precision(&self, prec: usize) -> Cx {
        Cx::new(self.re.clone().with_precision(prec).value(), self.im.clone().with_precision(prec).value())
    }
}

/// `p(z)` and `p'(z)`, coefficients lowest degree first.
pub fn horner(p: &[Cx], z: &Cx) -> (Cx, Cx) {
    let mut b = p.last().cloned().unwrap_or_else(Cx::zero);
    let mut d = Cx::zero();
    for c in p.iter().rev().skip(1) {
        d = d.mul(z).add(&b);
        b = b.mul(z).add(c);
    }
    (b, d)
}

/// `Σ |a_k| r^k`.
fn magnitude(abs_coeffs: &[F], r: &F) -> F {
    abs_coeffs.iter().rev().fold(F::ZERO, |acc, c| acc * r + c)
}

/// A root approximation with a radius whose disk provably contains a root.
#[derive(Clone, Debug)]
pub struct Root {
    pub z: Cx,
    pub radius: F,
}

impl Root {
    /// `log₂(radius / |z|)`.
    pub fn relative_radius_log2(&self) -> f64 {
        log2_abs(&self.radius) - self.z.log2_abs()
    }
}

/// Starting points on circles read off the upper hull of `(k, log₂|a_k|)`.
fn initial_guesses(p: &[Cx], prec: usize) -> Vec<Cx> {
    let n = p.len() - 1;
    let logs: Vec<f64> = p.iter().map(Cx::log2_abs).collect();
    let pts: Vec<(usize, f64)> = logs.iter().enumerate().filter(|(_, l)| l.is_finite()).map(|(k, l)| (k, *l)).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for q in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (q.1 - a.1) - (b.1 - a.1) * (q.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }
    let mut out = Vec::with_capacity(n);
    for (s, w) in hull.windows(2).enumerate() {
        let (k1, l1) = w[0];
        let (k2, l2) = w[1];
        let count = k2 - k1;
        let log_r = (l1 - l2) / count as f64;
        let e = log_r.floor();
        let frac = (log_r - e).exp2();
        for j in 0..count {
            let theta = std::f64::consts::TAU * (j as f64 + 0.25) / count as f64 + 0.7 + 0.37 * s as f64;
            out.push(Cx::new(
                scaled(frac * theta.cos(), e as isize, prec),
                scaled(frac * theta.sin(), e as isize, prec),
            ));
        }
    }
    out
}

/// All roots of `p` (non-zero constant term and leading coefficient expected) by the
/// Aberth–Ehrlich iteration at `prec` bits, with Weierstrass-type inclusion radii that
/// account for rounding in the evaluation.
pub fn roots(p: &[Cx], prec: usize) -> Result<Vec<Root>> {
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    if p[n].is_zero() || p[0].is_zero() {
        return Err(OracleError::Invalid("root finder expects non-zero extreme coefficients".into()));
    }
    let p: Vec<Cx> = p.iter().map(|c| c.with_precision(prec)).collect();
    let mut z = initial_guesses(&p, prec);
    let tol = -2.0 * (prec as f64 - 12.0);
    let one = Cx::real(pow2(0, prec));
    for _ in 0..MAX_ITER {
        let mut done = true;
        for i in 0..n {
            let (v, dv) = horner(&p, &z[i]);
            if v.is_zero() {
                continue;
            }
            let ratio = v.div(&dv);
            let mut s = Cx::zero();
            for j in 0..n {
                if j != i {
                    s = s.add(&one.div(&z[i].sub(&z[j])));
                }
            }
            let step = ratio.div(&one.sub(&ratio.mul(&s)));
            z[i] = z[i].sub(&step);
            if log2_abs(&step.norm2()) > log2_abs(&z[i].norm2()) + tol {
                done = false;
            }
        }
        if done {
            break;
        }
    }
    let abs_coeffs: Vec<F> = p.iter().map(Cx::abs).collect();
    let eps = pow2(-(prec as isize), prec) * F::from(4 * n as i64 + 4);
    let nn = F::from(n as i64);
    let out = (0..n)
        .map(|i| {
            let (v, _) = horner(&p, &z[i]);
            let err = &eps * magnitude(&abs_coeffs, &z[i].abs());
            let mut den = abs_coeffs[n].clone();
            for j in 0..n {
                if j != i {
                    den = den * z[i].sub(&z[j]).abs();
                }
            }
            let radius = &nn * (v.abs() + err) / den;
            Root { z: z[i].clone(), radius }
        })
        .collect();
    Ok(out)
}

/// Disks pairwise disjoint, so each holds exactly one root.
pub fn isolated(rs: &[Root]) -> bool {
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            let gap = rs[i].z.sub(&rs[j].z).abs();
            if gap <= &rs[i].radius + &rs[j].radius {
                return false;
            }
        }
    }
    true
}

//! Exact univariate and bivariate integer polynomial routines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use tropinflect_core::Rat;

use crate::mpoly::MPoly;

/// Dense coefficients, lowest degree first.
pub type UPoly = Vec<BigInt>;

pub fn trim<T: Zero>(mut p: Vec<T>) -> Vec<T> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn degree<T: Zero>(p: &[T]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Determinant by fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester matrix of `p` and `q` with formal degrees `p.len() − 1` and `q.len() − 1`.
pub fn sylvester(p: &[BigInt], q: &[BigInt]) -> Vec<Vec<BigInt>> {
    let (m, n) = (p.len() - 1, q.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (coeffs, count) in [(p, n), (q, m)] {
        for i in 0..count {
            let mut row = vec![BigInt::zero(); size];
            for (k, c) in coeffs.iter().rev().enumerate() {
                row[i + k] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Coefficient of `w^j` as a polynomial in `z`.
pub fn coeff_in_w(p: &MPoly<BigInt, 2>, j: u32) -> UPoly {
    let mut out = Vec::new();
    for (e, c) in p.terms() {
        if e[1] == j {
            let i = e[0] as usize;
            if out.len() <= i {
                out.resize(i + 1, BigInt::zero());
            }
            out[i] = c.clone();
        }
    }
    out
}

fn deg_in(p: &MPoly<BigInt, 2>, var: usize) -> u32 {
    p.terms().keys().map(|e| e[var]).max().unwrap_or(0)
}

/// Coefficients in `w` after substituting `z = x`.
fn specialize(p: &MPoly<BigInt, 2>, x: &BigInt, m: u32) -> Vec<BigInt> {
    (0..=m).map(|j| eval(&coeff_in_w(p, j), x)).collect()
}

/// `Res_w(p, q)` as a polynomial in `z`, by evaluation at `0, 1, …, N` and interpolation.
pub fn resultant_w(p: &MPoly<BigInt, 2>, q: &MPoly<BigInt, 2>) -> UPoly {
    let (m, n) = (deg_in(p, 1), deg_in(q, 1));
    let bound = (m * deg_in(q, 0) + n * deg_in(p, 0)) as usize;
    let values: Vec<BigInt> = (0..=bound)
        .map(|k| {
            let x = BigInt::from(k);
            bareiss_det(sylvester(&specialize(p, &x, m), &specialize(q, &x, n)))
        })
        .collect();
    interpolate(&values)
}

/// Integer polynomial through `(k, values[k])`, `k = 0, 1, …`; exact Newton form.
pub fn interpolate(values: &[BigInt]) -> UPoly {
    let n = values.len();
    let mut diffs = values.to_vec();
    let mut newton = Vec::with_capacity(n);
    for j in 0..n {
        newton.push(diffs[0].clone());
        for k in 0..n - j - 1 {
            diffs[k] = &diffs[k + 1] - &diffs[k];
        }
        diffs.truncate(n - j - 1);
    }
    // Σ_j Δ^j f(0) · C(z, j)
    let mut out = vec![BigInt::zero(); n];
    let mut falling: UPoly = vec![BigInt::one()];
    let mut fact = BigInt::one();
    for (j, dj) in newton.iter().enumerate() {
        if j > 0 {
            fact *= j;
            let shift = BigInt::from(j - 1);
            let mut next = vec![BigInt::zero(); falling.len() + 1];
            for (k, c) in falling.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &shift;
            }
            falling = next;
        }
        let (q, r) = dj.div_rem(&fact);
        assert!(r.is_zero(), "interpolated values are not those of an integer polynomial");
        for (k, c) in falling.iter().enumerate() {
            out[k] += &q * c;
        }
    }
    trim(out)
}

/// Exact quotient over ℤ, or `None` when `b` does not divide `a`.
pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<UPoly> {
    let db = degree(b)?;
    let Some(da) = degree(a) else {
        return Some(Vec::new());
    };
    if da < db {
        return None;
    }
    let mut rem = a[..=da].to_vec();
    let mut q = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let (c, r) = rem[k + db].div_rem(&b[db]);
        if !r.is_zero() {
            return None;
        }
        for (i, bi) in b[..=db].iter().enumerate() {
            rem[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    rem.iter().all(Zero::is_zero).then_some(trim(q))
}

fn to_rat(p: &[BigInt]) -> Vec<Rat> {
    p.iter().map(|c| Rat::from_integer(c.clone())).collect()
}

/// Monic gcd over ℚ, returned as a primitive integer polynomial with positive leading coefficient.
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> UPoly {
    let (mut x, mut y) = (trim(to_rat(a)), trim(to_rat(b)));
    while !y.is_empty() {
        let r = rat_rem(&x, &y);
        x = y;
        y = r;
    }
    primitive(&x)
}

fn rat_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &b[db];
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

/// Scales a rational polynomial to coprime integer coefficients, leading coefficient positive.
pub fn primitive(p: &[Rat]) -> UPoly {
    let p = trim(p.to_vec());
    if p.is_empty() {
        return Vec::new();
    }
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let s = if ints.last().is_some_and(|c| c.is_negative()) { -g } else { g };
    ints.into_iter().map(|c| c / &s).collect()
}

/// Divides by `g` as often as possible; returns the quotient and the number of divisions.
pub fn remove_factor(p: &[BigInt], g: &[BigInt]) -> (UPoly, usize) {
    let mut cur = p.to_vec();
    let mut k = 0;
    if degree(g).unwrap_or(0) == 0 {
        return (cur, 0);
    }
    while let Some(q) = div_exact(&cur, g) {
        if q.is_empty() {
            break;
        }
        cur = q;
        k += 1;
    }
    (cur, k)
}

/// Divides out the integer content of a bivariate polynomial.
pub fn content_free(p: &MPoly<BigInt, 2>) -> MPoly<BigInt, 2> {
    let g = p.terms().values().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        return p.clone();
    }
    p.map(|c| c / &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ip(v: &[i64]) -> UPoly {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn mul(a: &[BigInt], b: &[BigInt]) -> UPoly {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn determinants() {
        let m = vec![ip(&[2, 0, 1]), ip(&[1, 3, 2]), ip(&[1, 1, 1])];
        assert_eq!(bareiss_det(m), BigInt::from(2 * (3 - 2) + (1 - 3)));
        // pivoting
        let m = vec![ip(&[0, 1]), ip(&[1, 0])];
        assert_eq!(bareiss_det(m), BigInt::from(-1));
        assert_eq!(bareiss_det(vec![ip(&[0, 0]), ip(&[1, 0])]), BigInt::zero());
    }

    #[test]
    fn resultant_of_a_line_and_a_conic() {
        // Res_w(w − z, w² − z − 2) = z² − z − 2
        let p: MPoly<BigInt, 2> = MPoly::from_terms([([0, 1], BigInt::from(1)), ([1, 0], BigInt::from(-1))]);
        let q: MPoly<BigInt, 2> =
            MPoly::from_terms([([0, 2], BigInt::from(1)), ([1, 0], BigInt::from(-1)), ([0, 0], BigInt::from(-2))]);
        assert_eq!(resultant_w(&p, &q), ip(&[-2, -1, 1]));
    }

    #[test]
    fn gcd_and_factor_removal() {
        let a = mul(&ip(&[-1, 1]), &ip(&[2, 0, 1]));
        let b = mul(&ip(&[-1, 1]), &ip(&[3, 1]));
        assert_eq!(gcd(&a, &b), ip(&[-1, 1]));
        let p = mul(&mul(&a, &ip(&[-1, 1])), &ip(&[5, 7]));
        let (q, k) = remove_factor(&p, &ip(&[-1, 1]));
        assert_eq!(k, 2);
        assert_eq!(q, mul(&ip(&[2, 0, 1]), &ip(&[5, 7])));
        assert_eq!(div_exact(&ip(&[1, 0, 1]), &ip(&[1, 1])), None);
    }

    proptest! {
        #[test]
        fn interpolation_recovers_polynomials(coeffs in proptest::collection::vec(-1000i64..1000, 1..12)) {
            let p = trim(ip(&coeffs));
            let n = coeffs.len() + 2;
            let values: Vec<BigInt> = (0..n).map(|k| eval(&p, &BigInt::from(k))).collect();
            prop_assert_eq!(interpolate(&values), p);
        }
    }
}

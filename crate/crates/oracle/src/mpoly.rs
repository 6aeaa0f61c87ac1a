//! Sparse multivariate polynomials over a small ring abstraction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use tropinflect_core::{GaussianRational, PuiseuxNumber, Rat};

pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(k: i64) -> Self;
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(k: i64) -> Self {
        BigInt::from(k)
    }
}

impl Ring for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(k: i64) -> Self {
        Rat::from_integer(BigInt::from(k))
    }
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(k: i64) -> Self {
        GaussianRational::from(<Rat as Ring>::from_i64(k))
    }
}

impl Ring for PuiseuxNumber {
    fn zero() -> Self {
        PuiseuxNumber::zero()
    }
    fn is_zero(&self) -> bool {
        PuiseuxNumber::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(k: i64) -> Self {
        PuiseuxNumber::monomial(<Rat as Ring>::from_i64(k), <Rat as Zero>::zero())
    }
}

/// `Σ c_e x^e` with `e ∈ ℕ^N`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<C: Ring, const N: usize> {
    terms: BTreeMap<[u32; N], C>,
}

impl<C: Ring, const N: usize> Default for MPoly<C, N> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<C: Ring, const N: usize> MPoly<C, N> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ([u32; N], C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.push(e, c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<[u32; N], C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32; N]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn push(&mut self, e: [u32; N], c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                *slot = slot.add(&c);
                if slot.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.push(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.push(*e, c.neg());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            for (b, d) in &o.terms {
                let mut e = [0u32; N];
                for k in 0..N {
                    e[k] = a[k] + b[k];
                }
                out.push(e, c.mul(d));
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut f = *e;
            f[var] -= 1;
            out.push(f, c.mul(&C::from_i64(e[var] as i64)));
        }
        out
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> MPoly<D, N> {
        MPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Largest total degree, `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Componentwise minimum exponent.
    pub fn min_exponents(&self) -> [u32; N] {
        let mut m = [u32::MAX; N];
        for e in self.terms.keys() {
            for k in 0..N {
                m[k] = m[k].min(e[k]);
            }
        }
        if self.terms.is_empty() {
            [0; N]
        } else {
            m
        }
    }

    /// Division by the monomial `x^m`; every exponent must dominate `m`.
    pub fn divide_monomial(&self, m: &[u32; N]) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| {
            let mut f = *e;
            for k in 0..N {
                f[k] -= m[k];
            }
            (f, c.clone())
        }))
    }
}

/// `F(z, w, u) = u^d P(z/u, w/u)`.
pub fn homogenize<C: Ring>(p: &MPoly<C, 2>, d: u32) -> MPoly<C, 3> {
    MPoly::from_terms(p.terms().iter().map(|(e, c)| ([e[0], e[1], d - e[0] - e[1]], c.clone())))
}

/// `F(z, w, 1)`.
pub fn dehomogenize<C: Ring>(f: &MPoly<C, 3>) -> MPoly<C, 2> {
    MPoly::from_terms(f.terms().iter().map(|(e, c)| ([e[0], e[1]], c.clone())))
}

/// Determinant of the matrix of second partial derivatives.
pub fn hessian3<C: Ring>(f: &MPoly<C, 3>) -> MPoly<C, 3> {
    let d: Vec<MPoly<C, 3>> = (0..3).map(|k| f.derivative(k)).collect();
    let h = |a: usize, b: usize| d[a].derivative(b);
    let (xx, yy, uu, xy, xu, yu) = (h(0, 0), h(1, 1), h(2, 2), h(0, 1), h(0, 2), h(1, 2));
    let m1 = xx.mul(&yy.mul(&uu).sub(&yu.mul(&yu)));
    let m2 = xy.mul(&xy.mul(&uu).sub(&yu.mul(&xu)));
    let m3 = xu.mul(&xy.mul(&yu).sub(&yy.mul(&xu)));
    m1.sub(&m2).add(&m3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[([u32; 2], i64)]) -> MPoly<BigInt, 2> {
        MPoly::from_terms(terms.iter().map(|(e, c)| (*e, BigInt::from(*c))))
    }

    #[test]
    fn product_and_derivative() {
        let a = p(&[([1, 0], 1), ([0, 0], 1)]);
        let sq = a.mul(&a);
        assert_eq!(sq, p(&[([2, 0], 1), ([1, 0], 2), ([0, 0], 1)]));
        assert_eq!(sq.derivative(0), p(&[([1, 0], 2), ([0, 0], 2)]));
        assert!(sq.sub(&sq).is_zero());
    }

    #[test]
    fn hessian_of_a_smooth_cubic() {
        // Fermat cubic: Hess(x³+y³+u³) = 216·xyu.
        let f: MPoly<BigInt, 3> =
            MPoly::from_terms([([3, 0, 0], BigInt::from(1)), ([0, 3, 0], BigInt::from(1)), ([0, 0, 3], BigInt::from(1))]);
        let h = hessian3(&f);
        assert_eq!(h, MPoly::from_terms([([1, 1, 1], BigInt::from(216))]));
        // a conic has constant Hessian, a line a vanishing one
        let line: MPoly<BigInt, 3> = MPoly::from_terms([([1, 0, 0], BigInt::from(1)), ([0, 1, 0], BigInt::from(1))]);
        assert!(hessian3(&line).is_zero());
    }

    #[test]
    fn homogenize_round_trip() {
        let a = p(&[([2, 0], 3), ([0, 1], -1), ([0, 0], 5)]);
        let f = homogenize(&a, 2);
        assert_eq!(f.total_degree(), Some(2));
        assert!(f.terms().keys().all(|e| e.iter().sum::<u32>() == 2));
        assert_eq!(dehomogenize(&f), a);
    }
}

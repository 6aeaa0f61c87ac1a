//! Finite generalized Puiseux sums `Σ α_r t^r` with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_rat, parse_rat, rat, to_f64, Rat};

/// Exact complex rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        Self::new(Rat::one(), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

impl From<Rat> for GaussianRational {
    fn from(re: Rat) -> Self {
        Self::new(re, Rat::zero())
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rat(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", fmt_rat(&self.im))
        } else {
            write!(f, "({}{}{}i)", fmt_rat(&self.re), if self.im.is_negative() { "" } else { "+" }, fmt_rat(&self.im))
        }
    }
}

/// Finite sum `Σ α_r t^r`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PuiseuxNumber {
    terms: BTreeMap<Rat, GaussianRational>,
}

impl PuiseuxNumber {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rat::one(), Rat::zero())
    }

    /// `c · t^r`.
    pub fn monomial(c: Rat, r: Rat) -> Self {
        Self::gaussian_monomial(GaussianRational::from(c), r)
    }

    pub fn gaussian_monomial(c: GaussianRational, r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(r, c);
        }
        Self { terms }
    }

    /// From integer `(exponent, coefficient)` pairs.
    pub fn from_terms(pairs: &[(i64, i64)]) -> Self {
        pairs.iter().fold(Self::zero(), |acc, &(r, c)| &acc + &Self::monomial(rat(c), rat(r)))
    }

    pub fn from_rational_terms(pairs: impl IntoIterator<Item = (Rat, GaussianRational)>) -> Self {
        pairs.into_iter().fold(Self::zero(), |acc, (r, c)| &acc + &Self::gaussian_monomial(c, r))
    }

    pub fn terms(&self) -> &BTreeMap<Rat, GaussianRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<Rat> {
        self.terms.keys().next().cloned()
    }

    /// `val(a) = −min{r : α_r ≠ 0}`; `None` for zero.
    pub fn val(&self) -> Option<Rat> {
        self.min_exponent().map(|r| -r)
    }

    pub fn leading_coeff(&self) -> GaussianRational {
        self.terms.values().next().cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn coeff_at(&self, r: &Rat) -> GaussianRational {
        self.terms.get(r).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// Multiplication by `t^s`.
    pub fn shift_exponents(&self, s: &Rat) -> Self {
        Self { terms: self.terms.iter().map(|(r, c)| (r + s, c.clone())).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (r, a) in &self.terms {
            out.push(r.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(r, c)| (r.clone(), c.conj())).collect() }
    }

    /// True when every exponent is an integer.
    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|r| r.is_integer())
    }

    /// Double-precision value at `0 < t < 1`; `None` on overflow.
    pub fn eval_at_f64(&self, t: f64) -> Option<(f64, f64)> {
        assert!(t > 0.0 && t < 1.0, "evaluation needs 0 < t < 1");
        let (mut re, mut im) = (0.0, 0.0);
        for (r, c) in &self.terms {
            let p = t.powf(to_f64(r));
            let (a, b) = c.to_f64();
            re += a * p;
            im += b * p;
        }
        (re.is_finite() && im.is_finite()).then_some((re, im))
    }

    fn push(&mut self, r: Rat, c: GaussianRational) {
        let entry = self.terms.entry(r.clone()).or_insert_with(GaussianRational::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&r);
        }
    }
}

impl Add for &PuiseuxNumber {
    type Output = PuiseuxNumber;
    fn add(self, o: Self) -> PuiseuxNumber {
        let mut out = self.clone();
        for (r, c) in &o.terms {
            out.push(r.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PuiseuxNumber {
    type Output = PuiseuxNumber;
    fn sub(self, o: Self) -> PuiseuxNumber {
        self + &(-o)
    }
}

impl Neg for &PuiseuxNumber {
    type Output = PuiseuxNumber;
    fn neg(self) -> PuiseuxNumber {
        PuiseuxNumber { terms: self.terms.iter().map(|(r, c)| (r.clone(), -c)).collect() }
    }
}

impl Mul for &PuiseuxNumber {
    type Output = PuiseuxNumber;
    fn mul(self, o: Self) -> PuiseuxNumber {
        let mut out = PuiseuxNumber::zero();
        for (r, a) in &self.terms {
            for (s, b) in &o.terms {
                out.push(r + s, a * b);
            }
        }
        out
    }
}

impl fmt::Display for PuiseuxNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, c)| if r.is_zero() { c.to_string() } else { format!("{c}*t^{}", fmt_rat(r)) })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// JSON form: `[[r, "p/q"], [r, "re", "im"], …]`; numbers or strings are accepted.
impl Serialize for PuiseuxNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .terms
            .iter()
            .map(|(r, c)| {
                let mut row = vec![fmt_rat(r), fmt_rat(&c.re)];
                if !c.im.is_zero() {
                    row.push(fmt_rat(&c.im));
                }
                row
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PuiseuxNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        let field = |v: &serde_json::Value| -> Result<Rat, D::Error> {
            let text = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                other => return Err(serde::de::Error::custom(format!("expected a rational, found {other}"))),
            };
            parse_rat(&text).map_err(serde::de::Error::custom)
        };
        let mut out = PuiseuxNumber::zero();
        for row in rows {
            if row.len() != 2 && row.len() != 3 {
                return Err(serde::de::Error::custom("each term is [exponent, re] or [exponent, re, im]"));
            }
            let r = field(&row[0])?;
            let re = field(&row[1])?;
            let im = if row.len() == 3 { field(&row[2])? } else { Rat::zero() };
            out = &out + &PuiseuxNumber::gaussian_monomial(GaussianRational::new(re, im), r);
        }
        Ok(out)
    }
}

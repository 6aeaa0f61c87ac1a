//! Bivariate max-plus polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TropError};
use crate::geom::{LatticePoint, LatticePolygon, RationalPoint};
use crate::puiseux::{GaussianRational, PuiseuxNumber};
use crate::rational::{fmt_rat, rat, Rat};
use crate::subdivision::DualSubdivision;

/// Tropical polynomial `max_{(i,j)} (a_ij + i x + j y)` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalPolynomial {
    terms: BTreeMap<LatticePoint, Rat>,
}

impl TropicalPolynomial {
    /// Builds a polynomial; duplicate exponents keep the larger coefficient.
    pub fn from_terms(terms: impl IntoIterator<Item = (LatticePoint, Rat)>) -> Result<Self> {
        let mut map: BTreeMap<LatticePoint, Rat> = BTreeMap::new();
        for (e, c) in terms {
            if e.i < 0 || e.j < 0 {
                return Err(TropError::Invalid(format!("negative exponent {e}")));
            }
            match map.get_mut(&e) {
                Some(old) if *old >= c => {}
                Some(old) => *old = c,
                None => {
                    map.insert(e, c);
                }
            }
        }
        if map.is_empty() {
            return Err(TropError::EmptyPolynomial);
        }
        Ok(Self { terms: map })
    }

    /// Convenience constructor from integer triples `(i, j, a_ij)`.
    pub fn from_int_terms(terms: &[(i64, i64, i64)]) -> Result<Self> {
        Self::from_terms(terms.iter().map(|&(i, j, a)| (LatticePoint::new(i, j), rat(a))))
    }

    /// The standard tropical line `max(x - px, y - py, 0)` with vertex `p`.
    pub fn line_through(p: &RationalPoint) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(LatticePoint::new(0, 0), Rat::zero());
        terms.insert(LatticePoint::new(1, 0), -p.x.clone());
        terms.insert(LatticePoint::new(0, 1), -p.y.clone());
        Self { terms }
    }

    pub fn terms(&self) -> &BTreeMap<LatticePoint, Rat> {
        &self.terms
    }

    pub fn coeff(&self, e: LatticePoint) -> Option<&Rat> {
        self.terms.get(&e)
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    pub fn newton_polygon(&self) -> LatticePolygon {
        LatticePolygon::hull(&self.support())
    }

    /// Total degree when the Newton polygon is the standard triangle `T_d`.
    pub fn standard_degree(&self) -> Option<u32> {
        self.newton_polygon().standard_triangle_degree()
    }

    /// Maximum value at `x` and the exponents attaining it.
    pub fn eval(&self, x: &RationalPoint) -> (Rat, Vec<LatticePoint>) {
        let mut best: Option<Rat> = None;
        let mut arg = Vec::new();
        for (e, a) in &self.terms {
            let v = a + x.pair(*e);
            match &best {
                Some(b) if v < *b => {}
                Some(b) if v == *b => arg.push(*e),
                _ => {
                    best = Some(v);
                    arg.clear();
                    arg.push(*e);
                }
            }
        }
        (best.expect("polynomial has at least one term"), arg)
    }

    pub fn value(&self, x: &RationalPoint) -> Rat {
        self.eval(x).0
    }

    /// True when the maximum is attained at least twice, i.e. `x ∈ V(P)`.
    pub fn vanishes_at(&self, x: &RationalPoint) -> bool {
        self.eval(x).1.len() >= 2
    }

    /// Tropical product (max-plus convolution).
    pub fn product(&self, other: &Self) -> Self {
        let mut map: BTreeMap<LatticePoint, Rat> = BTreeMap::new();
        for (e, a) in &self.terms {
            for (f, b) in &other.terms {
                let c = a + b;
                let k = *e + *f;
                match map.get_mut(&k) {
                    Some(old) if *old >= c => {}
                    Some(old) => *old = c,
                    None => {
                        map.insert(k, c);
                    }
                }
            }
        }
        Self { terms: map }
    }

    /// Adds the affine function `c + α i + β j` to every coefficient.
    /// The curve moves by `-(α, β)`.
    pub fn add_affine(&self, c: &Rat, alpha: &Rat, beta: &Rat) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, a)| (*e, a + c + alpha * rat(e.i) + beta * rat(e.j)))
            .collect();
        Self { terms }
    }

    /// Multiplies every coefficient by `k` (scales the curve by `k`).
    pub fn scale_coefficients(&self, k: &Rat) -> Self {
        Self { terms: self.terms.iter().map(|(e, a)| (*e, a * k)).collect() }
    }

    pub fn dual_subdivision(&self) -> DualSubdivision {
        DualSubdivision::new(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| TropError::Parse { pos: e.column(), msg: e.to_string() })
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    i: i64,
    j: i64,
    #[serde(with = "crate::rational::serde_rat")]
    coeff: Rat,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

impl Serialize for TropicalPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            terms: self.terms.iter().map(|(e, c)| TermJson { i: e.i, j: e.j, coeff: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TropicalPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        Self::from_terms(raw.terms.into_iter().map(|t| (LatticePoint::new(t.i, t.j), t.coeff)))
            .map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TropicalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, a) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono = match (e.i, e.j) {
                (0, 0) => String::new(),
                _ => {
                    let mut parts = Vec::new();
                    match e.i {
                        0 => {}
                        1 => parts.push("x".to_string()),
                        k => parts.push(format!("x^{k}")),
                    }
                    match e.j {
                        0 => {}
                        1 => parts.push("y".to_string()),
                        k => parts.push(format!("y^{k}")),
                    }
                    parts.join("*")
                }
            };
            if mono.is_empty() {
                write!(f, "{}", fmt_rat(a))?;
            } else if a.is_zero() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_rat(a))?;
            }
        }
        Ok(())
    }
}

impl FromStr for TropicalPolynomial {
    type Err = TropError;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Parses `c`, `c*x^i*y^j`, `2x`, `x*y`, ... joined by `+`.
/// An omitted coefficient is `0`, the tropical unit.
pub fn parse(text: &str) -> Result<TropicalPolynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(TropError::EmptyPolynomial);
    }
    let mut terms = Vec::new();
    loop {
        terms.push(p.term()?);
        p.skip_ws();
        if p.at_end() {
            break;
        }
        p.expect(b'+')?;
    }
    TropicalPolynomial::from_terms(terms)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> TropError {
        TropError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn coefficient(&mut self) -> Result<Option<Rat>> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
            self.skip_ws();
        }
        let int_part = self.digits().to_string();
        let mut frac = String::new();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            frac = self.digits().to_string();
            if int_part.is_empty() && frac.is_empty() {
                return Err(self.err("malformed decimal"));
            }
        }
        if int_part.is_empty() && frac.is_empty() {
            if self.pos != start {
                return Err(self.err("expected a number after the sign"));
            }
            return Ok(None);
        }
        let mut literal: String = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        self.skip_ws();
        if self.peek() == Some(b'/') {
            if !frac.is_empty() {
                return Err(self.err("a fraction needs an integer numerator"));
            }
            self.pos += 1;
            self.skip_ws();
            let den = self.digits().to_string();
            if den.is_empty() {
                return Err(self.err("missing denominator"));
            }
            literal = format!("{literal}/{den}");
        }
        crate::rational::parse_rat(&literal).map(Some).map_err(|_| self.err(format!("bad number `{literal}`")))
    }

    fn factor(&mut self) -> Result<Option<LatticePoint>> {
        self.skip_ws();
        let var = match self.peek() {
            Some(b'x') => LatticePoint::new(1, 0),
            Some(b'y') => LatticePoint::new(0, 1),
            _ => return Ok(None),
        };
        self.pos += 1;
        self.skip_ws();
        let mut k = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let d = self.digits();
            if d.is_empty() {
                return Err(self.err("missing exponent"));
            }
            k = d.parse::<i64>().map_err(|_| self.err("exponent too large"))?;
        }
        Ok(Some(var.scale(k)))
    }

    fn term(&mut self) -> Result<(LatticePoint, Rat)> {
        let start = self.pos;
        let coeff = self.coefficient()?;
        let mut exp = LatticePoint::new(0, 0);
        let mut any = false;
        loop {
            self.skip_ws();
            let save = self.pos;
            let had_star = self.peek() == Some(b'*');
            if had_star {
                self.pos += 1;
            }
            match self.factor()? {
                Some(f) => {
                    exp = exp + f;
                    any = true;
                }
                None => {
                    if had_star {
                        return Err(self.err("expected `x` or `y` after `*`"));
                    }
                    self.pos = save;
                    break;
                }
            }
        }
        if coeff.is_none() && !any {
            return Err(TropError::Parse { pos: start, msg: "empty term".into() });
        }
        Ok((exp, coeff.unwrap_or_else(Rat::zero)))
    }
}

/// Polynomial whose coefficients are finite Puiseux sums; its tropicalization is coefficientwise `val`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrichedPolynomial {
    terms: BTreeMap<LatticePoint, PuiseuxNumber>,
}

impl EnrichedPolynomial {
    pub fn new(terms: impl IntoIterator<Item = (LatticePoint, PuiseuxNumber)>) -> Result<Self> {
        let mut map: BTreeMap<LatticePoint, PuiseuxNumber> = BTreeMap::new();
        for (e, c) in terms {
            if e.i < 0 || e.j < 0 {
                return Err(TropError::Invalid(format!("negative exponent {e}")));
            }
            let slot = map.entry(e).or_insert_with(PuiseuxNumber::zero);
            *slot = &*slot + &c;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(TropError::EmptyPolynomial);
        }
        Ok(Self { terms: map })
    }

    pub fn terms(&self) -> &BTreeMap<LatticePoint, PuiseuxNumber> {
        &self.terms
    }

    pub fn tropicalize(&self) -> TropicalPolynomial {
        TropicalPolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, c.val().expect("nonzero coefficient"))).collect(),
        }
    }

    /// Initial form on a cell `F` (a 2-cell, an edge or a vertex of the dual subdivision).
    pub fn initial_form(&self, cell: &LatticePolygon) -> Result<BTreeMap<LatticePoint, GaussianRational>> {
        let trop = self.tropicalize();
        let sub = trop.dual_subdivision();
        if !sub.is_face(cell) {
            return Err(TropError::NotACell(format!("{:?}", cell.vertices())));
        }
        let (alpha, gamma) = sub.face_support(cell).expect("face has a support");
        self.initial_form_with_support(cell, &alpha, &gamma)
    }

    /// Initial form computed by rescaling with an explicit support `φ(i) = α + ⟨γ, i⟩`:
    /// the `t^0` coefficient of `c_i t^{φ(i)}` for each lattice point of the cell.
    pub fn initial_form_with_support(
        &self,
        cell: &LatticePolygon,
        alpha: &Rat,
        gamma: &(Rat, Rat),
    ) -> Result<BTreeMap<LatticePoint, GaussianRational>> {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let shift = alpha + &gamma.0 * rat(e.i) + &gamma.1 * rat(e.j);
            let scaled = c.shift_exponents(&shift);
            if let Some(r) = scaled.min_exponent() {
                if r < Rat::zero() {
                    return Err(TropError::Invalid(format!("support lies below the coefficient at {e}")));
                }
            }
            if !cell.contains(*e) {
                continue;
            }
            let lead = scaled.coeff_at(&Rat::zero());
            if !lead.is_zero() {
                out.insert(*e, lead);
            }
        }
        Ok(out)
    }
}

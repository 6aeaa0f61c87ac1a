//! Exact lattice geometry in the plane.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TropError};
use crate::rational::{fmt_rat, rat, Rat};

/// Integer point or vector of ℤ².
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub i: i64,
    pub j: i64,
}

impl LatticePoint {
    pub const fn new(i: i64, j: i64) -> Self {
        Self { i, j }
    }

    pub fn is_zero(&self) -> bool {
        self.i == 0 && self.j == 0
    }

    pub fn cross(&self, other: &Self) -> i64 {
        self.i * other.j - self.j * other.i
    }

    pub fn dot(&self, other: &Self) -> i64 {
        self.i * other.i + self.j * other.j
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.i * k, self.j * k)
    }

    pub fn to_rational(&self) -> RationalPoint {
        RationalPoint::new(rat(self.i), rat(self.j))
    }
}

impl Add for LatticePoint {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.i + o.i, self.j + o.j)
    }
}

impl Sub for LatticePoint {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.i - o.i, self.j - o.j)
    }
}

impl Neg for LatticePoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.i, -self.j)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Point of ℚ² with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint {
    pub x: Rat,
    pub y: Rat,
}

impl RationalPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(Rat::zero(), Rat::zero())
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(rat(x), rat(y))
    }

    /// `self + t·dir` for an integer direction.
    pub fn offset(&self, dir: LatticePoint, t: &Rat) -> Self {
        Self::new(&self.x + t * rat(dir.i), &self.y + t * rat(dir.j))
    }

    pub fn sub(&self, other: &Self) -> (Rat, Rat) {
        (&self.x - &other.x, &self.y - &other.y)
    }

    /// Pairing ⟨self, dir⟩ with an integer vector.
    pub fn pair(&self, dir: LatticePoint) -> Rat {
        &self.x * rat(dir.i) + &self.y * rat(dir.j)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (crate::rational::to_f64(&self.x), crate::rational::to_f64(&self.y))
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", fmt_rat(&self.x), fmt_rat(&self.y))
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [fmt_rat(&self.x), fmt_rat(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let p = |s: &str| crate::rational::parse_rat(s).map_err(serde::de::Error::custom);
        Ok(Self::new(p(&x)?, p(&y)?))
    }
}

/// Primitive integer vector with the orientation of `v`.
pub fn primitive_direction(v: LatticePoint) -> Result<LatticePoint> {
    if v.is_zero() {
        return Err(TropError::ZeroVector);
    }
    let g = v.i.gcd(&v.j);
    Ok(LatticePoint::new(v.i / g, v.j / g))
}

/// Number of lattice points on `[a, b]` minus one.
pub fn lattice_length(a: LatticePoint, b: LatticePoint) -> Result<i64> {
    if a == b {
        return Err(TropError::DegenerateSegment);
    }
    let d = b - a;
    Ok(d.i.gcd(&d.j))
}

/// Splits a rational vector into `(λ, u)` with `u` primitive and `λ > 0`, so that `v = λ·u`.
/// `λ` is the lattice length of the vector.
pub fn rational_direction(dx: &Rat, dy: &Rat) -> Result<(Rat, LatticePoint)> {
    if dx.is_zero() && dy.is_zero() {
        return Err(TropError::ZeroVector);
    }
    // clear denominators, then strip the content
    let l = dx.denom().lcm(dy.denom());
    let nx = (dx * Rat::from_integer(l.clone())).to_integer();
    let ny = (dy * Rat::from_integer(l.clone())).to_integer();
    let g = nx.gcd(&ny);
    let ux: i64 = (&nx / &g).try_into().map_err(|_| TropError::Invalid("direction overflow".into()))?;
    let uy: i64 = (&ny / &g).try_into().map_err(|_| TropError::Invalid("direction overflow".into()))?;
    Ok((Rat::new(g, l), LatticePoint::new(ux, uy)))
}

/// Sign of the orientation of the triangle `(a, b, c)`: positive when counterclockwise.
pub fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    (b - a).cross(&(c - a)).signum()
}

/// Convex lattice polygon with vertices listed counterclockwise from the lexicographic minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

impl LatticePolygon {
    /// Convex hull of arbitrary lattice points (monotone chain, collinear points dropped).
    pub fn hull(points: &[LatticePoint]) -> Self {
        let mut pts: Vec<LatticePoint> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 {
            return Self { vertices: pts };
        }
        let mut lower: Vec<LatticePoint> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<LatticePoint> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() == 2 && lower[0] == lower[1] {
            lower.pop();
        }
        // collinear input collapses to its two extreme points
        Self { vertices: lower }
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// 0 for a point, 1 for a segment, 2 for a polygon.
    pub fn dimension(&self) -> usize {
        match self.vertices.len() {
            0 | 1 => 0,
            2 => 1,
            _ => 2,
        }
    }

    /// Edges as `(start, end)` pairs in counterclockwise order.
    pub fn edges(&self) -> Vec<(LatticePoint, LatticePoint)> {
        let n = self.vertices.len();
        if n < 3 {
            return if n == 2 { vec![(self.vertices[0], self.vertices[1])] } else { vec![] };
        }
        (0..n).map(|k| (self.vertices[k], self.vertices[(k + 1) % n])).collect()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0] == p,
            2 => on_segment(self.vertices[0], self.vertices[1], p),
            _ => self.edges().iter().all(|&(a, b)| orient(a, b, p) >= 0),
        }
    }

    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        if self.vertices.is_empty() {
            return vec![];
        }
        let (mut imin, mut imax, mut jmin, mut jmax) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for v in &self.vertices {
            imin = imin.min(v.i);
            imax = imax.max(v.i);
            jmin = jmin.min(v.j);
            jmax = jmax.max(v.j);
        }
        let mut out = Vec::new();
        for i in imin..=imax {
            for j in jmin..=jmax {
                let p = LatticePoint::new(i, j);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn translate(&self, by: LatticePoint) -> Self {
        Self::hull(&self.vertices.iter().map(|&v| v + by).collect::<Vec<_>>())
    }

    /// True when the polygon is a translate of the unit simplex `T_1`.
    pub fn is_unit_simplex_translate(&self) -> bool {
        if self.vertices.len() != 3 {
            return false;
        }
        let base = self.vertices[0];
        let shape: Vec<LatticePoint> = self.vertices.iter().map(|&v| v - base).collect();
        shape == [LatticePoint::new(0, 0), LatticePoint::new(1, 0), LatticePoint::new(0, 1)]
    }

    /// True when the polygon equals `T_d` for some `d ≥ 1`, returning `d`.
    pub fn standard_triangle_degree(&self) -> Option<u32> {
        if self.vertices.len() != 3 || self.vertices[0] != LatticePoint::new(0, 0) {
            return None;
        }
        let d = self.vertices[1].i;
        if d >= 1 && self.vertices[1] == LatticePoint::new(d, 0) && self.vertices[2] == LatticePoint::new(0, d) {
            Some(d as u32)
        } else {
            None
        }
    }
}

fn on_segment(a: LatticePoint, b: LatticePoint, p: LatticePoint) -> bool {
    (b - a).cross(&(p - a)) == 0 && (p - a).dot(&(p - b)) <= 0
}

/// Twice the Euclidean area, i.e. the integer (normalized) area.
pub fn integer_area(p: &LatticePolygon) -> i64 {
    let v = p.vertices();
    if v.len() < 3 {
        return 0;
    }
    let twice: i64 = (0..v.len()).map(|k| v[k].cross(&v[(k + 1) % v.len()])).sum();
    twice.abs()
}

/// Minkowski sum of two lattice polygons.
pub fn minkowski_sum(a: &LatticePolygon, b: &LatticePolygon) -> LatticePolygon {
    let mut pts = Vec::new();
    for &p in a.vertices() {
        for &q in b.vertices() {
            pts.push(p + q);
        }
    }
    LatticePolygon::hull(&pts)
}

/// Standard triangle `T_d`.
pub fn standard_triangle(d: i64) -> LatticePolygon {
    LatticePolygon::hull(&[LatticePoint::new(0, 0), LatticePoint::new(d, 0), LatticePoint::new(0, d)])
}

/// Exact geometric pieces of a plane tropical curve: points, segments and rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Piece {
    Point(RationalPoint),
    Segment(RationalPoint, RationalPoint),
    Ray(RationalPoint, LatticePoint),
}

impl Piece {
    pub fn is_bounded(&self) -> bool {
        !matches!(self, Piece::Ray(..))
    }

    /// Parametrization `origin + s·dir`, `s ∈ [0, upper]` (`upper = None` for rays).
    /// Points use a zero direction.
    fn param(&self) -> (RationalPoint, (Rat, Rat), Option<Rat>) {
        match self {
            Piece::Point(p) => (p.clone(), (Rat::zero(), Rat::zero()), Some(Rat::zero())),
            Piece::Segment(a, b) => (a.clone(), b.sub(a), Some(rat(1))),
            Piece::Ray(o, d) => (o.clone(), (rat(d.i), rat(d.j)), None),
        }
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        match self {
            Piece::Point(q) => q == p,
            Piece::Segment(a, b) => {
                let (ux, uy) = b.sub(a);
                let (vx, vy) = p.sub(a);
                if !(&ux * &vy - &uy * &vx).is_zero() {
                    return false;
                }
                let dot = &ux * &vx + &uy * &vy;
                let len2 = &ux * &ux + &uy * &uy;
                !dot.is_negative() && dot <= len2
            }
            Piece::Ray(o, d) => {
                let (vx, vy) = p.sub(o);
                let (ux, uy) = (rat(d.i), rat(d.j));
                (&ux * &vy - &uy * &vx).is_zero() && !(&ux * &vx + &uy * &vy).is_negative()
            }
        }
    }

    /// Exact intersection of two pieces.
    pub fn intersect(&self, other: &Piece) -> Option<Piece> {
        if let Piece::Point(p) = self {
            return other.contains(p).then(|| Piece::Point(p.clone()));
        }
        if let Piece::Point(p) = other {
            return self.contains(p).then(|| Piece::Point(p.clone()));
        }
        let (p, (ux, uy), umax) = self.param();
        let (q, (vx, vy), vmax) = other.param();
        let det = &ux * &vy - &uy * &vx;
        let (wx, wy) = q.sub(&p);
        if !det.is_zero() {
            // p + s u = q + t v
            let s = (&wx * &vy - &wy * &vx) / &det;
            let t = (&wx * &uy - &wy * &ux) / &det;
            let in_range = |x: &Rat, m: &Option<Rat>| !x.is_negative() && m.as_ref().map_or(true, |m| x <= m);
            if in_range(&s, &umax) && in_range(&t, &vmax) {
                return Some(Piece::Point(RationalPoint::new(&p.x + &s * &ux, &p.y + &s * &uy)));
            }
            return None;
        }
        // parallel: must be collinear
        if !(&wx * &uy - &wy * &ux).is_zero() {
            return None;
        }
        // express the other piece in this piece's parameter
        let uu = &ux * &ux + &uy * &uy;
        let to_s = |x: &Rat, y: &Rat| ((x - &p.x) * &ux + (y - &p.y) * &uy) / &uu;
        let s0 = to_s(&q.x, &q.y);
        let dir_sign = (&ux * &vx + &uy * &vy).signum();
        let vlen = (&vx * &ux + &vy * &uy) / &uu; // parameter speed of the other piece
        // interval of the other piece in s-coordinates
        let (mut lo, mut hi): (Option<Rat>, Option<Rat>) = match &vmax {
            Some(m) => {
                let s1 = &s0 + &vlen * m;
                if s0 <= s1 {
                    (Some(s0), Some(s1))
                } else {
                    (Some(s1), Some(s0))
                }
            }
            None => {
                if dir_sign.is_positive() {
                    (Some(s0), None)
                } else {
                    (None, Some(s0))
                }
            }
        };
        // clip against [0, umax]
        lo = Some(match lo {
            Some(l) if l > Rat::zero() => l,
            _ => Rat::zero(),
        });
        hi = match (hi, &umax) {
            (Some(h), Some(m)) => Some(if &h < m { h } else { m.clone() }),
            (Some(h), None) => Some(h),
            (None, Some(m)) => Some(m.clone()),
            (None, None) => None,
        };
        let lo = lo.unwrap();
        let at = |s: &Rat| RationalPoint::new(&p.x + s * &ux, &p.y + s * &uy);
        match hi {
            Some(h) if h < lo => None,
            Some(h) if h == lo => Some(Piece::Point(at(&lo))),
            Some(h) => Some(Piece::Segment(at(&lo), at(&h))),
            None => {
                let dir = match self {
                    Piece::Ray(_, d) => *d,
                    _ => unreachable!("unbounded overlap requires two rays"),
                };
                Some(Piece::Ray(at(&lo), dir))
            }
        }
    }

    /// Squared Euclidean distance from a point to the piece.
    pub fn distance2(&self, x: &RationalPoint) -> Rat {
        let (p, (ux, uy), umax) = self.param();
        let uu = &ux * &ux + &uy * &uy;
        let (wx, wy) = x.sub(&p);
        let mut s = if uu.is_zero() { Rat::zero() } else { (&wx * &ux + &wy * &uy) / &uu };
        if s.is_negative() {
            s = Rat::zero();
        }
        if let Some(m) = umax {
            if s > m {
                s = m;
            }
        }
        let dx = &wx - &s * &ux;
        let dy = &wy - &s * &uy;
        &dx * &dx + &dy * &dy
    }

    pub fn endpoints(&self) -> Vec<RationalPoint> {
        match self {
            Piece::Point(p) => vec![p.clone()],
            Piece::Segment(a, b) => vec![a.clone(), b.clone()],
            Piece::Ray(o, _) => vec![o.clone()],
        }
    }

    /// Translate by an integer vector.
    pub fn translate(&self, by: LatticePoint) -> Piece {
        let one = rat(1);
        match self {
            Piece::Point(p) => Piece::Point(p.offset(by, &one)),
            Piece::Segment(a, b) => Piece::Segment(a.offset(by, &one), b.offset(by, &one)),
            Piece::Ray(o, d) => Piece::Ray(o.offset(by, &one), *d),
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Point(p) => write!(f, "point {p}"),
            Piece::Segment(a, b) => write!(f, "segment {a}–{b}"),
            Piece::Ray(o, d) => write!(f, "ray {o} + s{d}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum PieceJson {
    Point { at: RationalPoint },
    Segment { from: RationalPoint, to: RationalPoint },
    Ray { from: RationalPoint, dir: [i64; 2] },
}

impl Serialize for Piece {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.clone() {
            Piece::Point(at) => PieceJson::Point { at },
            Piece::Segment(from, to) => PieceJson::Segment { from, to },
            Piece::Ray(from, d) => PieceJson::Ray { from, dir: [d.i, d.j] },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Piece {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match PieceJson::deserialize(d)? {
            PieceJson::Point { at } => Piece::Point(at),
            PieceJson::Segment { from, to } => Piece::Segment(from, to),
            PieceJson::Ray { from, dir } => Piece::Ray(from, LatticePoint::new(dir[0], dir[1])),
        })
    }
}

/// Indices of pieces grouped into connected components of their union, in first-seen order.
pub fn connected_groups(pieces: &[Piece]) -> Vec<Vec<usize>> {
    let n = pieces.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..n {
        for b in a + 1..n {
            if pieces[a].intersect(&pieces[b]).is_some() {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for k in 0..n {
        let r = find(&mut parent, k);
        let g = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(k);
    }
    groups
}

/// True when `t` is a non-negative combination of `gens`.
pub fn in_cone(t: LatticePoint, gens: &[LatticePoint]) -> bool {
    if t.is_zero() {
        return true;
    }
    for (k, &a) in gens.iter().enumerate() {
        if a.cross(&t) == 0 && a.dot(&t) > 0 {
            return true;
        }
        for &b in &gens[k + 1..] {
            let c = a.cross(&b);
            if c == 0 {
                // opposite generators span a line
                if a.dot(&b) < 0 && a.cross(&t) == 0 {
                    return true;
                }
                continue;
            }
            let (lo, hi) = if c > 0 { (a, b) } else { (b, a) };
            if lo.cross(&t) >= 0 && t.cross(&hi) >= 0 {
                return true;
            }
        }
    }
    false
}

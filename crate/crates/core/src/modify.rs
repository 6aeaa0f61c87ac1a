//! Tropical modifications of the plane and of plane curves, as weighted graphs in ℚ³.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{build_curve, TropicalCurve};
use crate::error::{Result, TropError};
use crate::geom::{integer_area, rational_direction, LatticePoint, Piece, RationalPoint};
use crate::rational::{fmt_rat, rat, Rat};
use crate::troppoly::TropicalPolynomial;

/// Point of ℚ³, serialized as three rational strings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpacePoint {
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
}

impl SpacePoint {
    pub fn new(x: Rat, y: Rat, z: Rat) -> Self {
        Self { x, y, z }
    }

    pub fn projection(&self) -> RationalPoint {
        RationalPoint::new(self.x.clone(), self.y.clone())
    }
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", fmt_rat(&self.x), fmt_rat(&self.y), fmt_rat(&self.z))
    }
}

impl Serialize for SpacePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [fmt_rat(&self.x), fmt_rat(&self.y), fmt_rat(&self.z)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpacePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y, z] = <[String; 3]>::deserialize(d)?;
        let p = |s: &str| crate::rational::parse_rat(s).map_err(serde::de::Error::custom);
        Ok(Self::new(p(&x)?, p(&y)?, p(&z)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceEdge {
    pub v1: usize,
    pub v2: usize,
    pub weight: i64,
    /// Primitive direction from `v1` to `v2`.
    pub dir: [i64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayKind {
    /// Lift of an unbounded edge of the base.
    Horizontal,
    /// Downward ray bounding the wall facets under a vertex of `V(P)`.
    Wall,
    /// Downward end over a divisor point.
    VerticalEnd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceRay {
    pub v: usize,
    pub dir: [i64; 3],
    pub weight: i64,
    pub kind: RayKind,
}

/// Wall facet `{(x, z) : x ∈ base, z ≤ P(x)}` of a modified plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallFacet {
    pub base: Piece,
    pub weight: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceGraph {
    pub vertices: Vec<SpacePoint>,
    pub edges: Vec<SpaceEdge>,
    pub rays: Vec<SpaceRay>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub walls: Vec<WallFacet>,
}

impl SpaceGraph {
    /// `Σ w·dir` over everything leaving each vertex.
    pub fn balancing_residuals(&self) -> Vec<[i64; 3]> {
        let mut res = vec![[0i64; 3]; self.vertices.len()];
        for e in &self.edges {
            for k in 0..3 {
                res[e.v1][k] += e.weight * e.dir[k];
                res[e.v2][k] -= e.weight * e.dir[k];
            }
        }
        for r in &self.rays {
            for k in 0..3 {
                res[r.v][k] += r.weight * r.dir[k];
            }
        }
        res
    }

    pub fn is_balanced(&self) -> bool {
        self.balancing_residuals().iter().all(|r| r == &[0, 0, 0])
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.v1 == v || e.v2 == v).count() + self.rays.iter().filter(|r| r.v == v).count()
    }

    /// Projections of the non-vertical edges and rays to the plane.
    pub fn projected_pieces(&self) -> Vec<Piece> {
        let mut out: Vec<Piece> = self
            .edges
            .iter()
            .filter(|e| e.dir[0] != 0 || e.dir[1] != 0)
            .map(|e| Piece::Segment(self.vertices[e.v1].projection(), self.vertices[e.v2].projection()))
            .collect();
        out.extend(
            self.rays
                .iter()
                .filter(|r| r.dir[0] != 0 || r.dir[1] != 0)
                .map(|r| Piece::Ray(self.vertices[r.v].projection(), LatticePoint::new(r.dir[0], r.dir[1]))),
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }
}

/// Weighted points on a base curve.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorData {
    pub points: Vec<DivisorPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorPoint {
    pub point: RationalPoint,
    pub weight: i64,
}

impl DivisorData {
    /// Sums weights at repeated points and drops zero weights.
    pub fn new(points: impl IntoIterator<Item = (RationalPoint, i64)>) -> Self {
        let mut m: BTreeMap<RationalPoint, i64> = BTreeMap::new();
        for (p, w) in points {
            *m.entry(p).or_insert(0) += w;
        }
        DivisorData {
            points: m.into_iter().filter(|(_, w)| *w != 0).map(|(point, weight)| DivisorPoint { point, weight }).collect(),
        }
    }

    pub fn weight_at(&self, p: &RationalPoint) -> i64 {
        self.points.iter().find(|q| &q.point == p).map_or(0, |q| q.weight)
    }

    pub fn total(&self) -> i64 {
        self.points.iter().map(|p| p.weight).sum()
    }

    /// Moves weight `c` from each of `a` and `b` to their midpoint, which is what subtracting a
    /// tent of slope `c` over `[a, b]` does to a function on the curve.
    pub fn tent(&self, a: &RationalPoint, b: &RationalPoint, c: i64) -> Result<Self> {
        if self.weight_at(a) < c || self.weight_at(b) < c || a == b {
            return Err(TropError::Invalid("tent endpoints need weight at least c".into()));
        }
        let m = RationalPoint::new((&a.x + &b.x) / rat(2), (&a.y + &b.y) / rat(2));
        let pts = self.points.iter().map(|p| (p.point.clone(), p.weight));
        Ok(Self::new(pts.chain([(a.clone(), -c), (b.clone(), -c), (m, 2 * c)])))
    }
}

/// Applies up to `count` seeded tent moves between divisor points lying on a common segment
/// of `pieces`.
pub fn random_tent_moves(d: &DivisorData, pieces: &[Piece], seed: u64, count: usize) -> DivisorData {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut d = d.clone();
    for _ in 0..count {
        let pairs: Vec<(RationalPoint, RationalPoint)> = pieces
            .iter()
            .filter(|g| matches!(g, Piece::Segment(..)))
            .flat_map(|g| {
                let on: Vec<&DivisorPoint> = d.points.iter().filter(|q| g.contains(&q.point)).collect();
                let mut out = Vec::new();
                for (x, a) in on.iter().enumerate() {
                    for b in &on[x + 1..] {
                        out.push((a.point.clone(), b.point.clone()));
                    }
                }
                out
            })
            .collect();
        if pairs.is_empty() {
            break;
        }
        let (a, b) = &pairs[rng.gen_range(0..pairs.len())];
        let c = rng.gen_range(1..=d.weight_at(a).min(d.weight_at(b)));
        d = d.tent(a, b, c).expect("endpoints carry weight c");
    }
    d
}

/// Lifted direction `(u, ⟨u, i⟩)` of an edge with primitive direction `u` and dual point `i`.
fn lifted(u: LatticePoint, i: LatticePoint) -> [i64; 3] {
    [u.i, u.j, u.dot(&i)]
}

fn space_point(p: &RationalPoint, z: Rat) -> SpacePoint {
    SpacePoint::new(p.x.clone(), p.y.clone(), z)
}

/// The 1-skeleton of the graph of `P` over ℝ² together with the walls under `V(P)`.
pub fn modify_plane(p: &TropicalPolynomial) -> Result<SpaceGraph> {
    if p.newton_polygon().dimension() == 0 {
        return Ok(SpaceGraph::default());
    }
    let c = build_curve(p)?;
    let vertices: Vec<SpacePoint> = c.vertices.iter().map(|v| space_point(&v.position, p.value(&v.position))).collect();
    let edges = c.edges.iter().map(|e| SpaceEdge { v1: e.v1, v2: e.v2, weight: e.weight, dir: lifted(e.dir, e.dual.0) }).collect();
    let mut rays: Vec<SpaceRay> = c
        .rays
        .iter()
        .map(|r| SpaceRay { v: r.v, dir: lifted(r.dir, r.dual.0), weight: r.weight, kind: RayKind::Horizontal })
        .collect();
    for v in 0..c.vertices.len() {
        rays.push(SpaceRay { v, dir: [0, 0, -1], weight: integer_area(c.cell_polygon(v)), kind: RayKind::Wall });
    }
    rays.sort_by_key(|r| (r.v, r.kind, r.dir));
    let walls = c
        .pieces()
        .into_iter()
        .zip(c.edges.iter().map(|e| e.weight).chain(c.rays.iter().map(|r| r.weight)))
        .map(|(base, weight)| WallFacet { base, weight })
        .collect();
    Ok(SpaceGraph { vertices, edges, rays, walls })
}

/// Projections and weights of the vertical ends.
pub fn vertical_ends(g: &SpaceGraph) -> DivisorData {
    DivisorData::new(
        g.rays.iter().filter(|r| r.kind == RayKind::VerticalEnd).map(|r| (g.vertices[r.v].projection(), r.weight)),
    )
}

/// Parameters in `(0, tmax)` where `t ↦ P(a + t·u)` changes slope.
fn breakpoints(p: &TropicalPolynomial, a: &RationalPoint, u: LatticePoint, tmax: Option<&Rat>) -> Vec<Rat> {
    let lines: Vec<(Rat, i64)> = p.terms().iter().map(|(e, c)| (c + a.pair(*e), u.dot(e))).collect();
    let mut out = Vec::new();
    let mut t = Rat::zero();
    loop {
        let val = |(b, m): &(Rat, i64)| b + &t * rat(*m);
        let best = lines.iter().map(val).max().expect("non-empty polynomial");
        let slope = lines.iter().filter(|l| val(l) == best).map(|l| l.1).max().unwrap();
        let next = lines
            .iter()
            .filter(|l| l.1 > slope)
            .map(|l| &t + (&best - val(l)) / rat(l.1 - slope))
            .min();
        match next {
            Some(s) if tmax.map_or(true, |m| &s < m) => {
                out.push(s.clone());
                t = s;
            }
            _ => return out,
        }
    }
}

struct Seg {
    a: usize,
    b: usize,
    u: LatticePoint,
    len: Rat,
    w: i64,
    in_k: bool,
    /// Slope of `P` along `u`.
    slope: i64,
}

struct SRay {
    a: usize,
    u: LatticePoint,
    w: i64,
    in_k: bool,
    slope: i64,
}

/// `C` cut at its vertices, at the slope changes of `P` along it and at extra points.
struct Refinement {
    nodes: Vec<RationalPoint>,
    segs: Vec<Seg>,
    rays: Vec<SRay>,
}

fn param_on(a: &RationalPoint, u: LatticePoint, p: &RationalPoint) -> Option<Rat> {
    let (dx, dy) = p.sub(a);
    if !(&dx * rat(u.j) - &dy * rat(u.i)).is_zero() {
        return None;
    }
    Some(if u.i != 0 { dx / rat(u.i) } else { dy / rat(u.j) })
}

fn slope_at(p: &TropicalPolynomial, x: &RationalPoint, u: LatticePoint) -> (bool, i64) {
    let (_, arg) = p.eval(x);
    (arg.len() >= 2, u.dot(&arg[0]))
}

fn refine(c: &TropicalCurve, p: &TropicalPolynomial, extra: &[RationalPoint]) -> Refinement {
    let mut index: BTreeMap<RationalPoint, usize> = BTreeMap::new();
    let mut nodes = Vec::new();
    let mut node = |q: RationalPoint, nodes: &mut Vec<RationalPoint>| {
        *index.entry(q.clone()).or_insert_with(|| {
            nodes.push(q);
            nodes.len() - 1
        })
    };
    for v in &c.vertices {
        node(v.position.clone(), &mut nodes);
    }
    let cuts = |a: &RationalPoint, u: LatticePoint, tmax: Option<&Rat>| {
        let mut ts = breakpoints(p, a, u, tmax);
        for q in extra {
            if let Some(t) = param_on(a, u, q) {
                if t.is_positive() && tmax.map_or(true, |m| &t < m) {
                    ts.push(t);
                }
            }
        }
        ts.sort();
        ts.dedup();
        ts
    };
    let mut segs = Vec::new();
    for e in &c.edges {
        let a = c.vertices[e.v1].position.clone();
        let (dx, dy) = c.vertices[e.v2].position.sub(&a);
        let (len, _) = rational_direction(&dx, &dy).expect("distinct endpoints");
        let mut ts = cuts(&a, e.dir, Some(&len));
        ts.push(len);
        let mut prev = (Rat::zero(), e.v1);
        for t in ts {
            let q = a.offset(e.dir, &t);
            let k = node(q, &mut nodes);
            let mid = a.offset(e.dir, &((&prev.0 + &t) / rat(2)));
            let (in_k, slope) = slope_at(p, &mid, e.dir);
            segs.push(Seg { a: prev.1, b: k, u: e.dir, len: &t - &prev.0, w: e.weight, in_k, slope });
            prev = (t, k);
        }
    }
    let mut rays = Vec::new();
    for r in &c.rays {
        let a = c.vertices[r.v].position.clone();
        let mut prev = (Rat::zero(), r.v);
        for t in cuts(&a, r.dir, None) {
            let q = a.offset(r.dir, &t);
            let k = node(q, &mut nodes);
            let mid = a.offset(r.dir, &((&prev.0 + &t) / rat(2)));
            let (in_k, slope) = slope_at(p, &mid, r.dir);
            segs.push(Seg { a: prev.1, b: k, u: r.dir, len: &t - &prev.0, w: r.weight, in_k, slope });
            prev = (t, k);
        }
        let beyond = a.offset(r.dir, &(&prev.0 + Rat::one()));
        let (in_k, slope) = slope_at(p, &beyond, r.dir);
        rays.push(SRay { a: prev.1, u: r.dir, w: r.weight, in_k, slope });
    }
    Refinement { nodes, segs, rays }
}

/// The divisor of `P` restricted to `C`: at each point, the sum of outgoing slopes of `P|_C`
/// weighted by edge weights.
pub fn restriction_divisor(c: &TropicalCurve, p: &TropicalPolynomial) -> DivisorData {
    let r = refine(c, p, &[]);
    let mut d = vec![0i64; r.nodes.len()];
    for s in &r.segs {
        d[s.a] += s.w * s.slope;
        d[s.b] -= s.w * s.slope;
    }
    for ray in &r.rays {
        d[ray.a] += ray.w * ray.slope;
    }
    DivisorData::new(r.nodes.into_iter().zip(d))
}

/// Exact row reduction of `[A | b]`; returns the unique solution.
fn solve_exact(mut rows: Vec<(Vec<Rat>, Rat)>, n: usize) -> std::result::Result<Vec<Rat>, SolveError> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k].0[col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rat::one() / &rows[r].0[col];
        let (coef, rhs) = (rows[r].0.iter().map(|x| x * &inv).collect::<Vec<_>>(), &rows[r].1 * &inv);
        rows[r] = (coef, rhs);
        for k in 0..rows.len() {
            if k != r && !rows[k].0[col].is_zero() {
                let f = rows[k].0[col].clone();
                for j in 0..n {
                    let delta = &f * &rows[r].0[j];
                    rows[k].0[j] -= delta;
                }
                let delta = &f * &rows[r].1;
                rows[k].1 -= delta;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if (r..rows.len()).any(|k| !rows[k].1.is_zero()) {
        return Err(SolveError::Inconsistent);
    }
    if pivots.len() < n {
        return Err(SolveError::Free);
    }
    Ok(rows.into_iter().take(n).map(|(_, b)| b).collect())
}

enum SolveError {
    Inconsistent,
    Free,
}

/// Lift of `C` to the modification along `Pmod` with vertical ends over `D`.
///
/// Off `C ∩ V(Pmod)` the height is `Pmod`. On it, heights at nodes and slopes on edges are the
/// unknowns of an exact linear system: edge relations, continuity where the lift leaves
/// `V(Pmod)`, and vertical balancing `Σ w·slope = D(p)` at every node. Unbounded edges keep the
/// asymptotic slope of `Pmod` (no intersection points at infinity).
pub fn modify_curve(c: &TropicalCurve, pmod: &TropicalPolynomial, d: &DivisorData) -> Result<SpaceGraph> {
    if !c.is_nonsingular() {
        return Err(TropError::Singular("base curve must be non-singular".into()));
    }
    for q in &d.points {
        if q.weight <= 0 {
            return Err(TropError::Invalid(format!("divisor weight at {} is not positive", q.point)));
        }
        if !c.contains(&q.point) {
            return Err(TropError::Invalid(format!("divisor point {} is not on the curve", q.point)));
        }
    }
    let extra: Vec<RationalPoint> = d.points.iter().map(|q| q.point.clone()).collect();
    let r = refine(c, pmod, &extra);
    let n = r.nodes.len();
    let k_pieces: Vec<Piece> = r
        .segs
        .iter()
        .filter(|s| s.in_k)
        .map(|s| Piece::Segment(r.nodes[s.a].clone(), r.nodes[s.b].clone()))
        .chain(r.rays.iter().filter(|s| s.in_k).map(|s| Piece::Ray(r.nodes[s.a].clone(), s.u)))
        .collect();
    if crate::intersect::has_common_component(&k_pieces) {
        return Err(TropError::CommonComponent);
    }
    let node_in_k: Vec<bool> = (0..n)
        .map(|k| r.segs.iter().any(|s| s.in_k && (s.a == k || s.b == k)) || r.rays.iter().any(|s| s.in_k && s.a == k))
        .collect();
    let node_leaves_k: Vec<bool> = (0..n)
        .map(|k| r.segs.iter().any(|s| !s.in_k && (s.a == k || s.b == k)) || r.rays.iter().any(|s| !s.in_k && s.a == k))
        .collect();
    // variable numbering: heights of K-nodes, then slopes of K-segments
    let mut hvar = vec![None; n];
    let mut nv = 0;
    for k in 0..n {
        if node_in_k[k] {
            hvar[k] = Some(nv);
            nv += 1;
        }
    }
    let mut svar = vec![None; r.segs.len()];
    for (k, s) in r.segs.iter().enumerate() {
        if s.in_k {
            svar[k] = Some(nv);
            nv += 1;
        }
    }
    let height = |k: usize| pmod.value(&r.nodes[k]);
    let mut rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for (k, s) in r.segs.iter().enumerate() {
        if let Some(sv) = svar[k] {
            let mut row = vec![Rat::zero(); nv];
            row[hvar[s.b].unwrap()] += Rat::one();
            row[hvar[s.a].unwrap()] -= Rat::one();
            row[sv] -= &s.len;
            rows.push((row, Rat::zero()));
        }
    }
    for k in 0..n {
        if let (Some(hv), true) = (hvar[k], node_leaves_k[k]) {
            let mut row = vec![Rat::zero(); nv];
            row[hv] = Rat::one();
            rows.push((row, height(k)));
        }
    }
    for k in 0..n {
        let mut row = vec![Rat::zero(); nv];
        let mut rhs = rat(d.weight_at(&r.nodes[k]));
        for (j, s) in r.segs.iter().enumerate() {
            let sign = if s.a == k {
                1
            } else if s.b == k {
                -1
            } else {
                continue;
            };
            match svar[j] {
                Some(sv) => row[sv] += rat(sign * s.w),
                None => rhs -= rat(sign * s.w * s.slope),
            }
        }
        for ray in r.rays.iter().filter(|ray| ray.a == k) {
            rhs -= rat(ray.w * ray.slope);
        }
        if row.iter().all(Zero::is_zero) {
            if !rhs.is_zero() {
                let w = d.weight_at(&r.nodes[k]);
                return Err(TropError::InfeasibleDivisor(format!(
                    "balancing at {} needs divisor weight {}, got {w}",
                    r.nodes[k],
                    fmt_rat(&(rat(w) - &rhs))
                )));
            }
            continue;
        }
        rows.push((row, rhs));
    }
    let sol = match solve_exact(rows, nv) {
        Ok(s) => s,
        Err(SolveError::Free) => return Err(TropError::CommonComponent),
        Err(SolveError::Inconsistent) => {
            return Err(TropError::InfeasibleDivisor(
                "no balanced lift over C ∩ V(Pmod) with this divisor (weights on a component do not match)".into(),
            ))
        }
    };
    let h: Vec<Rat> = (0..n).map(|k| hvar[k].map_or_else(|| height(k), |v| sol[v].clone())).collect();
    let mut slopes = Vec::with_capacity(r.segs.len());
    for (k, s) in r.segs.iter().enumerate() {
        let v = svar[k].map_or_else(|| rat(s.slope), |v| sol[v].clone());
        if !v.is_integer() {
            return Err(TropError::InfeasibleDivisor(format!(
                "slope {} on {}–{} is not an integer",
                fmt_rat(&v),
                r.nodes[s.a],
                r.nodes[s.b]
            )));
        }
        slopes.push(v.to_integer().try_into().map_err(|_| TropError::Invalid("slope overflow".into()))?);
    }
    for k in 0..n {
        if h[k] > height(k) {
            return Err(TropError::InfeasibleDivisor(format!("lift rises above the graph of Pmod at {}", r.nodes[k])));
        }
    }

    // assemble, then merge straight 2-valent nodes
    let mut edges: Vec<(usize, Option<usize>, [i64; 3], i64)> = r
        .segs
        .iter()
        .zip(&slopes)
        .map(|(s, sl)| (s.a, Some(s.b), [s.u.i, s.u.j, *sl], s.w))
        .collect();
    edges.extend(r.rays.iter().map(|ray| (ray.a, None, [ray.u.i, ray.u.j, ray.slope], ray.w)));
    let ends: BTreeMap<usize, i64> =
        (0..n).filter_map(|k| Some((k, d.weight_at(&r.nodes[k]))).filter(|(_, w)| *w > 0)).collect();
    loop {
        let mut merged = false;
        for k in 0..n {
            if ends.contains_key(&k) {
                continue;
            }
            let inc: Vec<usize> = (0..edges.len()).filter(|&j| edges[j].0 == k || edges[j].1 == Some(k)).collect();
            if inc.len() != 2 {
                continue;
            }
            let out = |j: usize| {
                let (a, _, dir, _) = edges[j];
                if a == k {
                    dir
                } else {
                    [-dir[0], -dir[1], -dir[2]]
                }
            };
            let (d1, d2) = (out(inc[0]), out(inc[1]));
            if d1 != [-d2[0], -d2[1], -d2[2]] || edges[inc[0]].3 != edges[inc[1]].3 {
                continue;
            }
            // orient so that inc[0] ends at k (it must be bounded unless both are rays)
            let (first, second) = if edges[inc[0]].1.is_some() || edges[inc[0]].0 != k { (inc[0], inc[1]) } else { (inc[1], inc[0]) };
            let other = |j: usize| if edges[j].0 == k { edges[j].1 } else { Some(edges[j].0) };
            let (p, q) = (other(first), other(second));
            let w = edges[first].3;
            let new = match (p, q) {
                (Some(p), q) => (p, q, out(second), w),
                (None, Some(q)) => (q, None, out(first), w),
                (None, None) => continue,
            };
            let (hi, lo) = (first.max(second), first.min(second));
            edges.remove(hi);
            edges.remove(lo);
            edges.push(new);
            merged = true;
            break;
        }
        if !merged {
            break;
        }
    }
    // renumber surviving nodes in lexicographic order of their lifted positions
    let mut used: Vec<usize> = edges.iter().flat_map(|e| std::iter::once(e.0).chain(e.1)).collect();
    used.extend(ends.keys());
    used.sort();
    used.dedup();
    let mut order: Vec<(SpacePoint, usize)> =
        used.iter().map(|&k| (space_point(&r.nodes[k], h[k].clone()), k)).collect();
    order.sort();
    let new_id: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, (_, k))| (*k, i)).collect();
    let vertices: Vec<SpacePoint> = order.into_iter().map(|(p, _)| p).collect();
    let mut g_edges = Vec::new();
    let mut g_rays = Vec::new();
    for (a, b, dir, w) in edges {
        match b {
            Some(b) => {
                let (v1, v2, dir) = if new_id[&a] <= new_id[&b] {
                    (new_id[&a], new_id[&b], dir)
                } else {
                    (new_id[&b], new_id[&a], [-dir[0], -dir[1], -dir[2]])
                };
                g_edges.push(SpaceEdge { v1, v2, weight: w, dir });
            }
            None => g_rays.push(SpaceRay { v: new_id[&a], dir, weight: w, kind: RayKind::Horizontal }),
        }
    }
    for (k, w) in &ends {
        g_rays.push(SpaceRay { v: new_id[k], dir: [0, 0, -1], weight: *w, kind: RayKind::VerticalEnd });
    }
    g_edges.sort_by_key(|e| (e.v1, e.v2, e.dir));
    g_rays.sort_by_key(|r| (r.v, r.kind, r.dir));
    // lattice steps along an edge must be primitive in ℤ³; u is primitive in ℤ² so this holds
    let g = SpaceGraph { vertices, edges: g_edges, rays: g_rays, walls: Vec::new() };
    if !g.is_balanced() {
        return Err(TropError::Invariant("lift is not balanced".into()));
    }
    Ok(g)
}

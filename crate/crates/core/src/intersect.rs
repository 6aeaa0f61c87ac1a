//! Set-theoretic and stable intersections of two plane tropical curves.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::curve::TropicalCurve;
use crate::error::{Result, TropError};
use crate::geom::{connected_groups, in_cone, integer_area, rational_direction, LatticePoint, LatticePolygon, Piece, RationalPoint};

/// Which of the three `δ_v` cases produced the multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Isolated crossing of two edges, `δ_v = 0`.
    Transverse,
    /// Vertex of the first curve only.
    VertexOfFirst,
    /// Vertex of the second curve only.
    VertexOfSecond,
    VertexOfBoth,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalIntersectionPoint {
    pub position: RationalPoint,
    pub multiplicity: i64,
    pub provenance: Provenance,
    /// Integer area of the product cell dual to the point.
    pub area: i64,
    pub delta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionComponent {
    pub geometry: Vec<Piece>,
    pub points: Vec<TropicalIntersectionPoint>,
    pub total: i64,
    pub compact: bool,
}

impl IntersectionComponent {
    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.geometry.iter().any(|g| g.contains(p))
    }

    pub fn is_point(&self) -> bool {
        matches!(self.geometry.as_slice(), [Piece::Point(_)])
    }
}

pub fn component_multiplicity(e: &IntersectionComponent) -> i64 {
    e.points.iter().map(|p| p.multiplicity).sum()
}

/// Exact `C₁ ∩ C₂` as points, segments and rays; points inside other pieces are dropped.
pub fn set_intersection(c1: &TropicalCurve, c2: &TropicalCurve) -> Vec<Piece> {
    let p1 = c1.pieces();
    let p2 = c2.pieces();
    let mut pieces: Vec<Piece> = Vec::new();
    for a in &p1 {
        for b in &p2 {
            if let Some(x) = a.intersect(b) {
                if !pieces.contains(&x) {
                    pieces.push(x);
                }
            }
        }
    }
    let (points, mut rest): (Vec<Piece>, Vec<Piece>) = pieces.into_iter().partition(|p| matches!(p, Piece::Point(_)));
    for p in points {
        let Piece::Point(q) = &p else { unreachable!() };
        if !rest.iter().any(|r| r.contains(q)) && !rest.contains(&p) {
            rest.push(p);
        }
    }
    rest
}

/// Multiplicity of `p` as a vertex of the product curve, when `p` is one and lies in both curves.
pub fn stable_multiplicity(c1: &TropicalCurve, c2: &TropicalCurve, p: &RationalPoint) -> Option<TropicalIntersectionPoint> {
    let (_, arg1) = c1.polynomial.eval(p);
    let (_, arg2) = c2.polynomial.eval(p);
    if arg1.len() < 2 || arg2.len() < 2 {
        return None;
    }
    let product = c1.polynomial.product(&c2.polynomial);
    stable_multiplicity_with(&product, &arg1, &arg2, p)
}

fn stable_multiplicity_with(
    product: &crate::troppoly::TropicalPolynomial,
    arg1: &[LatticePoint],
    arg2: &[LatticePoint],
    p: &RationalPoint,
) -> Option<TropicalIntersectionPoint> {
    let (_, arg) = product.eval(p);
    let cell = LatticePolygon::hull(&arg);
    if cell.dimension() < 2 {
        return None;
    }
    let area = integer_area(&cell);
    let f1 = LatticePolygon::hull(arg1);
    let f2 = LatticePolygon::hull(arg2);
    let (v1, v2) = (f1.dimension() == 2, f2.dimension() == 2);
    let delta = if v1 { integer_area(&f1) } else { 0 } + if v2 { integer_area(&f2) } else { 0 };
    let provenance = match (v1, v2) {
        (false, false) => Provenance::Transverse,
        (true, false) => Provenance::VertexOfFirst,
        (false, true) => Provenance::VertexOfSecond,
        (true, true) => Provenance::VertexOfBoth,
    };
    debug_assert!((area - delta) % 2 == 0, "multiplicity formula must be integral");
    let multiplicity = (area - delta) / 2;
    (multiplicity > 0).then(|| TropicalIntersectionPoint { position: p.clone(), multiplicity, provenance, area, delta })
}

/// Vertices of the product curve lying in `C₁ ∩ C₂`, with multiplicities, sorted by position.
///
/// Every such vertex is an endpoint of a piece of the set-theoretic intersection, so the
/// candidates are read off those pieces and each is tested against the product polynomial.
pub fn stable_points(c1: &TropicalCurve, c2: &TropicalCurve) -> Vec<TropicalIntersectionPoint> {
    stable_points_on(c1, c2, &set_intersection(c1, c2))
}

fn stable_points_on(c1: &TropicalCurve, c2: &TropicalCurve, pieces: &[Piece]) -> Vec<TropicalIntersectionPoint> {
    let product = c1.polynomial.product(&c2.polynomial);
    let candidates: BTreeSet<RationalPoint> = pieces.iter().flat_map(Piece::endpoints).collect();
    candidates
        .into_iter()
        .filter_map(|p| {
            let (_, arg1) = c1.polynomial.eval(&p);
            let (_, arg2) = c2.polynomial.eval(&p);
            stable_multiplicity_with(&product, &arg1, &arg2, &p)
        })
        .collect()
}

/// Connected components of `C₁ ∩ C₂` with their stable points.
pub fn components(c1: &TropicalCurve, c2: &TropicalCurve) -> Result<Vec<IntersectionComponent>> {
    let pieces = set_intersection(c1, c2);
    if has_common_component(&pieces) {
        return Err(TropError::CommonComponent);
    }
    let points = stable_points_on(c1, c2, &pieces);
    Ok(group(pieces, points))
}

/// Groups pieces into connected components and attaches the points they contain.
pub(crate) fn group(pieces: Vec<Piece>, points: Vec<TropicalIntersectionPoint>) -> Vec<IntersectionComponent> {
    let groups: Vec<Vec<Piece>> =
        connected_groups(&pieces).into_iter().map(|g| g.into_iter().map(|k| pieces[k].clone()).collect()).collect();
    let mut out: Vec<IntersectionComponent> = groups
        .into_iter()
        .map(|mut geometry| {
            geometry.sort_by_key(sort_key);
            let pts: Vec<TropicalIntersectionPoint> =
                points.iter().filter(|p| geometry.iter().any(|g| g.contains(&p.position))).cloned().collect();
            let total = pts.iter().map(|p| p.multiplicity).sum();
            let compact = geometry.iter().all(Piece::is_bounded);
            IntersectionComponent { geometry, points: pts, total, compact }
        })
        .collect();
    out.sort_by_key(|c| sort_key(&c.geometry[0]));
    out
}

pub(crate) fn sort_key(p: &Piece) -> (RationalPoint, u8) {
    match p {
        Piece::Point(q) => (q.clone(), 0),
        Piece::Segment(a, b) => (a.clone().min(b.clone()), 1),
        Piece::Ray(o, _) => (o.clone(), 2),
    }
}

/// Detects a shared tropical curve inside the one-dimensional part of the intersection.
///
/// A piece that carries positive weight in a balanced sub-curve must be balanced at each of its
/// finite ends by the other surviving pieces there; pieces failing this are pruned until stable.
/// Anything left over is treated as a common component.
pub fn has_common_component(pieces: &[Piece]) -> bool {
    // (node, outgoing direction) for each finite end of each one-dimensional piece
    let mut ends: Vec<Vec<(RationalPoint, LatticePoint)>> = Vec::new();
    for p in pieces {
        match p {
            Piece::Segment(a, b) => {
                let (dx, dy) = b.sub(a);
                let (_, u) = rational_direction(&dx, &dy).expect("segment has length");
                ends.push(vec![(a.clone(), u), (b.clone(), -u)]);
            }
            Piece::Ray(o, d) => ends.push(vec![(o.clone(), *d)]),
            Piece::Point(_) => ends.push(vec![]),
        }
    }
    let mut alive: Vec<bool> = pieces.iter().map(|p| !matches!(p, Piece::Point(_))).collect();
    loop {
        let mut at: BTreeMap<&RationalPoint, Vec<(usize, LatticePoint)>> = BTreeMap::new();
        for (k, e) in ends.iter().enumerate() {
            if alive[k] {
                for (node, u) in e {
                    at.entry(node).or_default().push((k, *u));
                }
            }
        }
        let mut changed = false;
        for incident in at.values() {
            for &(k, u) in incident {
                let others: Vec<LatticePoint> = incident.iter().filter(|(j, _)| *j != k).map(|(_, w)| *w).collect();
                if alive[k] && !in_cone(-u, &others) {
                    alive[k] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    alive.iter().any(|&a| a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::build_curve;
    use crate::troppoly::parse;

    fn curve(s: &str) -> TropicalCurve {
        build_curve(&parse(s).unwrap()).unwrap()
    }

    fn pt(x: i64, y: i64) -> RationalPoint {
        RationalPoint::from_ints(x, y)
    }

    #[test]
    fn two_generic_lines() {
        let a = curve("x+y+0");
        // vertex (2,1): max(x-2, y-1, 0)
        let b = curve("-2x + -1y + 0");
        let pts = stable_points(&a, &b);
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].multiplicity, 1);
        assert_eq!(pts[0].provenance, Provenance::Transverse);
        let comps = components(&a, &b).unwrap();
        assert_eq!(comps.len(), 1);
        assert!(comps[0].compact && comps[0].is_point());
        assert_eq!(component_multiplicity(&comps[0]), 1);
    }

    #[test]
    fn lines_overlapping_along_a_ray() {
        let a = curve("x+y+0");
        // vertex (2,0); both curves contain the half-line y = 0, x <= 0
        let b = curve("-2x + y + 0");
        let comps = components(&a, &b).unwrap();
        assert_eq!(comps.len(), 1);
        assert!(!comps[0].compact);
        assert_eq!(comps[0].total, 1);
        assert_eq!(comps[0].geometry, vec![Piece::Ray(pt(0, 0), LatticePoint::new(-1, 0))]);
    }

    #[test]
    fn disjoint_and_self_intersections() {
        // curves with two-dimensional Newton polygons always meet, so the empty case is exercised on the grouping step
        assert!(group(vec![], vec![]).is_empty());
        let a = curve("x+y+0");
        assert_eq!(components(&a, &a), Err(TropError::CommonComponent));
        let c = curve("x^2+y^2+2x+2y+3*x*y+3");
        assert_eq!(components(&c, &c), Err(TropError::CommonComponent));
    }

    #[test]
    fn propositions_vertex_multiplicity_l_plus_one() {
        // Newton triangle (0,0),(0,1),(1,l) against a line through the same vertex
        for l in 1..=5i64 {
            let x1 = build_curve(
                &crate::troppoly::TropicalPolynomial::from_int_terms(&[(0, 0, 0), (0, 1, 0), (1, l, 0)]).unwrap(),
            )
            .unwrap();
            let line = curve("x+y+0");
            let p = stable_multiplicity(&x1, &line, &pt(0, 0)).unwrap();
            assert_eq!(p.provenance, Provenance::VertexOfBoth);
            assert_eq!(p.multiplicity, l + 1, "l = {l}");
        }
    }

    #[test]
    fn cone_membership() {
        let e = |i, j| LatticePoint::new(i, j);
        assert!(in_cone(e(1, 1), &[e(1, 0), e(0, 1)]));
        assert!(!in_cone(e(-1, -1), &[e(1, 0), e(0, 1)]));
        assert!(in_cone(e(0, 5), &[e(1, 0), e(-1, 0), e(1, 1)]));
        assert!(in_cone(e(3, 0), &[e(-1, 0), e(1, 0)]));
        assert!(!in_cone(e(0, 1), &[e(-1, 0), e(1, 0)]));
        assert!(!in_cone(e(1, 0), &[]));
    }

    #[test]
    fn overlap_segment_between_two_vertices() {
        // the line's diagonal ray runs along the other curve's ray up to its vertex (2,2)
        let c1 = curve("x+y+0");
        let c2 = curve("x*y + 2x + 2y");
        let comps = components(&c1, &c2).unwrap();
        assert_eq!(comps.len(), 1);
        let e = &comps[0];
        assert!(e.compact);
        assert_eq!(e.geometry, vec![Piece::Segment(pt(0, 0), pt(2, 2))]);
        assert_eq!(e.points.len(), 2);
        for p in &e.points {
            assert_eq!(p.multiplicity, 1);
        }
        assert_eq!(component_multiplicity(e), 2);
    }

    fn random_curve(d: u32, seed: u64) -> TropicalCurve {
        build_curve(&crate::gen::random(d, seed).unwrap()).unwrap()
    }

    /// Vertices of the product curve inside both curves, with `½(Area − δ)` read off the
    /// product subdivision and the two argmax sets.
    fn product_oracle(c1: &TropicalCurve, c2: &TropicalCurve) -> Vec<(RationalPoint, i64)> {
        let prod = build_curve(&c1.polynomial.product(&c2.polynomial)).unwrap();
        let cell_area = |c: &TropicalCurve, p: &RationalPoint| {
            let (_, arg) = c.polynomial.eval(p);
            let poly = LatticePolygon::hull(&arg);
            if poly.dimension() == 2 {
                integer_area(&poly)
            } else {
                0
            }
        };
        let mut out: Vec<(RationalPoint, i64)> = prod
            .vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| c1.contains(&v.position) && c2.contains(&v.position))
            .map(|(k, v)| {
                let a = integer_area(prod.cell_polygon(k));
                let delta = cell_area(c1, &v.position) + cell_area(c2, &v.position);
                (v.position.clone(), (a - delta) / 2)
            })
            .filter(|(_, m)| *m > 0)
            .collect();
        out.sort();
        out
    }

    #[test]
    fn stable_points_match_product_curve() {
        for seed in 0..12u64 {
            let (d1, d2) = (1 + (seed % 3) as u32, 1 + (seed / 4 % 3) as u32);
            let c1 = random_curve(d1, seed);
            let c2 = random_curve(d2, 100 + seed);
            let mut got: Vec<(RationalPoint, i64)> =
                stable_points(&c1, &c2).into_iter().map(|p| (p.position, p.multiplicity)).collect();
            got.sort();
            assert_eq!(got, product_oracle(&c1, &c2), "seed {seed}");
            let total: i64 = got.iter().map(|p| p.1).sum();
            assert_eq!(total, (d1 * d2) as i64);
        }
        // degenerate configurations: shared vertices and overlaps
        for (a, b) in [("x+y+0", "x*y + 2x + 2y"), ("x+y+0", "-2x + y + 0"), ("x^2+y^2+2x+2y+3*x*y+3", "x+y+0")] {
            let (c1, c2) = (curve(a), curve(b));
            let mut got: Vec<(RationalPoint, i64)> =
                stable_points(&c1, &c2).into_iter().map(|p| (p.position, p.multiplicity)).collect();
            got.sort();
            assert_eq!(got, product_oracle(&c1, &c2), "{a} vs {b}");
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

        #[test]
        fn bezout_and_symmetry(s1 in 0u64..10_000, s2 in 0u64..10_000, d1 in 1u32..=4, d2 in 1u32..=4) {
            let c1 = random_curve(d1, s1);
            let c2 = random_curve(d2, s2);
            let comps = components(&c1, &c2).unwrap();
            let total: i64 = comps.iter().map(|e| e.total).sum();
            proptest::prop_assert_eq!(total, (d1 * d2) as i64);
            for e in &comps {
                proptest::prop_assert_eq!(e.total, component_multiplicity(e));
                for p in &e.points {
                    proptest::prop_assert!(p.multiplicity >= 1);
                }
            }
            let key = |v: Vec<TropicalIntersectionPoint>| {
                let mut k: Vec<(RationalPoint, i64)> = v.into_iter().map(|p| (p.position, p.multiplicity)).collect();
                k.sort();
                k
            };
            proptest::prop_assert_eq!(key(stable_points(&c1, &c2)), key(stable_points(&c2, &c1)));
        }

        #[test]
        fn small_translation_splits_components(seed in 0u64..10_000, kx in 1i64..50, ky in 51i64..100) {
            // the overlap example and a shared-vertex example, each nudged generically
            let cases = [("x+y+0", "x*y + 2x + 2y"), ("x+y+0", "-2x + y + 0"), ("x+y+0", "x^2+y^2+2x+2y+3*x*y+3")];
            let (a, b) = cases[(seed % 3) as usize];
            let (c1, p2) = (curve(a), parse(b).unwrap());
            let eps = crate::rational::ratio(1, 1_000_000);
            let moved = build_curve(&p2.add_affine(&crate::rational::rat(0), &(&eps * crate::rational::rat(kx)), &(&eps * crate::rational::rat(ky)))).unwrap();
            let c2 = build_curve(&p2).unwrap();
            let before = components(&c1, &c2).unwrap();
            let after = stable_points(&c1, &moved);
            for p in &after {
                proptest::prop_assert_eq!(p.provenance, Provenance::Transverse);
            }
            let near = crate::rational::ratio(1, 1_000);
            for e in &before {
                let sum: i64 = after
                    .iter()
                    .filter(|p| e.geometry.iter().any(|g| g.distance2(&p.position) < &near * &near))
                    .map(|p| p.multiplicity)
                    .sum();
                proptest::prop_assert_eq!(sum, e.total);
            }
        }
    }
}

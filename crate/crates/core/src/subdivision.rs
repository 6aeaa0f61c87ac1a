//! Regular subdivision of the Newton polygon induced by the coefficient lift.

use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;

use crate::geom::{integer_area, orient, LatticePoint, LatticePolygon, RationalPoint};
use crate::rational::{rat, Rat};
use crate::troppoly::TropicalPolynomial;

/// A maximal cell with its affine support `φ(i) = α + ⟨γ, i⟩ ≥ a_i`, equality exactly on the cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub polygon: LatticePolygon,
    /// Support exponents lying on the cell (those with `a_i = φ(i)`).
    pub points: Vec<LatticePoint>,
    pub alpha: Rat,
    pub gamma: (Rat, Rat),
}

impl Cell {
    /// Position of the dual curve vertex, `−γ`.
    pub fn dual_point(&self) -> RationalPoint {
        RationalPoint::new(-self.gamma.0.clone(), -self.gamma.1.clone())
    }

    pub fn area(&self) -> i64 {
        integer_area(&self.polygon)
    }

    pub fn support_at(&self, e: LatticePoint) -> Rat {
        &self.alpha + &self.gamma.0 * rat(e.i) + &self.gamma.1 * rat(e.j)
    }
}

/// A 1-cell `[a, b]` with `a < b` and the indices of the (one or two) adjacent 2-cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionEdge {
    pub a: LatticePoint,
    pub b: LatticePoint,
    pub cells: Vec<usize>,
}

impl SubdivisionEdge {
    pub fn is_boundary(&self) -> bool {
        self.cells.len() < 2
    }
}

#[derive(Clone, Debug)]
pub struct DualSubdivision {
    newton: LatticePolygon,
    lift: BTreeMap<LatticePoint, Rat>,
    cells: Vec<Cell>,
    edges: Vec<SubdivisionEdge>,
}

impl DualSubdivision {
    pub fn new(p: &TropicalPolynomial) -> Self {
        let lift = p.terms().clone();
        let newton = p.newton_polygon();
        let mut sub = Self { newton, lift, cells: Vec::new(), edges: Vec::new() };
        match sub.newton.dimension() {
            2 => sub.wrap(),
            1 => sub.chain(),
            _ => {}
        }
        sub
    }

    pub fn newton_polygon(&self) -> &LatticePolygon {
        &self.newton
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn edges(&self) -> &[SubdivisionEdge] {
        &self.edges
    }

    pub fn lift(&self) -> &BTreeMap<LatticePoint, Rat> {
        &self.lift
    }

    pub fn cell_index(&self, poly: &LatticePolygon) -> Option<usize> {
        self.cells.iter().position(|c| &c.polygon == poly)
    }

    /// True for 2-cells, 1-cells and vertices of the subdivision.
    pub fn is_face(&self, poly: &LatticePolygon) -> bool {
        self.face_support(poly).is_some()
    }

    /// A valid support `(α, γ)` for any face of the subdivision.
    pub fn face_support(&self, poly: &LatticePolygon) -> Option<(Rat, (Rat, Rat))> {
        match poly.dimension() {
            2 => self.cell_index(poly).map(|k| (self.cells[k].alpha.clone(), self.cells[k].gamma.clone())),
            1 => {
                let (a, b) = (poly.vertices()[0], poly.vertices()[1]);
                let e = self.edges.iter().find(|e| e.a == a && e.b == b)?;
                match e.cells.first() {
                    Some(&k) => Some((self.cells[k].alpha.clone(), self.cells[k].gamma.clone())),
                    None => Some(self.segment_support(a, b)),
                }
            }
            _ => {
                let v = *poly.vertices().first()?;
                if self.newton.dimension() == 0 {
                    return self.lift.get(&v).map(|a| (a.clone(), (Rat::zero(), Rat::zero())));
                }
                if let Some(c) = self.cells.iter().find(|c| c.polygon.vertices().contains(&v)) {
                    return Some((c.alpha.clone(), c.gamma.clone()));
                }
                let e = self.edges.iter().find(|e| e.a == v || e.b == v)?;
                Some(self.segment_support(e.a, e.b))
            }
        }
    }

    /// Support of a segment in a one-dimensional subdivision, constant across the segment's normal.
    fn segment_support(&self, a: LatticePoint, b: LatticePoint) -> (Rat, (Rat, Rat)) {
        let d = b - a;
        let k = (&self.lift[&b] - &self.lift[&a]) / rat(d.dot(&d));
        let gamma = (&k * rat(d.i), &k * rat(d.j));
        let alpha = &self.lift[&a] - &gamma.0 * rat(a.i) - &gamma.1 * rat(a.j);
        (alpha, gamma)
    }

    pub fn total_area(&self) -> i64 {
        self.cells.iter().map(Cell::area).sum()
    }

    pub fn is_primitive_triangulation(&self) -> bool {
        self.newton.dimension() == 2 && self.cells.iter().all(|c| c.area() == 1)
    }

    /// Upper concave chain of a collinear support.
    fn chain(&mut self) {
        let (v0, v1) = (self.newton.vertices()[0], self.newton.vertices()[1]);
        let dir = v1 - v0;
        let mut pts: Vec<(i64, LatticePoint)> = self.lift.keys().map(|&p| ((p - v0).dot(&dir), p)).collect();
        pts.sort();
        let mut hull: Vec<(i64, LatticePoint)> = Vec::new();
        for &(t, p) in &pts {
            while hull.len() >= 2 {
                let (t1, p1) = hull[hull.len() - 2];
                let (t2, p2) = hull[hull.len() - 1];
                // drop p2 when it lies on or below the chord p1-p
                let lhs = (&self.lift[&p2] - &self.lift[&p1]) * rat(t - t1);
                let rhs = (&self.lift[&p] - &self.lift[&p1]) * rat(t2 - t1);
                if lhs <= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push((t, p));
        }
        for w in hull.windows(2) {
            let (a, b) = if w[0].1 < w[1].1 { (w[0].1, w[1].1) } else { (w[1].1, w[0].1) };
            self.edges.push(SubdivisionEdge { a, b, cells: vec![] });
        }
    }

    /// Gift-wrapping over the upper hull of the lifted support.
    fn wrap(&mut self) {
        let verts = self.newton.vertices().to_vec();
        let (v0, v1) = (verts[0], verts[1]);
        // first edge of the lifted boundary chain leaving v0 toward v1
        let dir = v1 - v0;
        let mut best: Option<(Rat, i64, LatticePoint)> = None;
        for (&q, h) in &self.lift {
            let w = q - v0;
            if q == v0 || w.cross(&dir) != 0 || w.dot(&dir) <= 0 {
                continue;
            }
            let t = w.dot(&dir);
            let slope = (h - &self.lift[&v0]) / rat(t);
            let better = match &best {
                None => true,
                Some((s, bt, _)) => slope > *s || (slope == *s && t < *bt),
            };
            if better {
                best = Some((slope, t, q));
            }
        }
        let q = best.expect("boundary edge has a second point").2;
        let first = self.wrap_across(q, v0);

        let mut index: BTreeMap<Vec<LatticePoint>, usize> = BTreeMap::new();
        let mut edge_index: BTreeMap<(LatticePoint, LatticePoint), usize> = BTreeMap::new();
        index.insert(first.polygon.vertices().to_vec(), 0);
        self.cells.push(first);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            let poly_edges = self.cells[k].polygon.edges();
            for (u, w) in poly_edges {
                let key = if u < w { (u, w) } else { (w, u) };
                let has_outside = self.lift.keys().any(|&p| orient(u, w, p) < 0);
                let neighbour = if has_outside {
                    let cell = self.wrap_across(u, w);
                    let vkey = cell.polygon.vertices().to_vec();
                    Some(match index.get(&vkey) {
                        Some(&n) => n,
                        None => {
                            let n = self.cells.len();
                            index.insert(vkey, n);
                            self.cells.push(cell);
                            queue.push_back(n);
                            n
                        }
                    })
                } else {
                    None
                };
                let slot = *edge_index.entry(key).or_insert_with(|| {
                    self.edges.push(SubdivisionEdge { a: key.0, b: key.1, cells: vec![] });
                    self.edges.len() - 1
                });
                for c in std::iter::once(k).chain(neighbour) {
                    if !self.edges[slot].cells.contains(&c) {
                        self.edges[slot].cells.push(c);
                    }
                }
            }
        }
        self.edges.sort_by_key(|e| (e.a, e.b));
        for e in &mut self.edges {
            e.cells.sort_unstable();
        }
    }

    /// The cell on the right of the directed upper-hull edge `a → b`.
    fn wrap_across(&self, a: LatticePoint, b: LatticePoint) -> Cell {
        let d = b - a;
        let dd = rat(d.dot(&d));
        let (ha, hb) = (&self.lift[&a], &self.lift[&b]);
        let mut best: Option<(Rat, LatticePoint)> = None;
        for (&p, hp) in &self.lift {
            let c = -d.cross(&(p - a));
            if c <= 0 {
                continue;
            }
            let t = rat((p - a).dot(&d)) / &dd;
            let s = (hp - ha - t * (hb - ha)) / rat(c);
            if best.as_ref().map_or(true, |(bs, _)| s > *bs) {
                best = Some((s, p));
            }
        }
        let p = best.expect("a point lies beyond the edge").1;
        let (alpha, gamma) = plane_through([(a, ha.clone()), (b, hb.clone()), (p, self.lift[&p].clone())]);
        let mut points = Vec::new();
        for (&e, h) in &self.lift {
            let phi = &alpha + &gamma.0 * rat(e.i) + &gamma.1 * rat(e.j);
            debug_assert!(*h <= phi, "support must dominate the lift");
            if *h == phi {
                points.push(e);
            }
        }
        Cell { polygon: LatticePolygon::hull(&points), points, alpha, gamma }
    }
}

/// Affine function `α + ⟨γ, i⟩` through three lifted, non-collinear points.
fn plane_through(p: [(LatticePoint, Rat); 3]) -> (Rat, (Rat, Rat)) {
    let (a, ha) = &p[0];
    let (b, hb) = &p[1];
    let (c, hc) = &p[2];
    let u = *b - *a;
    let v = *c - *a;
    let det = rat(u.cross(&v));
    let du = hb - ha;
    let dv = hc - ha;
    // γ·u = du, γ·v = dv
    let g0 = (&du * rat(v.j) - &dv * rat(u.j)) / &det;
    let g1 = (&dv * rat(u.i) - &du * rat(v.i)) / &det;
    let alpha = ha - &g0 * rat(a.i) - &g1 * rat(a.j);
    (alpha, (g0, g1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::standard_triangle;
    use crate::troppoly::parse;
    use proptest::prelude::*;

    fn lp(i: i64, j: i64) -> LatticePoint {
        LatticePoint::new(i, j)
    }

    fn tri(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> LatticePolygon {
        LatticePolygon::hull(&[lp(a.0, a.1), lp(b.0, b.1), lp(c.0, c.1)])
    }

    #[test]
    fn conic_subdivision() {
        let sub = parse("x^2+y^2+2x+2y+3*x*y+3").unwrap().dual_subdivision();
        let mut got: Vec<_> = sub.cells().iter().map(|c| c.polygon.clone()).collect();
        got.sort();
        let mut want = vec![
            tri((0, 0), (1, 0), (1, 1)),
            tri((0, 0), (0, 1), (1, 1)),
            tri((1, 0), (2, 0), (1, 1)),
            tri((0, 1), (0, 2), (1, 1)),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(sub.total_area(), 4);
        assert!(sub.is_primitive_triangulation());
    }

    #[test]
    fn line_is_one_cell() {
        let sub = parse("x+y+0").unwrap().dual_subdivision();
        assert_eq!(sub.cells().len(), 1);
        assert_eq!(sub.cells()[0].polygon, standard_triangle(1));
        assert_eq!(sub.edges().len(), 3);
        assert!(sub.edges().iter().all(SubdivisionEdge::is_boundary));
    }

    #[test]
    fn coplanar_points_stay_in_one_cell() {
        // all-zero lift on T_2: one non-simplicial cell
        let p = parse("x^2+y^2+x+y+x*y+0").unwrap();
        let sub = p.dual_subdivision();
        assert_eq!(sub.cells().len(), 1);
        assert_eq!(sub.cells()[0].points.len(), 6);
        assert!(!sub.is_primitive_triangulation());
    }

    #[test]
    fn honeycomb_lift_gives_unit_triangles() {
        for d in 1..=5i64 {
            let mut terms = Vec::new();
            for i in 0..=d {
                for j in 0..=d - i {
                    terms.push((i, j, -(i * i + i * j + j * j)));
                }
            }
            let sub = TropicalPolynomial::from_int_terms(&terms).unwrap().dual_subdivision();
            assert_eq!(sub.cells().len() as i64, d * d);
            // independent check: each unit up/down triangle is a cell
            for i in 0..d {
                for j in 0..d - i {
                    assert!(sub.cell_index(&tri((i, j), (i + 1, j), (i, j + 1))).is_some());
                    if i + j + 2 <= d {
                        assert!(sub.cell_index(&tri((i + 1, j), (i, j + 1), (i + 1, j + 1))).is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn one_dimensional_support() {
        let sub = parse("x^2 + 5x + 0").unwrap().dual_subdivision();
        assert!(sub.cells().is_empty());
        assert_eq!(sub.edges().len(), 2);
        let sub = parse("x^2 + -5x + 0").unwrap().dual_subdivision();
        assert_eq!(sub.edges().len(), 1);
        assert_eq!((sub.edges()[0].a, sub.edges()[0].b), (lp(0, 0), lp(2, 0)));
    }

    fn poly() -> impl Strategy<Value = TropicalPolynomial> {
        proptest::collection::btree_map((0i64..5, 0i64..5), -30i64..30, 3..16).prop_map(|m| {
            TropicalPolynomial::from_terms(m.into_iter().map(|((i, j), a)| (lp(i, j), rat(a)))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn cells_tile_the_newton_polygon(p in poly()) {
            let sub = p.dual_subdivision();
            prop_assume!(sub.newton_polygon().dimension() == 2);
            prop_assert_eq!(sub.total_area(), integer_area(sub.newton_polygon()));
            for c in sub.cells() {
                for (e, a) in p.terms() {
                    let phi = c.support_at(*e);
                    prop_assert!(*a <= phi);
                    prop_assert_eq!(*a == phi, c.points.contains(e));
                }
            }
            // interior edges have two cells, boundary edges one
            for e in sub.edges() {
                let on_boundary = sub.newton_polygon().edges().iter().any(|&(u, w)| {
                    orient(u, w, e.a) == 0 && orient(u, w, e.b) == 0
                });
                prop_assert_eq!(e.is_boundary(), on_boundary);
            }
        }

        #[test]
        fn upper_hull_agrees_with_pointwise_maximum(p in poly(), x in -40i64..40, y in -40i64..40) {
            let sub = p.dual_subdivision();
            prop_assume!(sub.newton_polygon().dimension() == 2);
            // the argmax at a curve vertex is exactly the support of its cell
            for c in sub.cells() {
                let (_, arg) = p.eval(&c.dual_point());
                prop_assert_eq!(arg, c.points.clone());
            }
            let pt = RationalPoint::from_ints(x, y);
            let (_, arg) = p.eval(&pt);
            let hull = LatticePolygon::hull(&arg);
            prop_assert!(hull.dimension() < 2 || sub.cell_index(&hull).is_some());
        }
    }
}

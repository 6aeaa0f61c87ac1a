//! Weighted plane tropical curves built from their dual subdivisions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TropError};
use crate::geom::{lattice_length, primitive_direction, rational_direction, LatticePoint, LatticePolygon, Piece, RationalPoint};
use crate::rational::Rat;
use crate::subdivision::DualSubdivision;
use crate::troppoly::TropicalPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveVertex {
    pub position: RationalPoint,
    /// Index of the dual 2-cell in the subdivision.
    pub cell: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveEdge {
    pub v1: usize,
    pub v2: usize,
    pub weight: i64,
    /// Primitive direction from `v1` to `v2`.
    pub dir: LatticePoint,
    pub dual: (LatticePoint, LatticePoint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRay {
    pub v: usize,
    pub dir: LatticePoint,
    pub weight: i64,
    pub dual: (LatticePoint, LatticePoint),
}

#[derive(Clone, Debug)]
pub struct TropicalCurve {
    pub polynomial: TropicalPolynomial,
    pub subdivision: DualSubdivision,
    pub vertices: Vec<CurveVertex>,
    pub edges: Vec<CurveEdge>,
    pub rays: Vec<CurveRay>,
    pub degree: Option<u32>,
}

/// Per-vertex residual `Σ w(e) u_{v,e}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancingReport {
    pub residuals: Vec<(usize, LatticePoint)>,
}

impl BalancingReport {
    pub fn is_balanced(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    pub fn unbalanced(&self) -> Vec<usize> {
        self.residuals.iter().filter(|(_, r)| !r.is_zero()).map(|(v, _)| *v).collect()
    }
}

/// `l(e)` for every bounded edge, keyed by edge index.
pub type EdgeLengthTable = BTreeMap<usize, Rat>;

pub fn build_curve(p: &TropicalPolynomial) -> Result<TropicalCurve> {
    let sub = p.dual_subdivision();
    let dim = sub.newton_polygon().dimension();
    if dim < 2 {
        return Err(TropError::DegenerateCurve(dim));
    }
    // vertices sorted by position
    let mut order: Vec<usize> = (0..sub.cells().len()).collect();
    let positions: Vec<RationalPoint> = sub.cells().iter().map(|c| c.dual_point()).collect();
    order.sort_by(|&a, &b| positions[a].cmp(&positions[b]));
    let mut vertex_of_cell = vec![0usize; order.len()];
    let vertices: Vec<CurveVertex> = order
        .iter()
        .enumerate()
        .map(|(id, &c)| {
            vertex_of_cell[c] = id;
            CurveVertex { position: positions[c].clone(), cell: c }
        })
        .collect();

    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for e in sub.edges() {
        let weight = lattice_length(e.a, e.b)?;
        match e.cells.as_slice() {
            [c1, c2] => {
                let (mut v1, mut v2) = (vertex_of_cell[*c1], vertex_of_cell[*c2]);
                if v1 > v2 {
                    std::mem::swap(&mut v1, &mut v2);
                }
                let (dx, dy) = vertices[v2].position.sub(&vertices[v1].position);
                let (_, dir) = rational_direction(&dx, &dy)?;
                edges.push(CurveEdge { v1, v2, weight, dir, dual: (e.a, e.b) });
            }
            [c] => {
                let cell = &sub.cells()[*c];
                // outward normal of the boundary segment, away from the cell
                let d = e.b - e.a;
                let mut n = LatticePoint::new(d.j, -d.i);
                let inner = cell.polygon.vertices().iter().find(|&&q| q != e.a && q != e.b).copied().unwrap();
                if n.dot(&(inner - e.a)) > 0 {
                    n = -n;
                }
                rays.push(CurveRay { v: vertex_of_cell[*c], dir: primitive_direction(n)?, weight, dual: (e.a, e.b) });
            }
            _ => return Err(TropError::Invariant("subdivision edge without cells".into())),
        }
    }
    edges.sort_by_key(|e| (e.v1, e.v2, e.dual));
    rays.sort_by_key(|r| (r.v, r.dir, r.dual));
    let degree = sub.newton_polygon().standard_triangle_degree();
    Ok(TropicalCurve { polynomial: p.clone(), subdivision: sub, vertices, edges, rays, degree })
}

impl TropicalCurve {
    pub fn cell_polygon(&self, v: usize) -> &LatticePolygon {
        &self.subdivision.cells()[self.vertices[v].cell].polygon
    }

    /// Edges and rays at `v` as `(outgoing primitive direction, weight, bounded edge index or None)`.
    pub fn incident(&self, v: usize) -> Vec<(LatticePoint, i64, Option<usize>)> {
        let mut out = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if e.v1 == v {
                out.push((e.dir, e.weight, Some(k)));
            }
            if e.v2 == v {
                out.push((-e.dir, e.weight, Some(k)));
            }
        }
        for r in &self.rays {
            if r.v == v {
                out.push((r.dir, r.weight, None));
            }
        }
        out
    }

    pub fn verify_balancing(&self) -> BalancingReport {
        let mut res = vec![LatticePoint::new(0, 0); self.vertices.len()];
        for e in &self.edges {
            res[e.v1] = res[e.v1] + e.dir.scale(e.weight);
            res[e.v2] = res[e.v2] - e.dir.scale(e.weight);
        }
        for r in &self.rays {
            res[r.v] = res[r.v] + r.dir.scale(r.weight);
        }
        BalancingReport { residuals: res.into_iter().enumerate().collect() }
    }

    /// Every dual 2-cell has integer area 1.
    pub fn is_nonsingular(&self) -> bool {
        self.subdivision.is_primitive_triangulation()
    }

    pub fn edge_lengths(&self) -> EdgeLengthTable {
        self.edges
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let (dx, dy) = self.vertices[e.v2].position.sub(&self.vertices[e.v1].position);
                let (len, _) = rational_direction(&dx, &dy).expect("distinct endpoints");
                (k, len / crate::rational::rat(e.weight))
            })
            .collect()
    }

    /// Bounded edges minus vertices plus one (the curve is connected).
    pub fn first_betti_number(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// Exact geometric pieces: one segment per bounded edge and one ray per unbounded edge.
    pub fn pieces(&self) -> Vec<Piece> {
        let mut out: Vec<Piece> = self
            .edges
            .iter()
            .map(|e| Piece::Segment(self.vertices[e.v1].position.clone(), self.vertices[e.v2].position.clone()))
            .collect();
        out.extend(self.rays.iter().map(|r| Piece::Ray(self.vertices[r.v].position.clone(), r.dir)));
        out
    }

    pub fn vertex_at(&self, p: &RationalPoint) -> Option<usize> {
        self.vertices.iter().position(|v| &v.position == p)
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.polynomial.vanishes_at(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("curve serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| TropError::Parse { pos: e.column(), msg: e.to_string() })
    }
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct EdgeJson {
    v1: usize,
    v2: usize,
    weight: i64,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct RayJson {
    v: usize,
    dir: [i64; 2],
    weight: i64,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct CurveJson {
    polynomial: TropicalPolynomial,
    degree: Option<u32>,
    vertices: Vec<RationalPoint>,
    edges: Vec<EdgeJson>,
    rays: Vec<RayJson>,
}

impl TropicalCurve {
    fn json_form(&self) -> CurveJson {
        CurveJson {
            polynomial: self.polynomial.clone(),
            degree: self.degree,
            vertices: self.vertices.iter().map(|v| v.position.clone()).collect(),
            edges: self.edges.iter().map(|e| EdgeJson { v1: e.v1, v2: e.v2, weight: e.weight }).collect(),
            rays: self.rays.iter().map(|r| RayJson { v: r.v, dir: [r.dir.i, r.dir.j], weight: r.weight }).collect(),
        }
    }
}

impl PartialEq for TropicalCurve {
    fn eq(&self, other: &Self) -> bool {
        self.json_form() == other.json_form()
    }
}

impl Serialize for TropicalCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.json_form().serialize(s)
    }
}

/// Rebuilds the curve from its polynomial and checks the stored geometry against it.
impl<'de> Deserialize<'de> for TropicalCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CurveJson::deserialize(d)?;
        let curve = build_curve(&raw.polynomial).map_err(serde::de::Error::custom)?;
        if curve.json_form() != raw {
            return Err(serde::de::Error::custom("stored geometry does not match the polynomial"));
        }
        Ok(curve)
    }
}

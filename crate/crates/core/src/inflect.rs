//! Inflection components of non-singular plane tropical curves with Newton polygon `T_d`.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::curve::{build_curve, EdgeLengthTable, TropicalCurve};
use crate::error::{Result, TropError};
use crate::geom::{connected_groups, integer_area, lattice_length, LatticePoint, LatticePolygon, Piece, RationalPoint};
use crate::intersect::{components, IntersectionComponent};
use crate::rational::{rat, Rat};
use crate::troppoly::TropicalPolynomial;

/// `3·Area(Δ) − Σ r_δ`, where edges parallel to an edge of `T_1` are charged once or twice
/// depending on the side `Δ` lies on.
pub fn i_delta(delta: &LatticePolygon) -> i64 {
    let verts = delta.vertices();
    let mut r = 0;
    for (a, b) in delta.edges() {
        let d = b - a;
        let len = lattice_length(a, b).expect("polygon edges are non-degenerate");
        // (normal, sign) so that the favourable side is {normal·i ≤ normal·a}
        let favourable = if d.i == 0 {
            Some(LatticePoint::new(1, 0))
        } else if d.j == 0 {
            Some(LatticePoint::new(0, 1))
        } else if d.i + d.j == 0 {
            Some(LatticePoint::new(-1, -1))
        } else {
            None
        };
        if let Some(n) = favourable {
            let level = n.dot(&a);
            let inside = verts.iter().all(|v| n.dot(v) <= level);
            r += if inside { len } else { 2 * len };
        }
    }
    3 * integer_area(delta) - r
}

/// Shape of the component `E` of `C ∩ L` containing the vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EClass {
    VertexOnly,
    BoundedEdge { edge: usize },
    UnboundedEdge { dir: [i64; 2] },
    /// Bounded edge indices plus the direction of the unbounded one, if any.
    ThreeEdges { bounded: Vec<usize>, unbounded: Option<[i64; 2]> },
}

#[derive(Clone, Debug)]
pub struct TangencyDatum {
    pub vertex: usize,
    pub line: TropicalPolynomial,
    pub component: IntersectionComponent,
    pub class: EClass,
    /// `(C ∘ L)_E`.
    pub total: i64,
    pub gate: bool,
}

fn check_preconditions(c: &TropicalCurve) -> Result<u32> {
    if !c.is_nonsingular() {
        return Err(TropError::Singular("a dual cell is not a primitive triangle".into()));
    }
    match c.degree {
        Some(d) if d >= 2 => Ok(d),
        _ => Err(TropError::NotStandardTriangle),
    }
}

/// Places the standard line at vertex `v`, finds the component of `C ∩ L` through `v`
/// and classifies it.
pub fn tangency_component(c: &TropicalCurve, v: usize) -> Result<TangencyDatum> {
    check_preconditions(c)?;
    let pos = &c.vertices[v].position;
    let line = TropicalPolynomial::line_through(pos);
    let lc = build_curve(&line)?;
    let comps = components(c, &lc)?;
    let component = comps
        .into_iter()
        .find(|e| e.contains(pos))
        .ok_or_else(|| TropError::Invariant("vertex missing from C ∩ L".into()))?;
    let mut bounded = Vec::new();
    let mut unbounded = Vec::new();
    for (dir, _, edge) in c.incident(v) {
        let probe = match edge {
            Some(k) => {
                let e = &c.edges[k];
                let (a, b) = (&c.vertices[e.v1].position, &c.vertices[e.v2].position);
                RationalPoint::new((&a.x + &b.x) / rat(2), (&a.y + &b.y) / rat(2))
            }
            None => pos.offset(dir, &rat(1)),
        };
        if component.contains(&probe) {
            match edge {
                Some(k) => bounded.push(k),
                None => unbounded.push(dir),
            }
        }
    }
    let class = match (bounded.len(), unbounded.len()) {
        (0, 0) => EClass::VertexOnly,
        (1, 0) => EClass::BoundedEdge { edge: bounded[0] },
        (0, 1) => EClass::UnboundedEdge { dir: [unbounded[0].i, unbounded[0].j] },
        (b, u) if b + u == 3 => EClass::ThreeEdges { bounded, unbounded: unbounded.first().map(|d| [d.i, d.j]) },
        (b, u) => {
            return Err(TropError::Invariant(format!(
                "component through vertex {v} contains {b} bounded and {u} unbounded edges"
            )))
        }
    };
    let total = component.total;
    Ok(TangencyDatum { vertex: v, line, component, class, total, gate: total >= 3 })
}

/// Point at lattice distance `s` from vertex `v` along bounded edge `k`.
fn point_on_edge(c: &TropicalCurve, v: usize, k: usize, s: &Rat) -> RationalPoint {
    let e = &c.edges[k];
    let dir = if e.v1 == v { e.dir } else { -e.dir };
    c.vertices[v].position.offset(dir, s)
}

/// The set `ℑ_L` attached to a gate-passing tangency datum.
pub fn inflection_locus_of_vertex(c: &TropicalCurve, t: &TangencyDatum, lengths: &EdgeLengthTable) -> Result<Vec<Piece>> {
    if !t.gate {
        return Err(TropError::Invalid(format!("vertex {} does not pass the multiplicity gate", t.vertex)));
    }
    let v = t.vertex;
    let pos = c.vertices[v].position.clone();
    let three = rat(3);
    Ok(match &t.class {
        EClass::VertexOnly | EClass::UnboundedEdge { .. } => vec![Piece::Point(pos)],
        EClass::BoundedEdge { edge } => {
            let p = point_on_edge(c, v, *edge, &(&lengths[edge] / &three));
            vec![Piece::Point(pos), Piece::Point(p)]
        }
        EClass::ThreeEdges { bounded, unbounded } => {
            let mut b: Vec<(Rat, usize)> = bounded.iter().map(|k| (lengths[k].clone(), *k)).collect();
            b.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
            match (b.len(), unbounded) {
                (2, Some(d)) => {
                    let (l1, e1) = &b[0];
                    let l2 = &b[1].0;
                    if l1 > l2 {
                        vec![Piece::Point(point_on_edge(c, v, *e1, &((l1 - l2) / &three)))]
                    } else {
                        vec![Piece::Ray(pos, LatticePoint::new(d[0], d[1]))]
                    }
                }
                (3, None) => {
                    let (l1, e1) = &b[0];
                    let (l2, e2) = &b[1];
                    let l3 = &b[2].0;
                    if l2 > l3 {
                        vec![
                            Piece::Point(point_on_edge(c, v, *e1, &((l1 - l3) / &three))),
                            Piece::Point(point_on_edge(c, v, *e2, &((l2 - l3) / &three))),
                        ]
                    } else if l1 > l2 {
                        vec![Piece::Segment(pos, point_on_edge(c, v, *e1, &((l1 - l2) / &three)))]
                    } else {
                        vec![Piece::Point(pos)]
                    }
                }
                _ => {
                    return Err(TropError::Invariant(format!(
                        "vertex {v}: three-edge component with {} bounded edges passed the gate",
                        b.len()
                    )))
                }
            }
        }
    })
}

/// Which clause of the multiplicity definition produced `μ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuRule {
    /// Single vertex dual to a primitive triangle other than `T_1`: `μ = i_Δ`.
    VertexIDelta,
    /// Bounded and containing a vertex dual to a translate of `T_1`: `μ = 6`.
    BoundedUnitTriangle,
    Default,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflectionComponent {
    pub geometry: Vec<Piece>,
    pub mu: i64,
    pub mu_real: i64,
    pub rule: MuRule,
    /// `μ = 0`: kept for completeness, excluded from odd counts.
    pub null: bool,
    /// Built from the loci of more than one vertex.
    pub merged: bool,
    /// Contributing vertices with their `ℑ_L` pieces.
    pub provenance: Vec<(usize, Vec<Piece>)>,
}

impl InflectionComponent {
    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.geometry.iter().any(|g| g.contains(p))
    }

    pub fn is_point(&self) -> bool {
        matches!(self.geometry.as_slice(), [Piece::Point(_)])
    }

    pub fn is_bounded(&self) -> bool {
        self.geometry.iter().all(Piece::is_bounded)
    }

    /// Squared Euclidean distance from `p` to the component.
    pub fn distance2(&self, p: &RationalPoint) -> Rat {
        self.geometry.iter().map(|g| g.distance2(p)).min().expect("component is non-empty")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflectionSummary {
    pub sum_mu: i64,
    pub sum_mu_real: i64,
    pub d: u32,
    pub generic: bool,
    pub odd_components: usize,
    pub mu1_components: usize,
    pub mu2_components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflectionReport {
    pub components: Vec<InflectionComponent>,
    pub summary: InflectionSummary,
}

/// All inflection components of `C`, with multiplicities.
pub fn inflection_components(c: &TropicalCurve) -> Result<Vec<InflectionComponent>> {
    check_preconditions(c)?;
    let lengths = c.edge_lengths();
    let mut loci: Vec<(usize, Piece)> = Vec::new();
    for v in 0..c.vertices.len() {
        let t = tangency_component(c, v)?;
        if t.gate {
            for p in inflection_locus_of_vertex(c, &t, &lengths)? {
                loci.push((v, p));
            }
        }
    }
    let pieces: Vec<Piece> = loci.iter().map(|(_, p)| p.clone()).collect();
    let mut out = Vec::new();
    for group in connected_groups(&pieces) {
        let geometry = simplify(group.iter().map(|&k| pieces[k].clone()).collect());
        let mut provenance: Vec<(usize, Vec<Piece>)> = Vec::new();
        for &k in &group {
            let (v, p) = &loci[k];
            match provenance.iter_mut().find(|(w, _)| w == v) {
                Some((_, ps)) => ps.push(p.clone()),
                None => provenance.push((*v, vec![p.clone()])),
            }
        }
        provenance.sort_by_key(|(v, _)| *v);
        let merged = provenance.len() > 1;
        let single_vertex = match geometry.as_slice() {
            [Piece::Point(p)] => c.vertex_at(p),
            _ => None,
        };
        let bounded = geometry.iter().all(Piece::is_bounded);
        let (mu, rule) = match single_vertex {
            Some(w) if !c.cell_polygon(w).is_unit_simplex_translate() => (i_delta(c.cell_polygon(w)), MuRule::VertexIDelta),
            _ if bounded && contains_unit_vertex(c, &geometry) => (6, MuRule::BoundedUnitTriangle),
            _ => (3, MuRule::Default),
        };
        out.push(InflectionComponent {
            geometry,
            mu,
            mu_real: mu.rem_euclid(2),
            rule,
            null: mu == 0,
            merged,
            provenance,
        });
    }
    out.sort_by(|a, b| crate::intersect::sort_key(&a.geometry[0]).cmp(&crate::intersect::sort_key(&b.geometry[0])));
    Ok(out)
}

fn contains_unit_vertex(c: &TropicalCurve, geometry: &[Piece]) -> bool {
    c.vertices.iter().enumerate().any(|(w, vert)| {
        c.cell_polygon(w).is_unit_simplex_translate() && geometry.iter().any(|g| g.contains(&vert.position))
    })
}

/// Drops duplicate pieces and points covered by one-dimensional pieces.
fn simplify(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut uniq: Vec<Piece> = Vec::new();
    for p in pieces {
        if !uniq.contains(&p) {
            uniq.push(p);
        }
    }
    let solid: Vec<Piece> = uniq.iter().filter(|p| !matches!(p, Piece::Point(_))).cloned().collect();
    let mut out: Vec<Piece> = uniq
        .into_iter()
        .filter(|p| match p {
            Piece::Point(q) => !solid.iter().any(|s| s.contains(q)),
            _ => true,
        })
        .collect();
    out.sort_by_key(crate::intersect::sort_key);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub generic: bool,
    /// Vertices dual to a translate of `T_1` with three bounded edges of non-distinct lengths.
    pub witnesses: Vec<usize>,
}

pub fn genericity_check(c: &TropicalCurve) -> GenericityReport {
    let lengths = c.edge_lengths();
    let mut witnesses = Vec::new();
    for v in 0..c.vertices.len() {
        if !c.cell_polygon(v).is_unit_simplex_translate() {
            continue;
        }
        let ls: Vec<&Rat> = c.incident(v).iter().filter_map(|(_, _, e)| e.map(|k| &lengths[&k])).collect();
        if ls.len() == 3 {
            let distinct: BTreeSet<&Rat> = ls.iter().copied().collect();
            if distinct.len() < 3 {
                witnesses.push(v);
            }
        }
    }
    GenericityReport { generic: witnesses.is_empty(), witnesses }
}

pub fn summarize(c: &TropicalCurve, comps: &[InflectionComponent]) -> InflectionSummary {
    let live = comps.iter().filter(|e| !e.null);
    InflectionSummary {
        sum_mu: comps.iter().map(|e| e.mu).sum(),
        sum_mu_real: comps.iter().map(|e| e.mu_real).sum(),
        d: c.degree.unwrap_or(0),
        generic: genericity_check(c).generic,
        odd_components: live.clone().filter(|e| e.mu % 2 != 0).count(),
        mu1_components: live.clone().filter(|e| e.mu == 1).count(),
        mu2_components: live.filter(|e| e.mu == 2).count(),
    }
}

pub fn inflection_report(c: &TropicalCurve) -> Result<InflectionReport> {
    let components = inflection_components(c)?;
    let summary = summarize(c, &components);
    Ok(InflectionReport { components, summary })
}

/// `3d(d−2)`.
pub fn expected_total(d: u32) -> i64 {
    let d = d as i64;
    3 * d * (d - 2)
}

pub fn is_zero_length(l: &Rat) -> bool {
    l.is_zero()
}

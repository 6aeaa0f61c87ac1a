//! Symbolic Hessian curves and their tropical shadows.

use std::collections::{BTreeMap, BTreeSet};

use tropinflect_core::{build_curve, GaussianRational, LatticePoint, LatticePolygon, PuiseuxNumber, RationalPoint, TropicalCurve};

use crate::classical::ClassicalCurve;
use crate::error::{OracleError, Result};
use crate::mpoly::{dehomogenize, hessian3, homogenize, MPoly, Ring};

/// `Hess(z²w²u² · u^d P(z/u, w/u))` at `u = 1`, without removing monomial factors.
pub fn hessian_raw<C: Ring>(p: &MPoly<C, 2>, d: u32) -> MPoly<C, 3> {
    let f = homogenize(p, d);
    let ph = MPoly::from_terms(f.terms().iter().map(|(e, c)| ([e[0] + 2, e[1] + 2, e[2] + 2], c.clone())));
    hessian3(&ph)
}

/// The curve `H_P`, divided by the largest monomial factor.
pub fn hessian_poly(x: &ClassicalCurve) -> Result<ClassicalCurve> {
    let h = dehomogenize(&hessian_raw(&x.to_mpoly(), x.degree()));
    if h.is_zero() {
        return Err(OracleError::ZeroHessian);
    }
    ClassicalCurve::from_mpoly(&h.divide_monomial(&h.min_exponents()), None)
}

fn newton_polygon(x: &ClassicalCurve) -> LatticePolygon {
    LatticePolygon::hull(&x.terms().keys().copied().collect::<Vec<_>>())
}

/// Newton polygon of `H_P` is `3Δ(P)` up to translation.
pub fn newton_is_tripled(x: &ClassicalCurve, h: &ClassicalCurve) -> bool {
    let dp = newton_polygon(x);
    let dh = newton_polygon(h);
    let tripled: Vec<LatticePoint> = dp.vertices().iter().map(|v| v.scale(3)).collect();
    let (Some(a), Some(b)) = (tripled.iter().min(), dh.vertices().iter().min()) else {
        return false;
    };
    LatticePolygon::hull(&tripled).translate(*b - *a) == dh
}

type EdgeKey = (RationalPoint, RationalPoint);

fn edge_table(c: &TropicalCurve) -> (BTreeSet<RationalPoint>, BTreeMap<EdgeKey, i64>, BTreeMap<(RationalPoint, LatticePoint), i64>) {
    let verts = c.vertices.iter().map(|v| v.position.clone()).collect();
    let edges = c
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (c.vertices[e.v1].position.clone(), c.vertices[e.v2].position.clone());
            (if a <= b { (a, b) } else { (b, a) }, e.weight)
        })
        .collect();
    let rays = c.rays.iter().map(|r| ((c.vertices[r.v].position.clone(), r.dir), r.weight)).collect();
    (verts, edges, rays)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SubdivisionCheck {
    pub newton_tripled: bool,
    pub same_vertices: bool,
    pub same_edges: bool,
    pub weights_tripled: bool,
}

impl SubdivisionCheck {
    pub fn holds(&self) -> bool {
        self.newton_tripled && self.same_vertices && self.same_edges && self.weights_tripled
    }
}

/// Compares `Trop(V(H_P))` with the curve of `P`: same vertices, same edges and rays, weights
/// multiplied by three.
pub fn check_hessian_tropicalization(x: &ClassicalCurve) -> Result<SubdivisionCheck> {
    let c = build_curve(&x.tropicalize())?;
    let h = hessian_poly(x)?;
    let ch = build_curve(&h.tropicalize())?;
    let (v1, e1, r1) = edge_table(&c);
    let (v2, e2, r2) = edge_table(&ch);
    let same_edges = e1.keys().eq(e2.keys()) && r1.keys().eq(r2.keys());
    let weights_tripled = same_edges
        && e1.iter().all(|(k, w)| e2[k] == 3 * w)
        && r1.iter().all(|(k, w)| r2[k] == 3 * w);
    Ok(SubdivisionCheck { newton_tripled: newton_is_tripled(x, &h), same_vertices: v1 == v2, same_edges, weights_tripled })
}

/// For every vertex of the curve, the initial form of `H_P` on the matching cell equals the
/// Hessian of the initial form of `P`.
pub fn initial_forms_commute(x: &ClassicalCurve) -> Result<bool> {
    let c = build_curve(&x.tropicalize())?;
    let raw = dehomogenize(&hessian_raw(&x.to_mpoly(), x.degree()));
    if raw.is_zero() {
        return Err(OracleError::ZeroHessian);
    }
    let h = ClassicalCurve::from_mpoly(&raw, None)?;
    let ch = build_curve(&h.tropicalize())?;
    for v in 0..c.vertices.len() {
        let pos = &c.vertices[v].position;
        let Some(hv) = ch.vertex_at(pos) else {
            return Ok(false);
        };
        let (alpha, gamma) = c.subdivision.face_support(c.cell_polygon(v)).expect("vertex cell");
        let pf = x.leading_terms(&alpha, &gamma);
        let pf: MPoly<GaussianRational, 2> = MPoly::from_terms(pf.into_iter().map(|(e, c)| ([e.i as u32, e.j as u32], c)));
        let expected = dehomogenize(&hessian_raw(&pf, x.degree()));
        let (ha, hg) = ch.subdivision.face_support(ch.cell_polygon(hv)).expect("vertex cell");
        let got = h.leading_terms(&ha, &hg);
        let got: MPoly<GaussianRational, 2> = MPoly::from_terms(got.into_iter().map(|(e, c)| ([e.i as u32, e.j as u32], c)));
        if got != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coefficient map of a Puiseux polynomial with every coefficient conjugated.
pub fn conj_poly(p: &MPoly<PuiseuxNumber, 2>) -> MPoly<PuiseuxNumber, 2> {
    p.map(PuiseuxNumber::conj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropinflect_core::rational::rat;
    use tropinflect_core::Rat;

    fn random_enriched(d: u32, seed: u64, gaussian: bool) -> ClassicalCurve {
        ClassicalCurve::random_lift(&tropinflect_core::gen::random(d, seed).unwrap(), seed, gaussian).unwrap()
    }

    #[test]
    fn hessian_newton_polygon_is_tripled() {
        for d in 2..=4 {
            for seed in 0..3 {
                let x = random_enriched(d, seed, false);
                let h = hessian_poly(&x).unwrap();
                assert!(newton_is_tripled(&x, &h), "d={d} seed={seed}");
                assert_eq!(h.degree(), 3 * d);
            }
        }
    }

    #[test]
    fn line_hessian_is_not_zero_but_linear_forms_vanish() {
        // the monomial factor keeps H_P non-zero even for a line
        let line = ClassicalCurve::new(
            [(LatticePoint::new(1, 0), PuiseuxNumber::one()), (LatticePoint::new(0, 1), PuiseuxNumber::one())],
            Some(1),
        )
        .unwrap();
        assert!(hessian_poly(&line).is_ok());
        let plain: MPoly<Rat, 2> = MPoly::from_terms([([1, 0], rat(1)), ([0, 1], rat(2)), ([0, 0], rat(3))]);
        assert!(hessian3(&homogenize(&plain, 1)).is_zero());
    }

    #[test]
    fn real_curves_have_real_hessians_and_conjugation_commutes() {
        for seed in 0..4 {
            let x = random_enriched(3, seed, false);
            assert!(hessian_poly(&x).unwrap().is_real());
            let y = random_enriched(3, seed, true);
            assert!(!y.is_real());
            assert_eq!(hessian_poly(&y.conj()).unwrap(), hessian_poly(&y).unwrap().conj());
            assert_eq!(conj_poly(&conj_poly(&y.to_mpoly())), y.to_mpoly());
        }
    }

    #[test]
    fn hessian_tropicalization_triples_the_curve() {
        for d in 2..=3 {
            for seed in 0..3 {
                let x = random_enriched(d, seed, false);
                let r = check_hessian_tropicalization(&x).unwrap();
                assert!(r.holds(), "d={d} seed={seed}: {r:?}");
            }
        }
    }

    #[test]
    fn initial_form_commutation() {
        for d in 2..=3 {
            for seed in 0..3 {
                assert!(initial_forms_commute(&random_enriched(d, seed, seed % 2 == 1)).unwrap(), "d={d} seed={seed}");
            }
        }
    }
}

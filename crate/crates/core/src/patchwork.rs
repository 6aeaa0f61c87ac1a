//! Combinatorial patchworking: real arcs from a primitive triangulation of `T_d` and signs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TropError};
use crate::gen::{honeycomb, HoneycombOptions};
use crate::geom::{integer_area, LatticePoint, LatticePolygon};
use crate::subdivision::DualSubdivision;
use crate::troppoly::TropicalPolynomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedTriangulation {
    pub d: u32,
    pub triangles: Vec<[LatticePoint; 3]>,
    /// `+1` or `−1` at every lattice point of `T_d`.
    pub signs: BTreeMap<LatticePoint, i8>,
}

impl SignedTriangulation {
    /// Takes the triangulation from the dual subdivision of `p`.
    pub fn new(p: &TropicalPolynomial, signs: BTreeMap<LatticePoint, i8>) -> Result<Self> {
        let sub = DualSubdivision::new(p);
        let d = sub.newton_polygon().standard_triangle_degree().ok_or(TropError::NotStandardTriangle)?;
        let mut triangles = Vec::new();
        for cell in sub.cells() {
            if cell.area() != 1 {
                return Err(TropError::Singular(format!("cell {:?} is not a primitive triangle", cell.polygon.vertices())));
            }
            let v = cell.polygon.vertices();
            triangles.push([v[0], v[1], v[2]]);
        }
        Self::from_parts(d, triangles, signs)
    }

    pub fn from_parts(d: u32, triangles: Vec<[LatticePoint; 3]>, signs: BTreeMap<LatticePoint, i8>) -> Result<Self> {
        let expected = ((d + 1) * (d + 2) / 2) as usize;
        let td = crate::geom::standard_triangle(d as i64);
        if signs.len() != expected || signs.keys().any(|p| !td.contains(*p)) || signs.values().any(|s| s.abs() != 1) {
            return Err(TropError::Invalid(format!("need one sign ±1 at each of the {expected} lattice points of T_{d}")));
        }
        let area: i64 = triangles.iter().map(|t| integer_area(&LatticePolygon::hull(t))).sum();
        if triangles.iter().any(|t| integer_area(&LatticePolygon::hull(t)) != 1) || area != (d * d) as i64 {
            return Err(TropError::Singular("triangulation is not a primitive triangulation of T_d".into()));
        }
        Ok(SignedTriangulation { d, triangles, signs })
    }

    /// Honeycomb triangulation with the Harnack distribution: `−` exactly at points with both
    /// coordinates even.
    pub fn harnack(d: u32) -> Result<Self> {
        let p = honeycomb(d, &HoneycombOptions { scale: crate::rational::rat(1), perturb: None })?;
        Self::new(&p, harnack_signs(d))
    }
}

pub fn harnack_signs(d: u32) -> BTreeMap<LatticePoint, i8> {
    let d = d as i64;
    (0..=d)
        .flat_map(|i| (0..=d - i).map(move |j| LatticePoint::new(i, j)))
        .map(|p| (p, if p.i % 2 == 0 && p.j % 2 == 0 { -1 } else { 1 }))
        .collect()
}

/// Sign at `(i, j)` in the quadrant copy `(σx, σy)`.
pub fn reflected_sign(sign: i8, p: LatticePoint, quadrant: [i8; 2]) -> i8 {
    let fx = if p.i % 2 != 0 { quadrant[0] } else { 1 };
    let fy = if p.j % 2 != 0 { quadrant[1] } else { 1 };
    sign * fx * fy
}

/// Edge midpoint in doubled coordinates on the glued square, after the antipodal
/// identification of the boundary `|x| + |y| = d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Midpoint(pub i64, pub i64);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub quadrant: [i8; 2],
    pub triangle: usize,
    pub ends: [Midpoint; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealComponent {
    pub arcs: Vec<usize>,
    /// Crosses the line at infinity an odd number of times.
    pub pseudoline: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealArcDiagram {
    pub d: u32,
    pub arcs: Vec<Arc>,
    pub components: Vec<RealComponent>,
}

impl RealArcDiagram {
    pub fn ovals(&self) -> usize {
        self.components.iter().filter(|c| !c.pseudoline).count()
    }

    pub fn pseudolines(&self) -> usize {
        self.components.iter().filter(|c| c.pseudoline).count()
    }
}

pub const QUADRANTS: [[i8; 2]; 4] = [[1, 1], [-1, 1], [-1, -1], [1, -1]];

fn place(p: LatticePoint, q: [i8; 2]) -> (i64, i64) {
    (p.i * q[0] as i64, p.j * q[1] as i64)
}

fn midpoint(a: (i64, i64), b: (i64, i64), d: i64) -> Midpoint {
    let m = (a.0 + b.0, a.1 + b.1);
    if m.0.abs() + m.1.abs() == 2 * d {
        Midpoint(m.0, m.1).min(Midpoint(-m.0, -m.1))
    } else {
        Midpoint(m.0, m.1)
    }
}

fn on_boundary(m: Midpoint, d: i64) -> bool {
    m.0.abs() + m.1.abs() == 2 * d
}

pub fn patchwork_curve(s: &SignedTriangulation) -> RealArcDiagram {
    let d = s.d as i64;
    let mut arcs = Vec::new();
    for q in QUADRANTS {
        for (k, t) in s.triangles.iter().enumerate() {
            let sg: Vec<i8> = t.iter().map(|p| reflected_sign(s.signs[p], *p, q)).collect();
            let mixed: Vec<Midpoint> = (0..3)
                .filter(|&e| sg[e] != sg[(e + 1) % 3])
                .map(|e| midpoint(place(t[e], q), place(t[(e + 1) % 3], q), d))
                .collect();
            if let [a, b] = mixed[..] {
                arcs.push(Arc { quadrant: q, triangle: k, ends: [a, b] });
            }
        }
    }
    // union-find over arcs sharing a midpoint
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut at: BTreeMap<Midpoint, Vec<usize>> = BTreeMap::new();
    for (k, a) in arcs.iter().enumerate() {
        for m in a.ends {
            at.entry(m).or_default().push(k);
        }
    }
    for ks in at.values() {
        for w in ks.windows(2) {
            let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[x] = y;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..arcs.len() {
        let r = find(&mut parent, k);
        groups.entry(r).or_default().push(k);
    }
    let components = groups
        .into_values()
        .map(|arc_ids| {
            let crossings: BTreeSet<Midpoint> =
                arc_ids.iter().flat_map(|&k| arcs[k].ends).filter(|m| on_boundary(*m, d)).collect();
            RealComponent { pseudoline: crossings.len() % 2 == 1, arcs: arc_ids }
        })
        .collect();
    RealArcDiagram { d: s.d, arcs, components }
}

/// `(d−1)(d−2)/2 + 1`.
pub fn harnack_bound(d: u32) -> i64 {
    let d = d as i64;
    (d - 1) * (d - 2) / 2 + 1
}

pub fn count_components(dg: &RealArcDiagram) -> usize {
    dg.components.len()
}

/// Every midpoint used by an arc is used by exactly two arc ends.
pub fn is_perfect_matching(dg: &RealArcDiagram) -> bool {
    let mut count: BTreeMap<Midpoint, usize> = BTreeMap::new();
    for a in &dg.arcs {
        for m in a.ends {
            *count.entry(m).or_insert(0) += 1;
        }
    }
    count.values().all(|&c| c == 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn degree_one_is_a_pseudoline() {
        for bits in 0..8u8 {
            let signs: BTreeMap<LatticePoint, i8> = [(0, 0), (1, 0), (0, 1)]
                .iter()
                .enumerate()
                .map(|(k, &(i, j))| (LatticePoint::new(i, j), if bits >> k & 1 == 1 { -1 } else { 1 }))
                .collect();
            let s = SignedTriangulation::new(&crate::troppoly::parse("x+y+0").unwrap(), signs).unwrap();
            let dg = patchwork_curve(&s);
            assert_eq!(count_components(&dg), 1);
            assert_eq!(dg.pseudolines(), 1);
        }
    }

    #[test]
    fn harnack_counts() {
        let dg = patchwork_curve(&SignedTriangulation::harnack(3).unwrap());
        assert_eq!((count_components(&dg), dg.ovals(), dg.pseudolines()), (2, 1, 1));
        let dg = patchwork_curve(&SignedTriangulation::harnack(4).unwrap());
        assert_eq!((count_components(&dg), dg.ovals()), (4, 4));
        for d in 1..=6u32 {
            let dg = patchwork_curve(&SignedTriangulation::harnack(d).unwrap());
            assert_eq!(count_components(&dg) as i64, harnack_bound(d), "d={d}");
        }
    }

    #[test]
    fn all_plus_conic() {
        let p = honeycomb(2, &HoneycombOptions { scale: crate::rational::rat(1), perturb: None }).unwrap();
        let signs = p.support().into_iter().map(|e| (e, 1)).collect();
        let dg = patchwork_curve(&SignedTriangulation::new(&p, signs).unwrap());
        // golden value from the gluing itself
        assert_eq!(count_components(&dg), 1);
        assert_eq!(dg.ovals(), 1);
    }

    #[test]
    fn reflection_is_an_involution() {
        for i in 0..4 {
            for j in 0..4 {
                for q in QUADRANTS {
                    let p = LatticePoint::new(i, j);
                    assert_eq!(reflected_sign(reflected_sign(-1, p, q), p, q), -1);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let conic = crate::troppoly::parse("x^2+y+0").unwrap();
        assert!(SignedTriangulation::new(&conic, BTreeMap::new()).is_err());
        assert!(SignedTriangulation::from_parts(2, vec![], harnack_signs(2)).is_err());
    }

    #[test]
    fn random_signs_respect_harnack_bound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in 1..=5u32 {
            for seed in 0..20 {
                let p = crate::gen::random(d, seed).unwrap();
                let signs = p.support().into_iter().map(|e| (e, if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
                let dg = patchwork_curve(&SignedTriangulation::new(&p, signs).unwrap());
                assert!(is_perfect_matching(&dg));
                assert!(count_components(&dg) as i64 <= harnack_bound(d));
                // a pseudoline exists exactly in odd degree
                assert_eq!(dg.pseudolines(), (d % 2) as usize);
                let mut seen = BTreeSet::new();
                for a in &dg.arcs {
                    assert!(seen.insert((a.quadrant, a.triangle)));
                }
            }
        }
    }
}

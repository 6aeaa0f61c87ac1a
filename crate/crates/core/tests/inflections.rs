use proptest::prelude::*;
use tropinflect_core::gen::{honeycomb, random, HoneycombOptions};
use tropinflect_core::geom::{connected_groups, integer_area, standard_triangle};
use tropinflect_core::inflect::{
    expected_total, genericity_check, i_delta, inflection_components, inflection_locus_of_vertex, inflection_report, tangency_component,
    EClass, TangencyDatum,
};
use tropinflect_core::rational::{abs, rat, ratio};
use tropinflect_core::{build_curve, parse, LatticePoint, LatticePolygon, Piece, Rat, RationalPoint, TropicalCurve};

fn lp(i: i64, j: i64) -> LatticePoint {
    LatticePoint::new(i, j)
}

fn symmetric(d: u32) -> TropicalCurve {
    build_curve(&honeycomb(d, &HoneycombOptions { scale: rat(1), perturb: None }).unwrap()).unwrap()
}

fn perturbed(d: u32) -> TropicalCurve {
    build_curve(&honeycomb(d, &HoneycombOptions::default()).unwrap()).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `3·Area − Σ r_δ` over the edges of a triangle given by its corners.
fn i_delta_by_hand(t: [(i64, i64); 3]) -> i64 {
    let twice_area = ((t[1].0 - t[0].0) * (t[2].1 - t[0].1) - (t[2].0 - t[0].0) * (t[1].1 - t[0].1)).abs();
    let mut r = 0;
    for k in 0..3 {
        let (a, b, other) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
        let segments = gcd(b.0 - a.0, b.1 - a.1);
        let (di, dj) = (b.0 - a.0, b.1 - a.1);
        let cheap = if di == 0 {
            other.0 <= a.0
        } else if dj == 0 {
            other.1 <= a.1
        } else if di + dj == 0 {
            other.0 + other.1 >= a.0 + a.1
        } else {
            continue;
        };
        r += if cheap { segments } else { 2 * segments };
    }
    3 * twice_area - r
}

#[test]
fn i_delta_examples() {
    for (t, want) in [([(0, 0), (1, 0), (0, 1)], -3), ([(0, 0), (1, 2), (2, 1)], 7), ([(1, 0), (0, 1), (1, 1)], 0)] {
        let poly = LatticePolygon::hull(&t.map(|(i, j)| lp(i, j)));
        assert_eq!(i_delta_by_hand(t), want);
        assert_eq!(i_delta(&poly), want);
    }
    assert_eq!(i_delta(&standard_triangle(1)), -3);
}

#[test]
fn i_delta_sign_over_primitive_triangles() {
    let pts: Vec<(i64, i64)> = (-5..=5).flat_map(|i| (-5..=5).map(move |j| (i, j))).collect();
    for &b in &pts {
        for &c in &pts {
            let t = [(0, 0), b, c];
            let poly = LatticePolygon::hull(&t.map(|(i, j)| lp(i, j)));
            if poly.dimension() != 2 || integer_area(&poly) != 1 {
                continue;
            }
            let v = i_delta(&poly);
            assert_eq!(v, i_delta_by_hand(t), "{t:?}");
            assert_eq!(v < 0, poly.is_unit_simplex_translate(), "{t:?}");
        }
    }
}

/// Number of solutions in the torus of `z + w + zw = 0`, `a + bz + cw = 0` (`c ≠ 0`), by
/// eliminating `w = −(a + bz)/c`: `q(z) = −bz² + (c − a − b)z − a`, dropping roots with
/// `z = 0` or `w = 0`.
fn down_triangle_line_solutions(a: i64, b: i64, c: i64) -> i64 {
    let q = [-a, c - a - b, -b];
    let mut n = if q[2] != 0 { 2 } else if q[1] != 0 { 1 } else { 0 };
    // multiplicity of the root z = 0
    n -= q.iter().take_while(|&&x| x == 0).count() as i64;
    // w = 0 means z = −a/b; q(−a/b)·b² = −ba² − (c − a − b)ab − ab²
    if b != 0 && -b * a * a - q[1] * a * b - a * b * b == 0 {
        n -= 1;
    }
    n
}

#[test]
fn down_vertex_tangency_matches_substitution() {
    for (a, b, c) in [(2, 3, 5), (7, -1, 4), (-3, 11, 2), (1, 1, 9)] {
        assert_eq!(down_triangle_line_solutions(a, b, c), 2, "{a} {b} {c}");
    }
    for d in 2..=4 {
        let c = symmetric(d);
        for v in 0..c.vertices.len() {
            if c.cell_polygon(v).is_unit_simplex_translate() {
                continue;
            }
            let t = tangency_component(&c, v).unwrap();
            assert_eq!(t.class, EClass::VertexOnly);
            assert_eq!(t.total, 2);
            assert!(!t.gate);
        }
    }
}

#[test]
fn up_vertex_tangency_totals() {
    let c = symmetric(4);
    let mut seen = (false, false);
    for v in 0..c.vertices.len() {
        if !c.cell_polygon(v).is_unit_simplex_translate() {
            continue;
        }
        let t = tangency_component(&c, v).unwrap();
        match &t.class {
            EClass::ThreeEdges { bounded, unbounded: None } if bounded.len() == 3 => {
                assert_eq!(t.total, 4);
                seen.0 = true;
            }
            EClass::ThreeEdges { bounded, unbounded: Some(_) } if bounded.len() == 2 => {
                assert_eq!(t.total, 3);
                seen.1 = true;
            }
            _ => {}
        }
    }
    assert_eq!(seen, (true, true));
}

fn find(c: &TropicalCurve, pred: impl Fn(&TangencyDatum) -> bool) -> TangencyDatum {
    (0..c.vertices.len()).map(|v| tangency_component(c, v).unwrap()).find(|t| pred(t)).unwrap()
}

/// Lattice steps from `v` to `q` along an edge of direction `(1,0)`, `(0,1)` or `(1,1)` up to sign.
fn steps(v: &RationalPoint, q: &RationalPoint) -> Rat {
    let (dx, dy) = q.sub(v);
    abs(&dx).max(abs(&dy))
}

#[test]
fn loci_follow_the_length_formula() {
    let c = symmetric(4);
    let t = find(&c, |t| t.gate && matches!(&t.class, EClass::ThreeEdges { unbounded: None, .. }));
    let EClass::ThreeEdges { bounded, .. } = t.class.clone() else { unreachable!() };
    let v = c.vertices[t.vertex].position.clone();
    let mut lengths = c.edge_lengths();
    let ls = [5, 3, 1];
    for (k, l) in bounded.iter().zip(ls) {
        lengths.insert(*k, rat(l));
    }
    let mut want: Vec<Rat> = ls[..2].iter().map(|l| ratio(l - ls[2], 3)).collect();
    want.sort();
    let locus = inflection_locus_of_vertex(&c, &t, &lengths).unwrap();
    let mut got: Vec<Rat> = locus
        .iter()
        .map(|p| match p {
            Piece::Point(q) => steps(&v, q),
            other => panic!("{other:?}"),
        })
        .collect();
    got.sort();
    assert_eq!(got, want);
    assert_eq!(want, vec![ratio(2, 3), ratio(4, 3)]);

    for k in &bounded {
        lengths.insert(*k, rat(2));
    }
    assert_eq!(inflection_locus_of_vertex(&c, &t, &lengths).unwrap(), vec![Piece::Point(v)]);
}

#[test]
fn bounded_edge_locus_one_third_along() {
    let (c, t) = (0..300)
        .find_map(|seed| {
            let c = build_curve(&random(4, seed).unwrap()).unwrap();
            let t = (0..c.vertices.len())
                .map(|v| tangency_component(&c, v).unwrap())
                .find(|t| t.gate && matches!(t.class, EClass::BoundedEdge { .. }))?;
            Some((c, t))
        })
        .unwrap();
    let EClass::BoundedEdge { edge } = t.class else { unreachable!() };
    let mut lengths = c.edge_lengths();
    lengths.insert(edge, rat(3));
    let v = c.vertices[t.vertex].position.clone();
    let e = &c.edges[edge];
    // one primitive step from v along the edge, times its weight
    let sign = if e.v1 == t.vertex { 1 } else { -1 };
    let step = lp(sign * e.dir.i, sign * e.dir.j);
    let expect = v.offset(step, &rat(e.weight));
    assert_eq!(inflection_locus_of_vertex(&c, &t, &lengths).unwrap(), vec![Piece::Point(v), Piece::Point(expect)]);
}

#[test]
fn honeycomb_components() {
    let comps = inflection_components(&perturbed(3)).unwrap();
    assert_eq!(comps.len(), 3);
    assert!(comps.iter().all(|e| e.is_point() && e.mu == 3));
    assert_eq!(comps.iter().map(|e| e.mu).sum::<i64>(), 9);

    let r = inflection_report(&perturbed(4)).unwrap();
    assert_eq!(r.summary.sum_mu, 24);
    assert_eq!(r.components.iter().filter(|e| e.mu % 2 == 1).count(), 8);

    let conic = build_curve(&parse("x^2+y^2+2x+2y+3*x*y+3").unwrap()).unwrap();
    assert_eq!(inflection_components(&conic).unwrap().iter().map(|e| e.mu).sum::<i64>(), 0);
}

#[test]
fn genericity_of_generated_curves() {
    for d in 2..=6 {
        assert!(genericity_check(&perturbed(d)).generic, "d={d}");
    }
    let c = symmetric(4);
    let g = genericity_check(&c);
    assert!(!g.generic);
    for &v in &g.witnesses {
        assert!(c.cell_polygon(v).is_unit_simplex_translate());
        let lengths = c.edge_lengths();
        let bounded: Vec<Rat> = c.incident(v).iter().filter_map(|x| x.2).map(|e| lengths[&e].clone()).collect();
        assert_eq!(bounded, vec![rat(1); 3]);
    }
    for seed in 0..10 {
        assert!(genericity_check(&build_curve(&random(2, seed).unwrap()).unwrap()).generic);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn totals_and_parities(d in 2u32..=5, seed in 0u64..100_000) {
        let c = build_curve(&random(d, seed).unwrap()).unwrap();
        let comps = inflection_components(&c).unwrap();
        let d64 = d as i64;
        prop_assert_eq!(comps.iter().map(|e| e.mu).sum::<i64>(), expected_total(d));
        prop_assert_eq!(expected_total(d), 3 * d64 * (d64 - 2));
        let real: i64 = comps.iter().map(|e| e.mu_real).sum();
        prop_assert!(real <= d64 * (d64 - 2));
        for e in &comps {
            prop_assert_eq!(e.mu_real, e.mu.rem_euclid(2));
            // geometry lies on the curve and is connected
            for g in &e.geometry {
                for q in g.endpoints() {
                    prop_assert!(c.contains(&q));
                }
            }
            prop_assert_eq!(connected_groups(&e.geometry).len(), 1);
        }
        for (k, a) in comps.iter().enumerate() {
            for b in &comps[k + 1..] {
                for g in &a.geometry {
                    for h in &b.geometry {
                        prop_assert!(g.intersect(h).is_none());
                    }
                }
            }
        }
        if genericity_check(&c).generic {
            prop_assert!(comps.iter().all(|e| e.mu <= 3));
            let ones = comps.iter().filter(|e| e.mu == 1).count();
            let twos = comps.iter().filter(|e| e.mu == 2).count();
            prop_assert_eq!(ones, twos);
            prop_assert_eq!(real, d64 * (d64 - 2));
        }
    }

    #[test]
    fn translation_moves_every_component(seed in 0u64..100_000, a in -7i64..7, b in -7i64..7) {
        let p = random(4, seed).unwrap();
        let e1 = inflection_components(&build_curve(&p).unwrap()).unwrap();
        let e2 = inflection_components(&build_curve(&p.add_affine(&rat(3), &rat(a), &rat(b))).unwrap()).unwrap();
        let shift = lp(-a, -b);
        let mut m1: Vec<(Vec<Piece>, i64, i64)> =
            e1.iter().map(|e| (e.geometry.iter().map(|g| g.translate(shift)).collect(), e.mu, e.mu_real)).collect();
        let mut m2: Vec<(Vec<Piece>, i64, i64)> = e2.iter().map(|e| (e.geometry.clone(), e.mu, e.mu_real)).collect();
        for m in [&mut m1, &mut m2] {
            for x in m.iter_mut() {
                x.0.sort_by_key(|g| format!("{g:?}"));
            }
            m.sort_by_key(|x| format!("{x:?}"));
        }
        prop_assert_eq!(m1, m2);
    }
}

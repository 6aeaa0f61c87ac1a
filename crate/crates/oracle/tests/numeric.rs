use tropinflect_core::gen::{honeycomb, HoneycombOptions};
use tropinflect_core::inflect::inflection_components;
use tropinflect_core::patchwork::harnack_signs;
use tropinflect_core::rational::{rat, ratio};
use tropinflect_core::{build_curve, LatticePoint, PuiseuxNumber};
use tropinflect_oracle::verify::{default_tol, min_gap};
use tropinflect_oracle::{numeric_inflections, verify_counts, ClassicalCurve, Realness};

type Cx = (f64, f64);

fn mul(a: Cx, b: Cx) -> Cx {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn add(a: Cx, b: Cx) -> Cx {
    (a.0 + b.0, a.1 + b.1)
}

fn powi(a: Cx, k: i64) -> Cx {
    (0..k).fold((1.0, 0.0), |acc, _| mul(acc, a))
}

fn parse(p: &[String; 2]) -> Cx {
    (p[0].parse().unwrap(), p[1].parse().unwrap())
}

/// Relative size of `det(∂²F)` at `(z, w, 1)` for `F = Σ c z^i w^j u^(d−i−j)`, next to
/// the same determinant built from absolute values.
fn hessian_residual(terms: &[((i64, i64), f64)], d: i64, z: Cx, w: Cx) -> f64 {
    let mut m = [[(0.0, 0.0); 3]; 3];
    let mut scale = [[0.0f64; 3]; 3];
    for &((i, j), c) in terms {
        let e = [i, j, d - i - j];
        for a in 0..3 {
            for b in 0..3 {
                let mut f = e;
                let k = e[a] * (e[b] - if a == b { 1 } else { 0 });
                if k == 0 {
                    continue;
                }
                f[a] -= 1;
                f[b] -= 1;
                let v = mul(mul(powi(z, f[0]), powi(w, f[1])), (c * k as f64, 0.0));
                m[a][b] = add(m[a][b], v);
                scale[a][b] += v.0.hypot(v.1);
            }
        }
    }
    let det3 = |m: &[[Cx; 3]; 3]| {
        let minor = |r: usize, c1: usize, c2: usize| {
            let p = mul(m[1][c1], m[2][c2]);
            let q = mul(m[1][c2], m[2][c1]);
            mul(m[0][r], (p.0 - q.0, p.1 - q.1))
        };
        let (a, b, c) = (minor(0, 1, 2), minor(1, 0, 2), minor(2, 0, 1));
        (a.0 - b.0 + c.0, a.1 - b.1 + c.1)
    };
    let h = det3(&m);
    let perm: f64 = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
        .iter()
        .map(|&(a, b, c)| scale[0][a] * scale[1][b] * scale[2][c])
        .sum();
    h.0.hypot(h.1) / perm
}

fn curve_residual(terms: &[((i64, i64), f64)], z: Cx, w: Cx) -> f64 {
    let mut v = (0.0, 0.0);
    let mut s = 0.0;
    for &((i, j), c) in terms {
        let m = mul(mul(powi(z, i), powi(w, j)), (c, 0.0));
        v = add(v, m);
        s += m.0.hypot(m.1);
    }
    v.0.hypot(v.1) / s
}

fn constant(terms: &[((i64, i64), f64)]) -> ClassicalCurve {
    ClassicalCurve::new(
        terms.iter().map(|&((i, j), c)| (LatticePoint::new(i, j), PuiseuxNumber::monomial(rat(c as i64), rat(0)))),
        None,
    )
    .unwrap()
}

#[test]
fn real_cubic_has_nine_flexes_three_real() {
    let terms = [((3, 0), 1.0), ((0, 3), 2.0), ((0, 0), -3.0), ((1, 1), 5.0), ((2, 0), 1.0), ((0, 1), -1.0), ((1, 0), 2.0)];
    let r = numeric_inflections(&constant(&terms), &ratio(1, 2), 256).unwrap();
    assert_eq!(r.torus, 9);
    assert_eq!(r.escapes.total(), 0);
    assert_eq!(r.real_count(), 3);
    for p in &r.points {
        let (z, w) = (parse(&p.z), parse(&p.w));
        assert!(curve_residual(&terms, z, w) < 1e-9, "{p:?}");
        assert!(hessian_residual(&terms, 3, z, w) < 1e-9, "{p:?}");
        // real flexes have real coordinates
        if p.realness == Realness::Real {
            assert!(z.1.abs() < 1e-9 * z.0.abs().max(1.0) && w.1.abs() < 1e-9 * w.0.abs().max(1.0));
        }
    }
}

#[test]
fn generic_quartic_has_twenty_four() {
    let terms = [
        ((4, 0), 1.0),
        ((0, 4), 3.0),
        ((0, 0), -2.0),
        ((3, 1), 1.0),
        ((1, 3), -1.0),
        ((2, 2), 5.0),
        ((2, 0), 2.0),
        ((0, 2), -7.0),
        ((1, 1), 3.0),
        ((1, 0), 1.0),
        ((0, 1), 4.0),
        ((2, 1), -3.0),
    ];
    let r = numeric_inflections(&constant(&terms), &ratio(1, 2), 256).unwrap();
    assert_eq!(r.torus as i64 + r.escapes.total(), r.bezout);
    assert_eq!(r.torus, 24);
    for p in &r.points {
        let (z, w) = (parse(&p.z), parse(&p.w));
        assert!(curve_residual(&terms, z, w) < 1e-8 && hessian_residual(&terms, 4, z, w) < 1e-8, "{p:?}");
    }
}

#[test]
fn trinomial_with_a_long_edge() {
    for l in 3..=5 {
        let x = constant(&[((0, 1), 1.0), ((1, 1), 1.0), ((l, 0), 1.0)]);
        assert_eq!(numeric_inflections(&x, &ratio(1, 2), 256).unwrap().torus, 2, "l={l}");
    }
}

fn harnack_instance(d: u32, seed: u64) -> (ClassicalCurve, Vec<tropinflect_core::inflect::InflectionComponent>) {
    let p = honeycomb(d, &HoneycombOptions { scale: rat(4), perturb: Some(seed) }).unwrap();
    let comps = inflection_components(&build_curve(&p).unwrap()).unwrap();
    (ClassicalCurve::realize(&p, &harnack_signs(d)).unwrap(), comps)
}

#[test]
fn honeycomb_cubic_clusters() {
    let (x, comps) = harnack_instance(3, 0);
    let r = verify_counts(&x, &comps, &ratio(1, 1000), 256, default_tol(&comps)).unwrap();
    assert!(r.pass, "{:#?}", r.lines());
    assert_eq!(r.components.len(), 3);
    for c in &r.components {
        assert_eq!((c.found, c.found_real), (3, 1));
    }
}

#[test]
fn honeycomb_quartic_has_eight_real() {
    let (x, comps) = harnack_instance(4, 182);
    assert!(min_gap(&comps).unwrap() * 3.0 >= 6.0);
    let r = verify_counts(&x, &comps, &ratio(1, 1000), 256, default_tol(&comps)).unwrap();
    assert!(r.pass, "{:#?}", r.lines());
    assert_eq!((r.found(), r.found_real()), (24, 8));
}

#[test]
fn wrong_table_is_reported() {
    let (x, mut comps) = harnack_instance(3, 0);
    comps[2].mu = 4;
    let r = verify_counts(&x, &comps, &ratio(1, 1000), 256, default_tol(&comps)).unwrap();
    assert!(!r.pass);
    assert_eq!(r.lines().iter().filter(|l| l.contains("MISMATCH")).count(), 1);
}

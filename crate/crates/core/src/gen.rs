//! Seeded example generators for polynomials with Newton polygon `T_d`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{build_curve, TropicalCurve};
use crate::error::{Result, TropError};
use crate::geom::LatticePoint;
use crate::inflect::genericity_check;
use crate::rational::{rat, ratio, Rat};
use crate::troppoly::TropicalPolynomial;

const MAX_TRIES: usize = 1000;

#[derive(Clone, Debug)]
pub struct HoneycombOptions {
    pub scale: Rat,
    /// Seed for the symmetry-breaking perturbation; `None` gives the symmetric lift.
    pub perturb: Option<u64>,
}

impl Default for HoneycombOptions {
    fn default() -> Self {
        HoneycombOptions { scale: rat(1), perturb: Some(0) }
    }
}

fn t_d_points(d: u32) -> impl Iterator<Item = LatticePoint> {
    let d = d as i64;
    (0..=d).flat_map(move |i| (0..=d - i).map(move |j| LatticePoint::new(i, j)))
}

/// `a_ij = −s(i² + ij + j²) + δ_ij` with `|δ_ij| < s/4`.
fn honeycomb_lift(d: u32, scale: &Rat, rng: Option<&mut ChaCha8Rng>) -> TropicalPolynomial {
    let mut terms = BTreeMap::new();
    let mut rng = rng;
    for p in t_d_points(d) {
        let q = p.i * p.i + p.i * p.j + p.j * p.j;
        let mut a = -scale * rat(q);
        if let Some(r) = rng.as_deref_mut() {
            a += scale * ratio(r.gen_range(-999..=999), 4000);
        }
        terms.insert(p, a);
    }
    TropicalPolynomial::from_terms(terms).expect("non-empty support")
}

/// Honeycomb curve of degree `d`. With a perturbation seed the lift is resampled until the
/// curve satisfies the distinct-lengths hypothesis.
pub fn honeycomb(d: u32, opts: &HoneycombOptions) -> Result<TropicalPolynomial> {
    if d == 0 {
        return Err(TropError::Invalid("degree must be positive".into()));
    }
    let Some(seed) = opts.perturb else {
        return Ok(honeycomb_lift(d, &opts.scale, None));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_TRIES {
        let p = honeycomb_lift(d, &opts.scale, Some(&mut rng));
        let c = build_curve(&p)?;
        if c.is_nonsingular() && genericity_check(&c).generic && distinct_up_lengths(&c) {
            return Ok(p);
        }
    }
    Err(TropError::Invalid(format!("no generic honeycomb of degree {d} after {MAX_TRIES} tries")))
}

/// Bounded edges at each up-vertex have pairwise distinct lengths.
fn distinct_up_lengths(c: &TropicalCurve) -> bool {
    let lengths = c.edge_lengths();
    (0..c.vertices.len()).filter(|&v| c.cell_polygon(v).is_unit_simplex_translate()).all(|v| {
        let ls: Vec<&Rat> = c.incident(v).iter().filter_map(|(_, _, e)| e.map(|k| &lengths[&k])).collect();
        ls.iter().collect::<std::collections::BTreeSet<_>>().len() == ls.len()
    })
}

/// Random non-singular polynomial with Newton polygon `T_d`: a concave quadratic lift plus
/// a linear part and rational noise, resampled until the subdivision is primitive.
pub fn random(d: u32, seed: u64) -> Result<TropicalPolynomial> {
    if d == 0 {
        return Err(TropError::Invalid("degree must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_TRIES {
        let (a, c) = (rng.gen_range(1..=4i64), rng.gen_range(1..=4i64));
        let b = loop {
            let b = rng.gen_range(-4..=4i64);
            if b * b < 4 * a * c {
                break b;
            }
        };
        let (lx, ly) = (rng.gen_range(-20..=20i64), rng.gen_range(-20..=20i64));
        let noise = rng.gen_range(1..=4i64);
        let mut terms = BTreeMap::new();
        for p in t_d_points(d) {
            let q = a * p.i * p.i + b * p.i * p.j + c * p.j * p.j;
            let v = rat(lx * p.i + ly * p.j - q) + ratio(rng.gen_range(-1000..=1000) * noise, 4000);
            terms.insert(p, v);
        }
        let p = TropicalPolynomial::from_terms(terms)?;
        if build_curve(&p)?.is_nonsingular() {
            return Ok(p);
        }
    }
    Err(TropError::Invalid(format!("no non-singular curve of degree {d} after {MAX_TRIES} tries")))
}

//! Matching numeric inflection points against tropical inflection components.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use tropinflect_core::inflect::InflectionComponent;
use tropinflect_core::rational::to_f64;
use tropinflect_core::{Rat, RationalPoint};

use crate::classical::ClassicalCurve;
use crate::error::Result;
use crate::numeric::{numeric_inflections, NumericInflection, NumericReport, Realness};

/// Separation, in units of `log(1/t)`, demanded between valuation clusters.
pub const LOG_SEPARATION: f64 = 6.0;
/// Clustering radius as a fraction of the minimum component gap.
pub const TOL_FRACTION: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCheck {
    pub component_id: usize,
    pub expected_mu: i64,
    pub expected_mu_real: i64,
    pub found: usize,
    pub found_real: usize,
    pub borderline: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub t: String,
    pub tol: f64,
    pub expected_total: i64,
    pub torus: usize,
    pub real_checked: bool,
    pub components: Vec<ComponentCheck>,
    /// Val-estimates farther than `tol` from every component.
    pub unclustered: Vec<[f64; 2]>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn found(&self) -> usize {
        self.components.iter().map(|c| c.found).sum()
    }

    pub fn found_real(&self) -> usize {
        self.components.iter().map(|c| c.found_real).sum()
    }

    /// One line per component plus a totals line; mismatches are marked.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                format!(
                    "component {}: expected mu={} mu_real={}, found {} ({} real, {} borderline) {}",
                    c.component_id,
                    c.expected_mu,
                    c.expected_mu_real,
                    c.found,
                    c.found_real,
                    c.borderline,
                    if c.pass { "ok" } else { "MISMATCH" }
                )
            })
            .collect();
        for u in &self.unclustered {
            out.push(format!("unclustered point at Val ≈ ({:.4}, {:.4}) MISMATCH", u[0], u[1]));
        }
        if self.torus as i64 != self.expected_total {
            out.push(format!("torus count {} differs from {} MISMATCH", self.torus, self.expected_total));
        }
        out
    }
}

fn approx_point(v: &[f64; 2]) -> RationalPoint {
    let r = |x: f64| BigRational::from_float(x).unwrap_or_else(|| Rat::from_integer(BigInt::from(0)));
    RationalPoint::new(r(v[0]), r(v[1]))
}

/// Distance from a Val-estimate to a component.
pub fn distance(c: &InflectionComponent, v: &[f64; 2]) -> f64 {
    to_f64(&c.distance2(&approx_point(v))).sqrt()
}

/// Smallest distance between two distinct components; `None` with fewer than two.
pub fn min_gap(comps: &[InflectionComponent]) -> Option<f64> {
    let mut best: Option<Rat> = None;
    for (i, a) in comps.iter().enumerate() {
        for b in &comps[i + 1..] {
            let ends = |x: &InflectionComponent| x.geometry.iter().flat_map(|g| g.endpoints()).collect::<Vec<_>>();
            let d = ends(a).iter().map(|p| b.distance2(p)).chain(ends(b).iter().map(|p| a.distance2(p))).min();
            if let Some(d) = d {
                if best.as_ref().is_none_or(|x| d < *x) {
                    best = Some(d);
                }
            }
        }
    }
    best.map(|d| to_f64(&d).sqrt())
}

/// `t = 10^{-k}` with the least `k` such that `k·g ≥ 6`.
pub fn choose_t(g: f64) -> Rat {
    let k = (LOG_SEPARATION / g).ceil().max(1.0) as usize;
    Rat::new(BigInt::from(1), num_traits::pow(BigInt::from(10), k))
}

pub fn default_tol(comps: &[InflectionComponent]) -> f64 {
    TOL_FRACTION * min_gap(comps).unwrap_or(1.0)
}

/// Assigns each point to its nearest component within `tol`.
pub fn cluster(
    points: &[NumericInflection],
    comps: &[InflectionComponent],
    tol: f64,
    check_real: bool,
) -> (Vec<ComponentCheck>, Vec<[f64; 2]>) {
    let mut found = vec![(0usize, 0usize, 0usize); comps.len()];
    let mut unclustered = Vec::new();
    for p in points {
        let nearest = comps
            .iter()
            .enumerate()
            .map(|(k, c)| (distance(c, &p.val), k))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        match nearest {
            Some((dist, k)) if dist <= tol => {
                found[k].0 += 1;
                match p.realness {
                    Realness::Real => found[k].1 += 1,
                    Realness::Borderline => found[k].2 += 1,
                    Realness::NonReal => {}
                }
            }
            _ => unclustered.push(p.val),
        }
    }
    let checks = comps
        .iter()
        .zip(found)
        .enumerate()
        .map(|(id, (c, (n, nr, nb)))| {
            let real_ok = !check_real || (nr as i64 == c.mu_real && nb == 0);
            ComponentCheck {
                component_id: id,
                expected_mu: c.mu,
                expected_mu_real: c.mu_real,
                found: n,
                found_real: nr,
                borderline: nb,
                pass: n as i64 == c.mu && real_ok,
            }
        })
        .collect();
    (checks, unclustered)
}

/// Builds the report from an already computed numeric run.
pub fn report_from(numeric: &NumericReport, comps: &[InflectionComponent], tol: f64, check_real: bool) -> VerificationReport {
    let (components, unclustered) = cluster(&numeric.points, comps, tol, check_real);
    let pass = components.iter().all(|c| c.pass) && unclustered.is_empty() && numeric.torus as i64 == numeric.expected;
    VerificationReport {
        t: numeric.t.clone(),
        tol,
        expected_total: numeric.expected,
        torus: numeric.torus,
        real_checked: check_real,
        components,
        unclustered,
        pass,
    }
}

/// Numeric inflection points of `x` at `t`, clustered onto `comps`. Real counts are compared
/// only for real curves.
pub fn verify_counts(
    x: &ClassicalCurve,
    comps: &[InflectionComponent],
    t: &Rat,
    prec: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let numeric = numeric_inflections(x, t, prec)?;
    Ok(report_from(&numeric, comps, tol, x.is_real()))
}

//! Plane curves over the field of Puiseux sums.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tropinflect_core::{GaussianRational, LatticePoint, PuiseuxNumber, Rat, TropicalPolynomial};

use crate::error::{OracleError, Result};
use crate::mpoly::MPoly;

/// `P(z, w) = Σ c_ij z^i w^j` with Puiseux coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalCurve {
    terms: BTreeMap<LatticePoint, PuiseuxNumber>,
    degree: u32,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: [i64; 2],
    coeff: PuiseuxNumber,
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<u32>,
    terms: Vec<TermJson>,
}

impl ClassicalCurve {
    /// The degree defaults to the largest total degree of the support.
    pub fn new(terms: impl IntoIterator<Item = (LatticePoint, PuiseuxNumber)>, degree: Option<u32>) -> Result<Self> {
        let mut map: BTreeMap<LatticePoint, PuiseuxNumber> = BTreeMap::new();
        for (e, c) in terms {
            if e.i < 0 || e.j < 0 {
                return Err(OracleError::Invalid(format!("negative exponent ({}, {})", e.i, e.j)));
            }
            let slot = map.entry(e).or_default();
            *slot = &*slot + &c;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(OracleError::Invalid("zero polynomial".into()));
        }
        let top = map.keys().map(|e| (e.i + e.j) as u32).max().unwrap_or(0);
        let degree = degree.unwrap_or(top);
        if degree < top {
            return Err(OracleError::Invalid(format!("Newton polygon is not inside T_{degree}")));
        }
        Ok(Self { terms: map, degree })
    }

    /// `Σ ε_ij t^{a_ij} z^i w^j`, whose tropicalization is `p` (with `val = −exponent`).
    pub fn realize(p: &TropicalPolynomial, signs: &BTreeMap<LatticePoint, i8>) -> Result<Self> {
        let terms = p.terms().iter().map(|(e, a)| {
            let s = signs.get(e).copied().unwrap_or(1) as i64;
            (*e, PuiseuxNumber::monomial(Rat::from_integer(s.into()), -a.clone()))
        });
        Self::new(terms, None)
    }

    /// Seeded lift of `p`: each coefficient gets a random non-zero rational leading term
    /// (Gaussian when `gaussian`) and a higher-order tail.
    pub fn random_lift(p: &TropicalPolynomial, seed: u64, gaussian: bool) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let nz = |rng: &mut ChaCha8Rng| loop {
            let k = rng.gen_range(-5..=5i64);
            if k != 0 {
                break Rat::new(k.into(), rng.gen_range(1..=3i64).into());
            }
        };
        let terms: Vec<_> = p
            .terms()
            .iter()
            .map(|(e, a)| {
                let im = if gaussian { nz(&mut rng) } else { Rat::zero() };
                let lead = GaussianRational::new(nz(&mut rng), im);
                let tail = GaussianRational::from(nz(&mut rng));
                let shift = Rat::new(rng.gen_range(1..=4i64).into(), 2.into());
                let c = &PuiseuxNumber::gaussian_monomial(lead, -a.clone())
                    + &PuiseuxNumber::gaussian_monomial(tail, -a.clone() + shift);
                (*e, c)
            })
            .collect();
        Self::new(terms, p.standard_degree())
    }

    pub fn terms(&self) -> &BTreeMap<LatticePoint, PuiseuxNumber> {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(PuiseuxNumber::is_real)
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect(), degree: self.degree }
    }

    /// Coefficientwise valuation.
    pub fn tropicalize(&self) -> TropicalPolynomial {
        let terms = self.terms.iter().map(|(e, c)| (*e, c.val().expect("stored coefficients are non-zero")));
        TropicalPolynomial::from_terms(terms).expect("non-empty support")
    }

    pub fn to_mpoly(&self) -> MPoly<PuiseuxNumber, 2> {
        MPoly::from_terms(self.terms.iter().map(|(e, c)| ([e.i as u32, e.j as u32], c.clone())))
    }

    pub fn from_mpoly(p: &MPoly<PuiseuxNumber, 2>, degree: Option<u32>) -> Result<Self> {
        Self::new(p.terms().iter().map(|(e, c)| (LatticePoint::new(e[0] as i64, e[1] as i64), c.clone())), degree)
    }

    /// `P(z + a, w + b)`.
    pub fn shift_variables(&self, a: &PuiseuxNumber, b: &PuiseuxNumber) -> Result<Self> {
        let one = PuiseuxNumber::one();
        let lin = |c: &PuiseuxNumber, var: usize| {
            let mut e = [0u32; 2];
            e[var] = 1;
            MPoly::from_terms([(e, one.clone()), ([0, 0], c.clone())])
        };
        let (zs, ws) = (lin(a, 0), lin(b, 1));
        let pow = |base: &MPoly<PuiseuxNumber, 2>, k: i64| {
            (0..k).fold(MPoly::from_terms([([0, 0], one.clone())]), |acc, _| acc.mul(base))
        };
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let term = pow(&zs, e.i).mul(&pow(&ws, e.j)).mul(&MPoly::from_terms([([0, 0], c.clone())]));
            out = out.add(&term);
        }
        Self::from_mpoly(&out, Some(self.degree))
    }

    /// Initial form at `t = 0` after the rescaling `c ↦ c · t^{α + ⟨γ, e⟩}`.
    pub fn leading_terms(&self, alpha: &Rat, gamma: &(Rat, Rat)) -> BTreeMap<LatticePoint, GaussianRational> {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let shift = alpha + &gamma.0 * Rat::from_integer(e.i.into()) + &gamma.1 * Rat::from_integer(e.j.into());
            let lead = c.shift_exponents(&shift).coeff_at(&Rat::zero());
            if !lead.is_zero() {
                out.insert(*e, lead);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = CurveJson {
            degree: Some(self.degree),
            terms: self.terms.iter().map(|(e, c)| TermJson { exp: [e.i, e.j], coeff: c.clone() }).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CurveJson = serde_json::from_str(text).map_err(|e| OracleError::Invalid(format!("realization JSON: {e}")))?;
        Self::new(doc.terms.into_iter().map(|t| (LatticePoint::new(t.exp[0], t.exp[1]), t.coeff)), doc.degree)
    }
}

impl std::fmt::Display for ClassicalCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono = match (e.i, e.j) {
                    (0, 0) => String::new(),
                    (i, 0) => format!("*z^{i}"),
                    (0, j) => format!("*w^{j}"),
                    (i, j) => format!("*z^{i}*w^{j}"),
                };
                format!("({c}){mono}")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

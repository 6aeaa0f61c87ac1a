//! Reading polynomials, divisors, sign tables and realizations from arguments and files.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use tropinflect_core::gen::{honeycomb, random, HoneycombOptions};
use tropinflect_core::modify::DivisorData;
use tropinflect_core::patchwork::harnack_signs;
use tropinflect_core::rational::{parse_rat, rat};
use tropinflect_core::{parse, LatticePoint, Rat, TropicalPolynomial};

/// Generator shorthands accepted wherever a polynomial is expected.
///
/// `honeycomb:d[:seed]`, `honeycomb-sym:d`, `random:d[:seed]`.
fn generator(spec: &str, default_seed: u64) -> Option<Result<TropicalPolynomial>> {
    let (kind, rest) = spec.split_once(':')?;
    let mut parts = rest.split(':');
    let d = parts.next().and_then(|x| x.trim().parse::<u32>().ok());
    let seed = parts.next().map(|x| x.trim().parse::<u64>());
    let d = match d {
        Some(d) => d,
        None => return Some(Err(anyhow!("bad degree in `{spec}`"))),
    };
    let seed = match seed {
        None => default_seed,
        Some(Ok(s)) => s,
        Some(Err(_)) => return Some(Err(anyhow!("bad seed in `{spec}`"))),
    };
    let out = match kind {
        "honeycomb" => honeycomb(d, &HoneycombOptions { scale: rat(1), perturb: Some(seed) }),
        "honeycomb-sym" => honeycomb(d, &HoneycombOptions { scale: rat(1), perturb: None }),
        "random" => random(d, seed),
        _ => return None,
    };
    Some(out.map_err(Into::into))
}

/// Inline text, a generator shorthand, or a path to a JSON or text file.
pub fn polynomial(arg: &str, seed: u64) -> Result<TropicalPolynomial> {
    if let Some(p) = generator(arg, seed) {
        return p;
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        let trimmed = text.trim_start();
        return if trimmed.starts_with('{') {
            TropicalPolynomial::from_json(&text).with_context(|| format!("polynomial JSON in {arg}"))
        } else {
            parse(text.trim()).with_context(|| format!("polynomial in {arg}"))
        };
    }
    parse(arg).with_context(|| format!("polynomial `{arg}`"))
}

pub fn divisor(path: &Path) -> Result<DivisorData> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("divisor JSON in {}", path.display()))
}

/// `harnack`, `plus`, `minus`, or a JSON file holding `[[i, j, sign], ...]`.
pub fn signs(arg: &str, d: u32) -> Result<BTreeMap<LatticePoint, i8>> {
    let all = |s: i8| {
        let d = d as i64;
        (0..=d).flat_map(|i| (0..=d - i).map(move |j| (LatticePoint::new(i, j), s))).collect()
    };
    match arg {
        "harnack" => Ok(harnack_signs(d)),
        "plus" => Ok(all(1)),
        "minus" => Ok(all(-1)),
        path => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let rows: Vec<[i64; 3]> = serde_json::from_str(&text).with_context(|| format!("signs JSON in {path}"))?;
            let mut out = BTreeMap::new();
            for [i, j, s] in rows {
                if s != 1 && s != -1 {
                    bail!("sign at ({i}, {j}) must be 1 or -1");
                }
                out.insert(LatticePoint::new(i, j), s as i8);
            }
            Ok(out)
        }
    }
}

pub fn rational(arg: &str) -> Result<Rat> {
    parse_rat(arg).map_err(|e| anyhow!("`{arg}` is not a rational number: {e}"))
}

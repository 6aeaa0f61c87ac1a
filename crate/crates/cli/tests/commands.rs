use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;
use tropinflect_cli::{run, Outcome, EXIT_INVALID, EXIT_MISMATCH, EXIT_OK};
use tropinflect_core::inflect::{genericity_check, InflectionReport};
use tropinflect_core::{build_curve, TropicalCurve, TropicalPolynomial};

fn tropinflect(args: &[&str]) -> Outcome {
    run(std::iter::once("tropinflect").chain(args.iter().copied()))
}

fn ok_json(args: &[&str]) -> Value {
    let out = tropinflect(args);
    assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn inflect_honeycomb_cubic() {
    let v = ok_json(&["inflect", "honeycomb:3"]);
    assert_eq!(v["components"].as_array().unwrap().len(), 3);
    assert_eq!(v["summary"]["sum_mu"], 9);
    assert_eq!(v["summary"]["sum_mu_real"], 3);
    for c in v["components"].as_array().unwrap() {
        assert_eq!(c["mu"], 3);
        assert_eq!(c["geometry"].as_array().unwrap().len(), 1);
    }
    let text = tropinflect(&["inflect", "honeycomb:3", "--format", "text"]).stdout;
    assert!(text.contains("sum_mu 9 sum_mu_real 3"));
}

#[test]
fn intersect_two_lines() {
    let v = ok_json(&["intersect", "x+y+0", "-2x + -1y + 0"]);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 1);
    assert_eq!(pts[0]["multiplicity"], 1);
    // the first curve's diagonal ray x = y ≥ 0 meets the second's horizontal ray y = 1, x ≤ 2
    assert_eq!(pts[0]["position"], serde_json::json!(["1", "1"]));
    assert_eq!(v["total"], 1);
    let v = ok_json(&["intersect", "x+y+0", "x+y+1"]);
    assert_eq!(v["points"].as_array().unwrap().len(), 1);
    assert_eq!(v["points"][0]["multiplicity"], 1);
}

#[test]
fn oracle_verify_cubic_realization() {
    let dir = tempfile::tempdir().unwrap();
    let real = tropinflect(&["gen", "honeycomb", "3", "--scale", "4", "--realize", "harnack"]);
    assert_eq!(real.code, EXIT_OK);
    let path = write_tmp(&dir, "cubic.json", &real.stdout);
    let v = ok_json(&["oracle-verify", &path, "--t", "1e-3"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["torus"], 9);
    assert_eq!(v["real_total"], 3);
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 3);
    for c in comps {
        for key in ["component_id", "expected_mu", "found", "found_real", "pass"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
        assert_eq!((c["found"].as_i64(), c["found_real"].as_i64()), (Some(3), Some(1)));
    }
    assert!(v["mismatches"].as_array().unwrap().is_empty());
}

#[test]
fn exit_two_exactly_when_a_mismatch_line_appears() {
    let dir = tempfile::tempdir().unwrap();
    let real = tropinflect(&["gen", "honeycomb", "3", "--scale", "4", "--realize", "harnack"]).stdout;
    let path = write_tmp(&dir, "cubic.json", &real);
    for (t, tol) in [("1e-3", "0.96"), ("1e-3", "0.0001"), ("1/2", "0.96"), ("1e-4", "0.5"), ("1/5", "0.2")] {
        let out = tropinflect(&["oracle-verify", &path, "--t", t, "--tol", tol, "--format", "text"]);
        let has = out.stdout.lines().any(|l| l.contains("MISMATCH"));
        assert_ne!(out.code, EXIT_INVALID, "{}", out.stderr);
        assert_eq!(out.code == EXIT_MISMATCH, has, "t={t} tol={tol}\n{}", out.stdout);
    }
    let out = tropinflect(&["oracle-verify", &path, "--t", "1e-3", "--tol", "0.0001", "--format", "text"]);
    assert_eq!(out.code, EXIT_MISMATCH);
    assert!(out.stdout.contains("unclustered point at Val"));
}

#[test]
fn validation_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["inflect", "honeycomb:3", "--no-such-flag"],
        vec!["curve", "x+*y"],
        vec!["inflect", "x^2+y+0"],
        vec!["oracle-verify", "/nonexistent/cubic.json"],
        vec!["gen", "random", "0"],
        vec!["frobnicate"],
    ] {
        let out = tropinflect(&args);
        assert_eq!(out.code, EXIT_INVALID, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let bad = write_tmp(&dir, "bad.json", r#"{"terms": [{"exp": [0, 0]}]}"#);
    assert_eq!(tropinflect(&["oracle-verify", &bad]).code, EXIT_INVALID);
    assert_eq!(tropinflect(&["modify", "x+y+0", "--curve", "x+y+1", "--divisor", &bad]).code, EXIT_INVALID);
    assert_eq!(tropinflect(&["--help"]).code, EXIT_OK);
}

#[test]
fn out_flag_writes_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.svg");
    let out = tropinflect(&["curve", "honeycomb:2", "--format", "svg", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("<svg"));
}

#[test]
fn modify_golden_case_from_a_divisor_file() {
    let dir = tempfile::tempdir().unwrap();
    let div = write_tmp(&dir, "d.json", r#"{"points": [{"point": ["0", "-2"], "weight": 1}]}"#);
    let v = ok_json(&["modify", "0 + x + y", "--curve", "0 + x + 1y", "--divisor", &div]);
    assert_eq!(v["vertices"], serde_json::json!([["0", "-2", "-1"], ["0", "-1", "0"]]));
    let text = tropinflect(&["modify", "0 + x + y", "--curve", "0 + x + 1y", "--format", "text"]).stdout;
    assert!(text.contains("valence 4"), "{text}");
    let plane = ok_json(&["modify", "x+y+0"]);
    assert_eq!(plane["vertices"].as_array().unwrap().len(), 1);
}

#[test]
fn patchwork_harnack_quartic() {
    let v = ok_json(&["patchwork", "honeycomb-sym:4"]);
    assert_eq!(v["components"], 4);
    assert_eq!(v["ovals"], 4);
    let v = ok_json(&["patchwork", "honeycomb-sym:3"]);
    assert_eq!((v["ovals"].as_i64(), v["pseudolines"].as_i64()), (Some(1), Some(1)));
    let dir = tempfile::tempdir().unwrap();
    let signs = write_tmp(&dir, "s.json", "[[0,0,1],[1,0,1],[0,1,1]]");
    let v = ok_json(&["patchwork", "x+y+0", "--signs", &signs]);
    assert_eq!(v["pseudolines"], 1);
}

#[test]
fn generators_are_seeded() {
    let a = tropinflect(&["gen", "random", "4", "--seed", "7"]).stdout;
    let b = tropinflect(&["gen", "random", "4", "--seed", "7"]).stdout;
    let c = tropinflect(&["gen", "random", "4", "--seed", "8"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
    let p = TropicalPolynomial::from_json(&a).unwrap();
    assert_eq!(p.standard_degree(), Some(4));
}

#[test]
fn json_round_trips() {
    let poly = tropinflect(&["gen", "honeycomb", "3"]).stdout;
    let p = TropicalPolynomial::from_json(&poly).unwrap();
    assert_eq!(TropicalPolynomial::from_json(&p.to_json()).unwrap(), p);
    let v = ok_json(&["curve", "honeycomb:3"]);
    let c: TropicalCurve = serde_json::from_value(v["curve"].clone()).unwrap();
    assert_eq!(c, build_curve(&p).unwrap());
    let r = tropinflect(&["inflect", "honeycomb:3"]).stdout;
    let report: InflectionReport = serde_json::from_str(&r).unwrap();
    let again: InflectionReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_tropinflect");
    let st = Command::new(bin).args(["inflect", "honeycomb:3"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&st.stdout).unwrap();
    assert_eq!(v["summary"]["sum_mu"], 9);
    let st = Command::new(bin).args(["inflect", "--bogus"]).output().unwrap();
    assert_eq!(st.status.code(), Some(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn honeycomb_generator_output_is_generic(d in 2u32..=5, seed in 0u64..1000) {
        let out = tropinflect(&["gen", "honeycomb", &d.to_string(), "--seed", &seed.to_string()]);
        prop_assert_eq!(out.code, EXIT_OK);
        let c = build_curve(&TropicalPolynomial::from_json(&out.stdout).unwrap()).unwrap();
        prop_assert!(c.is_nonsingular());
        prop_assert!(genericity_check(&c).generic);
    }

    #[test]
    fn polynomial_json_round_trip(d in 1u32..=4, seed in 0u64..1000) {
        let out = tropinflect(&["gen", "random", &d.to_string(), "--seed", &seed.to_string(), "--format", "text"]);
        let p: TropicalPolynomial = out.stdout.trim().parse().unwrap();
        prop_assert_eq!(TropicalPolynomial::from_json(&p.to_json()).unwrap(), p.clone());
        let c = build_curve(&p).unwrap();
        prop_assert_eq!(TropicalCurve::from_json(&c.to_json()).unwrap(), c);
    }
}

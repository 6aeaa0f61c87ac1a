// Alone in its own binary: it mutates the process environment.
use tropinflect_cli::{run, EXIT_INVALID, EXIT_OK};

#[test]
fn env_precision_is_used_unless_the_flag_is_given() {
    let dir = tempfile::tempdir().unwrap();
    let real = run(["tropinflect", "gen", "honeycomb", "3", "--scale", "4", "--realize", "harnack"]).stdout;
    let path = dir.path().join("cubic.json");
    std::fs::write(&path, real).unwrap();
    let path = path.to_str().unwrap();
    let prec_of = |extra: &[&str]| {
        let mut args = vec!["tropinflect", "oracle-verify", path, "--t", "1e-3", "--format", "json"];
        args.extend_from_slice(extra);
        run(args)
    };
    std::env::set_var("TROPINFLECT_PREC", "not-a-number");
    assert_eq!(prec_of(&[]).code, EXIT_INVALID);
    assert_eq!(prec_of(&["--prec", "200"]).code, EXIT_OK);
    std::env::set_var("TROPINFLECT_PREC", "320");
    let out = prec_of(&[]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    std::env::remove_var("TROPINFLECT_PREC");
    assert_eq!(prec_of(&[]).code, EXIT_OK);
}

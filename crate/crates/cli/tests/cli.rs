use std::path::PathBuf;
use std::process::{Command, Output};

fn map(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../maps").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergolab")).args(args).output().unwrap()
}

fn analyze(name: &str, extra: &[&str]) -> Output {
    let path = map(name);
    let mut args = vec!["analyze", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

#[test]
fn contraction_is_mean_ergodic() {
    let text = stdout(&analyze("half.map", &[]));
    assert_eq!(field(&text, "verdict"), "ME_AND_UME");
    assert_eq!(field(&text, "k"), "1");
    assert_eq!(field(&text, "s"), "1");
}

#[test]
fn escaping_map_is_not_mean_ergodic_by_theorem() {
    let text = stdout(&analyze("affine.map", &["--json"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "NOT_ME");
    assert_eq!(v["basis"], "NO_INTERIOR_FIXED_POINT");
    assert_eq!(v["evidence"], "THEOREM");
    let re = v["denjoy_wolff"]["point"][0][0].as_f64().unwrap();
    assert!((re - 1.0).abs() < 1e-6);
}

#[test]
fn square_fails_the_criterion() {
    let text = stdout(&analyze("square.map", &[]));
    assert_eq!(field(&text, "verdict"), "NOT_ME");
    assert_eq!(field(&text, "basis"), "CRITERION_FAILS");
}

#[test]
fn irrational_rotation_is_undecided() {
    let text = stdout(&analyze("rotation.map", &["--kmax", "8"]));
    assert_eq!(field(&text, "verdict"), "UNDECIDED");
    assert_eq!(field(&text, "basis"), "NO_PERIOD_FOUND");
}

#[test]
fn output_is_deterministic() {
    for extra in [&[][..], &["--json"], &["--seed", "7"]] {
        let a = stdout(&analyze("slice.map", extra));
        let b = stdout(&analyze("slice.map", extra));
        assert_eq!(a, b);
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let printed = stdout(&analyze("third-turn.map", &["--json"]));
    let out = analyze("third-turn.map", &["--json", "-o", file.to_str().unwrap()]);
    assert!(stdout(&out).is_empty());
    assert_eq!(std::fs::read_to_string(&file).unwrap(), printed);
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("missing/report.txt");
    let out = analyze("half.map", &["-o", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.map");
    std::fs::write(&bad, "dim 1\nkind series\n1: 1: half 0\n").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let out = run(&["analyze", dir.path().join("absent.map").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["metric", "0.1,x", "0,0"]).status.code(), Some(2));
    assert_eq!(run(&["metric", "0.1,0", "0"]).status.code(), Some(2));
}

#[test]
fn refused_certificate_exits_3() {
    let out = analyze("shifted.map", &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("certificate refused"));
}

#[test]
fn numeric_failures_exit_4() {
    assert_eq!(run(&["metric", "1.2", "0"]).status.code(), Some(4));
    let path = map("offset.map");
    assert_eq!(run(&["retraction", path.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn metric_reports_bergman_distance() {
    let text = stdout(&run(&["metric", "0", "0.5"]));
    let d: f64 = field(&text, "bergman_distance").parse().unwrap();
    assert!((d - 0.5f64.atanh()).abs() < 1e-11);
    let text = stdout(&run(&["metric", "0.3+0.1i,0", "0,-0.4i"]));
    let residual: f64 = field(&text, "involution_residual").parse().unwrap();
    assert!(residual < 1e-12);
    let gap: f64 = field(&text, "chord_gap").parse().unwrap();
    assert!(gap >= 0.0);
}

#[test]
fn normal_forms() {
    let text = stdout(&run(&["normal-form", map("slice.map").to_str().unwrap()]));
    assert_eq!(field(&text, "status"), "CONVERGED");
    assert_eq!(field(&text, "s"), "1");

    let text = stdout(&run(&["normal-form", map("identity.map").to_str().unwrap()]));
    assert_eq!(field(&text, "s"), "0");

    let text = stdout(&run(&["normal-form", "--kmax", "8", map("rotation.map").to_str().unwrap()]));
    assert_eq!(field(&text, "status"), "NO_PERIOD_FOUND");
}

#[test]
fn retraction_through_a_fixed_point() {
    let text = stdout(&run(&["retraction", "--conjugate", "--json", map("offset.map").to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "CONVERGED");
    assert_eq!(v["k"], 1);
    assert_eq!(v["s"], 2);
    assert!((v["fixed_point"][0][0].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn cesaro_means_approach_the_projection() {
    let text = stdout(&run(&["cesaro", "--json", "--horizon", "64", map("third-turn.map").to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["k"], 3);
    let rows = v["rows"].as_array().unwrap();
    let last = rows.iter().find(|r| r["function"] == "z1" && r["j"] == 64).unwrap();
    // M_64 z1 = z1 * (omega + ... + omega^64) / 64 = z1 * omega / 64
    assert!(last["sup_to_projection"].as_f64().unwrap() <= 0.9 / 64.0 + 1e-9);
}


use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_resolvent-lab"));
    c.env_remove("RESOLVENT_LAB_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn family(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let out = run(&[&["family"], args].concat());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let p = dir.join(name);
    std::fs::write(&p, &out.stdout).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_rotation_zero_and_minus_identity() {
    let dir = tempfile::tempdir().unwrap();
    let rot = family(dir.path(), "rot.json", &["rotation", "--lambda", "0.25"]);
    let out = run(&["classify", s(&rot)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["rho_comono_opt"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["tool"], "resolvent-lab");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["seed"], 42);

    let zero = write(dir.path(), "zero.json", r#"{"n": 2, "rows": [[0, 0], [0, 0]]}"#);
    assert_eq!(json(&run(&["classify", s(&zero)]))["rho_comono_opt"], "inf");

    let neg = write(dir.path(), "neg.json", r#"{"n": 2, "rows": [[-1, 0], [0, -1]]}"#);
    let out = run(&["classify", s(&neg)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rho_mono_opt"].as_f64(), Some(-1.0));
    assert_eq!(v["resolvent_defined"], false);

    let bad = write(dir.path(), "bad.json", r#"{"n": 2, "rows": [[1]]}"#);
    assert_eq!(run(&["classify", s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["classify", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(
        dir.path(),
        "id.json",
        r#"{"dim": 1, "pairs": [{"x": [0], "u": [0]}, {"x": [1], "u": [1]}, {"x": [-2], "u": [-2]}]}"#,
    );
    let out = run(&["certify", s(&id), "--property", "rho-comonotone", "--param", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);

    let rot = family(dir.path(), "rot.json", &["rotation", "--lambda", "0.75"]);
    let g = family(dir.path(), "g.json", &["linear-graph", s(&rot)]);
    let out = run(&["certify", s(&g), "--property", "rho-comonotone", "--param", "-0.3"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(v["worst_margin"].as_f64().unwrap() < 0.0);
    assert!(v["witness"]["x"].is_array());
    let exact = run(&["certify", s(&g), "--property", "rho-comonotone", "--param", "-0.3333333333"]);
    assert_eq!(exact.status.code(), Some(0));

    let ce = family(dir.path(), "ce.json", &["counterexample", "--r", "1", "--c", "0,1"]);
    let out = run(&["certify", s(&ce), "--property", "resolvent-single-valued"]);
    assert_eq!(out.status.code(), Some(1));
    let w = &json(&out)["witness"];
    assert_eq!(w["x"], w["y"]);
    assert_ne!(w["u"], w["v"]);

    assert_eq!(run(&["certify", s(&g), "--property", "conic"]).status.code(), Some(2));
    assert_eq!(run(&["certify", s(&g), "--property", "bogus"]).status.code(), Some(2));
    let broken = write(dir.path(), "broken.json", r#"{"dim": 2, "pairs": [{"x": [1], "u": [1, 2]}]}"#);
    assert_eq!(run(&["certify", s(&broken), "--property", "single-valued"]).status.code(), Some(2));
}

#[test]
fn tolerance_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let rot = family(dir.path(), "rot.json", &["rotation", "--lambda", "0.75"]);
    let g = family(dir.path(), "g.json", &["linear-graph", s(&rot)]);
    let args = ["certify", s(&g), "--property", "rho-comonotone", "--param", "-0.3"];
    let loose = bin().args(args).env("RESOLVENT_LAB_TOL", "0.5").output().unwrap();
    assert_eq!(loose.status.code(), Some(0));
    let flag_wins = bin().args(args).args(["--tol", "0"]).env("RESOLVENT_LAB_TOL", "0.5").output().unwrap();
    assert_eq!(flag_wins.status.code(), Some(1));
    let bad = bin().args(args).env("RESOLVENT_LAB_TOL", "abc").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("RESOLVENT_LAB_TOL"));
}

#[test]
fn correspond_rows() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(dir.path(), "id.json", r#"{"n": 2, "rows": [[1, 0], [0, 1]]}"#);
    let v = json(&run(&["correspond", s(&id)]));
    assert_eq!(v["row"], "ρ-cocoercive / strongly monotone");
    assert_eq!(v["passed"], true);

    let skew = write(dir.path(), "skew.json", r#"{"n": 2, "rows": [[0, -1], [1, 0]]}"#);
    let out = run(&["correspond", s(&skew)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["row"], "monotone");

    let rot = family(dir.path(), "rot.json", &["rotation", "--lambda", "0.75"]);
    let v = json(&run(&["correspond", s(&rot), "--reflected"]));
    assert_eq!(v["row"], "−½ < ρ < 0");
    assert!(v["reflected"]["items"].is_array());
    let claims = v["claims"].as_array().unwrap();
    assert!(claims.iter().all(|c| c["holds"] == true));
    assert!(claims.iter().any(|c| c["statement"].as_str().unwrap().contains("0.75")), "{claims:?}");
}

#[test]
fn prox_values_and_regime_errors() {
    let v = json(&run(&["prox", "--function", "exp", "--lambda", "1", "--mu", "0.5", "--x", "1"]));
    assert!((v["point"].as_f64().unwrap() - 0.4428544010).abs() < 1e-9);
    assert_eq!(v["method"], "closed_form");

    let v = json(&run(&[
        "prox", "--function", "indicator-quadratic", "--lambda", "1", "--mu", "0.5", "--cone", "R+", "--x", "-1",
    ]));
    assert_eq!(v["point"].as_f64(), Some(0.0));
    let v = json(&run(&[
        "prox", "--function", "indicator-quadratic", "--lambda", "1", "--mu", "0.5", "--cone", "R+", "--x", "3",
    ]));
    assert_eq!(v["point"].as_f64(), Some(6.0));

    let v = json(&run(&["prox", "--function", "concave-quadratic", "--lambda", "1", "--mu", "0.5", "--x", "1.5"]));
    assert!((v["point"].as_f64().unwrap() - 3.0).abs() < 1e-12);

    let out = run(&["prox", "--function", "exp", "--lambda", "1", "--mu", "1.5", "--x", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu"));
    let boundary = run(&["prox", "--function", "exp", "--lambda", "1", "--mu", "1", "--x", "2"]);
    assert_eq!(boundary.status.code(), Some(0));
    assert_eq!(run(&["prox", "--lambda", "1", "--mu", "0.5", "--x", "1"]).status.code(), Some(2));
}

#[test]
fn prox_of_spline_file() {
    let dir = tempfile::tempdir().unwrap();
    // −y²/2 on y < 0, y²/2 on y ≥ 0
    let spline = write(
        dir.path(),
        "spline.json",
        r#"{"pieces": [{"a": -0.5, "b": 0, "c": 0, "hi": 0}, {"a": 0.5, "b": 0, "c": 0, "lo": 0}]}"#,
    );
    let v = json(&run(&["prox", "--function", "spline", "--spline", s(&spline), "--mu", "0.5", "--x", "-1"]));
    // y − μy = x on the concave piece
    assert!((v["point"].as_f64().unwrap() + 2.0).abs() < 1e-9, "{v}");
}

#[test]
fn iterate_trajectories() {
    let out = run(&["iterate", "--function", "exp", "--lambda", "0.2", "--mu", "0.1", "--x0", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("iter,x_0,residual"));
    assert_eq!(csv.lines().last(), Some("# status=converged"));
    let last_row = csv.lines().rev().nth(1).unwrap();
    let x: f64 = last_row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((x - 2.5426413).abs() < 1e-6);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = run(&["iterate", "--function", "exp", "--lambda", "0.2", "--mu", "0.1", "--x0", "-2", "--out", s(&path)]);
    assert_eq!(json(&out)["status"], "diverged");
    assert!(std::fs::read_to_string(&path).unwrap().ends_with("# status=diverged\n"));

    let rot = family(dir.path(), "rot.json", &["rotation", "--lambda", "0.25"]);
    let out = run(&["iterate", "--matrix", s(&rot), "--resolvent", "--x0", "1,-2", "--out", s(&path)]);
    let v = json(&out);
    assert_eq!(v["status"], "converged");
    assert!(v["last"].as_array().unwrap().iter().all(|c| c.as_f64().unwrap().abs() < 1e-9));

    let neg = write(dir.path(), "neg.json", r#"{"n": 1, "rows": [[-1]]}"#);
    let osc = json(&run(&["iterate", "--matrix", s(&neg), "--x0", "1", "--max-iter", "50", "--out", s(&path)]));
    assert_eq!(osc["status"], "max_iter");
    let half = json(&run(&["iterate", "--matrix", s(&neg), "--x0", "1", "--t", "0.5", "--out", s(&path)]));
    assert_eq!(half["status"], "converged");

    assert_eq!(run(&["iterate", "--function", "exp", "--lambda", "0.2", "--mu", "0.1"]).status.code(), Some(2));
    let bad_t = run(&["iterate", "--matrix", s(&neg), "--x0", "1", "--t", "1.5"]);
    assert_eq!(bad_t.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let rot = family(dir.path(), "rot.json", &["rotation", "--lambda", "0.6"]);
    let a = run(&["correspond", s(&rot), "--seed", "7"]).stdout;
    let b = run(&["correspond", s(&rot), "--seed", "7"]).stdout;
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["seed"], 7);

    let g1 = run(&["family", "counterexample", "--r", "1", "--seed", "3"]).stdout;
    let g2 = run(&["family", "counterexample", "--r", "1", "--seed", "3"]).stdout;
    let g3 = run(&["family", "counterexample", "--r", "1", "--seed", "4"]).stdout;
    assert_eq!(g1, g2);
    assert_ne!(g1, g3);
}

#[test]
fn help_and_usage() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

use std::path::Path;
use std::process::{Command, Output};

fn moebius(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moebius")).args(args).output().expect("running moebius")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn conjugate_of_three() {
    let o = moebius(&["conjugate", "--axis=-1,1", "--point", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.333333333");
}

#[test]
fn conjugate_in_single_precision() {
    let o = moebius(&["--precision", "f32", "conjugate", "--axis=-1,1", "--point", "3"]);
    assert!(o.status.success());
    let y: f64 = stdout(&o).trim().parse().unwrap();
    assert!((y - 1.0 / 3.0).abs() < 1e-6);
}

#[test]
fn perpendicular_of_nested_pairs() {
    let o = moebius(&["perp", "--b=-1,1", "--b1=-4,4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "inf,0.000000000");
}

#[test]
fn build_then_check_hyperbolicity() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let o = moebius(&["approx", "build", "--levels", "0..2", "--out", p(&g)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(summary["vertices"].as_u64().unwrap() > 100);
    let o = moebius(&["approx", "hyperbolicity", "--graph", p(&g), "--quadruples", "2000", "--pairs", "200"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["pass"], true);
}

#[test]
fn square_root_metric_is_a_violation() {
    let o = moebius(&["--structure", "power:0.5", "--samples", "2000", "check-axioms"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("violation:"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(moebius(&["--no-such-flag", "check-axioms"]).status.code(), Some(2));
    assert_eq!(moebius(&["--structure", "sine", "check-axioms"]).status.code(), Some(2));
    let o = moebius(&["approx", "build", "--sigma", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"structure": {"structure": "power", "exponent": 0.5}, "samples": 500, "seed": 4}"#).unwrap();
    assert_eq!(moebius(&["--config", p(&cfg), "check-axioms"]).status.code(), Some(1));
    let o = moebius(&["--config", p(&cfg), "--structure", "canonical", "check-axioms"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let reps: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reps[0]["samples"], 500);
    assert_eq!(reps[0]["seed"], 4);

    std::fs::write(&cfg, r#"{"smaples": 5}"#).unwrap();
    assert_eq!(moebius(&["--config", p(&cfg), "check-axioms"]).status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["--seed", "9", "--samples", "20", "quasiline-diam", "--involutions", "2"];
    let a = moebius(&args);
    let b = moebius(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = moebius(&["--seed", "10", "--samples", "20", "quasiline-diam", "--involutions", "2"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn qi_report_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let csv = dir.path().join("qi.csv");
    let json = dir.path().join("qi.json");
    assert!(moebius(&["approx", "build", "--levels", "0..3", "--out", p(&g)]).status.success());
    let o = moebius(&["--samples", "40", "--out", p(&json), "qi", "report", "--graph", p(&g), "--csv", p(&csv)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let reps: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let ids: Vec<&str> = reps.as_array().unwrap().iter().map(|r| r["bound_id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"qi_upper") && ids.contains(&"chain_cobound"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().next().unwrap().starts_with("bound_id"));
    assert!(text.lines().count() > 40);
}

#[test]
fn renders_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("disk.svg");
    let o = moebius(&["--out", p(&svg), "render", "disk", "--pair=-1,1", "--harmonic=-1,1/0,inf"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = std::fs::read_to_string(&svg).unwrap();
    assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));

    let g = dir.path().join("g.json");
    assert!(moebius(&["approx", "build", "--levels", "0..1", "--out", p(&g)]).status.success());
    let o = moebius(&["render", "graph", "--graph", p(&g)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("<line"));
}

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn frobdesc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobdesc"))
        .args(args)
        .env_remove("FROBDESC_JOBS")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn analyze_json(path: &str) -> (i32, Value) {
    let out = frobdesc(&["analyze", path, "--format", "json"]);
    let code = out.status.code().unwrap();
    let json = serde_json::from_str(&stdout(&out)).unwrap_or(Value::Null);
    (code, json)
}

fn deltas(report: &Value) -> Vec<u64> {
    report["trace"]["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["delta"].as_u64().unwrap())
        .collect()
}

#[test]
fn tau_prints_value() {
    let out = frobdesc(&["tau", "-p", "2", "-d", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3");
    let out = frobdesc(&["tau", "-p", "3", "-d", "13", "--oracle"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("agrees"));
}

#[test]
fn bound_reports_level() {
    let out = frobdesc(&["bound", "--delta", "3", "--sep", "1", "-p", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("bound level: 3"));
    assert_eq!(
        frobdesc(&["bound", "--delta", "0", "--sep", "1", "-p", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn analyze_pencil() {
    let path = fixture("pencil.tower");
    let (code, report) = analyze_json(path.to_str().unwrap());
    assert_eq!(code, 0);
    assert_eq!(deltas(&report), [3, 1, 0, 0]);
    assert_eq!(
        report["trace"]["certificates"]["attains_bound"],
        Value::Bool(true)
    );
    assert_eq!(report["schema"], "frobdesc.report/1");
    let text = stdout(&frobdesc(&["analyze", path.to_str().unwrap()]));
    assert!(text.contains("attains_bound        true"));
}

#[test]
fn analyze_quasi_elliptic() {
    let (code, report) = analyze_json(fixture("familyB_i0.tower").to_str().unwrap());
    assert_eq!(code, 0);
    assert_eq!(deltas(&report), [1, 0, 0]);
}

#[test]
fn construct_then_analyze_every_delta() {
    let dir = tempfile::tempdir().unwrap();
    for d in 1..=40u64 {
        let path = dir.path().join(format!("d{d}.tower"));
        let p = path.to_str().unwrap();
        let out = frobdesc(&["construct", "--delta", &d.to_string(), "--emit", p]);
        assert!(out.status.success(), "construct {d}");
        let (code, report) = analyze_json(p);
        assert_eq!(code, 0, "analyze {d}");
        assert_eq!(deltas(&report)[0], d);
    }
}

#[test]
fn construct_families() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.tower");
    let p = path.to_str().unwrap();
    let out = frobdesc(&[
        "construct",
        "--family",
        "a",
        "-i",
        "2",
        "-j",
        "1",
        "--emit",
        p,
    ]);
    assert!(out.status.success());
    let (code, report) = analyze_json(p);
    assert_eq!((code, deltas(&report)[0]), (0, 6));
    let out = frobdesc(&["construct", "--family", "B", "-i", "3", "--emit", p]);
    assert!(out.status.success());
    let (code, report) = analyze_json(p);
    assert_eq!((code, deltas(&report)[0]), (0, 8));
    let out = frobdesc(&["construct", "--family", "a", "-i", "2", "--emit", p]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn emitted_documents_are_deterministic() {
    let a = stdout(&frobdesc(&["construct", "--delta", "23", "--emit", "-"]));
    let b = stdout(&frobdesc(&["construct", "--delta", "23", "--emit", "-"]));
    assert_eq!(a, b);
    let doc: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["p"], 2);
}

#[test]
fn failing_fixture_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture("pencil.tower")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["expected"]["delta"] = serde_json::json!([4, 1, 0, 0]);
    let path = dir.path().join("bad_expected.tower");
    fs::write(&path, doc.to_string()).unwrap();
    assert_eq!(analyze_json(path.to_str().unwrap()).0, 1);

    let mut doc: Value = serde_json::from_str(&text).unwrap();
    let levels = doc["levels"].as_array_mut().unwrap();
    let step = &mut levels[1]["step"];
    step["kind"] = "inert".into();
    let path = dir.path().join("bad_witness.tower");
    fs::write(&path, doc.to_string()).unwrap();
    assert_eq!(analyze_json(path.to_str().unwrap()).0, 1);
}

#[test]
fn malformed_documents_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.tower");
    fs::write(
        &path,
        r#"{"p": 2, "q": 2, "bottom": {"var": "x", "prime": "x"}}"#,
    )
    .unwrap();
    let out = frobdesc(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("levels"));
    fs::write(&path, "{not json").unwrap();
    assert_eq!(
        frobdesc(&["analyze", path.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        frobdesc(&["analyze", "/nonexistent/tower"]).status.code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        frobdesc(&["tau", "-p", "2", "-d", "6", "--frobnicate"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        frobdesc(&["construct", "--emit", "-"]).status.code(),
        Some(2)
    );
    assert_eq!(
        frobdesc(&["pencil", "--checks", "nonsense"]).status.code(),
        Some(2)
    );
    assert_eq!(
        frobdesc(&["pencil", "--checks", "diophantine", "--max-deg", "9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        frobdesc(&["sharpness", "--max-d", "41"]).status.code(),
        Some(2)
    );
}

#[test]
fn pencil_intersection() {
    let out = frobdesc(&["pencil", "--checks", "intersection"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("E: -4"));
    assert!(text.contains("15 components with self-intersection -2"));
    assert!(text.contains("minimal=true"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn pencil_all_checks_small_field() {
    let out = frobdesc(&["pencil", "--field-exp", "2"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("over F_4"));
}

#[test]
fn sharpness_with_jobs_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_frobdesc"))
        .args(["sharpness", "--max-d", "12"])
        .env("FROBDESC_JOBS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("sharpness for d = 1..12: PASS"));
}

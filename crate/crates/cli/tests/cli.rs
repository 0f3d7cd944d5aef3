//! End-to-end checks of the command-line interface: exit codes, report
//! shapes and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sorted-systems")
}

fn corpus(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(file)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn counterexample_succeeds_with_expected_quantities() {
    let out = run(&["counterexample", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["quantities"]["tilde_classes"], 4);
    assert_eq!(report["quantities"]["dual_tilde_classes"], 3);
    assert_eq!(report["quantities"]["limit_order"], 4);
    let entries = report["entries"].as_array().unwrap();
    let expected = entries
        .iter()
        .find(|e| e["name"] == "expected-fail")
        .unwrap();
    assert_eq!(expected["status"], "pass");
    assert!(entries
        .iter()
        .any(|e| e["name"] == "hidden-axiom (expected fail)"));
}

#[test]
fn counterexample_reports_are_byte_identical() {
    let a = run(&["counterexample", "--format", "json"]);
    let b = run(&["counterexample", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn roundtrip_passes_on_the_z4_group_file() {
    let out = run(&["roundtrip", corpus("z4.group.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn check_group_and_system_commands() {
    let out = run(&["check-group", corpus("z4.sorted.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["check-system", corpus("z4.system.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    // the hidden example fails its checks, so check-system exits 1
    let out = run(&["check-system", corpus("hidden.system.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_2() {
    let dir = std::env::temp_dir().join("sorted-systems-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("garbage.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["check-system", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["check-group", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dualize_both_directions() {
    let out = run(&["dualize", "g2s", corpus("z4.group.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let json_start = text.find('{').unwrap();
    assert!(text[json_start..].contains("\"sorts\""));

    let out = run(&["dualize", "s2g", corpus("z4.system.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"sorting\""));
}

#[test]
fn interpret_fiber_and_ultraproduct() {
    let out = run(&["interpret", corpus("z4.model.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    let out = run(&["fiber", corpus("z4_mod2.fiber.json").to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["quantities"]["order"], 16);

    for index in ["0", "1", "2"] {
        let out = run(&[
            "ultraproduct",
            corpus("z2z4s3.ultra.json").to_str().unwrap(),
            "--index",
            index,
        ]);
        assert_eq!(out.status.code(), Some(0), "index {index}: {out:?}");
    }
    let out = run(&[
        "ultraproduct",
        corpus("z2z4s3.ultra.json").to_str().unwrap(),
        "--index",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_system_json_reports_are_byte_identical() {
    let path = corpus("z4.system.json");
    let a = run(&["check-system", path.to_str().unwrap(), "--format", "json"]);
    let b = run(&["check-system", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn kcap_env_var_is_honored() {
    let out = Command::new(bin())
        .args(["counterexample"])
        .env("GDL_KCAP", "5")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    // below the level where the collision lives, the builder refuses
    let out = Command::new(bin())
        .args(["counterexample"])
        .env("GDL_KCAP", "3")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn support_option_is_honored() {
    let out = run(&[
        "roundtrip",
        corpus("z4.group.json").to_str().unwrap(),
        "--support",
        "1:A;2:A;4:A",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    // a non-faithful support makes alpha fail, exit 1
    let out = run(&[
        "roundtrip",
        corpus("z4.group.json").to_str().unwrap(),
        "--support",
        "2:A",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

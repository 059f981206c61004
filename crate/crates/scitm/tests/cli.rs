//! End-to-end checks of the `scitm` binary: exit codes, stream
//! discipline and artifact shape.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn scitm(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scitm"))
        .args(args)
        .current_dir(cwd)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .unwrap()
}

fn write_tiny(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("tiny.scm");
    fs::write(
        &path,
        r#"model "Tiny"
layer 0 {
  process p "P" [tags: web-facing]
  external e "E"
  store s "S"
  flow f1: e -> p "in" [crosses b]
  flow f2: p -> s "out"
  boundary b "B" { e }
}
"#,
    )
    .unwrap();
    path
}

#[test]
fn validate_accepts_valid_model_silently() {
    let dir = tempfile::tempdir().unwrap();
    write_tiny(dir.path());
    let out = scitm(&["validate", "tiny.scm"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
}

#[test]
fn validate_reports_dangling_reference_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.scm"),
        "model \"Bad\"\nlayer 0 {\n  process p \"P\"\n  flow f1: p -> ghost \"x\"\n}\n",
    )
    .unwrap();
    let out = scitm(&["validate", "bad.scm"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(":dangling-reference:"), "{err}");
    assert!(err.starts_with("error:4:"), "{err}");
}

#[test]
fn validate_rejects_garbled_input_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("junk.scm"), "model Tiny layer {{{").unwrap();
    let out = scitm(&["validate", "junk.scm"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax-error"));
}

#[test]
fn validate_missing_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = scitm(&["validate", "nope.scm"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_json_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    write_tiny(dir.path());
    let out = scitm(&["analyze", "tiny.scm", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "model",
        "model_digest",
        "ruleset_version",
        "mapping_version",
        "stats",
        "threats",
        "generated_at",
    ] {
        assert!(value.get(key).is_some(), "missing key {key}");
    }
    for key in ["total", "by_category", "by_system", "by_system_pct"] {
        assert!(value["stats"].get(key).is_some(), "missing stats key {key}");
    }
    let threat = &value["threats"][0];
    for key in ["id", "rule", "category", "type", "subject", "layer", "group", "offences", "evidence"] {
        assert!(threat.get(key).is_some(), "missing threat key {key}");
    }
    assert_eq!(value["generated_at"], "2023-11-14T22:13:20Z");
}

#[test]
fn analyze_markdown_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write_tiny(dir.path());
    let a = scitm(&["analyze", "tiny.scm", "--format", "md"], dir.path());
    let b = scitm(&["analyze", "tiny.scm", "--format", "md"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analyze_dot_renders_requested_layer() {
    let dir = tempfile::tempdir().unwrap();
    write_tiny(dir.path());
    let out = scitm(&["analyze", "tiny.scm", "--format", "dot"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("cylinder"));
    let missing = scitm(&["analyze", "tiny.scm", "--format", "dot", "--layer", "2"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn analyze_invalid_model_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.scm"),
        "model \"Bad\"\nlayer 0 {\n  boundary b \"B\" { b }\n}\n",
    )
    .unwrap();
    let out = scitm(&["analyze", "bad.scm"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn analyze_rejects_unknown_format_flag() {
    let dir = tempfile::tempdir().unwrap();
    write_tiny(dir.path());
    let out = scitm(&["analyze", "tiny.scm", "--format", "xml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn template_emission_validates_and_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = scitm(&["template"], dir.path());
    let b = scitm(&["template"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    fs::write(dir.path().join("sci.scm"), &a.stdout).unwrap();
    let check = scitm(&["validate", "sci.scm"], dir.path());
    assert_eq!(check.status.code(), Some(0));
    assert!(check.stderr.is_empty(), "{}", String::from_utf8_lossy(&check.stderr));
}

#[test]
fn template_rejects_assignment_breaking_smallest_group() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for n in 5..=23u8 {
        let g = match n {
            5..=10 => "resources",
            11..=14 => "citizen-services",
            15..=18 => "livelihood-support",
            _ => "essential-services",
        };
        text.push_str(&format!("clause {n} -> {g}\n"));
    }
    fs::write(dir.path().join("bad.assignment"), text).unwrap();
    let out = scitm(&["template", "--assignment", "bad.assignment"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("smallest"));
}

#[test]
fn map_prints_articles_for_sniffing() {
    let dir = tempfile::tempdir().unwrap();
    let out = scitm(&["map", "data-flow-sniffing"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Art. 2"));
    assert!(text.contains("Art. 3"));
    assert!(text.contains("Art. 6"));
    assert!(!text.contains("Art. 4"));
}

#[test]
fn map_accepts_long_alias_for_repudiation() {
    let dir = tempfile::tempdir().unwrap();
    let out = scitm(&["map", "potential-data-repudiation"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("SCI systems"));
    assert!(text.contains("SCI network infrastructure"));
    assert!(!text.contains("Adversarial systems"));
}

#[test]
fn map_unknown_type_lists_valid_names() {
    let dir = tempfile::tempdir().unwrap();
    let out = scitm(&["map", "not-a-threat"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("valid names"));
    assert!(err.contains("data-flow-sniffing"));
}

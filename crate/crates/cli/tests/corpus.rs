use std::path::PathBuf;
use std::process::Command;

use serde::Deserialize;

#[derive(Deserialize)]
struct Case {
    name: String,
    args: Vec<String>,
    exit: i32,
}

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn fibcat() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fibcat"));
    c.current_dir(corpus());
    c
}

#[test]
fn corpus_cases_match_exit_codes_and_golden_reports() {
    let text = std::fs::read_to_string(corpus().join("cases.json")).unwrap();
    let cases: Vec<Case> = serde_json::from_str(&text).unwrap();
    for case in cases {
        let out = fibcat()
            .arg("--format")
            .arg("json")
            .args(&case.args)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(case.exit), "{}", case.name);
        let golden = corpus()
            .join("expected")
            .join(format!("{}.json", case.name));
        if golden.exists() {
            let expected = std::fs::read_to_string(&golden).unwrap();
            assert_eq!(
                String::from_utf8(out.stdout).unwrap(),
                expected,
                "{}",
                case.name
            );
        }
    }
}

#[test]
fn fuzz_reports_do_not_depend_on_thread_count() {
    let run = |threads: &str| {
        fibcat()
            .env("RAYON_NUM_THREADS", threads)
            .args([
                "--format", "json", "fuzz", "all", "--seed", "7", "--cases", "8",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("4"));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn out_flag_writes_the_constructed_object() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("el.json");
    let out = fibcat()
        .args([
            "construct",
            "elements",
            "--presheaf",
            "presheaf_arrow.json",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        written,
        std::fs::read_to_string(corpus().join("elements_arrow.json")).unwrap()
    );
}

#[test]
fn text_format_leads_with_a_status_line() {
    let out = fibcat()
        .args([
            "check",
            "discrete-fibration",
            "--slice",
            "point_into_arrow.json",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("fibcat check discrete-fibration: fail\n"),
        "{text}"
    );
    assert!(text.contains("lift_count"));
}

#[test]
fn unknown_targets_are_usage_errors() {
    let out = fibcat().args(["check", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_inputs_are_reported_as_parse_errors() {
    let out = fibcat()
        .args(["--format", "json", "check", "final"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "parse");
}

#[test]
fn laws_lists_every_registered_law() {
    let out = fibcat()
        .args(["--format", "json", "laws"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v["result"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"set-round-trip"));
    assert!(names.contains(&"naive-fibration-isofibration"));
}

//! End-to-end tests against the compiled binary: exit codes, both output
//! modes, payload plumbing and byte-level determinism.

use std::io::Write as _;
use std::process::{Command, Output, Stdio};

fn univjac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_univjac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf8")
}

const VINE: &str =
    r#"{"vertices":[{"id":"a","genus":1},{"id":"b","genus":2}],"edges":[["a","b"],["a","b"]]}"#;

#[test]
fn invariants_pretty_and_json() {
    let out = univjac(&["invariants", "-g", "3", "-d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("k = 1"), "{text}");
    assert!(text.contains("gerbe order = 4"), "{text}");

    let out = univjac(&["invariants", "-g", "3", "-d", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["k"], 1);
    assert_eq!(v["gerbe_order"], 4);
    assert_eq!(v["G1"], 4);
}

#[test]
fn domain_errors_exit_2() {
    let out = univjac(&["invariants", "-g", "2", "-d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("genus"));
    assert!(stdout(&out).is_empty());

    let out = univjac(&[
        "chi",
        "-g",
        "5",
        "-d",
        "2",
        "--class",
        r#"{"space":"jac","coeffs":{"L01":1}}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1() {
    let out = univjac(&["invariants", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let out = univjac(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    let out = univjac(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn boundary_labels() {
    let out = univjac(&["boundary", "-g", "4", "-d", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let labels: Vec<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["d0", "d1_1", "d1_2", "dg2"]);
}

#[test]
fn xi_exponents() {
    let out = univjac(&["xi", "-g", "4", "-d", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["p"], 2);
    assert_eq!(v["q"], -1);
    assert_eq!(v["element"]["coeffs"]["L01"], 2);
}

#[test]
fn classify_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_univjac"))
        .args(["classify", "--graph", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(VINE.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "stable");
}

#[test]
fn balanced_check_and_enumeration_agree() {
    let out = univjac(&["balanced", "--graph", VINE, "-d", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let found = v["multidegrees"].as_array().unwrap().clone();
    assert!(!found.is_empty());

    let all = univjac(&["balanced", "--graph", VINE, "-d", "5", "--mode", "all", "--json"]);
    assert_eq!(stdout(&all), stdout(&out));
    for md in &found {
        let rendered = md
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let out = univjac(&["balanced", "--graph", VINE, "-d", "5", "--md", &rendered]);
        assert_eq!(stdout(&out).trim(), "balanced");
    }

    let out = univjac(&[
        "balanced", "--graph", VINE, "-d", "5", "--md", "5,0", "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["balanced"], false);
    assert!(v["witness"]["bounds"].is_object(), "{v}");
}

#[test]
fn dspecial_routes_agree() {
    let graph =
        r#"{"vertices":[{"id":"a","genus":1},{"id":"b","genus":3}],"edges":[["a","b"]]}"#;
    let fast = univjac(&["dspecial", "-g", "4", "-d", "3", "--vine", "1", "1", "--json"]);
    let slow = univjac(&["dspecial", "-d", "3", "--graph", graph, "--json"]);
    let f: serde_json::Value = serde_json::from_str(&stdout(&fast)).unwrap();
    let s: serde_json::Value = serde_json::from_str(&stdout(&slow)).unwrap();
    assert_eq!(f["special"], s["special"]);
    assert_eq!(f["method"], "divisibility");
    assert_eq!(s["method"], "enumeration");
}

#[test]
fn res_and_topo_take_class_payloads() {
    let out = univjac(&[
        "res",
        "-g",
        "4",
        "-d",
        "1",
        "--class",
        r#"{"space":"jac","coeffs":{"L01":1}}"#,
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["weight"], -2);

    let out = univjac(&[
        "topo",
        "-g",
        "3",
        "-d",
        "2",
        "--class",
        r#"{"space":"j","coeffs":{"Xi":1}}"#,
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["lambda"], "1");
    assert_eq!(v["eta"]["eta"], 1);
}

#[test]
fn families_normalizes_degree_with_note() {
    let shifted = univjac(&["families", "-g", "4", "-d", "9", "--json"]);
    let plain = univjac(&["families", "-g", "4", "-d", "3", "--json"]);
    assert_eq!(stdout(&shifted), stdout(&plain));
    assert!(stderr(&shifted).contains("normalized to 3"));
    assert!(stderr(&plain).is_empty());
}

#[test]
fn compare_and_picj0() {
    let out = univjac(&["compare", "-g", "4", "-d", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["elementary_divisors"], serde_json::json!([1, 1, 2]));
    assert_eq!(v["coker_torsion"], serde_json::json!([2]));

    let out = univjac(&["picj0", "-g", "3"]);
    assert_eq!(stdout(&out).trim(), "Z/9 on L10 + Z on Xi");
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["compare", "-g", "5", "-d", "3", "--json"],
        vec!["independence", "-g", "4", "-d", "3", "--json"],
        vec!["boundary", "-g", "6", "-d", "4"],
        vec!["balanced", "--graph", VINE, "-d", "7", "--json"],
    ] {
        let a = univjac(&args);
        let b = univjac(&args);
        assert_eq!(a.stdout, b.stdout, "args {args:?}");
        assert_eq!(a.status.code(), Some(0));
    }
}

#[test]
fn verify_small_grid_passes() {
    let out = univjac(&["verify", "--grid", "g=3..4", "d=0..3", "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 11, "{text}");
    assert!(text.lines().skip(1).all(|l| l.contains("\ttrue\t")), "{text}");
}

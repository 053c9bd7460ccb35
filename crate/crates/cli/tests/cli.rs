use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covercrimp"))
        .args(args)
        .env("COVERCRIMP_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> i32 {
    let out = run(args);
    assert!(out.stdout.is_empty(), "failures print nothing on stdout");
    assert!(!out.stderr.is_empty());
    out.status.code().unwrap()
}

#[test]
fn disc_of_triple_point_over_f7() {
    let v = ok(&["disc", "--input", &fixture("disc_triple_f7.json")]);
    assert_eq!(v["branch_valuation"], 6);
    assert_eq!(v["field"], "F7");
    assert_eq!(v["etale"], false);
    assert_eq!(v["discriminant"]["precision"], 12);
}

#[test]
fn disc_with_flags_and_inline_input() {
    let inline = r#"{"presentation": {"polynomial": [[], [0, 0, 2], [0, -3], [1]]}}"#;
    let v = ok(&["disc", "--field", "F7", "--precision", "12", "--input", inline]);
    assert_eq!(v["branch_valuation"], 6);
    let v = ok(&["disc", "--input", &fixture("spatial_triple_point.json")]);
    assert_eq!(v["branch_valuation"], 4);
    assert_eq!(v["precision"], 16);
}

#[test]
fn validate_reports_violations() {
    let v = ok(&["validate", "--input", &fixture("spatial_triple_point.json")]);
    assert_eq!(v["valid"], true);
    let v = ok(&["validate", "--input", &fixture("not_associative.json")]);
    assert_eq!(v["valid"], false);
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn rh_and_hurwitz() {
    let v = ok(&["rh", "--input", &fixture("rh_2_0_6.json")]);
    assert_eq!(v["g"], 2);
    let v = ok(&["rh", "--input", r#"{"d": 3, "h": 1, "g": 4}"#]);
    assert_eq!(v["b"], 6);
    let v = ok(&["hurwitz", "--input", &fixture("hurwitz_3_0_4.json")]);
    assert_eq!(v["raw"], 24);
    assert_eq!(v["weighted"], "4");
    let v = ok(&["hurwitz", "--input", r#"{"d": 2, "b": 6}"#]);
    assert_eq!(v["weighted"], "1/2");
    let v = ok(&["hurwitz", "--input", &fixture("etale_torus.json")]);
    assert_eq!(v["count"], 4);
    let connected = v["classes"].as_array().unwrap().iter().filter(|c| c["connected"] == true).count();
    assert_eq!(connected, 3);
}

#[test]
fn crimps_node_and_cusp() {
    let v = ok(&["crimps", "--input", &fixture("crimps_node_f5.json")]);
    assert_eq!(v["count"], 1);
    assert_eq!(v["delta"], 1);
    assert_eq!(v["crimps"][0]["basis"], serde_json::json!(["1 0 1 0", "0 1 0 0", "0 0 0 1"]));
    assert_eq!(v["crimps"][0]["certificate"]["lifted_branch_valuation"], 2);
    let v = ok(&["crimps", "--input", &fixture("crimps_cusp_f3.json")]);
    assert_eq!(v["count"], 1);
    assert_eq!(v["a"], 1);
    assert_eq!(v["normalization"]["ramified"], 2);
}

#[test]
fn crimp_output_feeds_back_into_iso() {
    let v = ok(&["crimps", "--input", &fixture("crimps_node_f5.json")]);
    let basis = v["crimps"][0]["basis"].clone();
    let input = serde_json::json!({
        "normalization": {"split": 2}, "b": 2, "field": "F5",
        "first": {"basis": basis}, "second": {"branches": [0, [0, 1]]}
    });
    let v = ok(&["iso", "--input", &input.to_string()]);
    assert_eq!(v["isomorphic"], true);
}

#[test]
fn iso_separates_cross_ratios() {
    let v = ok(&["iso", "--input", &fixture("iso_f7.json")]);
    assert_eq!(v["isomorphic"], false);
    assert_eq!(v["cross_ratio"]["first"], serde_json::json!(["2", "4", "6"]));
    assert_eq!(v["cross_ratio"]["second"], serde_json::json!(["3", "5"]));
    let v = ok(&["iso", "--input", &fixture("iso_swapped.json")]);
    assert_eq!(v["isomorphic"], true);
}

#[test]
fn stability_reports() {
    let v = ok(&["stable", "--input", &fixture("stable_2211.json")]);
    assert_eq!(v["stable"], true);
    assert_eq!(v["thresholds"], serde_json::json!(["1/3", "1/2", "1"]));
    let v = ok(&["stable", "--epsilon", "1/3", "--input", &fixture("curve_two_components.json")]);
    assert_eq!(v["stable"], false);
    assert_eq!(v["thresholds"], serde_json::json!(["1/4", "1/2"]));
    let v = ok(&["stable", "--epsilon", "1/2", "--input", &fixture("curve_two_components.json")]);
    assert_eq!(v["stable"], false);
    assert_eq!(v["degrees"], serde_json::json!(["1", "0"]));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["crimps", "--input", "CRIMPS"],
        vec!["disc", "--input", "DISC"],
        vec!["hurwitz", "--input", "HURWITZ"],
    ] {
        let args: Vec<String> = args
            .iter()
            .map(|a| match *a {
                "CRIMPS" => fixture("crimps_node_f5.json"),
                "DISC" => fixture("disc_triple_f7.json"),
                "HURWITZ" => fixture("etale_torus.json"),
                other => other.to_string(),
            })
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&args).stdout;
        let second = Command::new(env!("CARGO_BIN_EXE_covercrimp"))
            .args(&args)
            .env("COVERCRIMP_THREADS", "1")
            .output()
            .unwrap()
            .stdout;
        assert_eq!(first, second);
        assert!(!first.is_empty());
    }
}

#[test]
fn keys_are_sorted() {
    let out = run(&["rh", "--input", &fixture("rh_2_0_6.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "{\n  \"b\": 6,\n  \"d\": 2,\n  \"g\": 2,\n  \"h\": 0\n}\n");
}

#[test]
fn table_format() {
    let out = run(&["hurwitz", "--format", "table", "--input", &fixture("hurwitz_3_0_4.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["raw", "24"]));
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["weighted", "4"]));
}

#[test]
fn schema_errors_exit_2() {
    assert_eq!(code(&["disc", "--input", "{not json"]), 2);
    assert_eq!(code(&["disc", "--input", "/no/such/file.json"]), 2);
    assert_eq!(code(&["rh", "--input", r#"{"d": 2, "h": 0}"#]), 2);
    assert_eq!(code(&["rh", "--input", r#"{"d": 2, "h": 0, "b": 2, "extra": 1}"#]), 2);
    assert_eq!(code(&["stable", "--epsilon", "3/2", "--input", &fixture("curve_two_components.json")]), 2);
    assert_eq!(code(&["stable", "--input", &fixture("curve_two_components.json")]), 2);
    assert_eq!(code(&["disc", "--precision", "1", "--input", &fixture("spatial_triple_point.json")]), 2);
    assert_eq!(code(&["disc", "--field", "F6", "--input", &fixture("spatial_triple_point.json")]), 2);
    assert_eq!(code(&["disc", "--field", "F5", "--input", &fixture("disc_triple_f7.json")]), 2);
    assert_eq!(code(&["crimps", "--budget", "0", "--input", &fixture("crimps_node_f5.json")]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn precision_errors_exit_3() {
    // x^2 - t^4 has discriminant 4 t^4, invisible mod t^3
    assert_eq!(code(&["disc", "--precision", "3", "--input", &fixture("high_contact.json")]), 3);
    let v = ok(&["disc", "--precision", "5", "--input", &fixture("high_contact.json")]);
    assert_eq!(v["branch_valuation"], 4);
    // the working precision must exceed b
    assert_eq!(code(&["crimps", "--precision", "2", "--input", &fixture("crimps_node_f5.json")]), 3);
}

#[test]
fn budget_errors_exit_4() {
    assert_eq!(code(&["hurwitz", "--budget", "10", "--input", &fixture("hurwitz_3_0_4.json")]), 4);
    let input = r#"{"normalization": {"split": 3}, "b": 6, "field": "F5", "budget": 1000}"#;
    assert_eq!(code(&["crimps", "--input", input]), 4);
}

#[test]
fn domain_errors_exit_5() {
    assert_eq!(code(&["disc", "--input", r#"{"presentation": {"branches": [0, 0]}}"#]), 5);
    assert_eq!(code(&["crimps", "--input", r#"{"normalization": {"split": 2}, "b": 3, "field": "F5"}"#]), 5);
    assert_eq!(code(&["crimps", "--input", r#"{"normalization": {"split": 2}, "b": 2}"#]), 5);
    assert_eq!(code(&["rh", "--input", r#"{"d": 2, "h": 0, "b": 3}"#]), 5);
    assert_eq!(
        code(&["disc", "--field", "F3", "--input", r#"{"presentation": {"polynomial": [[0, -1], [], [], [1]]}}"#]),
        5
    );
    let input = r#"{"normalization": {"ramified": 2}, "b": 3, "field": "F5",
        "first": {"basis": []}, "second": {"basis": []}}"#;
    assert_eq!(code(&["iso", "--input", input]), 5);
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_covercrimp"))
        .args(["rh", "--input", &fixture("rh_2_0_6.json")])
        .env("COVERCRIMP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

//! Runs the binary on the bundled fixtures and compares against the reports
//! in `fixtures/golden`. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sextic"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    assert_eq!(report["schema_version"], 1);
    report
}

fn number(v: &Value) -> Option<f64> {
    v.as_number().map(|n| n.to_string().parse().expect("numbers parse"))
}

/// Structural equality; numbers agree to `1e-6` relative plus `1e-9` absolute.
fn assert_close(actual: &Value, expected: &Value, path: &str) {
    match (actual, expected) {
        (Value::Object(a), Value::Object(e)) => {
            let keys = |m: &serde_json::Map<String, Value>| m.keys().cloned().collect::<Vec<_>>();
            assert_eq!(keys(a), keys(e), "keys differ at {path}");
            for (k, v) in e {
                assert_close(&a[k], v, &format!("{path}.{k}"));
            }
        }
        (Value::Array(a), Value::Array(e)) => {
            assert_eq!(a.len(), e.len(), "lengths differ at {path}");
            for (i, (x, y)) in a.iter().zip(e).enumerate() {
                assert_close(x, y, &format!("{path}[{i}]"));
            }
        }
        (Value::Number(_), Value::Number(_)) => {
            let (x, y) = (number(actual).unwrap(), number(expected).unwrap());
            assert!(
                (x - y).abs() <= 1e-6 * x.abs().max(y.abs()) + 1e-9,
                "{path}: {x} vs {y}"
            );
        }
        _ => assert_eq!(actual, expected, "values differ at {path}"),
    }
}

fn golden(name: &str, args: &[&str]) -> Value {
    let actual = run_json(args);
    let file = fixtures().join("golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(file.parent().unwrap()).unwrap();
        std::fs::write(&file, serde_json::to_string_pretty(&actual).unwrap() + "\n").unwrap();
    }
    let text = std::fs::read_to_string(&file).unwrap_or_else(|e| panic!("{}: {e}", file.display()));
    assert_close(&actual, &serde_json::from_str(&text).unwrap(), name);
    actual
}

#[test]
fn classify_x012_squared_is_wprime() {
    let r = golden("classify_x012_squared", &["classify", "x012_squared.json"]);
    assert_eq!(r["label"], "Wprime");
    assert_eq!(r["expected_decompositions"], "infinite");
    assert_eq!(r["rank_c3"], 7);
}

#[test]
fn classify_several_files_in_parallel() {
    let files = [
        "x012_squared.json",
        "x0_sixth.json",
        "random_rank8/form.json",
        "random_rank9/form.json",
        "random_rank10/form.json",
    ];
    let mut args = vec!["classify", "--jobs", "3"];
    args.extend(files);
    let r = golden("classify_batch", &args);
    let labels: Vec<&str> = r["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["report"]["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["Wprime", "LowRank(1)", "S8", "S9", "Generic10"]);
}

#[test]
fn classify_batch_reports_failures_per_file() {
    let out = run(&["classify", "x012_squared.json", "ci33_points.json", "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["reports"][0]["report"]["label"], "Wprime");
    assert_eq!(r["reports"][1]["error"]["name"], "InvalidInput");
}

#[test]
fn verify_810_identity() {
    let r = golden("verify_810", &["verify", "identity_810_form.json", "identity_810_expression.json"]);
    assert!(number(&r["residual"]).unwrap() < 1e-10);
    assert_eq!(r["non_redundant"], true);
}

#[test]
fn hvector_of_complete_intersections() {
    let r = golden("hvector_ci33", &["hvector", "ci33_points.json"]);
    assert_eq!(r["h_vector"], serde_json::json!([1, 2, 3, 2, 1]));
    assert_eq!(r["complete_intersection_33"], true);
    let r = golden("hvector_ci36", &["hvector", "ci36_points.json"]);
    assert_eq!(r["h_vector"], serde_json::json!([1, 2, 3, 3, 3, 3, 2, 1]));
    assert_eq!(r["complete_intersection_33"], false);
    let r = golden("hvector_general", &["hvector", "random_rank9/witness.json"]);
    assert_eq!(r["h_vector"], serde_json::json!([1, 2, 3, 3]));
}

#[test]
fn invariants_of_x012_squared() {
    let r = golden("invariants_x012_squared", &["invariants", "x012_squared.json"]);
    assert_eq!(r["rank_c3"], 7);
    assert_eq!(r["det_c3"], "0");
    assert_eq!(r["h27_vanishes"], false);
}

#[test]
fn intersect_two_cubics() {
    let r = golden("intersect_pencil", &["intersect", "pencil_a.json", "pencil_b.json", "--seed", "0"]);
    assert_eq!(r["count"], 9);
}

#[test]
fn wprime_from_coordinate_cubes() {
    let r = golden("wprime_cubes", &["wprime", "cubic_0.json", "cubic_1.json", "cubic_2.json"]);
    assert_eq!(r["report"]["label"], "Wprime");
}

#[test]
fn decompose_rank_eight() {
    let r = golden("decompose_rank8", &["decompose", "random_rank8/form.json"]);
    assert_eq!(r["verdict"], "Rank8");
    assert!(number(&r["residual"]).unwrap() < 1e-8);
}

#[test]
fn second_decomposition_of_rank_nine() {
    let r = golden("second_rank9", &["second", "random_rank9/form.json", "random_rank9/witness.json"]);
    assert_eq!(r["union_h_vector"], serde_json::json!([1, 2, 3, 3, 3, 3, 2, 1]));
    assert!(number(&r["residual"]).unwrap() < 1e-8);
}

#[test]
fn terracini_general_and_degenerate() {
    let r = golden("terracini_general", &["terracini", "random_rank9/witness.json"]);
    assert_eq!(r["rank_t"], 27);
    assert!(r["lambda_check"].is_object());
    let r = golden("terracini_ci33", &["terracini", "ci33_points.json", "--aux", "1,2,3"]);
    assert_eq!(r["n"], Value::Null);
    assert_eq!(r["c"], "0");
    assert!(r["note"].is_string());
}

#[test]
fn random_reproduces_bundled_forms() {
    let dir = tempfile::tempdir().unwrap();
    for rank in ["8", "9", "10"] {
        let out_dir = dir.path().join(rank);
        run_json(&["random", "--rank", rank, "--seed", "7", "--out", out_dir.to_str().unwrap()]);
        for file in ["form.json", "witness.json"] {
            let fresh = std::fs::read_to_string(out_dir.join(file)).unwrap();
            let bundled = std::fs::read_to_string(fixtures().join(format!("random_rank{rank}/{file}"))).unwrap();
            assert_eq!(fresh, bundled, "rank {rank} {file}");
        }
    }
}

#[test]
fn text_output_lists_top_level_keys() {
    let out = run(&["hvector", "ci33_points.json"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "complete_intersection_33: true\ncount: 9\nh_vector: [1,2,3,2,1]\n"
    );
}

#[test]
fn precondition_failures_exit_with_two() {
    let out = run(&["decompose", "x012_squared.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("KernelWrongSize"));
    let out = run(&["random", "--rank", "11", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("RankTargetOutOfRange"));
    let out = run(&["hvector", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
}

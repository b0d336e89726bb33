use std::process::Command;

use serde_json::Value;

fn opw(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_opw"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn opw_json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out, err) = opw(&all);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).expect("valid JSON")
}

#[test]
fn dims_table() {
    let (code, out, _) = opw(&["dims", "coger", "--n", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("1,10,35,50,24"), "{out}");
    let v = opw_json(&["dims", "coger", "--n", "5"]);
    assert_eq!(v["dims"], serde_json::json!([1, 10, 35, 50, 24]));
    let v = opw_json(&["dims", "adelta", "--n", "5"]);
    assert_eq!(v["dims"], serde_json::json!([1, 0, 5, 4]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(opw(&["frobnicate"]).0, 2);
    assert_eq!(opw(&["dims", "coger"]).0, 2);
    assert_eq!(opw(&["dims", "coger", "--n", "5", "--bogus"]).0, 2);
    let (code, _, err) = opw(&["dims", "coger", "--n", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("max-arity"), "{err}");
    let (code, _, err) = opw(&["weights", "h0", "--weight", "9"]);
    assert_eq!(code, 2);
    assert!(err.contains("max-weight"), "{err}");
    assert_eq!(opw(&["normalform", "--n", "3", "w12*w45"]).0, 2);
    assert_eq!(opw(&["mzv", "form", "2", "1"]).0, 2);
}

#[test]
fn normal_form_of_the_rewriting_example() {
    let (code, out, _) = opw(&["normalform", "--n", "3", "w12*w23"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1*w12*w13 + 1*w13*w23");
    let v = opw_json(&["normalform", "--n", "3", "w12*w23 + w23*w13 + w13*w12"]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 0);
}

#[test]
fn certify_decompose_emits_a_certificate() {
    let v = opw_json(&["certify", "decompose", "--arity", "3", "--alpha", "[1,[2,3]]"]);
    assert_eq!(v["certificate"]["kind"], "boundary");
    assert_eq!(v["verified"], true);
    let v = opw_json(&["certify", "decompose", "--arity", "4", "--alpha", "[[1,[2,3]],4]"]);
    assert_eq!(v["decomposes"], true);
    assert_eq!(v["verified"], true);
    assert!(v["certificate"]["kind"].is_string());
    // a leaf-count mismatch is a usage error
    assert_eq!(
        opw(&["certify", "decompose", "--arity", "4", "--alpha", "[1,[2,3]]"]).0,
        2
    );
}

#[test]
fn prime_bracketing_is_reported_as_prime() {
    let v = opw_json(&["certify", "decompose", "--arity", "4", "--alpha", "[[1,3],[2,4]]"]);
    assert_eq!(v["prime"], true);
    assert_eq!(v["decomposes"], false);
}

#[test]
fn weight_one_export_is_an_empty_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("adelta-1.json");
    let (code, _, err) = opw(&[
        "weights",
        "export",
        "--cooperad",
        "adelta",
        "--weight",
        "1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["relations"].as_array().unwrap().len(), 0);
    assert_eq!(v["dim"], 0);
}

#[test]
fn export_round_trips_and_names_zeta_symbols() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("adelta-3.json");
    let (code, _, err) = opw(&[
        "weights",
        "export",
        "--cooperad",
        "adelta",
        "--weight",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let back = opw_core::weights::load_presentation(&path).unwrap();
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back.dim as u64, v["dim"].as_u64().unwrap());
    let labels: Vec<&str> = v["symbols"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, vec!["I(3)", "I(1,2)"]);
    let q = opw_json(&["weights", "q_h0", "--cooperad", "adelta", "--weight", "3"]);
    assert_eq!(q["dim"], v["dim"]);
}

#[test]
fn human_and_json_modes_agree() {
    let (_, out, _) = opw(&["weights", "h0", "--cooperad", "adelta", "--weight", "2"]);
    let v = opw_json(&["weights", "h0", "--cooperad", "adelta", "--weight", "2"]);
    assert!(out.contains(&format!("dimension {}", v["dim"])), "{out}");
    let (_, out, _) = opw(&["pentagon", "--weight", "3"]);
    let v = opw_json(&["pentagon", "--weight", "3"]);
    assert!(out.contains(&format!("dimension {}", v["dim"])), "{out}");
}

#[test]
fn pentagon_in_lyndon_coordinates() {
    let dims: Vec<u64> = (1..=4)
        .map(|w| {
            opw_json(&["pentagon", "--weight", &w.to_string()])["dim"]
                .as_u64()
                .unwrap()
        })
        .collect();
    assert_eq!(dims, vec![0, 1, 1, 0]);
    let v = opw_json(&["pentagon", "--weight", "2"]);
    assert_eq!(v["lyndon_basis"], serde_json::json!(["xy"]));
    assert_eq!(v["kernel"][0][0]["lyndon"], "xy");
}

#[test]
fn mzv_commands() {
    let v = opw_json(&["mzv", "form", "2"]);
    assert_eq!(v["adelta"]["regular"], true);
    assert_eq!(v["form"]["arity"], 4);
    let v = opw_json(&["mzv", "numeric", "2", "--eps", "1e-10"]);
    let pi2 = std::f64::consts::PI.powi(2) / 6.0;
    assert!((v["value"].as_f64().unwrap() - pi2).abs() < 1e-8);
}

#[test]
fn graph_commands() {
    let v = opw_json(&["graphs", "census", "--white", "2", "--max-edges", "2"]);
    assert_eq!(v["count"], 2);
    let v = opw_json(&["graphs", "differential", "tripod"]);
    assert_eq!(v["differential"].as_array().unwrap().len(), 0);
    assert_eq!(opw(&["graphs", "differential", "{not json"]).0, 2);
}

#[test]
fn selfcheck_runs_single_criteria() {
    let (code, out, _) = opw(&["selfcheck", "--level", "quick", "--only", "1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS [ 1]"), "{out}");
    assert_eq!(opw(&["selfcheck", "--only", "99"]).0, 2);
}

#[test]
fn failed_verification_exits_one() {
    // the pentagon class has no image among the coGer indecomposables
    let (code, out, _) = opw(&["certify", "grt", "--weight", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("injective false"), "{out}");
}

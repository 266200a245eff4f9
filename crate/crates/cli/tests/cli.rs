use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["qtorus"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qtorus_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    assert!(err.is_empty(), "stderr: {err}");
    (code, serde_json::from_str(&out).expect("valid JSON"))
}

#[test]
fn analyze_s_at_n3() {
    let (code, v) = run_json(&["analyze", "--n", "3", "--mat", "0,-1,1,0", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["K_B"], 1);
    assert_eq!(v["legendre_K"], "+1");
    assert_eq!(v["trace_exact"], serde_json::json!(["1", "2"]));
    assert_eq!(v["conjugation_ok"], true);
    assert_eq!(v["nu_ok"], true);
    assert_eq!(v["det_modulus_ok"], true);
}

#[test]
fn conj_t_at_n5_is_minus_square_difference() {
    let (code, v) = run_json(&["conj", "--n", "5", "--mat", "1,1,0,1", "--json"]);
    assert_eq!(code, 0);
    let exps = &v["C"]["matrix"]["exps"];
    for i in 0..5i64 {
        for j in 0..5i64 {
            assert_eq!(
                exps[i as usize][j as usize],
                (-(i - j).pow(2)).rem_euclid(5),
                "i={i} j={j}"
            );
        }
    }
}

#[test]
fn composite_n_is_rejected() {
    let (code, out, err) = run(&["analyze", "--n", "4", "--mat", "0,-1,1,0"]);
    assert_eq!(code, qtorus_cli::EXIT_INVALID);
    assert!(out.is_empty());
    assert!(err.contains("n must be an odd prime"), "{err}");
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["analyze", "--n", "3", "--mat", "1,1,1,1"][..],
        &["analyze", "--n", "3", "--mat", "1,2,3"][..],
        &["trace", "--n", "5", "--q-exp", "10", "--mat", "0,-1,1,0"][..],
        &["det", "--n", "2", "--mat", "0,-1,1,0"][..],
        &["frobnicate"][..],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, qtorus_cli::EXIT_INVALID, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn composed_path_for_divisible_upper_right() {
    let (code, v) = run_json(&["analyze", "--n", "5", "--mat", "1,0,1,1", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["path"]["kind"], "composed");
    assert_eq!(v["K_B"], Value::Null);
    assert_eq!(v["conjugation_ok"], true);
}

#[test]
fn trace_and_det_agree_with_analyze() {
    let args = ["--n", "7", "--mat", "2,3,1,2", "--json"];
    let (_, full) = run_json(&[&["analyze"][..], &args].concat());
    let (code, t) = run_json(&[&["trace"][..], &args].concat());
    assert_eq!(code, 0);
    assert_eq!(t["trace_exact"], full["trace_exact"]);
    assert_eq!(t["trace_identity_ok"], true);
    let (code, d) = run_json(&[&["det"][..], &args].concat());
    assert_eq!(code, 0);
    assert_eq!(d["det_exact"], full["det_exact"]);
    assert_eq!(d["det_phase_is_sign"], full["det_phase_is_sign"]);
}

#[test]
fn rep_generators_and_witness() {
    let (code, v) = run_json(&["rep", "--n", "5", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["relation_ok"], true);
    assert_eq!(v["witnessed_units"], 25);
    assert_eq!(v["fixedness"][0]["fixed"], true);
    assert_eq!(v["fixedness"][0]["order_bound"], 2);
    let (code, v) = run_json(&["rep", "--n", "5", "--alpha", "1", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["witnessed_units"], Value::Null);
    assert_eq!(v["fixedness"][0]["fixed"], false);
}

#[test]
fn cocycle_norm_holds() {
    let (code, v) = run_json(&[
        "cocycle", "--n", "5", "--mat1", "0,-1,1,0", "--mat2", "1,1,0,1", "--json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["norm_ok"], true);
}

#[test]
fn scan_is_deterministic() {
    let args = ["scan", "--n", "5", "--count", "12", "--seed", "7", "--json"];
    let (code, a) = run_json(&args);
    let (_, b) = run_json(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(a["failed"], 0);
    let rows = a["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().enumerate().all(|(i, r)| r["index"] == i));
    let (_, c) = run_json(&["scan", "--n", "5", "--count", "12", "--seed", "8", "--json"]);
    assert_ne!(a["rows"], c["rows"]);
}

#[test]
fn json_round_trips_through_text_renderer() {
    let (_, text, _) = run(&["analyze", "--n", "5", "--mat", "2,1,1,1"]);
    let (_, v) = run_json(&["analyze", "--n", "5", "--mat", "2,1,1,1", "--json"]);
    assert!(text.contains(&format!("K_B:               {}", v["K_B"])));
    let reparsed: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(reparsed, v);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("analyze"));
}

#[test]
fn binary_selftest_passes() {
    let out = Command::new(env!("CARGO_BIN_EXE_qtorus"))
        .args(["selftest"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("all checks passed"));
    assert!(!stdout.contains("[FAIL]"));
}

#[test]
fn binary_exit_codes() {
    let bad = Command::new(env!("CARGO_BIN_EXE_qtorus"))
        .args(["analyze", "--n", "9", "--mat", "0,-1,1,0"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let good = Command::new(env!("CARGO_BIN_EXE_qtorus"))
        .args(["conj", "--n", "3", "--mat", "0,-1,1,0"])
        .output()
        .unwrap();
    assert_eq!(good.status.code(), Some(0));
}

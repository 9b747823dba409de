use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("config")
        .join(name)
        .display()
        .to_string()
}

fn ksw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksw"))
        .args(args)
        .env_remove("KSW_CAP_H")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = ksw(&full);
    let code = out.status.code().expect("exit code");
    let v =
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (code, v)
}

fn statuses(v: &Value) -> Vec<(String, String)> {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            (
                c["name"].as_str().unwrap().to_string(),
                c["status"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}

#[test]
fn betti_bound_seven() {
    let (code, v) = json(&["betti", "bound", "--b2", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["k"], 3);
    assert_eq!(v["result"]["bound"], "8");
    let (_, v) = json(&["betti", "bound", "--b2", "8", "--div4-improve"]);
    assert_eq!(v["result"]["k"], 4);
}

#[test]
fn betti_audit_is_tight() {
    for args in [
        vec!["betti", "audit"],
        vec!["betti", "audit", "--catalog", &data("catalog.json")],
    ] {
        let (code, v) = json(&args);
        assert_eq!(code, 0);
        let detail = v["checks"][0]["detail"].as_str().unwrap();
        assert!(detail.contains("tight"), "{detail}");
    }
}

#[test]
fn corr_verify_28_pairs() {
    let (code, v) = json(&["corr", "verify", "--b3", "8", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["pairs"], 28);
    assert_eq!(v["result"]["uniform"], true);
    assert_ne!(v["result"]["coefficient"], "0");
    let (code, _) = json(&[
        "corr",
        "verify",
        "--b3",
        "8",
        "--n",
        "2",
        "--convention",
        "no-exchange-sign",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn malformed_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"gram\": [[1, 0], [0,").unwrap();
    let out = ksw(&["qform", "inspect", "-f", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("malformed JSON"), "{err}");
    let out = ksw(&[
        "qform",
        "inspect",
        "-f",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_period_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    std::fs::write(&p, r#"{"alpha": [1, 0, 0, 0, 0], "beta": [1, 1, 0, 0, 0]}"#).unwrap();
    let out = ksw(&["ks", "build", "-f", &data("space_h5.json"), "-p", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("orthogonal"));
}

#[test]
fn qform_inspect_hyperbolic() {
    let (code, v) = json(&["qform", "inspect", "-f", &data("space_hyperbolic.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["signature"], serde_json::json!([2, 1]));
    assert_eq!(v["result"]["discriminant"], "-2");
}

#[test]
fn ks_build_reports_and_is_byte_stable() {
    let args = [
        "ks",
        "build",
        "-f",
        &data("space_h5.json"),
        "-p",
        &data("period_h5.json"),
    ];
    let (code, v) = json(&args);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["even_dim"], 16);
    assert_eq!(v["result"]["torus_complex_dim"], 8);
    assert_eq!(v["result"]["e"]["terms"][0]["blade"], serde_json::json!([1, 2]));
    assert!(statuses(&v).iter().all(|(_, s)| s == "pass"));
    assert_eq!(ksw(&args).stdout, ksw(&args).stdout);

    let (code, v2) = json(&[
        "ks",
        "build",
        "-f",
        &data("space_h5.json"),
        "-p",
        &data("period_h5.json"),
        "--v0",
        "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v2["result"]["j_checksum"], v["result"]["j_checksum"]);
    let out = ksw(&[
        "ks",
        "build",
        "-f",
        &data("space_h5.json"),
        "-p",
        &data("period_h5.json"),
        "--v0",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ks_on_a_non_diagonal_form() {
    let (code, v) = json(&[
        "ks",
        "build",
        "-f",
        &data("space_hyperbolic.json"),
        "-p",
        &data("period_hyperbolic.json"),
    ]);
    assert_eq!(code, 0, "{v}");
    let (code, v) = json(&[
        "ks",
        "verify",
        "-f",
        &data("space_hyperbolic.json"),
        "-p",
        &data("period_hyperbolic.json"),
        "--seed",
        "3",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["result"]["instances"], 5);
}

#[test]
fn cap_env_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_ksw"))
        .args([
            "ks",
            "build",
            "-f",
            &data("space_h5.json"),
            "-p",
            &data("period_h5.json"),
        ])
        .env("KSW_CAP_H", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn weil_analyze_balanced_and_unbalanced() {
    let w = data("weight1_blocks.json");
    let (code, v) = json(&["weil", "analyze", "-f", &w, "--phi", &data("phi_balanced.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["is_weil"], true);
    assert_eq!(v["result"]["weil_space_dim"], 2);
    assert_eq!(v["result"]["all_weil_classes_22"], true);
    let (code, v) = json(&["weil", "analyze", "-f", &w, "--phi", &data("phi_unbalanced.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["is_weil"], false);
    assert_eq!(
        (v["result"]["mult_plus"].as_u64(), v["result"]["mult_minus"].as_u64()),
        (Some(3), Some(1))
    );
    assert_eq!(v["result"]["all_weil_classes_22"], false);
}

#[test]
fn sym_decompose_with_levels() {
    let (code, v) = json(&[
        "sym",
        "decompose",
        "--gram",
        &data("space_h5.json"),
        "--k",
        "3",
        "-p",
        &data("period_h5.json"),
    ]);
    assert_eq!(code, 0, "{v}");
    let blocks = v["result"]["blocks"].as_array().unwrap();
    let dims: Vec<u64> = blocks.iter().map(|b| b["dim"].as_u64().unwrap()).collect();
    let levels: Vec<u64> = blocks.iter().map(|b| b["level"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![30, 5]);
    assert_eq!(levels, vec![6, 2]);
}

#[test]
fn text_output_by_default() {
    let out = ksw(&["betti", "bound", "--b2", "7"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("betti bound\n"));
    assert!(text.contains("bound: 8"));
}

#[test]
fn suite_cap_policy_skips() {
    let (code, v) = json(&["suite", "--config", &config("cap_policy.json")]);
    assert_eq!(code, 0, "{v}");
    let skipped: Vec<_> = statuses(&v).into_iter().filter(|(_, s)| s == "skipped").collect();
    assert_eq!(
        skipped,
        vec![("clifford.dimensions[h=12]".to_string(), "skipped".to_string())]
    );
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn suite_negative_control_fails() {
    let (code, v) = json(&["suite", "--config", &config("negative_control.json")]);
    assert_eq!(code, 1);
    let failed: Vec<_> = statuses(&v)
        .into_iter()
        .filter(|(_, s)| s == "fail")
        .map(|(n, _)| n)
        .collect();
    assert_eq!(failed, vec!["corr.identity[b3=8,n=2,no-exchange-sign]".to_string()]);
}

#[test]
fn suite_is_byte_stable_and_seeded() {
    let args = ["--json", "suite", "--config", &config("cap_policy.json")];
    let a = ksw(&args).stdout;
    assert_eq!(a, ksw(&args).stdout);
    let (_, v) = json(&["suite", "--config", &config("cap_policy.json"), "--seed", "11"]);
    assert_eq!(v["seed"], 11);
}

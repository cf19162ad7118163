use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ultragrowth")).args(args).env_remove("ULTRAGROWTH_CONFIG").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("ultragrowth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn classify_square_beurling_is_trivial() {
    let out = run(&["classify", "t^2", "--case", "beurling"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "trivial");
}

#[test]
fn relate_gevrey_pair() {
    let out = run(&["relate", "gevrey:0.5", "gevrey:1", "--rel", "preceq"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["verdict"]["status"], "holds");
    assert_eq!(v["report"]["verdict"]["witness"]["C"], 1.0);
    let back = run(&["relate", "gevrey:1", "gevrey:0.5", "--rel", "preceq"]);
    assert_eq!(back.status.code(), Some(1));
}

#[test]
fn oscillate_anchor_table() {
    let out = run(&["oscillate", "--target", "gevrey:0.5", "--Q", "3", "--stages", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ratios: Vec<f64> = v["anchors"].as_array().unwrap()[2..].iter().map(|a| a["ratio"].as_f64().unwrap()).collect();
    for (got, want) in ratios.iter().zip([8.0, 0.25, 32.0, 1.0 / 6.0]) {
        assert!((got / want - 1.0).abs() < 1e-9, "{got} vs {want}");
    }
    assert_eq!(v["verify"]["checks"]["anchor_identities"]["status"], "holds");
}

#[test]
fn oscillate_writes_the_head_table() {
    let path = scratch("head.tsv", "");
    let out = run(&["oscillate", "--target", "gevrey:0.5", "--Q", "3", "--stages", "6", "--head-tsv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p\tlog_mu\tlog_nu"));
    assert_eq!(lines.next().unwrap().split('\t').nth(1), Some("0"));
    assert_eq!(text.lines().count(), 4096 + 1);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["report", "--suite", "nope"]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    let out = run(&["check-weight", "t^x"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 3"));
    let bad = scratch("bad.json", "{\"name\": \"m\",\n \"explicit\": }");
    let out = run(&["check-seq", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn exit_codes_follow_verdicts() {
    assert_eq!(run(&["check-seq", "gevrey:1", "--cond", "M1"]).status.code(), Some(0));
    assert_eq!(run(&["check-seq", "gevrey:0.5", "--cond", "M0"]).status.code(), Some(1));
    assert_eq!(run(&["dominate", "t^1.5", "t^2"]).status.code(), Some(1));
}

#[test]
fn config_from_environment() {
    let path = scratch("cfg.json", r#"{"truncation": 128}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_ultragrowth"))
        .args(["oscillate", "--target", "gevrey:0.5", "--Q", "3", "--stages", "6", "--head-tsv"])
        .arg(path.with_extension("tsv"))
        .env("ULTRAGROWTH_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(path.with_extension("tsv")).unwrap().lines().count(), 129);
    let bad = scratch("bad_cfg.json", r#"{"truncation": 2}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_ultragrowth"))
        .args(["classify", "t^2", "--case", "roumieu"])
        .env("ULTRAGROWTH_CONFIG", &bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn norms_of_inline_coefficients() {
    let out = run(&["norms", r#"{"kind":"kronecker","i":4}"#, "t^1.5", "--mode", "beurling", "--j", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let expected = 2.0 * (2.0f64 * 2.0).powf(1.5);
    assert!((v["log_value"].as_f64().unwrap() - expected).abs() < 1e-12);
    let out = run(&["norms", r#"{"kind":"weight_witness","weight":"t^2","support":1000}"#, "t^2", "--mode", "roumieu", "--j", "1"]);
    assert_eq!(json(&out)["value"], 1.0);
}

#[test]
fn matrix_checks_and_emission() {
    let out = run(&["matrix", "t^2", "--check", "c37LR"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["matrix", "gevrey:0.5", "--check", "beurling_square"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["conjugate", "t^2", "--emit"]);
    assert_eq!(out.status.code(), Some(0));
    let path = scratch("m.json", std::str::from_utf8(&out.stdout).unwrap());
    let spec = format!("matrix:{}", path.display());
    let out = run(&["relate", &spec, "t^2", "--rel", "roumieu", "--matrix"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn invariants_suite_lists_the_lemma_block() {
    let out = run(&["report", "--suite", "invariants"]);
    assert_eq!(out.status.code(), Some(0));
    let ids: Vec<String> = json(&out)["entries"].as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap().to_string()).collect();
    assert!(ids.contains(&"lemma_block_square".to_string()));
}

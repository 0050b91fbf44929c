//! CLI surface: exit-code contract, flag handling, and report schemas.

mod schema;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(rel)
}

fn solmut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solmut"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

// ---- list-operators ----

#[test]
fn list_operators_prints_57_rows_in_10_groups() {
    let out = solmut(&["list-operators"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows = text.lines().filter(|l| l.starts_with("  ")).count();
    assert_eq!(rows, 57);
    let groups = text.lines().filter(|l| !l.starts_with("  ")).count();
    assert_eq!(groups, 10);
}

#[test]
fn list_operators_class_filter() {
    let out = solmut(&["list-operators", "--class", "guard"]);
    assert_eq!(code(&out), 0);
    let rows = stdout(&out).lines().filter(|l| l.starts_with("  ")).count();
    assert_eq!(rows, 12);
}

#[test]
fn list_operators_rejects_unknown_class_naming_the_valid_ones() {
    let out = solmut(&["list-operators", "--class", "nosuch"]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("nosuch"));
    for class in ["classic", "guard", "tx_origin", "constructor"] {
        assert!(err.contains(class), "missing {class} in: {err}");
    }
}

#[test]
fn list_operators_json_is_a_complete_catalog() {
    let out = solmut(&["list-operators", "--json"]);
    assert_eq!(code(&out), 0);
    let records: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let arr = records.as_array().unwrap();
    assert_eq!(arr.len(), 57);
    for r in arr {
        assert!(r["code"].is_string());
        assert!(r["class"].is_string());
        assert!(r["description"].is_string());
    }
}

// ---- generate ----

#[test]
fn generate_smoke_writes_mutants_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = solmut(&[
        "generate",
        corpus("contracts/reentrancy.sol").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    schema::check_generation_report(&report);
    assert!(report["counts"]["total"].as_u64().unwrap() > 0);
    assert!(report["approximate_validity"].as_bool().unwrap());
    let manifest: serde_json::Value = serde_json::from_slice(
        &std::fs::read(dir.path().join("manifest.json")).unwrap(),
    )
    .unwrap();
    schema::check_manifest(&manifest);
    assert!(!manifest["mutants"].as_array().unwrap().is_empty());
}

#[test]
fn generate_with_no_matching_operator_is_success_with_zero_mutants() {
    let dir = tempfile::tempdir().unwrap();
    let out = solmut(&[
        "generate",
        corpus("operators/plain.sol").to_str().unwrap(),
        "--operators",
        "TMR,MTR",
        "--out",
        dir.path().to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["counts"]["total"].as_u64().unwrap(), 0);
}

#[test]
fn generate_unreadable_source_is_exit_2() {
    let out = solmut(&["generate", "/no/such/file.sol"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("not readable") || stderr(&out).contains("No such file"));
}

#[test]
fn generate_unknown_operator_is_exit_2_listing_offenders() {
    let out = solmut(&[
        "generate",
        corpus("operators/plain.sol").to_str().unwrap(),
        "--operators",
        "TMR,BOGUS,ALSOBAD",
    ]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("BOGUS") && err.contains("ALSOBAD"));
}

#[test]
fn generate_lex_error_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.sol");
    std::fs::write(&bad, b"contract C { /* open\n").unwrap();
    let out = solmut(&["generate", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("unterminated comment"));
}

#[test]
fn generate_parse_error_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.sol");
    std::fs::write(&bad, b"contract C { function f() public {\n").unwrap();
    let out = solmut(&["generate", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("unbalanced brace"));
}

#[test]
fn generate_reads_settings_from_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("solmut.json");
    let out_dir = dir.path().join("out");
    let config = serde_json::json!({
        "sources": [corpus("operators/tx_origin.sol").to_str().unwrap()],
        "enabled_operators": ["tx_origin"],
        "out_dir": out_dir.to_str().unwrap(),
        "parallelism": 2,
        "timeout_s": 10
    });
    std::fs::write(&cfg, serde_json::to_vec(&config).unwrap()).unwrap();
    let out = solmut(&["generate", "--config", cfg.to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // tx_origin.sol has one tx.origin site and one msg.sender site
    assert_eq!(report["counts"]["total"].as_u64().unwrap(), 2);
    assert!(out_dir.join("manifest.json").is_file());
}

#[test]
fn config_with_unknown_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("solmut.json");
    std::fs::write(&cfg, br#"{"seed": 42}"#).unwrap();
    let out = solmut(&[
        "generate",
        corpus("operators/plain.sol").to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("seed"));
}

// ---- score ----

fn score_workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for f in ["bank.sol", "double_withdraw.py", "kill_listed.sh"] {
        std::fs::copy(corpus("harness").join(f), dir.path().join(f)).unwrap();
    }
    dir
}

#[test]
fn score_without_test_cmd_is_exit_2() {
    let ws = score_workspace();
    let out = solmut(&["score", ws.path().join("bank.sol").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("test command"));
}

#[test]
fn score_with_failing_baseline_is_exit_4() {
    let ws = score_workspace();
    let out = solmut(&[
        "score",
        ws.path().join("bank.sol").to_str().unwrap(),
        "--test-cmd",
        "exit 7",
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("tests fail on original program"));
}

#[test]
fn score_completes_with_exit_0_even_when_mutants_survive() {
    let ws = score_workspace();
    let out = solmut(&[
        "score",
        ws.path().join("bank.sol").to_str().unwrap(),
        "--test-cmd",
        "python3 {dir}/double_withdraw.py",
        "--operators",
        "FDL,SCL",
        "--jobs",
        "2",
        "--json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    schema::check_score_report(&report);
    assert!(report["total_valid"].as_u64().unwrap() > 0);
    assert!(report["mutation_score"].is_number());
    assert!(report["surviving"].is_array());
}

// ---- regen ----

#[test]
fn regen_missing_manifest_is_exit_2() {
    let out = solmut(&["regen"]);
    assert_eq!(code(&out), 2);
    let out = solmut(&["regen", "--manifest", "/no/such/manifest.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn regen_bundled_corpus_reports_8_of_9() {
    let out = solmut(&[
        "regen",
        "--manifest",
        corpus("pairs/manifest.json").to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    schema::check_regen_report(&report);
    assert_eq!(report["pair_count"].as_u64().unwrap(), 9);
    assert_eq!(report["reproduced_count"].as_u64().unwrap(), 8);
}

#[test]
fn regen_pair_filter_selects_one() {
    let out = solmut(&[
        "regen",
        "--manifest",
        corpus("pairs/manifest.json").to_str().unwrap(),
        "--pairs",
        "tx-origin",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pair_count"].as_u64().unwrap(), 1);
    assert_eq!(report["pairs"][0]["name"], "origin-auth");
}

#[test]
fn regen_with_a_broken_pair_is_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(
        corpus("pairs/guard/fixed.sol"),
        dir.path().join("fixed.sol"),
    )
    .unwrap();
    std::fs::copy(
        corpus("pairs/guard/buggy.sol"),
        dir.path().join("buggy.sol"),
    )
    .unwrap();
    let manifest = serde_json::json!({
        "pairs": [
            {"name": "ok", "class": "guard", "fixed": "fixed.sol", "buggy": "buggy.sol"},
            {"name": "broken", "class": "guard", "fixed": "gone.sol", "buggy": "buggy.sol"}
        ]
    });
    let path = dir.path().join("manifest.json");
    std::fs::write(&path, serde_json::to_vec(&manifest).unwrap()).unwrap();
    let out = solmut(&["regen", "--manifest", path.to_str().unwrap()]);
    assert_eq!(code(&out), 5);
    assert!(stderr(&out).contains("broken"));
}

#[test]
fn regen_filter_matching_nothing_is_exit_2() {
    let out = solmut(&[
        "regen",
        "--manifest",
        corpus("pairs/manifest.json").to_str().unwrap(),
        "--pairs",
        "no-such-pair",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no pairs"));
}

// ---- environment ----

#[test]
fn solmut_jobs_env_var_is_accepted() {
    let ws = score_workspace();
    std::fs::write(ws.path().join("kill_list.txt"), b"").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_solmut"))
        .args([
            "score",
            ws.path().join("bank.sol").to_str().unwrap(),
            "--test-cmd",
            "sh {dir}/kill_listed.sh",
            "--operators",
            "TMR,MTR",
            "--json",
        ])
        .env("SOLMUT_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

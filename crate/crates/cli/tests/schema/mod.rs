//! Structural checks for every report the tool emits. The JSON forms are
//! the machine contract; anything loading them should be able to rely on
//! these fields and types.

#![allow(dead_code)]

use serde_json::Value;

fn require_u64(v: &Value, key: &str) -> u64 {
    v[key].as_u64()
        .unwrap_or_else(|| panic!("missing or non-integer field `{key}` in {v}"))
}

fn require_str<'a>(v: &'a Value, key: &str) -> &'a str {
    v[key].as_str()
        .unwrap_or_else(|| panic!("missing or non-string field `{key}` in {v}"))
}

fn require_array<'a>(v: &'a Value, key: &str) -> &'a Vec<Value> {
    v[key].as_array()
        .unwrap_or_else(|| panic!("missing or non-array field `{key}` in {v}"))
}

pub fn check_generation_report(v: &Value) {
    require_str(v, "source");
    require_str(v, "catalog_version");
    assert!(v["approximate_validity"].is_boolean());
    let counts = &v["counts"];
    let total = require_u64(counts, "total");
    let sum = require_u64(counts, "valid")
        + require_u64(counts, "invalid")
        + require_u64(counts, "redundant");
    assert_eq!(sum, total, "valid+invalid+redundant must equal total");
    assert!(v["per_operator"].is_object());
}

pub fn check_manifest(v: &Value) {
    require_str(v, "source");
    require_str(v, "catalog_version");
    for m in require_array(v, "mutants") {
        require_str(m, "id");
        require_str(m, "operator");
        require_str(m, "class");
        require_str(m, "status");
        let spans = require_array(m, "spans");
        let original = require_array(m, "original");
        let mutated = require_array(m, "mutated");
        assert_eq!(spans.len(), original.len());
        assert_eq!(spans.len(), mutated.len());
        assert!(!spans.is_empty() && spans.len() <= 2);
        for s in spans {
            let pair = s.as_array().expect("span is a [start, end] pair");
            assert_eq!(pair.len(), 2);
        }
    }
}

pub fn check_score_report(v: &Value) {
    let total = require_u64(v, "total_valid");
    let counted = require_u64(v, "killed") + require_u64(v, "survived") + require_u64(v, "errored");
    assert_eq!(counted, total, "killed+survived+errored must equal total_valid");
    assert!(
        v["mutation_score"].is_number() || v["mutation_score"].is_null(),
        "mutation_score must be a number or null"
    );
    assert!(v["per_operator"].is_object());
    require_array(v, "surviving");
    for o in require_array(v, "outcomes") {
        require_str(o, "mutant_id");
        require_str(o, "operator");
        let verdict = require_str(o, "verdict");
        assert!(matches!(verdict, "killed" | "survived" | "error"));
        if verdict == "killed" {
            let reason = require_str(o, "reason");
            assert!(
                matches!(reason, "exit_status_diff" | "stdout_diff" | "timeout"),
                "killed verdict requires a kill reason, got {reason}"
            );
        }
    }
}

pub fn check_regen_report(v: &Value) {
    let pair_count = require_u64(v, "pair_count");
    let reproduced = require_u64(v, "reproduced_count");
    assert!(reproduced <= pair_count);
    let pairs = require_array(v, "pairs");
    assert_eq!(pairs.len() as u64, pair_count);
    for p in pairs {
        require_str(p, "name");
        require_str(p, "class");
        assert!(p["reproduced"].is_boolean());
        require_array(p, "matching_mutants");
        require_array(p, "matching_operators");
    }
}

// shared across several integration test binaries; not every binary uses
// every helper
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use solmut::model::SourceModel;

pub fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(rel)
}

pub fn load(rel: &str) -> SourceModel {
    SourceModel::load(corpus(rel)).expect(rel)
}

pub fn model_of(src: &str) -> SourceModel {
    SourceModel::parse("inline.sol", src.as_bytes().to_vec()).unwrap()
}

/// Every corpus `.sol` file, for whole-corpus property checks.
pub fn all_corpus_files() -> Vec<PathBuf> {
    let mut out = Vec::new();
    for dir in ["operators", "contracts", "harness", "pairs"] {
        collect(&corpus(dir), &mut out);
    }
    out.sort();
    assert!(out.len() >= 20, "corpus unexpectedly small: {}", out.len());
    out
}

fn collect(dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in std::fs::read_dir(dir).expect("corpus dir") {
        let path = entry.unwrap().path();
        if path.is_dir() {
            collect(&path, out);
        } else if path.extension().is_some_and(|e| e == "sol") {
            out.push(path);
        }
    }
}

//! Bug regeneration: given a fixed contract and a known buggy version,
//! check whether any generated mutant of the fixed source reproduces the
//! bug.
//!
//! Matching defaults to whole-file equality after normalization (comments
//! stripped, whitespace collapsed). A relaxed scope compares only the
//! mutated function against the same-named function of the buggy source,
//! for corpus pairs where the historical fix touched unrelated lines.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{dedup, generate_with, Mutant};
use crate::lexer::normalize;
use crate::model::SourceModel;
use crate::operators::{CatalogOptions, OperatorId};

#[derive(Debug, Error)]
pub enum RegenError {
    #[error("no pairs to evaluate")]
    NoPairs,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },
}

/// How mutant and buggy sources are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchScope {
    #[default]
    File,
    Function,
}

/// A fixed/buggy contract pair with the operators expected to bridge them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BugPair {
    pub name: String,
    /// Bug-class label, e.g. `re-entrancy`, `tx-origin`, `constructor-name`.
    pub class: String,
    pub fixed_path: PathBuf,
    pub buggy_path: PathBuf,
    #[serde(default)]
    pub expected_operators: Vec<OperatorId>,
}

/// On-disk corpus manifest: pair paths are relative to the manifest file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub pairs: Vec<ManifestPair>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestPair {
    pub name: String,
    pub class: String,
    pub fixed: PathBuf,
    pub buggy: PathBuf,
    #[serde(default)]
    pub expected_operators: Vec<OperatorId>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairResult {
    pub name: String,
    pub class: String,
    pub reproduced: bool,
    pub matching_mutants: Vec<String>,
    pub matching_operators: Vec<OperatorId>,
    #[serde(default)]
    pub expected_operators: Vec<OperatorId>,
    /// Whether every expected operator is among the matches; absent when
    /// the pair declares no expectation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_satisfied: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl PairResult {
    fn failed(pair: &BugPair, message: String) -> Self {
        PairResult {
            name: pair.name.clone(),
            class: pair.class.clone(),
            reproduced: false,
            matching_mutants: Vec::new(),
            matching_operators: Vec::new(),
            expected_operators: pair.expected_operators.clone(),
            expected_satisfied: None,
            error: Some(message),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegenReport {
    pub pair_count: usize,
    pub reproduced_count: usize,
    pub pairs: Vec<PairResult>,
}

impl RegenReport {
    pub fn has_errors(&self) -> bool {
        self.pairs.iter().any(|p| p.error.is_some())
    }
}

/// True when the mutant reproduces the buggy source under the given scope.
fn mutant_matches(
    mutant: &Mutant,
    buggy_norm: &str,
    buggy_model: &SourceModel,
    scope: MatchScope,
) -> bool {
    let mutant_norm = match normalize(&mutant.full_source) {
        Ok(n) => n,
        Err(_) => return false,
    };
    if mutant_norm == buggy_norm {
        return true;
    }
    if scope == MatchScope::File {
        return false;
    }
    // function scope: compare only the function containing the first edit,
    // located in the *mutated* source (the first edit keeps its start)
    let mutated_model = match SourceModel::parse("mutant.sol", mutant.full_source.clone()) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let pos = match mutant.edits.first() {
        Some(e) => e.span.start,
        None => return false,
    };
    let Some((contract, function)) = mutated_model.function_at(pos) else {
        return false;
    };
    let Some(buggy_contract) = buggy_model.contracts.iter().find(|c| c.name == contract.name)
    else {
        return false;
    };
    let Some(buggy_fn) = buggy_contract
        .functions
        .iter()
        .find(|f| f.name == function.name)
    else {
        return false;
    };
    let a = normalize(mutated_model.slice(function.span));
    let b = normalize(buggy_model.slice(buggy_fn.span));
    matches!((a, b), (Ok(x), Ok(y)) if x == y)
}

/// Evaluate one pair: generate and dedup all mutants of the fixed source
/// and look for one whose normalized text equals the buggy source.
/// Pair-level problems land in `PairResult::error` so sibling pairs keep
/// running.
pub fn check_pair(
    pair: &BugPair,
    enabled: &BTreeSet<OperatorId>,
    scope: MatchScope,
    opts: &CatalogOptions,
) -> PairResult {
    let fixed = match SourceModel::load(&pair.fixed_path) {
        Ok(m) => m,
        Err(e) => return PairResult::failed(pair, format!("fixed source: {e}")),
    };
    let buggy_model = match SourceModel::load(&pair.buggy_path) {
        Ok(m) => m,
        Err(e) => return PairResult::failed(pair, format!("buggy source: {e}")),
    };
    let fixed_norm = match normalize(&fixed.text) {
        Ok(n) => n,
        Err(e) => return PairResult::failed(pair, format!("fixed source: {e}")),
    };
    let buggy_norm = match normalize(&buggy_model.text) {
        Ok(n) => n,
        Err(e) => return PairResult::failed(pair, format!("buggy source: {e}")),
    };
    // identical sources cannot be bridged by a non-identity rewrite; treat
    // that as a corpus mistake rather than a vacuous false
    if fixed_norm == buggy_norm {
        return PairResult::failed(
            pair,
            "fixed and buggy sources are identical after normalization".to_string(),
        );
    }

    let mutants = dedup(generate_with(&fixed, enabled, opts));
    let mut matching_mutants = Vec::new();
    let mut matching_operators = Vec::new();
    for m in &mutants {
        if mutant_matches(m, &buggy_norm, &buggy_model, scope) {
            matching_mutants.push(m.id.clone());
            if !matching_operators.contains(&m.operator) {
                matching_operators.push(m.operator);
            }
        }
    }

    let reproduced = !matching_mutants.is_empty();
    let expected_satisfied = if pair.expected_operators.is_empty() {
        None
    } else {
        Some(
            pair.expected_operators
                .iter()
                .all(|op| matching_operators.contains(op)),
        )
    };
    PairResult {
        name: pair.name.clone(),
        class: pair.class.clone(),
        reproduced,
        matching_mutants,
        matching_operators,
        expected_operators: pair.expected_operators.clone(),
        expected_satisfied,
        error: None,
    }
}

/// Load a corpus manifest and resolve pair paths against its directory.
pub fn load_manifest(path: &Path) -> Result<Vec<BugPair>, RegenError> {
    let bytes = std::fs::read(path).map_err(|e| RegenError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let manifest: CorpusManifest =
        serde_json::from_slice(&bytes).map_err(|e| RegenError::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(manifest
        .pairs
        .into_iter()
        .map(|p| BugPair {
            name: p.name,
            class: p.class,
            fixed_path: base.join(p.fixed),
            buggy_path: base.join(p.buggy),
            expected_operators: p.expected_operators,
        })
        .collect())
}

/// Evaluate a whole corpus, optionally filtered by pair name or class.
pub fn run_suite(
    manifest_path: &Path,
    enabled: &BTreeSet<OperatorId>,
    scope: MatchScope,
    filter: Option<&str>,
    opts: &CatalogOptions,
) -> Result<RegenReport, RegenError> {
    let mut pairs = load_manifest(manifest_path)?;
    if let Some(f) = filter {
        pairs.retain(|p| p.name == f || p.class == f);
    }
    if pairs.is_empty() {
        return Err(RegenError::NoPairs);
    }
    let results: Vec<PairResult> = pairs
        .iter()
        .map(|p| check_pair(p, enabled, scope, opts))
        .collect();
    Ok(RegenReport {
        pair_count: results.len(),
        reproduced_count: results.iter().filter(|r| r.reproduced).count(),
        pairs: results,
    })
}

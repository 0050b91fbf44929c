//! Mutant generation pipeline: expand the enabled operators over a source
//! model, assign stable identities, mark redundant mutants, classify
//! validity, and write mutant files plus a manifest.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec;
use crate::lexer::{normalize, Span};
use crate::model::SourceModel;
use crate::operators::{expand, CatalogOptions, MutationSite, OperatorId};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("compile command not executable: `{command}`")]
    CompilerNotFound { command: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MutantStatus {
    Valid,
    Invalid,
    Redundant,
    Unchecked,
}

/// One byte-span replacement inside the original file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpanEdit {
    pub span: Span,
    pub original: String,
    pub replacement: String,
}

/// A first-order mutant: one rewrite applied to the original source.
#[derive(Debug, Clone)]
pub struct Mutant {
    /// `<seq>_<operator code>`, with seq a zero-padded generation ordinal.
    pub id: String,
    pub operator: OperatorId,
    pub contract: Option<String>,
    pub function: Option<String>,
    /// One edit, or two for the swap operators; ascending span order.
    pub edits: Vec<SpanEdit>,
    pub full_source: Vec<u8>,
    pub status: MutantStatus,
    pub status_reason: Option<String>,
    pub description: String,
}

impl Mutant {
    /// Splice the original slices back over the edited spans; by the
    /// first-order property this must reproduce the original file.
    pub fn unspliced(&self) -> Vec<u8> {
        let mut out = self.full_source.clone();
        // edits are in ascending original-span order; walk them backwards,
        // mapping spans through the length deltas of earlier edits
        let mut shift: i64 = 0;
        let mut positions = Vec::new();
        for e in &self.edits {
            let start = (e.span.start as i64 + shift) as usize;
            positions.push((start, e.replacement.len(), e.original.clone()));
            shift += e.replacement.len() as i64 - e.span.len() as i64;
        }
        for (start, repl_len, original) in positions.into_iter().rev() {
            out.splice(start..start + repl_len, original.into_bytes());
        }
        out
    }
}

/// Splice `edits` (ascending, non-overlapping) into `source`.
pub fn splice(source: &[u8], edits: &[SpanEdit]) -> Vec<u8> {
    let mut out = source.to_vec();
    for e in edits.iter().rev() {
        out.splice(e.span.start..e.span.end, e.replacement.bytes());
    }
    out
}

/// Generate every first-order mutant of `model` for the enabled operators.
///
/// Ordering is (span start, operator code, rewrite index); ids are assigned
/// after ordering so they are stable for a given source and catalog version.
pub fn generate(model: &SourceModel, enabled: &BTreeSet<OperatorId>) -> Vec<Mutant> {
    generate_with(model, enabled, &CatalogOptions::default())
}

pub fn generate_with(
    model: &SourceModel,
    enabled: &BTreeSet<OperatorId>,
    opts: &CatalogOptions,
) -> Vec<Mutant> {
    struct Raw {
        site: MutationSite,
        rewrite_idx: usize,
        replacements: Vec<String>,
        description: String,
    }

    let mut raw = Vec::new();
    for op in OperatorId::ALL {
        if !enabled.contains(op) {
            continue;
        }
        for sr in expand(*op, model, opts) {
            for (idx, rw) in sr.rewrites.iter().enumerate() {
                raw.push(Raw {
                    site: sr.site.clone(),
                    rewrite_idx: idx,
                    replacements: rw.replacements.clone(),
                    description: rw.description.clone(),
                });
            }
        }
    }
    raw.sort_by(|a, b| {
        (a.site.start(), a.site.operator.code(), a.rewrite_idx).cmp(&(
            b.site.start(),
            b.site.operator.code(),
            b.rewrite_idx,
        ))
    });

    let width = 4;
    raw.into_iter()
        .enumerate()
        .map(|(i, r)| {
            let edits: Vec<SpanEdit> = r
                .site
                .spans
                .iter()
                .zip(&r.replacements)
                .map(|(span, repl)| SpanEdit {
                    span: *span,
                    original: String::from_utf8_lossy(model.slice(*span)).into_owned(),
                    replacement: repl.clone(),
                })
                .collect();
            let full_source = splice(&model.text, &edits);
            Mutant {
                id: format!("{:0width$}_{}", i + 1, r.site.operator.code()),
                operator: r.site.operator,
                contract: r.site.contract.clone(),
                function: r.site.function.clone(),
                edits,
                full_source,
                status: MutantStatus::Unchecked,
                status_reason: None,
                description: r.description,
            }
        })
        .collect()
}

/// Normalized form used for redundancy detection; mutants that fail to lex
/// fall back to a byte-level whitespace collapse.
fn dedup_key(source: &[u8]) -> String {
    normalize(source).unwrap_or_else(|_| {
        String::from_utf8_lossy(source)
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ")
    })
}

/// Mark mutants whose normalized source equals an earlier mutant's as
/// redundant. First occurrence wins. Idempotent.
pub fn dedup(mut mutants: Vec<Mutant>) -> Vec<Mutant> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for i in 0..mutants.len() {
        let key = dedup_key(&mutants[i].full_source);
        match seen.get(&key) {
            Some(&first) => {
                mutants[i].status = MutantStatus::Redundant;
                mutants[i].status_reason = Some(format!("duplicate of {}", mutants[first].id));
            }
            None => {
                seen.insert(key, i);
            }
        }
    }
    mutants
}

/// Validity classification settings.
#[derive(Debug, Clone)]
pub struct ValidityConfig {
    /// Compile command template with a `{file}` placeholder; exit 0 means
    /// the mutant compiles. When absent a re-lex/re-parse approximates the
    /// check and the report is flagged accordingly.
    pub compile_cmd: Option<String>,
    pub timeout: Duration,
    pub jobs: usize,
}

impl Default for ValidityConfig {
    fn default() -> Self {
        ValidityConfig {
            compile_cmd: None,
            timeout: Duration::from_secs(30),
            jobs: default_jobs(),
        }
    }
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Classify every non-redundant mutant as valid or invalid. Returns true
/// when the approximate (no compiler) fallback was used.
pub fn check_validity(mutants: &mut [Mutant], cfg: &ValidityConfig) -> Result<bool, EngineError> {
    let Some(cmd) = &cfg.compile_cmd else {
        for m in mutants.iter_mut() {
            if m.status != MutantStatus::Unchecked {
                continue;
            }
            let ok = SourceModel::parse("mutant.sol", m.full_source.clone()).is_ok();
            m.status = if ok {
                MutantStatus::Valid
            } else {
                MutantStatus::Invalid
            };
            if !ok {
                m.status_reason = Some("does not re-lex/re-parse".to_string());
            }
        }
        return Ok(true);
    };

    // probe the command once so a broken configuration fails loudly instead
    // of marking every mutant invalid
    let probe_dir = tempfile::tempdir().map_err(|e| EngineError::Io {
        path: std::env::temp_dir(),
        source: e,
    })?;
    let probe_file = probe_dir.path().join("probe.sol");
    std::fs::write(&probe_file, b"contract Probe {}\n").map_err(|e| EngineError::Io {
        path: probe_file.clone(),
        source: e,
    })?;
    let probe = exec::run_shell(
        &exec::fill_template(cmd, "file", &probe_file.display().to_string()),
        probe_dir.path(),
        &[],
        cfg.timeout,
    )
    .map_err(|e| EngineError::Io {
        path: probe_file.clone(),
        source: e,
    })?;
    if probe.command_not_found() {
        return Err(EngineError::CompilerNotFound {
            command: cmd.clone(),
        });
    }

    let todo: Vec<usize> = (0..mutants.len())
        .filter(|&i| mutants[i].status == MutantStatus::Unchecked)
        .collect();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, MutantStatus, Option<String>)>> =
        Mutex::new(Vec::with_capacity(todo.len()));

    std::thread::scope(|scope| {
        for _ in 0..cfg.jobs.max(1) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                if k >= todo.len() {
                    break;
                }
                let idx = todo[k];
                let outcome = compile_one(&mutants[idx], cmd, cfg.timeout);
                results.lock().unwrap().push((idx, outcome.0, outcome.1));
            });
        }
    });

    for (idx, status, reason) in results.into_inner().unwrap() {
        mutants[idx].status = status;
        mutants[idx].status_reason = reason;
    }
    Ok(false)
}

fn compile_one(
    mutant: &Mutant,
    cmd: &str,
    timeout: Duration,
) -> (MutantStatus, Option<String>) {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return (MutantStatus::Invalid, Some(format!("io error: {e}"))),
    };
    let file = dir.path().join(format!("{}.sol", mutant.id));
    if let Err(e) = std::fs::write(&file, &mutant.full_source) {
        return (MutantStatus::Invalid, Some(format!("io error: {e}")));
    }
    let filled = exec::fill_template(cmd, "file", &file.display().to_string());
    match exec::run_shell(&filled, dir.path(), &[], timeout) {
        Ok(r) if r.timed_out => (MutantStatus::Invalid, Some("timeout".to_string())),
        Ok(r) if r.exit_code == Some(0) => (MutantStatus::Valid, None),
        Ok(r) => (
            MutantStatus::Invalid,
            Some(format!("compiler exit {}", r.exit_code.unwrap_or(-1))),
        ),
        Err(e) => (MutantStatus::Invalid, Some(format!("exec error: {e}"))),
    }
}

/// Aggregate counts for a generation run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerationReport {
    pub source: String,
    pub catalog_version: String,
    /// True when validity came from the re-lex/re-parse fallback rather
    /// than a real compiler.
    pub approximate_validity: bool,
    pub counts: Counts,
    pub per_operator: BTreeMap<String, Counts>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub valid: usize,
    pub invalid: usize,
    pub redundant: usize,
    pub total: usize,
}

impl Counts {
    fn add(&mut self, status: MutantStatus) {
        self.total += 1;
        match status {
            MutantStatus::Valid => self.valid += 1,
            MutantStatus::Invalid => self.invalid += 1,
            MutantStatus::Redundant => self.redundant += 1,
            MutantStatus::Unchecked => {
                unreachable!("report built over unclassified mutants")
            }
        }
    }
}

impl GenerationReport {
    pub fn from_mutants(
        source: &Path,
        approximate_validity: bool,
        mutants: &[Mutant],
    ) -> GenerationReport {
        let mut counts = Counts::default();
        let mut per_operator: BTreeMap<String, Counts> = BTreeMap::new();
        for m in mutants {
            counts.add(m.status);
            per_operator
                .entry(m.operator.code().to_string())
                .or_default()
                .add(m.status);
        }
        GenerationReport {
            source: source.display().to_string(),
            catalog_version: crate::CATALOG_VERSION.to_string(),
            approximate_validity,
            counts,
            per_operator,
        }
    }
}

/// Manifest schema: everything needed to reproduce each mutant by splicing
/// the listed edits into the original source.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub source: String,
    pub catalog_version: String,
    pub mutants: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub operator: OperatorId,
    pub class: String,
    pub spans: Vec<[usize; 2]>,
    pub original: Vec<String>,
    pub mutated: Vec<String>,
    pub status: MutantStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status_reason: Option<String>,
}

/// Write one `<id>.sol` per non-redundant mutant plus `manifest.json`.
pub fn write_mutants(
    mutants: &[Mutant],
    source: &Path,
    out_dir: &Path,
) -> Result<Manifest, EngineError> {
    let io_err = |path: &Path, e: std::io::Error| EngineError::Io {
        path: path.to_path_buf(),
        source: e,
    };
    std::fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let mut entries = Vec::with_capacity(mutants.len());
    for m in mutants {
        if m.status != MutantStatus::Redundant {
            let path = out_dir.join(format!("{}.sol", m.id));
            std::fs::write(&path, &m.full_source).map_err(|e| io_err(&path, e))?;
        }
        entries.push(ManifestEntry {
            id: m.id.clone(),
            operator: m.operator,
            class: m.operator.class().name().to_string(),
            spans: m.edits.iter().map(|e| [e.span.start, e.span.end]).collect(),
            original: m.edits.iter().map(|e| e.original.clone()).collect(),
            mutated: m.edits.iter().map(|e| e.replacement.clone()).collect(),
            status: m.status,
            status_reason: m.status_reason.clone(),
        });
    }
    let manifest = Manifest {
        source: source.display().to_string(),
        catalog_version: crate::CATALOG_VERSION.to_string(),
        mutants: entries,
    };
    let path = out_dir.join("manifest.json");
    let mut f = std::fs::File::create(&path).map_err(|e| io_err(&path, e))?;
    serde_json::to_writer_pretty(&mut f, &manifest)
        .map_err(|e| io_err(&path, std::io::Error::other(e)))?;
    f.write_all(b"\n").map_err(|e| io_err(&path, e))?;
    Ok(manifest)
}

//! Mutation-score runner: execute a user-supplied test command against the
//! original program and each valid mutant, build the kill matrix, and
//! compute the score.
//!
//! The kill oracle is exit status first, stdout bytes second. stderr is
//! ignored. A timed-out mutant counts as killed by default (an infinite
//! loop is observably different); a flag flips that to an error verdict
//! for conservative scoring.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Mutant, MutantStatus};
use crate::exec;

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("tests fail on original program (exit {exit_code}); scoring a broken baseline is meaningless")]
    BaselineFailed { exit_code: i32 },
    #[error("test command not found: `{command}`")]
    HarnessNotFound { command: String },
    #[error("baseline test run timed out after {seconds}s")]
    BaselineTimeout { seconds: u64 },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Killed,
    Survived,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeReason {
    ExitStatusDiff,
    StdoutDiff,
    Timeout,
    TestHarnessError,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestOutcome {
    pub mutant_id: String,
    pub operator: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<OutcomeReason>,
    pub duration_s: f64,
}

impl TestOutcome {
    fn new(id: &str, operator: &str, verdict: Verdict, reason: Option<OutcomeReason>, d: Duration) -> Self {
        debug_assert!(
            verdict != Verdict::Killed
                || matches!(
                    reason,
                    Some(OutcomeReason::ExitStatusDiff)
                        | Some(OutcomeReason::StdoutDiff)
                        | Some(OutcomeReason::Timeout)
                )
        );
        TestOutcome {
            mutant_id: id.to_string(),
            operator: operator.to_string(),
            verdict,
            reason,
            duration_s: d.as_secs_f64(),
        }
    }
}

/// What a passing run of the original program looks like.
#[derive(Debug, Clone)]
pub struct BaselineRecord {
    pub exit_code: i32,
    pub stdout: Vec<u8>,
}

/// Run the test command on the pristine workspace. The baseline must pass.
pub fn baseline(
    test_cmd: &str,
    workspace: &Path,
    timeout: Duration,
) -> Result<BaselineRecord, ScoreError> {
    let cmd = exec::fill_template(test_cmd, "dir", &workspace.display().to_string());
    let r = exec::run_shell(&cmd, workspace, &[], timeout).map_err(|e| ScoreError::Io {
        path: workspace.to_path_buf(),
        source: e,
    })?;
    if r.timed_out {
        return Err(ScoreError::BaselineTimeout {
            seconds: timeout.as_secs(),
        });
    }
    if r.command_not_found() {
        return Err(ScoreError::HarnessNotFound {
            command: test_cmd.to_string(),
        });
    }
    match r.exit_code {
        Some(0) => Ok(BaselineRecord {
            exit_code: 0,
            stdout: r.stdout,
        }),
        code => Err(ScoreError::BaselineFailed {
            exit_code: code.unwrap_or(-1),
        }),
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Test command template with a `{dir}` placeholder.
    pub test_cmd: String,
    pub timeout: Duration,
    /// Treat a timed-out mutant as killed (default) or as an error.
    pub kill_on_timeout: bool,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            test_cmd: String::new(),
            timeout: Duration::from_secs(30),
            kill_on_timeout: true,
            jobs: crate::engine::default_jobs(),
        }
    }
}

fn copy_dir(from: &Path, to: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(to)?;
    for entry in std::fs::read_dir(from)? {
        let entry = entry?;
        let ty = entry.file_type()?;
        let dst = to.join(entry.file_name());
        if ty.is_dir() {
            copy_dir(&entry.path(), &dst)?;
        } else if ty.is_file() {
            std::fs::copy(entry.path(), &dst)?;
            #[cfg(unix)]
            {
                let perm = entry.metadata()?.permissions();
                std::fs::set_permissions(&dst, perm)?;
            }
        }
    }
    Ok(())
}

/// Run one mutant in an isolated copy of the workspace. The original tree
/// is never modified.
pub fn run_mutant(
    mutant: &Mutant,
    source_rel: &Path,
    workspace: &Path,
    base: &BaselineRecord,
    cfg: &RunConfig,
) -> TestOutcome {
    let op = mutant.operator.code();
    let sandbox = match tempfile::tempdir() {
        Ok(d) => d,
        Err(_) => {
            return TestOutcome::new(
                &mutant.id,
                op,
                Verdict::Error,
                Some(OutcomeReason::TestHarnessError),
                Duration::ZERO,
            )
        }
    };
    if copy_dir(workspace, sandbox.path()).is_err()
        || std::fs::write(sandbox.path().join(source_rel), &mutant.full_source).is_err()
    {
        return TestOutcome::new(
            &mutant.id,
            op,
            Verdict::Error,
            Some(OutcomeReason::TestHarnessError),
            Duration::ZERO,
        );
    }

    let cmd = exec::fill_template(&cfg.test_cmd, "dir", &sandbox.path().display().to_string());
    let run = exec::run_shell(
        &cmd,
        sandbox.path(),
        &[("SOLMUT_MUTANT_ID", &mutant.id)],
        cfg.timeout,
    );
    let r = match run {
        Ok(r) => r,
        Err(_) => {
            return TestOutcome::new(
                &mutant.id,
                op,
                Verdict::Error,
                Some(OutcomeReason::TestHarnessError),
                Duration::ZERO,
            )
        }
    };

    if r.timed_out {
        return if cfg.kill_on_timeout {
            TestOutcome::new(&mutant.id, op, Verdict::Killed, Some(OutcomeReason::Timeout), r.duration)
        } else {
            TestOutcome::new(&mutant.id, op, Verdict::Error, Some(OutcomeReason::Timeout), r.duration)
        };
    }
    if r.exit_code != Some(base.exit_code) {
        return TestOutcome::new(
            &mutant.id,
            op,
            Verdict::Killed,
            Some(OutcomeReason::ExitStatusDiff),
            r.duration,
        );
    }
    if r.stdout != base.stdout {
        return TestOutcome::new(
            &mutant.id,
            op,
            Verdict::Killed,
            Some(OutcomeReason::StdoutDiff),
            r.duration,
        );
    }
    TestOutcome::new(&mutant.id, op, Verdict::Survived, None, r.duration)
}

/// Run every valid mutant in a bounded worker pool; outcomes come back in
/// the mutants' canonical order regardless of scheduling.
pub fn run_all(
    mutants: &[Mutant],
    source_rel: &Path,
    workspace: &Path,
    base: &BaselineRecord,
    cfg: &RunConfig,
) -> Vec<TestOutcome> {
    let todo: Vec<usize> = (0..mutants.len())
        .filter(|&i| mutants[i].status == MutantStatus::Valid)
        .collect();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, TestOutcome)>> = Mutex::new(Vec::with_capacity(todo.len()));
    std::thread::scope(|scope| {
        for _ in 0..cfg.jobs.max(1) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                if k >= todo.len() {
                    break;
                }
                let idx = todo[k];
                let outcome = run_mutant(&mutants[idx], source_rel, workspace, base, cfg);
                results.lock().unwrap().push((idx, outcome));
            });
        }
    });
    let mut merged = results.into_inner().unwrap();
    merged.sort_by_key(|(idx, _)| *idx);
    merged.into_iter().map(|(_, o)| o).collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorOutcomes {
    pub killed: usize,
    pub survived: usize,
    pub errored: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScoreReport {
    pub total_valid: usize,
    pub killed: usize,
    pub survived: usize,
    pub errored: usize,
    /// killed / (killed + survived); errored mutants are excluded from the
    /// denominator. Null when no mutant produced a countable outcome.
    pub mutation_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub per_operator: BTreeMap<String, OperatorOutcomes>,
    pub surviving: Vec<String>,
    pub outcomes: Vec<TestOutcome>,
}

/// Fold per-mutant outcomes into the aggregate report.
pub fn compute_score(outcomes: Vec<TestOutcome>) -> ScoreReport {
    let mut killed = 0;
    let mut survived = 0;
    let mut errored = 0;
    let mut per_operator: BTreeMap<String, OperatorOutcomes> = BTreeMap::new();
    let mut surviving = Vec::new();
    for o in &outcomes {
        let entry = per_operator.entry(o.operator.clone()).or_default();
        match o.verdict {
            Verdict::Killed => {
                killed += 1;
                entry.killed += 1;
            }
            Verdict::Survived => {
                survived += 1;
                entry.survived += 1;
                surviving.push(o.mutant_id.clone());
            }
            Verdict::Error => {
                errored += 1;
                entry.errored += 1;
            }
        }
    }
    let denominator = killed + survived;
    let (mutation_score, note) = if denominator == 0 {
        (
            None,
            Some("no valid mutants produced a countable outcome; score is undefined".to_string()),
        )
    } else {
        (Some(killed as f64 / denominator as f64), None)
    };
    ScoreReport {
        total_valid: outcomes.len(),
        killed,
        survived,
        errored,
        mutation_score,
        note,
        per_operator,
        surviving,
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(id: &str, verdict: Verdict, reason: Option<OutcomeReason>) -> TestOutcome {
        TestOutcome::new(id, "AOR", verdict, reason, Duration::from_millis(1))
    }

    #[test]
    fn score_is_killed_over_killed_plus_survived() {
        let mut outcomes = Vec::new();
        for i in 0..7 {
            outcomes.push(outcome(
                &format!("{i}_k"),
                Verdict::Killed,
                Some(OutcomeReason::ExitStatusDiff),
            ));
        }
        for i in 0..3 {
            outcomes.push(outcome(&format!("{i}_s"), Verdict::Survived, None));
        }
        let report = compute_score(outcomes);
        assert_eq!(report.total_valid, 10);
        assert_eq!(report.mutation_score, Some(0.7));
        assert_eq!(report.surviving.len(), 3);
    }

    #[test]
    fn errored_mutants_leave_the_denominator() {
        let mut outcomes = Vec::new();
        for i in 0..7 {
            outcomes.push(outcome(
                &format!("{i}_k"),
                Verdict::Killed,
                Some(OutcomeReason::StdoutDiff),
            ));
        }
        for i in 0..2 {
            outcomes.push(outcome(&format!("{i}_s"), Verdict::Survived, None));
        }
        outcomes.push(outcome(
            "0_e",
            Verdict::Error,
            Some(OutcomeReason::TestHarnessError),
        ));
        let report = compute_score(outcomes);
        assert_eq!(report.total_valid, 10);
        assert_eq!(report.killed + report.survived + report.errored, 10);
        assert_eq!(report.mutation_score, Some(7.0 / 9.0));
    }

    #[test]
    fn empty_denominator_reports_null_with_note() {
        let report = compute_score(vec![]);
        assert_eq!(report.mutation_score, None);
        assert!(report.note.is_some());
        let json = serde_json::to_value(&report).unwrap();
        assert!(json["mutation_score"].is_null());
    }

    #[test]
    fn adding_a_kill_never_decreases_the_score() {
        // monotonicity over every (k, s) split up to 12 mutants: turning one
        // survivor into a kill cannot lower the ratio
        for total in 1..12usize {
            for k in 0..total {
                let s = total - k;
                let before = if k + s > 0 {
                    k as f64 / (k + s) as f64
                } else {
                    0.0
                };
                if s == 0 {
                    continue;
                }
                let after = (k + 1) as f64 / (k + s) as f64;
                assert!(after >= before, "k={k} s={s}");
            }
        }
    }
}

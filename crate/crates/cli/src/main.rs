//! solmut: mutation testing for Solidity smart contracts.
//!
//! Exit codes: 0 success, 2 configuration error, 3 lex/parse error,
//! 4 baseline test failure, 5 regeneration pair error.

mod config;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use solmut::engine::{self, GenerationReport, ValidityConfig};
use solmut::regen::{self, MatchScope};
use solmut::score::{self, RunConfig, ScoreError};
use solmut::{OperatorClass, SourceModel};

use config::{resolve, CommonFlags, Settings};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file, operator names, or unreadable inputs.
    Config(String),
    /// Source failed to lex or structure-parse.
    Frontend(String),
    /// The test suite fails (or cannot run) on the original program.
    Baseline(String),
    /// One or more regeneration pairs errored.
    PairErrors(String),
    /// Everything else (I/O while writing outputs, ...).
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Frontend(_) => 3,
            CliError::Baseline(_) => 4,
            CliError::PairErrors(_) => 5,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m)
            | CliError::Frontend(m)
            | CliError::Baseline(m)
            | CliError::PairErrors(m)
            | CliError::Runtime(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "solmut",
    version,
    about = "Mutation testing for Solidity smart contracts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the operator catalog grouped by class
    ListOperators {
        /// Only one class (e.g. `guard`, `classic`, `tx_origin`)
        #[arg(long)]
        class: Option<String>,
        /// Emit the catalog as JSON records
        #[arg(long)]
        json: bool,
    },
    /// Generate mutants for the given sources and write them to disk
    Generate {
        /// Solidity sources (paths or globs); falls back to the config file
        sources: Vec<String>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run a test command against every valid mutant and report the score
    Score {
        /// A single Solidity source (its directory is the test workspace)
        sources: Vec<String>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Check which bundled bug pairs the catalog can regenerate
    Regen {
        /// Corpus manifest listing fixed/buggy pairs
        #[arg(long, value_name = "FILE")]
        manifest: Option<PathBuf>,
        /// Evaluate only pairs whose name or class equals this filter
        #[arg(long, value_name = "NAME")]
        pairs: Option<String>,
        /// Compare whole files (default) or just the mutated function
        #[arg(long, value_name = "SCOPE", default_value = "file")]
        match_scope: String,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::ListOperators { class, json } => cmd_list_operators(class.as_deref(), json),
        Command::Generate { sources, flags } => {
            let settings = resolve(&flags, &sources)?;
            cmd_generate(&settings, flags.json)
        }
        Command::Score { sources, flags } => {
            let settings = resolve(&flags, &sources)?;
            cmd_score(&settings, flags.json)
        }
        Command::Regen {
            manifest,
            pairs,
            match_scope,
            flags,
        } => {
            let settings = resolve(&flags, &[])?;
            cmd_regen(
                &settings,
                manifest.as_deref(),
                pairs.as_deref(),
                &match_scope,
                flags.json,
            )
        }
    }
}

fn cmd_list_operators(class: Option<&str>, json: bool) -> Result<(), CliError> {
    let filter = match class {
        Some(name) => Some(OperatorClass::from_name(name).ok_or_else(|| {
            let valid: Vec<&str> = OperatorClass::ALL.iter().map(|c| c.name()).collect();
            CliError::Config(format!(
                "unknown class `{name}`; valid classes: {}",
                valid.join(", ")
            ))
        })?),
        None => None,
    };
    if json {
        #[derive(serde::Serialize)]
        struct Record {
            code: &'static str,
            class: &'static str,
            description: &'static str,
        }
        let records: Vec<Record> = solmut::OperatorId::ALL
            .iter()
            .filter(|op| filter.is_none_or(|c| op.class() == c))
            .map(|op| Record {
                code: op.code(),
                class: op.class().name(),
                description: op.description(),
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&records).unwrap());
    } else {
        print!("{}", render::operator_table(filter));
    }
    Ok(())
}

fn load_model(path: &Path) -> Result<SourceModel, CliError> {
    let text = std::fs::read(path)
        .map_err(|e| CliError::Config(format!("source not readable: {}: {e}", path.display())))?;
    SourceModel::parse(path, text)
        .map_err(|e| CliError::Frontend(format!("{}: {e}", path.display())))
}

fn classified_mutants(
    model: &SourceModel,
    settings: &Settings,
) -> Result<(Vec<solmut::Mutant>, bool), CliError> {
    let mut mutants = engine::dedup(engine::generate_with(
        model,
        &settings.enabled,
        &settings.catalog,
    ));
    let validity = ValidityConfig {
        compile_cmd: settings.compile_cmd.clone(),
        timeout: settings.timeout,
        jobs: settings.jobs,
    };
    let approximate = engine::check_validity(&mut mutants, &validity)
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok((mutants, approximate))
}

fn cmd_generate(settings: &Settings, json: bool) -> Result<(), CliError> {
    if settings.sources.is_empty() {
        return Err(CliError::Config(
            "no sources given (pass paths or set `sources` in the config)".to_string(),
        ));
    }
    let multi = settings.sources.len() > 1;
    let mut reports: Vec<GenerationReport> = Vec::new();
    for source in &settings.sources {
        let model = load_model(source)?;
        let (mutants, approximate) = classified_mutants(&model, settings)?;
        let out_dir = if multi {
            let stem = source
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "source".to_string());
            settings.out_dir.join(stem)
        } else {
            settings.out_dir.clone()
        };
        engine::write_mutants(&mutants, source, &out_dir)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        let report = GenerationReport::from_mutants(source, approximate, &mutants);
        if !json {
            print!("{}", render::generation_summary(&report));
            println!(
                "wrote {} mutant files to {}",
                report.counts.total - report.counts.redundant,
                out_dir.display()
            );
        }
        reports.push(report);
    }
    if json {
        if reports.len() == 1 {
            println!("{}", serde_json::to_string_pretty(&reports[0]).unwrap());
        } else {
            println!("{}", serde_json::to_string_pretty(&reports).unwrap());
        }
    }
    Ok(())
}

fn cmd_score(settings: &Settings, json: bool) -> Result<(), CliError> {
    let Some(test_cmd) = &settings.test_cmd else {
        return Err(CliError::Config(
            "score needs a test command (--test-cmd or `test_cmd` in the config)".to_string(),
        ));
    };
    let source = match settings.sources.as_slice() {
        [one] => one.clone(),
        [] => {
            return Err(CliError::Config(
                "score needs exactly one source".to_string(),
            ))
        }
        _ => {
            return Err(CliError::Config(
                "score runs one source at a time; pass a single path".to_string(),
            ))
        }
    };
    let model = load_model(&source)?;
    let (mutants, _) = classified_mutants(&model, settings)?;

    let workspace = source
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."))
        .to_path_buf();
    let source_rel = PathBuf::from(source.file_name().expect("source is a file"));

    let run_cfg = RunConfig {
        test_cmd: test_cmd.clone(),
        timeout: settings.timeout,
        kill_on_timeout: settings.kill_on_timeout,
        jobs: settings.jobs,
    };
    let base = score::baseline(test_cmd, &workspace, settings.timeout).map_err(|e| match e {
        ScoreError::BaselineFailed { .. }
        | ScoreError::HarnessNotFound { .. }
        | ScoreError::BaselineTimeout { .. } => CliError::Baseline(e.to_string()),
        other => CliError::Runtime(other.to_string()),
    })?;
    let outcomes = score::run_all(&mutants, &source_rel, &workspace, &base, &run_cfg);
    let report = score::compute_score(outcomes);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        print!("{}", render::score_summary(&report));
    }
    Ok(())
}

fn cmd_regen(
    settings: &Settings,
    manifest: Option<&Path>,
    pairs: Option<&str>,
    match_scope: &str,
    json: bool,
) -> Result<(), CliError> {
    let Some(manifest) = manifest else {
        return Err(CliError::Config(
            "regen needs --manifest <corpus manifest>".to_string(),
        ));
    };
    if !manifest.is_file() {
        return Err(CliError::Config(format!(
            "manifest not readable: {}",
            manifest.display()
        )));
    }
    let scope = match match_scope {
        "file" => MatchScope::File,
        "function" => MatchScope::Function,
        other => {
            return Err(CliError::Config(format!(
                "unknown match scope `{other}`; use `file` or `function`"
            )))
        }
    };
    let report = regen::run_suite(manifest, &settings.enabled, scope, pairs, &settings.catalog)
        .map_err(|e| match e {
            regen::RegenError::NoPairs => CliError::Config("no pairs".to_string()),
            other => CliError::Config(other.to_string()),
        })?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        print!("{}", render::regen_table(&report));
    }
    if report.has_errors() {
        let failing: Vec<&str> = report
            .pairs
            .iter()
            .filter(|p| p.error.is_some())
            .map(|p| p.name.as_str())
            .collect();
        return Err(CliError::PairErrors(format!(
            "pairs failed to evaluate: {}",
            failing.join(", ")
        )));
    }
    Ok(())
}

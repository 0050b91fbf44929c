//! Configuration: JSON config file, flag overrides, and the SOLMUT_JOBS
//! environment override, resolved into one settings struct.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;
use solmut::{CatalogOptions, OperatorClass, OperatorId};

use crate::CliError;

/// On-disk config; every field optional so flags can fill the gaps.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub sources: Option<Vec<String>>,
    pub enabled_operators: Option<EnabledOperators>,
    pub compile_cmd: Option<String>,
    pub test_cmd: Option<String>,
    pub out_dir: Option<PathBuf>,
    pub parallelism: Option<usize>,
    pub timeout_s: Option<u64>,
    pub kill_on_timeout: Option<bool>,
    pub aor_include_compound: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum EnabledOperators {
    /// `"all"`, a single class name, or a single code.
    One(String),
    /// Mix of operator codes and class names.
    Many(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub sources: Vec<PathBuf>,
    pub enabled: BTreeSet<OperatorId>,
    pub compile_cmd: Option<String>,
    pub test_cmd: Option<String>,
    pub out_dir: PathBuf,
    pub jobs: usize,
    pub timeout: Duration,
    pub kill_on_timeout: bool,
    pub catalog: CatalogOptions,
}

/// Flag-level overrides shared by the mutating subcommands.
#[derive(Debug, Default, clap::Args)]
pub struct CommonFlags {
    /// JSON config file mirroring the documented config fields
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Comma-separated operator codes and/or class names, or `all`
    #[arg(long, value_name = "LIST")]
    pub operators: Option<String>,
    /// Output directory for mutants and reports
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker pool size (overrides SOLMUT_JOBS and the config file)
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    /// Per-mutant timeout in seconds
    #[arg(long, value_name = "SECONDS")]
    pub timeout: Option<u64>,
    /// Compile command template with a `{file}` placeholder
    #[arg(long, value_name = "TEMPLATE")]
    pub compile_cmd: Option<String>,
    /// Test command template with a `{dir}` placeholder
    #[arg(long, value_name = "TEMPLATE")]
    pub test_cmd: Option<String>,
    /// Treat timed-out mutants as killed (true) or errored (false)
    #[arg(long, value_name = "BOOL")]
    pub kill_on_timeout: Option<bool>,
    /// Print the machine-readable JSON report on stdout
    #[arg(long)]
    pub json: bool,
}

pub fn load_config(path: Option<&Path>) -> Result<ConfigFile, CliError> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
}

/// Resolve operator names: each entry is `all`, a class name, or an
/// operator code. Unknown entries are a config error listing every
/// offender.
pub fn resolve_operators(entries: &[String]) -> Result<BTreeSet<OperatorId>, CliError> {
    let mut enabled = BTreeSet::new();
    let mut unknown = Vec::new();
    for raw in entries {
        let name = raw.trim();
        if name.is_empty() {
            continue;
        }
        if name.eq_ignore_ascii_case("all") {
            enabled.extend(OperatorId::ALL.iter().copied());
        } else if let Some(class) = OperatorClass::from_name(name) {
            enabled.extend(OperatorId::by_class(class));
        } else if let Some(op) = OperatorId::from_code(name) {
            enabled.insert(op);
        } else {
            unknown.push(name.to_string());
        }
    }
    if !unknown.is_empty() {
        return Err(CliError::Config(format!(
            "unknown operator codes or classes: {}",
            unknown.join(", ")
        )));
    }
    if enabled.is_empty() {
        return Err(CliError::Config(
            "enabled operator set is empty".to_string(),
        ));
    }
    Ok(enabled)
}

fn expand_source(pattern: &str, out: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let has_glob = pattern.contains(['*', '?', '[']);
    if !has_glob {
        let path = PathBuf::from(pattern);
        if !path.is_file() {
            return Err(CliError::Config(format!(
                "source not readable: {pattern}"
            )));
        }
        out.push(path);
        return Ok(());
    }
    let matches =
        glob::glob(pattern).map_err(|e| CliError::Config(format!("bad glob {pattern}: {e}")))?;
    let mut found = 0;
    for m in matches {
        let path = m.map_err(|e| CliError::Config(format!("glob {pattern}: {e}")))?;
        if path.is_file() {
            out.push(path);
            found += 1;
        }
    }
    if found == 0 {
        return Err(CliError::Config(format!("no sources match {pattern}")));
    }
    Ok(())
}

pub fn resolve(flags: &CommonFlags, positional_sources: &[String]) -> Result<Settings, CliError> {
    let file = load_config(flags.config.as_deref())?;

    let patterns: Vec<String> = if !positional_sources.is_empty() {
        positional_sources.to_vec()
    } else {
        file.sources.clone().unwrap_or_default()
    };
    let mut sources = Vec::new();
    for p in &patterns {
        expand_source(p, &mut sources)?;
    }
    sources.sort();
    sources.dedup();

    let operator_entries: Vec<String> = if let Some(list) = &flags.operators {
        list.split(',').map(|s| s.to_string()).collect()
    } else {
        match &file.enabled_operators {
            None => vec!["all".to_string()],
            Some(EnabledOperators::One(s)) => vec![s.clone()],
            Some(EnabledOperators::Many(v)) => v.clone(),
        }
    };
    let enabled = resolve_operators(&operator_entries)?;

    let env_jobs = std::env::var("SOLMUT_JOBS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    let jobs = flags
        .jobs
        .or(env_jobs)
        .or(file.parallelism)
        .unwrap_or_else(solmut::engine::default_jobs)
        .max(1);

    Ok(Settings {
        sources,
        enabled,
        compile_cmd: flags.compile_cmd.clone().or(file.compile_cmd),
        test_cmd: flags.test_cmd.clone().or(file.test_cmd),
        out_dir: flags
            .out
            .clone()
            .or(file.out_dir)
            .unwrap_or_else(|| PathBuf::from("mutants_out")),
        jobs,
        timeout: Duration::from_secs(flags.timeout.or(file.timeout_s).unwrap_or(30)),
        kill_on_timeout: flags
            .kill_on_timeout
            .or(file.kill_on_timeout)
            .unwrap_or(true),
        catalog: CatalogOptions {
            aor_include_compound: file.aor_include_compound.unwrap_or(false),
        },
    })
}

//! Shell command execution with timeouts and captured stdout.
//!
//! Command templates are run through `sh -c`, with stdout captured to a
//! temporary file (no pipe-buffer deadlocks) and stderr discarded: test
//! harnesses and compilers emit nondeterministic diagnostics there.

use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

#[derive(Debug)]
pub(crate) struct ExecResult {
    /// Process exit code; None when the process was killed on timeout or
    /// ended on a signal.
    pub exit_code: Option<i32>,
    pub timed_out: bool,
    pub stdout: Vec<u8>,
    pub duration: Duration,
}

impl ExecResult {
    /// Exit code 127 is the shell's command-not-found.
    pub fn command_not_found(&self) -> bool {
        self.exit_code == Some(127)
    }
}

/// Run `command` under `sh -c` in `cwd`, with extra environment variables,
/// killing it after `timeout`.
pub(crate) fn run_shell(
    command: &str,
    cwd: &Path,
    envs: &[(&str, &str)],
    timeout: Duration,
) -> std::io::Result<ExecResult> {
    let out_file = tempfile::NamedTempFile::new()?;
    let mut cmd = Command::new("sh");
    cmd.arg("-c")
        .arg(command)
        .current_dir(cwd)
        .stdin(Stdio::null())
        .stdout(Stdio::from(out_file.reopen()?))
        .stderr(Stdio::null());
    for (k, v) in envs {
        cmd.env(k, v);
    }

    let started = Instant::now();
    let mut child = cmd.spawn()?;
    let mut timed_out = false;
    let exit_status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if started.elapsed() >= timeout {
            timed_out = true;
            let _ = child.kill();
            break child.wait()?;
        }
        std::thread::sleep(Duration::from_millis(5));
    };

    let mut stdout = Vec::new();
    File::open(out_file.path())?.read_to_end(&mut stdout)?;
    Ok(ExecResult {
        exit_code: if timed_out { None } else { exit_status.code() },
        timed_out,
        stdout,
        duration: started.elapsed(),
    })
}

/// Substitute a `{placeholder}` in a command template.
pub(crate) fn fill_template(template: &str, placeholder: &str, value: &str) -> String {
    template.replace(&format!("{{{placeholder}}}"), value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn captures_stdout_and_exit_code() {
        let r = run_shell(
            "echo hello && exit 3",
            Path::new("."),
            &[],
            Duration::from_secs(5),
        )
        .unwrap();
        assert_eq!(r.exit_code, Some(3));
        assert_eq!(r.stdout, b"hello\n");
        assert!(!r.timed_out);
    }

    #[test]
    fn times_out_and_kills() {
        let r = run_shell("sleep 30", Path::new("."), &[], Duration::from_millis(200)).unwrap();
        assert!(r.timed_out);
        assert!(r.duration < Duration::from_secs(5));
    }

    #[test]
    fn env_is_passed() {
        let r = run_shell(
            "printf %s \"$SOLMUT_MUTANT_ID\"",
            Path::new("."),
            &[("SOLMUT_MUTANT_ID", "007_AOR")],
            Duration::from_secs(5),
        )
        .unwrap();
        assert_eq!(r.stdout, b"007_AOR");
    }

    #[test]
    fn missing_command_is_127() {
        let r = run_shell(
            "definitely_not_a_command_xyz",
            Path::new("."),
            &[],
            Duration::from_secs(5),
        )
        .unwrap();
        assert!(r.command_not_found());
    }

    #[test]
    fn template_fill() {
        assert_eq!(
            fill_template("solc --bin {file}", "file", "/tmp/m.sol"),
            "solc --bin /tmp/m.sol"
        );
    }
}

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::RunConfig;
use crate::error::{Error, Result};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

/// Exit code for an error that aborted a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NumericalConsistency(_) | Error::Quadrature(_) | Error::Decomposition(_) => exit::NUMERICAL,
        _ => exit::INPUT,
    }
}

/// How a completed command ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    NumericalInconsistency,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => exit::PASS,
            Status::Violation => exit::VIOLATION,
            Status::NumericalInconsistency => exit::NUMERICAL,
        }
    }

    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Violation
        }
    }
}

/// One inequality or identity evaluated over many inputs.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub evaluations: usize,
    /// Smallest `lhs − rhs` seen; `null` when nothing was evaluated.
    pub worst_slack: Option<f64>,
    pub tolerance: f64,
    pub holds: bool,
}

/// Ordered set of checks accumulated from `(name, slack)` pairs.
#[derive(Debug, Clone, Default)]
pub struct Checks {
    items: Vec<(&'static str, f64, usize, f64)>,
}

impl Checks {
    /// Registers a check so it is reported even when never evaluated.
    pub fn declare(&mut self, name: &'static str, tolerance: f64) {
        if !self.items.iter().any(|c| c.0 == name) {
            self.items.push((name, tolerance, 0, f64::INFINITY));
        }
    }

    pub fn record(&mut self, name: &'static str, slack: f64) {
        let item = self
            .items
            .iter_mut()
            .find(|c| c.0 == name)
            .unwrap_or_else(|| panic!("check {name} was not declared"));
        item.2 += 1;
        // NaN slack is a violation; adding 0.0 turns -0.0 into 0.0
        item.3 = if slack.is_nan() { f64::NEG_INFINITY } else { item.3.min(slack + 0.0) };
    }

    pub fn extend(&mut self, slacks: impl IntoIterator<Item = (&'static str, f64)>) {
        for (n, s) in slacks {
            self.record(n, s);
        }
    }

    pub fn finish(&self) -> Vec<Check> {
        self.items
            .iter()
            .map(|&(name, tolerance, evaluations, worst)| Check {
                name,
                evaluations,
                worst_slack: (evaluations > 0).then_some(worst).filter(|w| w.is_finite()),
                tolerance,
                holds: worst >= -tolerance,
            })
            .collect()
    }
}

/// Top-level JSON document of every command. The timestamp is the only
/// field that differs between identical runs.
#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub status: Status,
    pub config: &'a RunConfig,
    pub result: T,
    pub timestamp: u64,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(command: &'a str, status: Status, config: &'a RunConfig, result: T) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Report { command, version: env!("CARGO_PKG_VERSION"), status, config, result, timestamp }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Writes `path` in one step: the content goes to a temporary file in the
/// same directory, which is then renamed over the target.
pub fn write_atomic(path: &Path, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
        write(&mut buf)?;
        buf.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_track_worst_slack() {
        let mut c = Checks::default();
        c.declare("a", 1e-12);
        c.declare("b", 1e-12);
        c.declare("never", 1e-12);
        c.extend([("a", 0.5), ("a", 1e-13), ("b", -1e-3), ("a", f64::NAN)]);
        let out = c.finish();
        assert_eq!(out[0].evaluations, 3);
        assert!(!out[0].holds && out[0].worst_slack.is_none());
        assert!(!out[1].holds && out[1].worst_slack == Some(-1e-3));
        assert!(out[2].holds && out[2].evaluations == 0);
    }

    #[test]
    fn atomic_write_replaces_target() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("r.json");
        write_atomic(&p, |w| Ok(w.write_all(b"one")?)).unwrap();
        write_atomic(&p, |w| Ok(w.write_all(b"two")?)).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
        let failed = write_atomic(&p, |_| Err(Error::Parse("boom".into())));
        assert!(failed.is_err());
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::NumericalConsistency("x".into())), 3);
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
        assert_eq!(Status::Violation.exit_code(), 1);
    }
}

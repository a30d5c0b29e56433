//! Command-line front end.
//!
//! Each subcommand resolves a [`RunConfig`], runs one suite, prints a summary
//! (or the JSON report with `--json`) and, when an output directory is set,
//! writes `<command>.json` plus any plot tables. Exit codes are listed in
//! [`output::exit`].

mod config;
pub mod cv;
pub mod entropy;
pub mod output;
pub mod qudit;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{Grids, RunConfig, Tolerances};
pub use output::{exit, Check, Report, Status};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "tomoprob", version, about = "Tomographic probability checks for qudit and photon states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// RunConfig JSON file; absent fields take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Seed for every randomized draw (overrides the config file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for the JSON report and plot data (overrides the config file).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropic inequalities for probability vectors.
    EntropyCheck {
        /// JSON file with one probability vector or a list of them.
        #[arg(long, value_name = "PATH", required_unless_present = "random")]
        input: Option<PathBuf>,
        /// Random simplex draws of dimension N.
        #[arg(long, num_args = 2, value_names = ["N", "COUNT"], conflicts_with = "input")]
        random: Option<Vec<usize>>,
    },
    /// Tomogram identities and entropy bounds for qudit density matrices.
    QuditCheck {
        /// JSON file with one density matrix or a list of them.
        #[arg(long, value_name = "PATH", required_unless_present = "random")]
        rho: Option<PathBuf>,
        /// Random density matrices of dimension D.
        #[arg(long, num_args = 2, value_names = ["D", "COUNT"], conflicts_with = "rho")]
        random: Option<Vec<usize>>,
        /// Haar-random unitaries per state.
        #[arg(long, default_value_t = 8)]
        unitaries: usize,
        /// Spin of the states (`3/2` or `1.5`); adds random rotations and
        /// requires dimension 2j+1.
        #[arg(long, value_parser = parse_spin)]
        j: Option<f64>,
    },
    /// State-extended uncertainty relation for two wavefunctions.
    StateExtended {
        /// State tag (`vacuum`, `fock:n`, `coherent:re[,im]`, `squeezed:r[,phi]`) or wavefunction JSON file.
        #[arg(long)]
        psi1: String,
        #[arg(long)]
        psi2: String,
    },
    /// Tomographic cumulants and the nongaussianity parameter.
    Nongauss {
        /// Closed-form state tag.
        #[arg(long, required_unless_present = "samples", conflicts_with = "samples")]
        state: Option<String>,
        /// Homodyne CSV with header `theta,x`.
        #[arg(long, value_name = "PATH")]
        samples: Option<PathBuf>,
    },
    /// Synthetic homodyne records of a closed-form state.
    Synth {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 16)]
        phases: usize,
        #[arg(long, default_value_t = 6250)]
        per_phase: usize,
        /// CSV destination; defaults to `samples.csv` in the output directory.
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::EntropyCheck { .. } => "entropy-check",
            Command::QuditCheck { .. } => "qudit-check",
            Command::StateExtended { .. } => "state-extended",
            Command::Nongauss { .. } => "nongauss",
            Command::Synth { .. } => "synth",
        }
    }
}

fn parse_spin(s: &str) -> std::result::Result<f64, String> {
    let bad = || format!("invalid spin {s:?}");
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if b == 0.0 {
                return Err(bad());
            }
            Ok(a / b)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Clamps rounding noise below zero so summaries never print `-0.000000`.
fn non_negative(x: f64) -> f64 {
    if x > 0.0 { x } else { 0.0 }
}

/// Everything a finished command hands back for printing and saving.
struct Finished<T: Serialize> {
    status: Status,
    result: T,
    summary: Vec<String>,
    plots: Option<cv::PlotData>,
}

fn check_lines(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .map(|c| {
            let slack = c.worst_slack.map_or("-".to_string(), |s| format!("{s:.3e}"));
            format!("  {:<32} {:<4} n={:<8} worst slack {slack}", c.name, if c.holds { "ok" } else { "FAIL" }, c.evaluations)
        })
        .collect()
}

fn emit<T: Serialize>(cfg: &RunConfig, name: &str, json: bool, f: Finished<T>) -> Result<i32> {
    let report = Report::new(name, f.status, cfg, &f.result);
    let text = report.to_json()?;
    if let Some(dir) = &cfg.output_dir {
        output::write_atomic(&dir.join(format!("{name}.json")), |w| Ok(w.write_all(text.as_bytes())?))?;
        if let Some(p) = &f.plots {
            p.write(dir)?;
        }
    }
    if json {
        print!("{text}");
    } else {
        println!("{name}: {}", serde_json::to_value(f.status)?.as_str().unwrap_or("?"));
        for line in &f.summary {
            println!("{line}");
        }
    }
    Ok(f.status.exit_code())
}

fn execute(cli: Cli) -> Result<i32> {
    let g = &cli.global;
    let base = match &g.config {
        Some(p) => RunConfig::from_path(p)?,
        None => RunConfig::default(),
    };
    let cfg = base.resolve(g.seed, g.out.clone());
    let name = cli.command.name();
    match &cli.command {
        Command::EntropyCheck { input, random } => {
            let (status, result) = match (input, random) {
                (Some(p), _) => entropy::run_file(&cfg, &read_input(p)?, p.display().to_string())?,
                (None, Some(r)) => entropy::run_random(&cfg, r[0], r[1])?,
                (None, None) => return Err(Error::Parse("need --input or --random".into())),
            };
            let mut summary = vec![format!("  {} vectors from {}", result.vectors_checked, result.source)];
            summary.extend(check_lines(&result.checks));
            emit(&cfg, name, g.json, Finished { status, result, summary, plots: None })
        }
        Command::QuditCheck { rho, random, unitaries, j } => {
            let (status, result) = match (rho, random) {
                (Some(p), _) => qudit::run_file(&cfg, &read_input(p)?, p.display().to_string(), *unitaries, *j)?,
                (None, Some(r)) => qudit::run_random(&cfg, r[0], r[1], *unitaries, *j)?,
                (None, None) => return Err(Error::Parse("need --rho or --random".into())),
            };
            let mut summary = vec![format!(
                "  {} states from {}, S_vN in [{:.6}, {:.6}]",
                result.states_checked,
                result.source,
                non_negative(result.s_vn_min),
                non_negative(result.s_vn_max)
            )];
            summary.extend(check_lines(&result.checks));
            emit(&cfg, name, g.json, Finished { status, result, summary, plots: None })
        }
        Command::StateExtended { psi1, psi2 } => {
            let (status, result) = cv::state_extended(&cfg, psi1, psi2)?;
            let r = &result.report;
            let summary = vec![
                format!("  lhs              {:.12e}", r.lhs),
                format!("  rhs (Hilbert)    {:.12e}", r.rhs_hilbert),
                format!("  rhs (tomogram)   {:.12e}", r.rhs_tomographic),
            ];
            emit(&cfg, name, g.json, Finished { status, result, summary, plots: None })
        }
        Command::Nongauss { state, samples } => {
            let (status, result, plots) = match (state, samples) {
                (Some(s), _) => cv::nongauss_state(&cfg, s)?,
                (None, Some(p)) => cv::nongauss_samples(&cfg, p)?,
                (None, None) => return Err(Error::Parse("need --state or --samples".into())),
            };
            let mut summary = vec![format!("  source {}", result.report.source)];
            match (&result.report.ch, result.report.ch_se) {
                (Some(ch), Some(se)) => summary.push(format!("  Ch = {:.9} ± {se:.3e} (t ≤ {:.3})", ch.value, ch.t_reached)),
                (Some(ch), None) => summary.push(format!("  Ch = {:.12}", ch.value)),
                (None, _) => summary.push(format!("  Ch unavailable: {}", result.report.ch_note.as_deref().unwrap_or(""))),
            }
            if let Some(v) = result.verdict {
                summary.push(format!("  {v}"));
            }
            if let Some(r) = &result.reference {
                summary.push(format!("  reference {:.12} (relative deviation {:.2e})", r.value, r.relative_deviation));
            }
            emit(&cfg, name, g.json, Finished { status, result, summary, plots: Some(plots) })
        }
        Command::Synth { state, phases, per_phase, output } => {
            let path = match (output, &cfg.output_dir) {
                (Some(p), _) => p.clone(),
                (None, Some(d)) => d.join("samples.csv"),
                (None, None) => return Err(Error::Parse("synth needs --output or --out".into())),
            };
            let (status, result) = cv::synth(&cfg, state, *phases, *per_phase, &path)?;
            let summary = vec![format!("  {} records written to {}", result.records, result.path.display())];
            emit(&cfg, name, g.json, Finished { status, result, summary, plots: None })
        }
    }
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::INPUT } else { exit::PASS };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            output::exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_values() {
        assert_eq!(parse_spin("3/2"), Ok(1.5));
        assert_eq!(parse_spin("2"), Ok(2.0));
        assert!(parse_spin("1/0").is_err());
        assert!(parse_spin("x").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["tomoprob", "entropy-check"]), exit::INPUT);
        assert_eq!(run(["tomoprob", "nosuch"]), exit::INPUT);
        assert_eq!(run(["tomoprob", "state-extended", "--psi1", "vacuum", "--psi2", "banana"]), exit::INPUT);
        assert_eq!(run(["tomoprob", "qudit-check", "--random", "3", "2", "--j", "3/2"]), exit::INPUT);
        assert_eq!(run(["tomoprob", "--help"]), exit::PASS);
    }
}

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cumulant::{ChSettings, EmpiricalSettings};
use crate::cvstate::{Grid, TomographicSettings};
use crate::error::{Error, Result};
use crate::par::Execution;

/// Everything that determines a run. Absent fields take their defaults, so
/// `{}` is a valid config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub grids: Grids,
    /// Applied to every sweep of the run.
    pub execution: Execution,
    /// Directory for reports and plot data; nothing is written when absent.
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 0, tolerances: Tolerances::default(), grids: Grids::default(), execution: Execution::default(), output_dir: None }
    }
}

/// Slack allowed before a check counts as violated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Entropy chains, permutation and center checks, subadditivity.
    pub entropy: f64,
    /// Spectral tomogram identity and the von Neumann bound.
    pub qudit: f64,
    /// Tomographic information inequalities.
    pub information: f64,
    /// State-extended relation against the Hilbert-space right-hand side.
    pub state_extended: f64,
    /// `|Ch|` below which a state counts as Gaussian.
    pub gaussian_ch: f64,
    /// Relative agreement with a stored reference value of `Ch`.
    pub golden_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            entropy: 1e-12,
            qudit: 1e-9,
            information: 1e-10,
            state_extended: 1e-9,
            gaussian_ch: 1e-6,
            golden_rel: 1e-5,
        }
    }
}

/// Quadrature and grid settings of the continuous-variable suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    pub wavefunction: Grid,
    pub tomographic: TomographicSettings,
    pub ch: ChSettings,
    /// Phases of the cumulant and `C(t, Θ)` tables.
    pub cumulant_phases: usize,
    pub cumulant_order: u32,
    pub t_grid: Vec<f64>,
    /// `x` points per phase of the exported tomogram table.
    pub tomogram_points: usize,
    pub empirical: EmpiricalSettings,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            wavefunction: Grid::default(),
            tomographic: TomographicSettings::default(),
            ch: ChSettings::default(),
            cumulant_phases: 16,
            cumulant_order: 4,
            t_grid: vec![0.25, 0.5, 1.0, 2.0],
            tomogram_points: 201,
            empirical: EmpiricalSettings::default(),
        }
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Applies command-line overrides and propagates the run seed and
    /// execution mode into the nested settings.
    pub fn resolve(mut self, seed: Option<u64>, out: Option<PathBuf>) -> Self {
        if let Some(s) = seed {
            self.seed = s;
        }
        if out.is_some() {
            self.output_dir = out;
        }
        self.grids.empirical.seed = self.seed;
        let exec = self.execution;
        self.grids.tomographic.execution = exec;
        self.grids.ch.execution = exec;
        self.grids.empirical.execution = exec;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        let c: RunConfig = serde_json::from_str(r#"{"seed": 9, "tolerances": {"entropy": 1e-10}}"#).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.tolerances.entropy, 1e-10);
        assert_eq!(c.tolerances.qudit, 1e-9);
        assert!(serde_json::from_str::<RunConfig>(r#"{"sead": 1}"#).is_err());
    }

    #[test]
    fn round_trip_and_overrides() {
        let c = RunConfig::default().resolve(Some(5), Some("out".into()));
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.grids.empirical.seed, 5);
    }
}

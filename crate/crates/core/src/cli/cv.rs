use std::path::{Path, PathBuf};

use serde::Serialize;

use super::output::Status;
use super::RunConfig;
use crate::cumulant::{
    cumulant_report, empirical_cumulant_report, empirical_tomogram, synthesize_samples, CumulantReport,
    HomodyneSamples,
};
use crate::cvstate::{
    check_state_extended, export_tomogram_csv, AnalyticTomogram, OpticalTomogram, StateExtendedReport, StateTag,
    WaveFunction,
};
use crate::error::{Error, Result};

/// `Ch` of the first Fock state over the full `t` half-line, evaluated to 40
/// digits with arbitrary-precision quadrature.
pub const FOCK1_CH: f64 = -3.410_850_944_121_079_2;

/// Reads a state argument: a tag such as `fock:2`, or a path to a
/// wavefunction JSON file.
pub fn parse_wave(arg: &str, cfg: &RunConfig) -> Result<WaveFunction> {
    let grid = cfg.grids.wavefunction;
    match arg.parse::<StateTag>() {
        Ok(tag) => WaveFunction::from_tag(tag, grid),
        Err(tag_err) => {
            let path = Path::new(arg);
            if path.is_file() {
                WaveFunction::from_json(&std::fs::read_to_string(path)?, grid)
            } else {
                Err(Error::Parse(format!("{tag_err}; no file named {arg:?} either")))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StateExtendedResult {
    pub psi1: String,
    pub psi2: String,
    #[serde(flatten)]
    pub report: StateExtendedReport,
    /// `lhs − rhs_hilbert`.
    pub slack: f64,
}

/// Both sides of the state-extended relation for two states.
pub fn state_extended(cfg: &RunConfig, psi1: &str, psi2: &str) -> Result<(Status, StateExtendedResult)> {
    let a = parse_wave(psi1, cfg)?;
    let b = parse_wave(psi2, cfg)?;
    let report = check_state_extended(&a, &b, &cfg.grids.tomographic)?;
    let slack = report.lhs - report.rhs_hilbert;
    let status = Status::from_pass(slack >= -cfg.tolerances.state_extended);
    Ok((status, StateExtendedResult { psi1: psi1.to_string(), psi2: psi2.to_string(), report, slack }))
}

/// Stored reference value of `Ch` and the computed value's distance to it.
#[derive(Debug, Clone, Serialize)]
pub struct Reference {
    pub state: String,
    pub value: f64,
    pub relative_deviation: f64,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NongaussResult {
    /// Whether the input is a Gaussian state; unknown for measured data.
    pub gaussian_state: Option<bool>,
    /// `"gaussian-consistent"` or `"non-gaussian"`, judged from `Ch`.
    pub verdict: Option<&'static str>,
    pub reference: Option<Reference>,
    #[serde(flatten)]
    pub report: CumulantReport,
}

/// Plot tables produced next to a report.
pub struct PlotData {
    pub report: CumulantReport,
    pub tomogram: Box<dyn OpticalTomogram>,
    pub thetas: Vec<f64>,
    pub xs: Vec<f64>,
}

impl PlotData {
    fn new(report: CumulantReport, tomogram: Box<dyn OpticalTomogram>, points: usize) -> Self {
        let thetas = report.theta_grid.clone();
        let (lo, hi) = thetas
            .iter()
            .map(|&t| tomogram.support(t))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (l, h)| (a.min(l), b.max(h)));
        let n = points.max(2);
        let xs = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        PlotData { report, tomogram, thetas, xs }
    }

    /// Writes the tables into `dir` and returns their paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let files = [("nongauss_c.csv", 0), ("nongauss_cumulants.csv", 1), ("nongauss_tomogram.csv", 2)];
        files
            .iter()
            .map(|&(name, kind)| {
                let path = dir.join(name);
                super::output::write_atomic(&path, |w| match kind {
                    0 => self.report.write_c_csv(w),
                    1 => self.report.write_k_csv(w),
                    _ => export_tomogram_csv(self.tomogram.as_ref(), &self.thetas, &self.xs, w),
                })?;
                Ok(path)
            })
            .collect()
    }
}

fn verdict(report: &CumulantReport, tol: f64) -> Option<&'static str> {
    let ch = report.ch?;
    let within = match report.ch_se {
        Some(se) => ch.value.abs() <= (3.0 * se).max(tol),
        None => ch.value.abs() <= tol,
    };
    Some(if within { "gaussian-consistent" } else { "non-gaussian" })
}

/// Cumulants, `C(t, Θ)` and `Ch` of a closed-form state.
pub fn nongauss_state(cfg: &RunConfig, tag: &str) -> Result<(Status, NongaussResult, PlotData)> {
    let tag: StateTag = tag.parse()?;
    let w = AnalyticTomogram::new(tag)?;
    let g = &cfg.grids;
    let report = cumulant_report(&w, &tag.to_string(), g.cumulant_phases, g.cumulant_order, &g.t_grid, &g.ch)?;
    let tol = &cfg.tolerances;
    let reference = match (tag, report.ch) {
        (StateTag::Fock { n: 1 }, Some(ch)) => {
            let rel = ((ch.value - FOCK1_CH) / FOCK1_CH).abs();
            Some(Reference { state: tag.to_string(), value: FOCK1_CH, relative_deviation: rel, matches: rel <= tol.golden_rel })
        }
        _ => None,
    };
    let gaussian = tag.is_gaussian();
    let v = verdict(&report, tol.gaussian_ch);
    let status = if reference.as_ref().is_some_and(|r| !r.matches) {
        Status::NumericalInconsistency
    } else if gaussian && v != Some("gaussian-consistent") {
        Status::Violation
    } else {
        Status::Pass
    };
    let plots = PlotData::new(report.clone(), Box::new(w), g.tomogram_points);
    Ok((status, NongaussResult { gaussian_state: Some(gaussian), verdict: v, reference, report }, plots))
}

/// The same quantities from homodyne records, with bootstrap errors.
pub fn nongauss_samples(cfg: &RunConfig, path: &Path) -> Result<(Status, NongaussResult, PlotData)> {
    let samples = HomodyneSamples::from_csv_path(path)?;
    let settings = &cfg.grids.empirical;
    let report = empirical_cumulant_report(&samples, settings)?;
    let kde = empirical_tomogram(&samples, &settings.binning)?;
    let v = verdict(&report, cfg.tolerances.gaussian_ch);
    let plots = PlotData::new(report.clone(), Box::new(kde), cfg.grids.tomogram_points);
    Ok((Status::Pass, NongaussResult { gaussian_state: None, verdict: v, reference: None, report }, plots))
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthResult {
    pub state: String,
    pub phases: usize,
    pub per_phase: usize,
    pub records: usize,
    pub path: PathBuf,
}

/// Draws homodyne records of a closed-form state at equally spaced phases
/// and writes them as `theta,x` CSV.
pub fn synth(cfg: &RunConfig, tag: &str, phases: usize, per_phase: usize, path: &Path) -> Result<(Status, SynthResult)> {
    if phases == 0 || per_phase == 0 {
        return Err(Error::Parse("--phases and --per-phase must be positive".into()));
    }
    let tag: StateTag = tag.parse()?;
    let w = AnalyticTomogram::new(tag)?;
    let thetas: Vec<f64> = (0..phases).map(|k| std::f64::consts::TAU * k as f64 / phases as f64).collect();
    let samples = synthesize_samples(&w, &thetas, per_phase, cfg.seed, cfg.execution)?;
    super::output::write_atomic(path, |out| samples.write_csv(out))?;
    Ok((
        Status::Pass,
        SynthResult { state: tag.to_string(), phases, per_phase, records: samples.len(), path: path.to_path_buf() },
    ))
}

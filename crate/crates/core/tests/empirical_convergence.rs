//! Empirical estimates approach the exact values of a Gaussian state as the
//! number of homodyne records grows.

use std::f64::consts::TAU;

use tomoprob::cumulant::{empirical_cumulant_report, synthesize_samples, EmpiricalSettings};
use tomoprob::cvstate::{AnalyticTomogram, StateTag};
use tomoprob::par::Execution;

const TRIALS: u64 = 20;
const PHASES: usize = 16;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    0.5 * (v[v.len() / 2 - 1] + v[v.len() / 2])
}

/// Worst cumulant error over phases and the `|Ch|` error, for one trial.
/// A coherent state has `K2 = 1/2` and vanishing higher cumulants and `Ch`.
fn errors(w: &AnalyticTomogram, total: usize, trial: u64) -> (f64, f64) {
    let thetas: Vec<f64> = (0..PHASES).map(|k| TAU * k as f64 / PHASES as f64).collect();
    let samples = synthesize_samples(w, &thetas, total / PHASES, 1000 + trial, Execution::Parallel).unwrap();
    let settings = EmpiricalSettings { bootstrap: 0, ch_t_max: Some(1.0), ..Default::default() };
    let r = empirical_cumulant_report(&samples, &settings).unwrap();
    let k_err = r
        .cumulants
        .iter()
        .map(|k| (k[1] - 0.5).abs().max(k[2].abs()).max(k[3].abs()))
        .fold(0.0, f64::max);
    (k_err, r.ch.unwrap().value.abs())
}

#[test]
fn median_errors_shrink_with_sample_count() {
    let w = AnalyticTomogram::new(StateTag::Coherent { re: 1.0, im: 0.5 }).unwrap();
    let sizes = [10_000, 100_000, 1_000_000];
    let mut k_medians = Vec::new();
    let mut ch_medians = Vec::new();
    for &n in &sizes {
        let (k, ch): (Vec<f64>, Vec<f64>) = (0..TRIALS).map(|t| errors(&w, n, t)).unzip();
        k_medians.push(median(k));
        ch_medians.push(median(ch));
    }
    for i in 1..sizes.len() {
        assert!(k_medians[i] < k_medians[i - 1], "cumulant errors {k_medians:?}");
        assert!(ch_medians[i] < ch_medians[i - 1], "Ch errors {ch_medians:?}");
    }
    // A hundredfold increase should cut statistical errors by roughly ten.
    assert!(k_medians[2] < 0.3 * k_medians[0], "cumulant errors {k_medians:?}");
    assert!(ch_medians[2] < 0.3 * ch_medians[0], "Ch errors {ch_medians:?}");
}

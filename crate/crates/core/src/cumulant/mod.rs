//! Tomographic cumulants, the gaussianity deviation `C(t, Θ)` and the scalar
//! nongaussianity parameter `Ch`, for closed-form tomograms and for homodyne
//! samples.

mod empirical;

pub use empirical::{
    bin_samples, empirical_cumulant_report, empirical_tomogram, stable_t_max, synthesize_samples, Bandwidth,
    BinningConfig, EmpiricalSettings, HomodyneSamples, KdeTomogram, PhaseBin,
};

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::cvstate::OpticalTomogram;
use crate::error::{Error, Result};
use crate::par::{try_map_range, Execution};
use crate::quad::GaussRule;

/// Largest cumulant order.
pub const MAX_ORDER: u32 = 8;
/// `|Ch|` below this is reported as consistent with a Gaussian state.
pub const GAUSSIAN_CH_TOL: f64 = 1e-6;

/// `⟨e^{tX}⟩ = ∫ w(X, θ) e^{tX} dX`.
pub fn mgf(w: &dyn OpticalTomogram, t: f64, theta: f64) -> Result<f64> {
    Ok(w.log_mgf(t, theta)?.exp())
}

/// `g(t, θ) = ln ⟨e^{tX}⟩`.
pub fn cumulant_generating(w: &dyn OpticalTomogram, t: f64, theta: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    w.log_mgf(t, theta)
}

/// Cumulants `κ_1 … κ_n` from raw moments `m_1 … m_n` by
/// `κ_n = m_n − Σ_{k<n} C(n−1, k−1) κ_k m_{n−k}`.
pub fn moments_to_cumulants(m: &[f64]) -> Vec<f64> {
    let mut k: Vec<f64> = Vec::with_capacity(m.len());
    for n in 1..=m.len() {
        let mut v = m[n - 1];
        let mut binom = 1.0; // C(n-1, k-1), starting at k = 1
        for j in 1..n {
            v -= binom * k[j - 1] * m[n - j - 1];
            binom = binom * (n - j) as f64 / j as f64;
        }
        k.push(v);
    }
    k
}

/// `K_1 … K_{n_max}` at phase `theta`, from moments about the mean.
pub fn cumulants(w: &dyn OpticalTomogram, theta: f64, n_max: u32) -> Result<Vec<f64>> {
    if n_max == 0 || n_max > MAX_ORDER {
        return Err(Error::Quadrature(format!("cumulant order {n_max} outside 1..={MAX_ORDER}")));
    }
    let cm = w.central_moments(n_max.max(2), theta)?;
    let mean = cm[0];
    let mut central = vec![0.0];
    central.extend_from_slice(&cm[1..]);
    let mut k = moments_to_cumulants(&central);
    k[0] = mean;
    k.truncate(n_max as usize);
    Ok(k)
}

/// `C(t, θ) = g(t, θ) − t K_1(θ) − t² K_2(θ) / 2`.
pub fn c_function(w: &dyn OpticalTomogram, t: f64, theta: f64) -> Result<f64> {
    let k = cumulants(w, theta, 2)?;
    Ok(c_from(cumulant_generating(w, t, theta)?, t, k[0], k[1]))
}

fn c_from(g: f64, t: f64, k1: f64, k2: f64) -> f64 {
    g - t * k1 - 0.5 * t * t * k2
}

/// Quadrature for `Ch = ∫₀^{2π} dΘ ∫₀^∞ C(t, Θ) e^{−t} dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(default)]
pub struct ChSettings {
    /// Gauss–Laguerre nodes in `t`.
    pub laguerre_nodes: usize,
    /// Trapezoid nodes in `Θ` over a full turn.
    pub theta_nodes: usize,
    pub execution: Execution,
}

impl Default for ChSettings {
    fn default() -> Self {
        ChSettings { laguerre_nodes: 32, theta_nodes: 64, execution: Execution::default() }
    }
}

/// A value of `Ch`, possibly restricted to `t ∈ [0, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChEstimate {
    pub value: f64,
    /// Upper end of the `t` domain; `None` for the full half-line.
    pub t_max: Option<f64>,
    /// False when the MGF diverged at a required node; `value` then covers
    /// only the nodes up to `t_reached`.
    pub complete: bool,
    pub t_reached: f64,
    pub gaussian_consistent: bool,
}

fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

/// `Σ_k w_k C(t_k, θ)` for one phase, stopping at the first divergent node.
fn weighted_c_sum(w: &dyn OpticalTomogram, theta: f64, nodes: &[f64], weights: &[f64]) -> Result<(f64, bool, f64)> {
    let k = cumulants(w, theta, 2)?;
    let mut sum = 0.0;
    let mut reached = 0.0;
    for (&t, &wt) in nodes.iter().zip(weights) {
        match w.log_mgf(t, theta) {
            Ok(g) => {
                sum += wt * c_from(g, t, k[0], k[1]);
                reached = t;
            }
            Err(Error::MgfDivergence { .. }) => return Ok((sum, false, reached)),
            Err(e) => return Err(e),
        }
    }
    Ok((sum, true, reached))
}

fn assemble(per_theta: Vec<(f64, bool, f64)>, dtheta: f64, t_max: Option<f64>) -> ChEstimate {
    let value = dtheta * per_theta.iter().map(|p| p.0).sum::<f64>();
    let complete = per_theta.iter().all(|p| p.1);
    let t_reached = per_theta.iter().map(|p| p.2).fold(f64::INFINITY, f64::min);
    ChEstimate { value, t_max, complete, t_reached, gaussian_consistent: value.abs() < GAUSSIAN_CH_TOL }
}

/// `Ch` with Gauss–Laguerre nodes in `t` (weight `e^{−t}`) and the trapezoid
/// rule in `Θ`.
pub fn nongaussianity_ch(w: &dyn OpticalTomogram, settings: &ChSettings) -> Result<ChEstimate> {
    if settings.laguerre_nodes == 0 || settings.theta_nodes == 0 {
        return Err(Error::Quadrature("Ch needs at least one node in t and in Θ".into()));
    }
    let rule = GaussRule::laguerre(settings.laguerre_nodes);
    let thetas = theta_grid(settings.theta_nodes);
    let per = try_map_range(settings.execution, thetas.len(), |i| {
        weighted_c_sum(w, thetas[i], &rule.nodes, &rule.weights)
    })?;
    Ok(assemble(per, 2.0 * PI / settings.theta_nodes as f64, None))
}

/// `Ch` restricted to `t ∈ [0, t_max]`, with Gauss–Legendre nodes in `t`.
pub fn nongaussianity_ch_truncated(
    w: &dyn OpticalTomogram,
    t_max: f64,
    legendre_nodes: usize,
    theta_nodes: usize,
    execution: Execution,
) -> Result<ChEstimate> {
    if !(t_max > 0.0) || legendre_nodes == 0 || theta_nodes == 0 {
        return Err(Error::Quadrature("truncated Ch needs t_max > 0 and nonzero node counts".into()));
    }
    let rule = GaussRule::legendre_on(legendre_nodes, 0.0, t_max);
    let weights: Vec<f64> = rule.nodes.iter().zip(&rule.weights).map(|(t, w)| w * (-t).exp()).collect();
    let thetas = theta_grid(theta_nodes);
    let per = try_map_range(execution, thetas.len(), |i| weighted_c_sum(w, thetas[i], &rule.nodes, &weights))?;
    Ok(assemble(per, 2.0 * PI / theta_nodes as f64, Some(t_max)))
}

/// Cumulants of `g` at `t = 0` by five-point central differences, for the
/// orders 1 to 4. Step sizes are scaled by the standard deviation `σ` so the
/// stencil sees the same shape of `g` for every state.
pub fn finite_difference_cumulants(w: &dyn OpticalTomogram, theta: f64) -> Result<[f64; 4]> {
    let sigma = cumulants(w, theta, 2)?[1].sqrt();
    let g = |t: f64| cumulant_generating(w, t, theta);
    let h = 1e-2 / sigma;
    let (p1, p2, m1, m2) = (g(h)?, g(2.0 * h)?, g(-h)?, g(-2.0 * h)?);
    let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
    let d2 = (-p2 + 16.0 * p1 - 30.0 * g(0.0)? + 16.0 * m1 - m2) / (12.0 * h * h);
    let h = 5e-3 / sigma;
    let (p1, p2, m1, m2) = (g(h)?, g(2.0 * h)?, g(-h)?, g(-2.0 * h)?);
    let d3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h.powi(3));
    let d4 = (p2 - 4.0 * p1 + 6.0 * g(0.0)? - 4.0 * m1 + m2) / h.powi(4);
    Ok([d1, d2, d3, d4])
}

/// Cumulants, the `C(t, Θ)` table and `Ch`, with optional bootstrap errors.
#[derive(Debug, Clone, Serialize)]
pub struct CumulantReport {
    pub source: String,
    pub theta_grid: Vec<f64>,
    pub n_max: u32,
    /// `cumulants[i][n-1] = K_n(θ_i)`.
    pub cumulants: Vec<Vec<f64>>,
    pub cumulant_se: Option<Vec<Vec<f64>>>,
    pub t_grid: Vec<f64>,
    /// `c_values[i][j] = C(t_j, θ_i)`; `null` where the MGF is unavailable.
    pub c_values: Vec<Vec<Option<f64>>>,
    pub ch: Option<ChEstimate>,
    pub ch_se: Option<f64>,
    /// Why `ch` is absent, if it is.
    pub ch_note: Option<String>,
}

/// Report for a closed-form or wavefunction tomogram on `n_theta` phases.
pub fn cumulant_report(
    w: &dyn OpticalTomogram,
    source: &str,
    n_theta: usize,
    n_max: u32,
    t_grid: &[f64],
    ch: &ChSettings,
) -> Result<CumulantReport> {
    let thetas = theta_grid(n_theta.max(1));
    let rows = try_map_range(ch.execution, thetas.len(), |i| -> Result<(Vec<f64>, Vec<Option<f64>>)> {
        let th = thetas[i];
        let k = cumulants(w, th, n_max.max(2))?;
        let c = t_grid
            .iter()
            .map(|&t| match cumulant_generating(w, t, th) {
                Ok(g) => Ok(Some(c_from(g, t, k[0], k[1]))),
                Err(Error::MgfDivergence { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((k[..n_max as usize].to_vec(), c))
    })?;
    let (cumulants, c_values) = rows.into_iter().unzip();
    let ch = nongaussianity_ch(w, ch)?;
    Ok(CumulantReport {
        source: source.to_string(),
        theta_grid: thetas,
        n_max,
        cumulants,
        cumulant_se: None,
        t_grid: t_grid.to_vec(),
        c_values,
        ch: Some(ch),
        ch_se: None,
        ch_note: None,
    })
}

impl CumulantReport {
    /// Plot data `theta,t,C`; unavailable values are left empty.
    pub fn write_c_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(out);
        wr.write_record(["theta", "t", "C"])?;
        for (th, row) in self.theta_grid.iter().zip(&self.c_values) {
            for (t, c) in self.t_grid.iter().zip(row) {
                wr.write_record([th.to_string(), t.to_string(), c.map(|v| v.to_string()).unwrap_or_default()])?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    /// Plot data `theta,K1,K2,K3,K4`; orders above `n_max` are left empty.
    pub fn write_k_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(out);
        wr.write_record(["theta", "K1", "K2", "K3", "K4"])?;
        for (th, k) in self.theta_grid.iter().zip(&self.cumulants) {
            let mut rec = vec![th.to_string()];
            rec.extend((0..4).map(|i| k.get(i).map(|v| v.to_string()).unwrap_or_default()));
            wr.write_record(&rec)?;
        }
        wr.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvstate::{AnalyticTomogram, StateTag};

    fn analytic(tag: &str) -> AnalyticTomogram {
        AnalyticTomogram::new(tag.parse::<StateTag>().unwrap()).unwrap()
    }

    #[test]
    fn recursion_matches_known_cumulants() {
        // Poisson(λ): every cumulant is λ; raw moments 2.0, 6.0, 22.0, 94.0 for λ = 2
        let k = moments_to_cumulants(&[2.0, 6.0, 22.0, 94.0]);
        for v in k {
            assert!((v - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mgf_examples() {
        let vac = analytic("vacuum");
        assert!((mgf(&vac, 1.3, 0.4).unwrap() - (1.3f64 * 1.3 / 4.0).exp()).abs() < 1e-13);
        assert!((mgf(&vac, 0.0, 2.0).unwrap() - 1.0).abs() < 1e-15);
        let f1 = analytic("fock:1");
        let t = 0.9f64;
        let exact = (t * t / 4.0).exp() * (1.0 + t * t / 2.0);
        assert!((mgf(&f1, t, 1.0).unwrap() - exact).abs() < 1e-13);
        let coh = analytic("coherent:0.6,0.8");
        let th = 0.5f64;
        let expected = t * std::f64::consts::SQRT_2 * (th - 0.8f64.atan2(0.6)).cos() + t * t / 4.0;
        assert!((cumulant_generating(&coh, t, th).unwrap() - expected).abs() < 1e-13);
    }

    #[test]
    fn cumulant_examples() {
        let k = cumulants(&analytic("vacuum"), 0.3, 4).unwrap();
        assert!(k[0].abs() < 1e-15 && (k[1] - 0.5).abs() < 1e-14 && k[2].abs() < 1e-14 && k[3].abs() < 1e-13);
        let k = cumulants(&analytic("fock:1"), 0.3, 4).unwrap();
        assert!((k[1] - 1.5).abs() < 1e-13 && (k[3] + 3.0).abs() < 1e-12);
        let r = 0.6f64;
        let k = cumulants(&analytic(&format!("squeezed:{r}")), 0.0, 4).unwrap();
        assert!((k[1] - (-2.0 * r).exp() / 2.0).abs() < 1e-14 && k[2].abs() < 1e-14 && k[3].abs() < 1e-13);
        assert!(cumulants(&analytic("vacuum"), 0.0, 9).is_err());
    }

    #[test]
    fn c_function_examples() {
        let f1 = analytic("fock:1");
        let oracle = 1.5f64.ln() - 0.5;
        assert!((c_function(&f1, 1.0, 0.7).unwrap() - oracle).abs() < 1e-13);
        assert_eq!(c_function(&f1, 0.0, 0.7).unwrap(), 0.0);
        for tag in ["vacuum", "coherent:1,1", "squeezed:0.8,0.3", "thermal:0.7"] {
            for t in [0.25, 1.0, 2.0, 50.0] {
                assert!(c_function(&analytic(tag), t, 1.1).unwrap().abs() < 1e-7 * t.max(1.0).powi(2));
            }
        }
    }

    #[test]
    fn ch_examples() {
        let s = ChSettings { theta_nodes: 8, ..Default::default() };
        let v = nongaussianity_ch(&analytic("vacuum"), &s).unwrap();
        assert!(v.value.abs() < 1e-6 && v.gaussian_consistent && v.complete);
        let f = nongaussianity_ch(&analytic("fock:1"), &s).unwrap();
        // 40-digit mpmath value of 2π ∫₀^∞ (ln(1 + t²/2) − t²/2) e^{−t} dt
        let golden = -3.410_850_944_121_079_2;
        assert!(((f.value - golden) / golden).abs() < 1e-5);
        let tr = nongaussianity_ch_truncated(&analytic("fock:1"), 2.0, 24, 8, Execution::Sequential).unwrap();
        // same integrand on [0, 2]
        assert!((tr.value + 0.567_139_903_735_548_8).abs() < 1e-12);
    }

    #[test]
    fn finite_differences_agree_with_recursion() {
        for tag in ["vacuum", "fock:1", "fock:4", "coherent:1,1", "squeezed:0.8", "thermal:1.5"] {
            let w = analytic(tag);
            let k = cumulants(&w, 0.4, 4).unwrap();
            let d = finite_difference_cumulants(&w, 0.4).unwrap();
            for n in 0..4 {
                let scale = k[n].abs().max(k[1].powf((n + 1) as f64 / 2.0));
                assert!((d[n] - k[n]).abs() <= 1e-4 * scale, "{tag} K{}: {} vs {}", n + 1, d[n], k[n]);
            }
        }
    }

    #[test]
    fn report_and_csv() {
        let s = ChSettings { theta_nodes: 4, ..Default::default() };
        let r = cumulant_report(&analytic("fock:2"), "fock:2", 4, 4, &[0.5, 1.0], &s).unwrap();
        assert_eq!(r.cumulants.len(), 4);
        let mut buf = Vec::new();
        r.write_c_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 9);
        let mut buf = Vec::new();
        r.write_k_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("theta,K1,K2,K3,K4\n"));
    }
}

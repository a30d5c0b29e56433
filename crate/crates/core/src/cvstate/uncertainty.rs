use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{OpticalTomogram, WaveFunction, WaveTomogram};
use crate::error::{Error, Result};
use crate::par::{try_map_range, Execution};
use crate::qudit::C64;
use crate::quad::GaussRule;

/// `∫ X² w(X, θ) dX`.
pub fn second_moment(w: &dyn OpticalTomogram, theta: f64) -> Result<f64> {
    w.raw_moment(2, theta)
}

/// `⟨ψ₁|x²|ψ₁⟩ ⟨ψ₂|x²|ψ₂⟩`, each factor taken from the position tomogram.
pub fn state_extended_lhs(psi1: &WaveFunction, psi2: &WaveFunction) -> Result<f64> {
    let a = second_moment(&WaveTomogram::new(psi1.clone()), 0.0)?;
    let b = second_moment(&WaveTomogram::new(psi2.clone()), 0.0)?;
    Ok(a * b)
}

/// `|⟨ψ₂|x²|ψ₁⟩|²` on the grid of `ψ₁`; `ψ₂` is resampled if its grid differs.
pub fn state_extended_rhs_hilbert(psi1: &WaveFunction, psi2: &WaveFunction) -> Result<f64> {
    let g = psi1.grid();
    let resampled;
    let other = if psi2.grid() == g {
        psi2
    } else {
        resampled = psi2.resample(g)?;
        &resampled
    };
    let n = g.n;
    let sum: C64 = (0..n)
        .map(|j| {
            let y = g.point(j);
            let wt = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            other.values()[j].conj() * psi1.values()[j] * (wt * y * y)
        })
        .sum();
    Ok((sum * g.spacing()).norm_sqr())
}

/// Quadrature budget for the tomographic right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TomographicSettings {
    /// Trapezoid nodes over the half-turn `θ ∈ [0, π)`.
    pub theta_nodes: usize,
    /// Radial cutoff of the characteristic functions.
    pub r_max: f64,
    pub r_panels: usize,
    pub x_panels: usize,
    /// Gauss–Legendre order per panel.
    pub order: usize,
    pub execution: Execution,
}

impl Default for TomographicSettings {
    fn default() -> Self {
        TomographicSettings { theta_nodes: 64, r_max: 16.0, r_panels: 8, x_panels: 48, order: 16, execution: Execution::default() }
    }
}

/// Tomographic form of `|⟨ψ₂|x²|ψ₁⟩|²`:
/// `(1/2π) ∫ w̃₁(X,μ,ν) w₂(−Y,μ,ν) e^{i(X+Y)} dX dY dμ dν`, with `w̃₁` the
/// (unnormalized) tomogram of `x²ψ₁`.
///
/// Writing `(μ, ν) = r(cos θ, sin θ)` and using homogeneity, the `X` and `Y`
/// integrals become characteristic functions `F(r, θ) = ∫ w(X, θ) e^{irX} dX`,
/// leaving `(1/2π) ∫₀^π dθ ∫ |r| F̃₁(r,θ) F₂(r,θ)* dr`. The `θ` integrand is
/// periodic, so the trapezoid rule converges spectrally.
pub fn state_extended_rhs_tomographic(
    psi1: &WaveFunction,
    psi2: &WaveFunction,
    settings: &TomographicSettings,
) -> Result<f64> {
    if settings.theta_nodes < 4 || settings.r_panels == 0 || settings.x_panels == 0 || settings.order < 2 {
        return Err(Error::Quadrature("tomographic quadrature budget is too small".into()));
    }
    let t1 = WaveTomogram::new(psi1.apply_position_squared()?);
    let t2 = WaveTomogram::new(psi2.clone());
    let rr = GaussRule::composite_legendre(settings.order, settings.r_panels, 0.0, settings.r_max);
    let rule_for = |t: &WaveTomogram| {
        let (a, b) = t.support(0.0);
        GaussRule::composite_legendre(settings.order, settings.x_panels, a, b)
    };
    let (x1, x2) = (rule_for(&t1), rule_for(&t2));
    let nth = settings.theta_nodes;
    let per_theta = try_map_range(settings.execution, nth, |k| -> Result<f64> {
        let theta = PI * k as f64 / nth as f64;
        let w1: Vec<f64> = x1.nodes.iter().zip(&x1.weights).map(|(&x, &wt)| wt * t1.density(x, theta)).collect();
        let w2: Vec<f64> = x2.nodes.iter().zip(&x2.weights).map(|(&x, &wt)| wt * t2.density(x, theta)).collect();
        let charf = |nodes: &[f64], w: &[f64], r: f64| -> C64 {
            nodes.iter().zip(w).map(|(&x, &wt)| C64::from_polar(wt, r * x)).sum()
        };
        let mut acc = 0.0;
        for (&r, &wr) in rr.nodes.iter().zip(&rr.weights) {
            let f1 = charf(&x1.nodes, &w1, r);
            let f2 = charf(&x2.nodes, &w2, r);
            // r < 0 contributes the complex conjugate
            acc += 2.0 * wr * r * (f1 * f2.conj()).re;
        }
        if acc.is_finite() {
            Ok(acc)
        } else {
            Err(Error::Quadrature(format!("non-finite radial integral at θ = {theta}")))
        }
    })?;
    let sum: f64 = per_theta.iter().sum();
    Ok(sum * (PI / nth as f64) / (2.0 * PI))
}

#[derive(Debug, Clone, Serialize)]
pub struct StateExtendedReport {
    pub lhs: f64,
    pub rhs_hilbert: f64,
    pub rhs_tomographic: f64,
    /// `|rhs_tomographic − rhs_hilbert|`.
    pub tomographic_deviation: f64,
    pub holds: bool,
}

/// Evaluates both sides of the state-extended uncertainty relation for the
/// position operator. A tomographic value that strays from the Hilbert-space
/// value by more than `1e-2` (relative) is surfaced as an error.
pub fn check_state_extended(
    psi1: &WaveFunction,
    psi2: &WaveFunction,
    settings: &TomographicSettings,
) -> Result<StateExtendedReport> {
    let lhs = state_extended_lhs(psi1, psi2)?;
    let rhs_hilbert = state_extended_rhs_hilbert(psi1, psi2)?;
    let rhs_tomographic = state_extended_rhs_tomographic(psi1, psi2, settings)?;
    let dev = (rhs_tomographic - rhs_hilbert).abs();
    let scale = rhs_hilbert.abs().max(1e-3 * lhs);
    if !(dev <= 1e-2 * scale) {
        return Err(Error::NumericalConsistency(format!(
            "tomographic right-hand side {rhs_tomographic:.9e} disagrees with Hilbert-space value {rhs_hilbert:.9e}"
        )));
    }
    Ok(StateExtendedReport {
        lhs,
        rhs_hilbert,
        rhs_tomographic,
        tomographic_deviation: dev,
        holds: lhs >= rhs_hilbert - 1e-9 && lhs >= rhs_tomographic - 1e-3,
    })
}

use serde::Serialize;

use super::{check_dim, eigen_decompose, unitary_tomogram, DensityMatrix, UnitaryMatrix};
use crate::error::Result;
use crate::probvec::{check_entropy_chain, mutual_information_embedded, shannon_entropy, ChainReport, ProbVec, StochasticMap};

/// Tolerance for the von Neumann bound.
pub const VN_TOL: f64 = 1e-9;
/// Tolerance for the tomographic information inequalities.
pub const INFO_TOL: f64 = 1e-10;

/// `S(ρ) = -Σ λ ln λ` over the eigenvalues.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(shannon_entropy(&eigen_decompose(rho)?.eigvals))
}

/// Portrait entropy chain of the tomogram `w(u)`.
pub fn check_tomogram_chain(rho: &DensityMatrix, u: &UnitaryMatrix, chain: &[StochasticMap]) -> Result<ChainReport> {
    check_entropy_chain(&unitary_tomogram(rho, u)?, chain)
}

#[derive(Debug, Clone, Serialize)]
pub struct VnBoundReport {
    pub s_vn: f64,
    /// Shannon entropy of `w(u0⁻¹)`; equals `s_vn`.
    pub shannon_at_eigenbasis: f64,
    pub portrait_entropies: Vec<f64>,
    pub chain_monotone: bool,
    pub holds: bool,
}

/// Von Neumann entropy as an upper bound on the portrait entropies of the
/// tomogram taken at `u = u0⁻¹ = u0†`.
pub fn check_vn_bound(rho: &DensityMatrix, chain: &[StochasticMap]) -> Result<VnBoundReport> {
    let eig = eigen_decompose(rho)?;
    let s_vn = shannon_entropy(&eig.eigvals);
    let w = unitary_tomogram(rho, &eig.u0.adjoint())?;
    let report = check_entropy_chain(&w, chain)?;
    let shannon = report.input_entropy;
    let bounded = report.entropies.iter().all(|&h| s_vn >= h - VN_TOL);
    Ok(VnBoundReport {
        s_vn,
        shannon_at_eigenbasis: shannon,
        holds: bounded && (shannon - s_vn).abs() <= VN_TOL,
        chain_monotone: report.monotone,
        portrait_entropies: report.entropies,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InfoReport {
    pub tomogram: ProbVec,
    pub information: f64,
    pub holds: bool,
}

fn info_report(w: ProbVec) -> Result<InfoReport> {
    let information = mutual_information_embedded(&w)?;
    Ok(InfoReport { tomogram: w, information, holds: information >= -INFO_TOL })
}

/// Tomographic information of a spin-3/2 state, with
/// `w = (w(3/2), w(1/2), w(-1/2), w(-3/2))`:
/// `w₄ ln w₄ − (w₂+w₃+w₄) ln(w₂+w₃+w₄) − (w₁+w₄) ln(w₁+w₄) ≥ 0`.
pub fn info_inequality_spin_three_halves(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<InfoReport> {
    check_dim(4, rho.dim())?;
    info_report(unitary_tomogram(rho, u)?)
}

/// The same information functional for two qubits, on the joint tomogram
/// ordered `(++, +-, -+, --)`. `u` may be a product `u1 ⊗ u2` or any 4x4
/// unitary.
pub fn info_inequality_two_qubit(rho12: &DensityMatrix, u: &UnitaryMatrix) -> Result<InfoReport> {
    check_dim(4, rho12.dim())?;
    info_report(unitary_tomogram(rho12, u)?)
}

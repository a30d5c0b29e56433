use nalgebra::DMatrix;
use serde::Serialize;

use super::{check_dim, eigen_decompose, DensityMatrix, Spin, SpinDirection, UnitaryMatrix, MATRIX_TOL};
use crate::error::{Error, Result};
use crate::probvec::ProbVec;

/// `w(m, u) = ⟨m| u ρ u† |m⟩`.
pub fn unitary_tomogram(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<ProbVec> {
    check_dim(rho.dim(), u.dim())?;
    let um = u.matrix();
    let r = rho.matrix();
    let d = rho.dim();
    // Only the diagonal of u ρ u† is needed: w_m = Σ_ab u_ma ρ_ab conj(u_mb).
    let ur = um * r;
    let w: Vec<f64> = (0..d).map(|m| (0..d).map(|b| (ur[(m, b)] * um[(m, b)].conj()).re).sum()).collect();
    to_probvec(w)
}

fn to_probvec(mut w: Vec<f64>) -> Result<ProbVec> {
    for x in w.iter_mut() {
        if *x < 0.0 && *x > -MATRIX_TOL {
            *x = 0.0;
        }
    }
    ProbVec::new(w)
}

/// Spin tomogram: distribution of the projection of the spin on `dir`.
///
/// With `R` the rotation taking `ẑ` onto `dir`, this is the unitary tomogram
/// at `u = R†`, i.e. `w(m, n) = ⟨m| R† ρ R |m⟩`.
pub fn spin_tomogram(rho: &DensityMatrix, dir: &SpinDirection) -> Result<ProbVec> {
    let spin = Spin::from_dim(rho.dim())?;
    let r = dir.rotation(spin)?;
    unitary_tomogram(rho, &r.adjoint())
}

/// Joint tomogram of a bipartite state under `u1 ⊗ u2`, row-major in `(m1, m2)`.
pub fn bipartite_tomogram(rho12: &DensityMatrix, u1: &UnitaryMatrix, u2: &UnitaryMatrix) -> Result<ProbVec> {
    check_dim(rho12.dim(), u1.dim() * u2.dim())?;
    unitary_tomogram(rho12, &u1.tensor(u2))
}

/// Elementwise squared modulus `|A|²_{jk} = |A_{jk}|²`.
pub fn squared_modulus(u: &UnitaryMatrix) -> DMatrix<f64> {
    u.matrix().map(|z| z.norm_sqr())
}

/// Both sides of `w(u) = |u u0|² ρ⃗`.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub lhs: ProbVec,
    pub rhs: ProbVec,
    pub max_deviation: f64,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Compares the tomogram from its definition with the spectral form
/// `|u u0|² ρ⃗` built from the eigen-decomposition of `ρ`.
pub fn eigen_tomogram_identity(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<IdentityReport> {
    let lhs = unitary_tomogram(rho, u)?;
    let eig = eigen_decompose(rho)?;
    let b = squared_modulus(&u.compose(&eig.u0)?);
    let lam = nalgebra::DVector::from_column_slice(eig.eigvals.components());
    let rhs_v = b * lam;
    let rhs = to_probvec(rhs_v.iter().copied().collect()).map_err(|e| Error::Decomposition(e.to_string()))?;
    let max_deviation = lhs
        .components()
        .iter()
        .zip(rhs.components())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(IdentityReport { lhs, rhs, max_deviation, matches: max_deviation < 1e-9 })
}

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{check_dim, hermitize, unitary_tomogram, CMatrix, DensityMatrix, UnitaryMatrix, C64};
use crate::error::{Error, Result};
use crate::probvec::ProbVec;

/// Eigenvalues of the least-squares estimate above this (negative) bound are
/// clipped to zero; anything lower is reported as an error.
pub const PSD_CLIP: f64 = -1e-6;

/// One measured tomogram together with the unitary it was taken at.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TomogramSample {
    pub unitary: UnitaryMatrix,
    pub probvec: ProbVec,
}

/// Tomograms of `rho` at each of the given unitaries.
pub fn tomogram_samples(rho: &DensityMatrix, unitaries: &[UnitaryMatrix]) -> Result<Vec<TomogramSample>> {
    unitaries
        .iter()
        .map(|u| Ok(TomogramSample { unitary: u.clone(), probvec: unitary_tomogram(rho, u)? }))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Reconstruction {
    pub rho: DensityMatrix,
    /// Largest absolute misfit between the measured and the predicted tomograms.
    pub residual: f64,
    /// Whether small negative eigenvalues were clipped.
    pub clipped: bool,
}

/// Real parameter index layout: `d` diagonal entries, then `(Re, Im)` of each
/// `ρ_ab` with `a < b`.
fn design_row(u: &CMatrix, m: usize, d: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(d * d);
    for a in 0..d {
        row.push(u[(m, a)].norm_sqr());
    }
    for a in 0..d {
        for b in a + 1..d {
            let z = u[(m, a)] * u[(m, b)].conj();
            row.push(2.0 * z.re);
            row.push(-2.0 * z.im);
        }
    }
    row
}

fn unpack(x: &DVector<f64>, d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for a in 0..d {
        m[(a, a)] = C64::new(x[a], 0.0);
    }
    let mut k = d;
    for a in 0..d {
        for b in a + 1..d {
            let z = C64::new(x[k], x[k + 1]);
            m[(a, b)] = z;
            m[(b, a)] = z.conj();
            k += 2;
        }
    }
    m
}

/// Linear-inversion estimate of `ρ` from tomograms at several unitaries.
///
/// The Hermitian unknown is written in `d²` real parameters; every tomogram
/// entry and the trace give one linear equation. The system is solved by SVD
/// least squares, and is rejected when the design matrix has rank below `d²`.
pub fn reconstruct_density(samples: &[TomogramSample]) -> Result<Reconstruction> {
    let first = samples.first().ok_or(Error::InformationallyIncomplete { rank: 0, needed: 1 })?;
    let d = first.unitary.dim();
    let needed = d * d;
    let rows = samples.len() * d + 1;
    let mut a = DMatrix::<f64>::zeros(rows, needed);
    let mut rhs = DVector::<f64>::zeros(rows);
    for (s, sample) in samples.iter().enumerate() {
        check_dim(d, sample.unitary.dim())?;
        check_dim(d, sample.probvec.dim())?;
        for m in 0..d {
            let r = s * d + m;
            for (k, v) in design_row(sample.unitary.matrix(), m, d).into_iter().enumerate() {
                a[(r, k)] = v;
            }
            rhs[r] = sample.probvec.components()[m];
        }
    }
    for k in 0..d {
        a[(rows - 1, k)] = 1.0;
    }
    rhs[rows - 1] = 1.0;

    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10 * smax.max(1.0)).count();
    if rank < needed {
        return Err(Error::InformationallyIncomplete { rank, needed });
    }
    let x = svd.solve(&rhs, 1e-10 * smax).map_err(|e| Error::Decomposition(e.to_string()))?;
    let residual = (&a * &x - &rhs).amax();

    let mut m = hermitize(unpack(&x, d));
    let tr = m.trace().re;
    m /= C64::new(tr, 0.0);
    let eig = m.clone().symmetric_eigen();
    let min_ev = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let mut clipped = false;
    if min_ev < PSD_CLIP {
        return Err(Error::InvalidDensity(format!(
            "reconstructed matrix has eigenvalue {min_ev:.3e}; tomograms are inconsistent"
        )));
    }
    if min_ev < 0.0 {
        clipped = true;
        let vals = eig.eigenvalues.map(|v| v.max(0.0));
        let total: f64 = vals.iter().sum();
        let diag = CMatrix::from_diagonal(&vals.map(|v| C64::new(v / total, 0.0)));
        m = hermitize(&eig.eigenvectors * diag * eig.eigenvectors.adjoint());
    }
    Ok(Reconstruction { rho: DensityMatrix::new(m)?, residual, clipped })
}

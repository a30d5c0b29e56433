//! Qudit states, unitary and spin tomograms, and the entropy bounds they obey.
//!
//! Basis states are ordered by descending spin projection,
//! `m = j, j-1, …, -j`, so index `k` carries `m = j - k`. Bipartite indices
//! are row-major in `(m1, m2)`.

mod bounds;
mod reconstruct;
mod tomogram;
mod wigner;

pub use bounds::{
    check_tomogram_chain, check_vn_bound, info_inequality_spin_three_halves, info_inequality_two_qubit,
    von_neumann_entropy, InfoReport, VnBoundReport,
};
pub use reconstruct::{reconstruct_density, tomogram_samples, Reconstruction, TomogramSample};
pub use tomogram::{
    bipartite_tomogram, eigen_tomogram_identity, spin_tomogram, squared_modulus, unitary_tomogram,
    IdentityReport,
};
pub use wigner::{spin_matrices, wigner_d_small, wigner_D, Spin, SpinDirection};

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probvec::ProbVec;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Tolerance for Hermiticity, trace and positivity of density matrices and
/// for unitarity.
pub const MATRIX_TOL: f64 = 1e-10;

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl MatrixRepr {
    fn from_matrix(m: &CMatrix) -> Self {
        let d = m.nrows();
        MatrixRepr {
            dim: d,
            re: (0..d).map(|r| (0..d).map(|c| m[(r, c)].re).collect()).collect(),
            im: (0..d).map(|r| (0..d).map(|c| m[(r, c)].im).collect()).collect(),
        }
    }

    fn into_matrix(self) -> Result<CMatrix> {
        let d = self.dim;
        let shape_ok = self.re.len() == d
            && self.im.len() == d
            && self.re.iter().chain(&self.im).all(|row| row.len() == d);
        if !shape_ok || d == 0 {
            return Err(Error::Parse(format!("matrix arrays are not {d}x{d}")));
        }
        Ok(CMatrix::from_fn(d, d, |r, c| C64::new(self.re[r][c], self.im[r][c])))
    }
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct DensityMatrix {
    m: CMatrix,
}

impl TryFrom<MatrixRepr> for DensityMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        DensityMatrix::new(r.into_matrix()?)
    }
}

impl From<DensityMatrix> for MatrixRepr {
    fn from(d: DensityMatrix) -> Self {
        MatrixRepr::from_matrix(&d.m)
    }
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidDensity(format!("matrix is {}x{}", m.nrows(), m.ncols())));
        }
        let herm = max_abs(&(&m - m.adjoint()));
        if herm > MATRIX_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > MATRIX_TOL || tr.im.abs() > MATRIX_TOL {
            return Err(Error::InvalidDensity(format!("trace is {tr}")));
        }
        let min_ev = m.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min_ev < -MATRIX_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min_ev:.3e}")));
        }
        Ok(DensityMatrix { m })
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > MATRIX_TOL {
            return Err(Error::InvalidDensity(format!("state vector has norm² {norm}")));
        }
        let d = psi.len();
        DensityMatrix::new(CMatrix::from_fn(d, d, |r, c| psi[r] * psi[c].conj()))
    }

    /// Diagonal density matrix with the given populations.
    pub fn diagonal(p: &ProbVec) -> Self {
        let d = p.dim();
        let mut m = CMatrix::zeros(d, d);
        for (k, &x) in p.components().iter().enumerate() {
            m[(k, k)] = C64::new(x, 0.0);
        }
        DensityMatrix { m }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::diagonal(&ProbVec::uniform(d))
    }

    /// Ginibre ensemble: `G G† / tr(G G†)` with standard complex normal `G`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Self {
        let g = ginibre(rng, d);
        let mut m = &g * g.adjoint();
        let tr = m.trace().re;
        m /= C64::new(tr, 0.0);
        DensityMatrix { m: hermitize(m) }
    }

    /// Haar-random pure state.
    pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Self {
        let mut psi: Vec<C64> = (0..d).map(|_| complex_normal(rng)).collect();
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|z| *z /= n);
        DensityMatrix { m: CMatrix::from_fn(d, d, |r, c| psi[r] * psi[c].conj()) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { m: self.m.kronecker(&other.m) }
    }

    /// Conjugation `u ρ u†`; the result is again a density matrix.
    pub fn conjugated(&self, u: &UnitaryMatrix) -> Result<DensityMatrix> {
        check_dim(self.dim(), u.dim())?;
        Ok(DensityMatrix { m: hermitize(&u.m * &self.m * u.m.adjoint()) })
    }

    pub fn frobenius_distance(&self, other: &DensityMatrix) -> f64 {
        (&self.m - &other.m).norm()
    }
}

/// Square matrix with `u u† = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct UnitaryMatrix {
    m: CMatrix,
}

impl TryFrom<MatrixRepr> for UnitaryMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        UnitaryMatrix::new(r.into_matrix()?)
    }
}

impl From<UnitaryMatrix> for MatrixRepr {
    fn from(u: UnitaryMatrix) -> Self {
        MatrixRepr::from_matrix(&u.m)
    }
}

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::NotUnitary(f64::INFINITY));
        }
        let dev = unitarity_defect(&m);
        if dev > MATRIX_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(UnitaryMatrix { m })
    }

    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        UnitaryMatrix { m }
    }

    pub fn identity(d: usize) -> Self {
        UnitaryMatrix { m: CMatrix::identity(d, d) }
    }

    /// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
    /// `diag(R)` moved into `Q`.
    pub fn haar<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Self {
        let qr = ginibre(rng, d).qr();
        let r = qr.r();
        let mut q = qr.q();
        for c in 0..d {
            let z = r[(c, c)];
            let phase = if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) };
            for row in 0..d {
                q[(row, c)] *= phase;
            }
        }
        UnitaryMatrix { m: q }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix { m: self.m.adjoint() }
    }

    pub fn tensor(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix { m: self.m.kronecker(&other.m) }
    }

    pub fn compose(&self, other: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        check_dim(self.dim(), other.dim())?;
        Ok(UnitaryMatrix { m: &self.m * &other.m })
    }

    /// Max elementwise deviation of `u u†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.m)
    }
}

fn unitarity_defect(m: &CMatrix) -> f64 {
    let d = m.nrows();
    max_abs(&(m * m.adjoint() - CMatrix::identity(d, d)))
}

/// Eigenvalues (descending) and the unitary whose columns are the matching
/// eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigvals: ProbVec,
    pub u0: UnitaryMatrix,
}

/// Spectral decomposition `ρ = u0 diag(λ) u0†`.
///
/// Each eigenvector is phase-fixed so its first component above `1e-12` in
/// modulus is real positive; ties in the eigenvalue are ordered by the index
/// of that component.
pub fn eigen_decompose(rho: &DensityMatrix) -> Result<EigenDecomposition> {
    let d = rho.dim();
    let eig = rho.m.clone().symmetric_eigen();
    let lead = |c: usize| (0..d).find(|&r| eig.eigenvectors[(r, c)].norm() > 1e-12).unwrap_or(0);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        let (la, lb) = (eig.eigenvalues[a], eig.eigenvalues[b]);
        if (la - lb).abs() <= 1e-12 {
            lead(a).cmp(&lead(b))
        } else {
            lb.total_cmp(&la)
        }
    });
    let mut u0 = CMatrix::zeros(d, d);
    let mut vals = Vec::with_capacity(d);
    for (k, &c) in order.iter().enumerate() {
        let l = lead(c);
        let z = eig.eigenvectors[(l, c)];
        let phase = z.conj() / z.norm();
        for r in 0..d {
            u0[(r, k)] = eig.eigenvectors[(r, c)] * phase;
        }
        vals.push(eig.eigenvalues[c]);
    }
    for v in vals.iter_mut() {
        if *v < 0.0 && *v > -MATRIX_TOL {
            *v = 0.0;
        }
    }
    let s: f64 = vals.iter().sum();
    vals.iter_mut().for_each(|v| *v /= s);
    let eigvals = ProbVec::new(vals).map_err(|e| Error::Decomposition(e.to_string()))?;
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        d,
        eigvals.components().iter().map(|&x| C64::new(x, 0.0)),
    ));
    let residual = max_abs(&(&u0 * diag * u0.adjoint() - &rho.m));
    if residual > 1e-9 {
        return Err(Error::Decomposition(format!("reconstruction residual {residual:.3e}")));
    }
    Ok(EigenDecomposition { eigvals, u0: UnitaryMatrix { m: u0 } })
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

fn hermitize(m: CMatrix) -> CMatrix {
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    C64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| complex_normal(rng))
}

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{CMatrix, UnitaryMatrix, C64};
use crate::error::{Error, Result};

/// Largest supported `2j`.
pub const MAX_TWICE_SPIN: u32 = 25;

/// Spin quantum number `j`, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub fn new(j: f64) -> Result<Self> {
        let t = 2.0 * j;
        if !t.is_finite() || t < 0.0 || (t - t.round()).abs() > 1e-12 || t.round() as u32 > MAX_TWICE_SPIN {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Spin { twice: t.round() as u32 })
    }

    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice > MAX_TWICE_SPIN {
            return Err(Error::InvalidSpin(twice as f64 / 2.0));
        }
        Ok(Spin { twice })
    }

    /// Spin whose multiplet has `d = 2j + 1` states.
    pub fn from_dim(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSpin(-0.5));
        }
        Self::from_twice(d as u32 - 1)
    }

    pub fn j(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    /// Projection `m` carried by basis index `k`.
    pub fn m(self, k: usize) -> f64 {
        self.j() - k as f64
    }
}

fn factorials() -> [f64; MAX_TWICE_SPIN as usize + 1] {
    let mut f = [1.0; MAX_TWICE_SPIN as usize + 1];
    for k in 1..f.len() {
        f[k] = f[k - 1] * k as f64;
    }
    f
}

/// Wigner small-d matrix `d^j_{m'm}(β) = ⟨j m'| exp(-iβ J_y) |j m⟩`, rows and
/// columns ordered by descending projection.
pub fn wigner_d_small(spin: Spin, beta: f64) -> DMatrix<f64> {
    let n = spin.twice as i64;
    let f = factorials();
    let fact = |k: i64| f[k as usize];
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    DMatrix::from_fn(spin.dim(), spin.dim(), |r, col| {
        let (r, col) = (r as i64, col as i64);
        let pre = (fact(n - r) * fact(r) * fact(n - col) * fact(col)).sqrt();
        let lo = 0.max(r - col);
        let hi = (n - col).min(r);
        (lo..=hi)
            .map(|k| {
                let sign = if (col - r + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let den = fact(n - col - k) * fact(k) * fact(col - r + k) * fact(r - k);
                sign * pre / den * c.powi((n + r - col - 2 * k) as i32) * s.powi((col - r + 2 * k) as i32)
            })
            .sum()
    })
}

/// Irreducible SU(2) representation matrix
/// `D^j(α, β, γ) = exp(-iα J_z) exp(-iβ J_y) exp(-iγ J_z)` (z-y-z Euler angles).
#[allow(non_snake_case)]
pub fn wigner_D(spin: Spin, euler: (f64, f64, f64)) -> Result<UnitaryMatrix> {
    let (alpha, beta, gamma) = euler;
    if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
        return Err(Error::InvalidDirection(format!("non-finite Euler angles {euler:?}")));
    }
    let d = wigner_d_small(spin, beta);
    let m = CMatrix::from_fn(spin.dim(), spin.dim(), |r, c| {
        let phase = -(spin.m(r) * alpha + spin.m(c) * gamma);
        C64::from_polar(d[(r, c)], phase)
    });
    Ok(UnitaryMatrix::new_unchecked(m))
}

/// Angular momentum matrices `(J_x, J_y, J_z)` in the descending basis.
pub fn spin_matrices(spin: Spin) -> (CMatrix, CMatrix, CMatrix) {
    let d = spin.dim();
    let j = spin.j();
    let mut jp = CMatrix::zeros(d, d);
    for k in 1..d {
        // J+ |m⟩ = sqrt(j(j+1) - m(m+1)) |m+1⟩, and m+1 sits at index k-1.
        let m = spin.m(k);
        jp[(k - 1, k)] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * C64::new(0.5, 0.0);
    let jy = (&jp - &jm) * C64::new(0.0, -0.5);
    let jz = CMatrix::from_fn(d, d, |r, c| if r == c { C64::new(spin.m(r), 0.0) } else { C64::new(0.0, 0.0) });
    (jx, jy, jz)
}

/// Measurement direction for a spin tomogram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinDirection {
    /// Unit vector on the sphere.
    Axis([f64; 3]),
    /// z-y-z Euler angles of the rotation taking `ẑ` to the axis.
    Euler { alpha: f64, beta: f64, gamma: f64 },
}

impl SpinDirection {
    pub fn axis(n: [f64; 3]) -> Result<Self> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDirection(format!("|n| = {norm}, expected 1")));
        }
        Ok(SpinDirection::Axis(n))
    }

    /// Unit vector from polar angle `theta` and azimuth `phi`.
    pub fn spherical(theta: f64, phi: f64) -> Self {
        SpinDirection::Axis([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()])
    }

    /// Euler angles; an axis with spherical angles `(θ, φ)` maps to `(φ, θ, 0)`.
    pub fn euler_angles(&self) -> (f64, f64, f64) {
        match *self {
            SpinDirection::Axis(n) => {
                let theta = n[2].clamp(-1.0, 1.0).acos();
                let phi = n[1].atan2(n[0]);
                (phi, theta, 0.0)
            }
            SpinDirection::Euler { alpha, beta, gamma } => (alpha, beta, gamma),
        }
    }

    /// The rotation `R` taking the quantization axis to this direction.
    pub fn rotation(&self, spin: Spin) -> Result<UnitaryMatrix> {
        wigner_D(spin, self.euler_angles())
    }
}

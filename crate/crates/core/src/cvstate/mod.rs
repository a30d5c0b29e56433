//! Continuous-variable states: wavefunctions on a grid, symplectic and
//! optical tomograms, and the state-extended uncertainty relation for the
//! position operator.
//!
//! Units have `ħ = 1`; the vacuum is `π^{-1/4} e^{-y²/2}`, so its quadrature
//! variance is `1/2`. Quadratures are `X_Θ = x cos Θ + p sin Θ`.

mod tomogram;
mod uncertainty;

pub use tomogram::{
    export_tomogram_csv, tomogram_from_wavefunction, AnalyticTomogram, GaussianEnvelope, OpticalTomogram,
    WaveTomogram, NU_MIN,
};
pub use uncertainty::{
    check_state_extended, second_moment, state_extended_lhs, state_extended_rhs_hilbert,
    state_extended_rhs_tomographic, StateExtendedReport, TomographicSettings,
};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::C64;

/// Normalization tolerance of a wavefunction on its grid.
pub const NORM_TOL: f64 = 1e-8;
/// Largest supported Fock number for tagged states.
pub const MAX_FOCK: u32 = 10;
/// Zero padding factor used for the spectral representation.
const PAD: usize = 4;

/// Uniform grid of `n` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { min: -12.0, max: 12.0, n: 4096 }
    }
}

impl Grid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        let g = Grid { min, max, n };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.min >= self.max || self.n < 16 {
            return Err(Error::InvalidWaveFunction(format!(
                "grid [{}, {}] with {} points is not usable",
                self.min, self.max, self.n
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.min + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.point(j))
    }

    /// Same interval with twice the resolution.
    pub fn refined(&self) -> Grid {
        Grid { n: 2 * self.n - 1, ..*self }
    }

    /// Largest `|y|` on the grid.
    pub fn half_width(&self) -> f64 {
        self.min.abs().max(self.max.abs())
    }
}

/// Closed-form single-mode states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateTag {
    Vacuum,
    Fock {
        n: u32,
    },
    Coherent {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    /// Squeezed vacuum `S(r e^{iφ})|0⟩`; `φ = 0` squeezes the position quadrature.
    Squeezed {
        r: f64,
        #[serde(default)]
        phi: f64,
    },
    /// Thermal state with mean photon number `nbar`. Mixed, so it has a
    /// tomogram but no wavefunction.
    Thermal {
        nbar: f64,
    },
}

impl StateTag {
    pub fn validate(self) -> Result<Self> {
        let ok = match self {
            StateTag::Vacuum => true,
            StateTag::Fock { n } => n <= MAX_FOCK,
            StateTag::Coherent { re, im } => re.is_finite() && im.is_finite(),
            StateTag::Squeezed { r, phi } => r.is_finite() && r >= 0.0 && phi.is_finite(),
            StateTag::Thermal { nbar } => nbar.is_finite() && nbar >= 0.0,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::UnsupportedState(self.to_string()))
        }
    }

    pub fn is_gaussian(self) -> bool {
        !matches!(self, StateTag::Fock { n } if n > 0)
    }
}

impl fmt::Display for StateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StateTag::Vacuum => write!(f, "vacuum"),
            StateTag::Fock { n } => write!(f, "fock:{n}"),
            StateTag::Coherent { re, im } => write!(f, "coherent:{re},{im}"),
            StateTag::Squeezed { r, phi } => write!(f, "squeezed:{r},{phi}"),
            StateTag::Thermal { nbar } => write!(f, "thermal:{nbar}"),
        }
    }
}

impl FromStr for StateTag {
    type Err = Error;

    /// Parses `vacuum`, `fock:n`, `coherent:re[,im]`, `squeezed:r[,phi]` and
    /// `thermal:nbar`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedState(s.to_string());
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), a.split(',').map(|x| x.trim().parse::<f64>()).collect::<Vec<_>>()),
            None => (s.trim(), Vec::new()),
        };
        if args.iter().any(|a| a.is_err()) {
            return Err(bad());
        }
        let a: Vec<f64> = args.into_iter().map(|x| x.unwrap()).collect();
        let tag = match (name, a.as_slice()) {
            ("vacuum", []) => StateTag::Vacuum,
            ("fock", [n]) if *n >= 0.0 && n.fract() == 0.0 => StateTag::Fock { n: *n as u32 },
            ("coherent", [re]) => StateTag::Coherent { re: *re, im: 0.0 },
            ("coherent", [re, im]) => StateTag::Coherent { re: *re, im: *im },
            ("squeezed", [r]) => StateTag::Squeezed { r: *r, phi: 0.0 },
            ("squeezed", [r, phi]) => StateTag::Squeezed { r: *r, phi: *phi },
            ("thermal", [nbar]) => StateTag::Thermal { nbar: *nbar },
            _ => return Err(bad()),
        };
        tag.validate()
    }
}

/// Hermite functions `ψ_0(y) … ψ_nmax(y)` by the normalized three-term recurrence.
pub fn hermite_functions(nmax: usize, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    let p0 = PI.powf(-0.25) * (-0.5 * y * y).exp();
    out.push(p0);
    if nmax >= 1 {
        out.push(std::f64::consts::SQRT_2 * y * p0);
    }
    for n in 1..nmax {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * y * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Spectrum `ψ̂(k) = ∫ ψ(y) e^{-iky} dy` on a uniform `k` grid, restricted
/// to where it is non-negligible.
#[derive(Debug)]
pub(crate) struct Spectrum {
    pub dk: f64,
    pub k: Vec<f64>,
    pub values: Vec<C64>,
}

/// Complex wavefunction sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct WaveFunction {
    grid: Grid,
    values: Arc<Vec<C64>>,
    tag: Option<StateTag>,
    support: (usize, usize),
    spectrum: Arc<OnceLock<Spectrum>>,
}

/// File form of a wavefunction: either explicit samples or a state tag.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum WaveFunctionSpec {
    Samples { grid: Grid, re: Vec<f64>, im: Vec<f64> },
    Tag(StateTag),
}

fn trapezoid_norm(values: &[C64], h: f64) -> f64 {
    let n = values.len();
    let inner: f64 = values.iter().map(|z| z.norm_sqr()).sum();
    h * (inner - 0.5 * (values[0].norm_sqr() + values[n - 1].norm_sqr()))
}

impl WaveFunction {
    /// Validated wavefunction: normalized on the grid within `1e-8`, with
    /// negligible mass near both grid ends and in the top of the resolvable
    /// frequency band.
    pub fn new(grid: Grid, values: Vec<C64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.n {
            return Err(Error::InvalidWaveFunction(format!("{} samples for a {}-point grid", values.len(), grid.n)));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidWaveFunction("non-finite sample".into()));
        }
        let psi = Self::unchecked(grid, values, None);
        psi.check_tails(1e-10)?;
        psi.check_resolution()?;
        let norm = psi.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidWaveFunction(format!("norm² on the grid is {norm:.12}, expected 1")));
        }
        Ok(psi)
    }

    pub(crate) fn unchecked(grid: Grid, values: Vec<C64>, tag: Option<StateTag>) -> Self {
        let peak = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let cut = 1e-18 * peak;
        let lo = values.iter().position(|z| z.norm() > cut).unwrap_or(0);
        let hi = values.iter().rposition(|z| z.norm() > cut).unwrap_or(0);
        WaveFunction { grid, values: Arc::new(values), tag, support: (lo, hi), spectrum: Arc::new(OnceLock::new()) }
    }

    /// Samples a tagged pure state on `grid`.
    pub fn from_tag(tag: StateTag, grid: Grid) -> Result<Self> {
        let tag = tag.validate()?;
        grid.validate()?;
        let values: Vec<C64> = match tag {
            StateTag::Vacuum => grid.points().map(|y| C64::new(hermite_functions(0, y)[0], 0.0)).collect(),
            StateTag::Fock { n } => {
                grid.points().map(|y| C64::new(hermite_functions(n as usize, y)[n as usize], 0.0)).collect()
            }
            StateTag::Coherent { re, im } => {
                let (x0, p0) = (std::f64::consts::SQRT_2 * re, std::f64::consts::SQRT_2 * im);
                grid.points()
                    .map(|y| C64::from_polar(PI.powf(-0.25) * (-0.5 * (y - x0).powi(2)).exp(), p0 * y))
                    .collect()
            }
            StateTag::Squeezed { r, phi } => {
                let e = C64::from_polar(1.0, phi);
                let c = (C64::new(r.cosh(), 0.0) + e * r.sinh()) / (C64::new(r.cosh(), 0.0) - e * r.sinh());
                let pre = (c.re / PI).powf(0.25);
                grid.points().map(|y| (c * (-0.5 * y * y)).exp() * pre).collect()
            }
            StateTag::Thermal { .. } => {
                return Err(Error::UnsupportedState(format!("{tag} is mixed and has no wavefunction")))
            }
        };
        let mut psi = Self::new(grid, values)?;
        psi.tag = Some(tag);
        Ok(psi)
    }

    /// Finite superposition `Σ c_n |n⟩`; the coefficients are normalized.
    pub fn fock_superposition(coeffs: &[C64], grid: Grid) -> Result<Self> {
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if coeffs.is_empty() || coeffs.len() > MAX_FOCK as usize + 1 || norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidWaveFunction("unusable Fock coefficients".into()));
        }
        grid.validate()?;
        let nmax = coeffs.len() - 1;
        let values = grid
            .points()
            .map(|y| {
                let h = hermite_functions(nmax, y);
                coeffs.iter().zip(&h).map(|(c, &f)| c * f).sum::<C64>() / norm
            })
            .collect();
        Self::new(grid, values)
    }

    /// Random superposition of Fock states up to a random degree `≤ max_degree`,
    /// with complex Gaussian coefficients.
    pub fn random_fock_superposition<R: Rng + ?Sized>(rng: &mut R, max_degree: usize, grid: Grid) -> Result<Self> {
        let deg = rng.random_range(0..=max_degree.min(MAX_FOCK as usize));
        let coeffs: Vec<C64> =
            (0..=deg).map(|_| C64::new(crate::random::normal(rng), crate::random::normal(rng))).collect();
        Self::fock_superposition(&coeffs, grid)
    }

    /// Builds a wavefunction from its file form; tags are sampled on `grid`.
    pub fn from_spec(spec: WaveFunctionSpec, grid: Grid) -> Result<Self> {
        match spec {
            WaveFunctionSpec::Tag(tag) => Self::from_tag(tag, grid),
            WaveFunctionSpec::Samples { grid, re, im } => {
                if re.len() != im.len() {
                    return Err(Error::InvalidWaveFunction("re and im lengths differ".into()));
                }
                Self::new(grid, re.into_iter().zip(im).map(|(a, b)| C64::new(a, b)).collect())
            }
        }
    }

    pub fn from_json(text: &str, grid: Grid) -> Result<Self> {
        let spec: WaveFunctionSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("wavefunction JSON: {e}")))?;
        Self::from_spec(spec, grid)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn tag(&self) -> Option<StateTag> {
        self.tag
    }

    /// `∫|ψ|² dy` by the trapezoid rule.
    pub fn norm_sqr(&self) -> f64 {
        trapezoid_norm(&self.values, self.grid.spacing())
    }

    /// Index range outside of which `|ψ|` is below `1e-18` of its peak.
    pub(crate) fn support(&self) -> (usize, usize) {
        self.support
    }

    fn edge_mass(&self, weight: impl Fn(f64) -> f64) -> (f64, f64) {
        let h = self.grid.spacing();
        let m = (self.grid.n / 16).max(1);
        let total: f64 = self.grid.points().zip(self.values.iter()).map(|(y, z)| weight(y) * z.norm_sqr()).sum();
        let edge: f64 = (0..m)
            .chain(self.grid.n - m..self.grid.n)
            .map(|j| weight(self.grid.point(j)) * self.values[j].norm_sqr())
            .sum();
        (h * edge, h * total)
    }

    fn check_tails(&self, tol: f64) -> Result<()> {
        let (edge, total) = self.edge_mass(|_| 1.0);
        if edge > tol * total {
            return Err(Error::GridTooNarrow(format!(
                "mass {edge:.3e} in the outer sixteenth of the grid on each side exceeds {tol:.0e}"
            )));
        }
        Ok(())
    }

    fn check_resolution(&self) -> Result<()> {
        let n = self.grid.n;
        let mut buf: Vec<C64> = self.values.to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let total: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
        // frequencies within the top eighth of the band on either side
        let lo = n / 2 - n / 16;
        let hi = n / 2 + n / 16;
        let high: f64 = buf[lo..hi.min(n)].iter().map(|z| z.norm_sqr()).sum();
        if high > 1e-10 * total {
            return Err(Error::GridTooNarrow(format!(
                "grid spacing {:.3e} does not resolve the wavefunction",
                self.grid.spacing()
            )));
        }
        Ok(())
    }

    pub(crate) fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| {
            let n = self.grid.n;
            let big = PAD * n;
            let h = self.grid.spacing();
            let mut buf = vec![C64::new(0.0, 0.0); big];
            buf[..n].copy_from_slice(&self.values);
            FftPlanner::new().plan_fft_forward(big).process(&mut buf);
            let dk = 2.0 * PI / (big as f64 * h);
            let mut pairs: Vec<(f64, C64)> = (0..big)
                .map(|m| {
                    let signed = if m < big / 2 { m as f64 } else { m as f64 - big as f64 };
                    let k = signed * dk;
                    (k, buf[m] * C64::from_polar(h, -k * self.grid.min))
                })
                .collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let peak = pairs.iter().map(|p| p.1.norm()).fold(0.0, f64::max);
            let keep = |p: &(f64, C64)| p.1.norm() > 1e-18 * peak;
            let lo = pairs.iter().position(keep).unwrap_or(0);
            let hi = pairs.iter().rposition(keep).unwrap_or(0);
            let (k, values) = pairs[lo..=hi].iter().copied().unzip();
            Spectrum { dk, k, values }
        })
    }

    /// `ψ(y)` at an arbitrary point by band-limited interpolation; zero off the grid.
    pub fn value_at(&self, y: f64) -> C64 {
        if y < self.grid.min || y > self.grid.max {
            return C64::new(0.0, 0.0);
        }
        let s = self.spectrum();
        let sum: C64 = s.k.iter().zip(&s.values).map(|(&k, &v)| v * C64::from_polar(1.0, k * y)).sum();
        sum * (s.dk / (2.0 * PI))
    }

    /// Samples on another grid by band-limited interpolation.
    pub fn resample(&self, grid: Grid) -> Result<Self> {
        grid.validate()?;
        if grid.max <= self.grid.min || grid.min >= self.grid.max {
            return Err(Error::InvalidWaveFunction("grids have disjoint supports".into()));
        }
        let values = grid.points().map(|y| self.value_at(y)).collect();
        let mut out = Self::new(grid, values)?;
        out.tag = self.tag;
        Ok(out)
    }

    /// `φ(y) = y² ψ(y)`, not renormalized (`⟨φ|φ⟩ = ⟨x⁴⟩`).
    pub fn apply_position_squared(&self) -> Result<Self> {
        let (edge, total) = self.edge_mass(|y| y.powi(4));
        if edge > 1e-8 * total {
            return Err(Error::GridTooNarrow(format!("y⁴|ψ|² has tail mass {edge:.3e} near the grid ends")));
        }
        let values = self.grid.points().zip(self.values.iter()).map(|(y, z)| z * (y * y)).collect();
        Ok(Self::unchecked(self.grid, values, None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::draw_rng;

    #[test]
    fn tag_parsing_round_trip() {
        for s in ["vacuum", "fock:3", "coherent:1,-0.5", "squeezed:0.3,0", "thermal:0.5"] {
            let t: StateTag = s.parse().unwrap();
            assert_eq!(t.to_string().parse::<StateTag>().unwrap(), t);
        }
        assert_eq!("coherent:1.0".parse::<StateTag>().unwrap(), StateTag::Coherent { re: 1.0, im: 0.0 });
        for bad in ["fock:11", "fock:1.5", "cat:1", "squeezed:-1", "coherent:x", "vacuum:1"] {
            assert!(bad.parse::<StateTag>().is_err(), "{bad}");
        }
        let t: StateTag = serde_json::from_str(r#"{"tag":"fock","n":1}"#).unwrap();
        assert_eq!(t, StateTag::Fock { n: 1 });
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let g = crate::quad::GaussRule::composite_legendre(20, 40, -14.0, 14.0);
        for a in 0..=10 {
            for b in 0..=10 {
                let v = g.integrate(|y| {
                    let h = hermite_functions(10, y);
                    h[a] * h[b]
                });
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-12, "{a} {b} {v}");
            }
        }
    }

    #[test]
    fn tagged_states_are_normalized_on_default_grid() {
        for t in ["vacuum", "fock:10", "coherent:2,1", "squeezed:0.8,0", "squeezed:0.8,2"] {
            let psi = WaveFunction::from_tag(t.parse().unwrap(), Grid::default()).unwrap();
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-12, "{t}");
        }
        assert!(WaveFunction::from_tag(StateTag::Thermal { nbar: 1.0 }, Grid::default()).is_err());
    }

    #[test]
    fn narrow_and_coarse_grids_are_rejected() {
        let narrow = Grid::new(-3.0, 3.0, 512).unwrap();
        assert!(matches!(WaveFunction::from_tag(StateTag::Fock { n: 4 }, narrow), Err(Error::GridTooNarrow(_))));
        let coarse = Grid::new(-12.0, 12.0, 40).unwrap();
        assert!(matches!(
            WaveFunction::from_tag(StateTag::Coherent { re: 0.0, im: 4.0 }, coarse),
            Err(Error::GridTooNarrow(_)) | Err(Error::InvalidWaveFunction(_))
        ));
        let g = Grid::default();
        let bad = WaveFunction::from_tag(StateTag::Vacuum, g).unwrap().values().iter().map(|z| z * 1.01).collect();
        assert!(matches!(WaveFunction::new(g, bad), Err(Error::InvalidWaveFunction(_))));
    }

    #[test]
    fn interpolation_and_resampling() {
        let psi = WaveFunction::from_tag(StateTag::Coherent { re: 0.5, im: -0.7 }, Grid::default()).unwrap();
        for y in [-2.3456, 0.1, 1.98765] {
            let x0 = std::f64::consts::SQRT_2 * 0.5;
            let p0 = -std::f64::consts::SQRT_2 * 0.7;
            let exact = C64::from_polar(PI.powf(-0.25) * (-0.5 * (y - x0) * (y - x0)).exp(), p0 * y);
            assert!((psi.value_at(y) - exact).norm() < 1e-12);
        }
        let other = psi.resample(Grid::new(-10.0, 11.0, 3001).unwrap()).unwrap();
        assert!((other.norm_sqr() - 1.0).abs() < 1e-10);
        assert!(psi.resample(Grid::new(20.0, 30.0, 100).unwrap()).is_err());
    }

    #[test]
    fn position_squared_examples() {
        let vac = WaveFunction::from_tag(StateTag::Vacuum, Grid::default()).unwrap();
        let phi = vac.apply_position_squared().unwrap();
        // ⟨x⁴⟩ of a Gaussian with variance 1/2 is 3·(1/2)² = 3/4
        assert!((phi.norm_sqr() - 0.75).abs() < 1e-12);
        let one = WaveFunction::from_tag(StateTag::Fock { n: 1 }, Grid::default()).unwrap();
        let phi = one.apply_position_squared().unwrap();
        let v = phi.values();
        let n = v.len();
        for j in (0..n).step_by(97) {
            assert!((v[j] + v[n - 1 - j]).norm() < 1e-15);
        }
        // A faint bump near the edge passes the plain tail test but not the
        // y⁴-weighted one.
        let g = Grid::new(-5.6, 5.6, 1024).unwrap();
        let raw: Vec<f64> =
            g.points().map(|y| hermite_functions(0, y)[0] + 1.5e-5 * (-(y - 5.3).powi(2) / 0.02).exp()).collect();
        let norm = trapezoid_norm(&raw.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>(), g.spacing()).sqrt();
        let psi = WaveFunction::new(g, raw.iter().map(|&v| C64::new(v / norm, 0.0)).collect()).unwrap();
        assert!(matches!(psi.apply_position_squared(), Err(Error::GridTooNarrow(_))));
    }

    #[test]
    fn random_superpositions_are_valid() {
        let mut rng = draw_rng(3, 0, 0);
        for _ in 0..10 {
            let psi = WaveFunction::random_fock_superposition(&mut rng, 6, Grid::default()).unwrap();
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn json_forms() {
        let g = Grid::new(-10.0, 10.0, 1001).unwrap();
        let psi = WaveFunction::from_json(r#"{"tag":"fock","n":1}"#, g).unwrap();
        assert_eq!(psi.tag(), Some(StateTag::Fock { n: 1 }));
        let vac = WaveFunction::from_tag(StateTag::Vacuum, g).unwrap();
        let text = serde_json::json!({
            "grid": {"min": -10.0, "max": 10.0, "n": 1001},
            "re": vac.values().iter().map(|z| z.re).collect::<Vec<_>>(),
            "im": vac.values().iter().map(|z| z.im).collect::<Vec<_>>(),
        })
        .to_string();
        let back = WaveFunction::from_json(&text, Grid::default()).unwrap();
        assert_eq!(back.grid(), g);
        assert!(WaveFunction::from_json("{\"tag\":\"cat\"}", g).is_err());
    }
}

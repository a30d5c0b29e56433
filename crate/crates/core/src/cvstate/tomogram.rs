use std::f64::consts::PI;
use std::io::Write;
use std::sync::OnceLock;

use super::{StateTag, WaveFunction};
use crate::error::{Error, Result};
use crate::qudit::C64;
use crate::quad::{adaptive, gaussian_expectation, Adaptive, GaussRule};

/// Below this `|ν|` the symplectic tomogram is evaluated by its `ν → 0` limit
/// `|φ(X/μ)|² / |μ|`.
pub const NU_MIN: f64 = 1e-6;

/// Boundary decay required by the MGF tail test, relative to the peak of
/// `w(X) e^{tX}`.
const MGF_TAIL: f64 = 1e-12;

/// Quadrature distribution `w(X, Θ)` of a single-mode state.
pub trait OpticalTomogram: Sync {
    /// Density at quadrature `x` and phase `theta`.
    fn density(&self, x: f64, theta: f64) -> f64;

    /// Interval outside of which the density is negligible.
    fn support(&self, theta: f64) -> (f64, f64);

    /// Symplectic tomogram `M(X, μ, ν)`, reduced to the optical one by
    /// `M(X, rμ, rν) = M(X/r, μ, ν) / r`.
    fn symplectic(&self, x: f64, mu: f64, nu: f64) -> Result<f64> {
        let r = mu.hypot(nu);
        if r == 0.0 || !r.is_finite() {
            return Err(Error::DegenerateRay);
        }
        Ok(self.density(x / r, nu.atan2(mu)) / r)
    }

    /// `∫ X^n w(X, θ) dX`.
    fn raw_moment(&self, n: u32, theta: f64) -> Result<f64> {
        moment_about(self, n, 0.0, theta)
    }

    /// Mean followed by the central moments `E[(X - mean)^k]`, `k = 2..=n_max`.
    fn central_moments(&self, n_max: u32, theta: f64) -> Result<Vec<f64>> {
        let mean = self.raw_moment(1, theta)?;
        let mut out = vec![mean];
        for k in 2..=n_max {
            out.push(moment_about(self, k, mean, theta)?);
        }
        Ok(out)
    }

    /// `ln ∫ w(X, θ) e^{tX} dX`, refusing when the integrand has not decayed
    /// at the support boundary.
    fn log_mgf(&self, t: f64, theta: f64) -> Result<f64> {
        let (a, b) = self.support(theta);
        let logf = |x: f64| {
            let w = self.density(x, theta);
            if w > 0.0 {
                w.ln() + t * x
            } else {
                f64::NEG_INFINITY
            }
        };
        let peak = (0..=512).map(|i| logf(a + (b - a) * i as f64 / 512.0)).fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() || logf(a) > peak + MGF_TAIL.ln() || logf(b) > peak + MGF_TAIL.ln() {
            return Err(Error::MgfDivergence { t, theta });
        }
        let opts = Adaptive { abs_tol: 1e-15, ..Adaptive::default() };
        let v = adaptive(|x| (logf(x) - peak).exp(), a, b, opts)?;
        Ok(v.value.ln() + peak)
    }
}

fn moment_about<T: OpticalTomogram + ?Sized>(w: &T, n: u32, center: f64, theta: f64) -> Result<f64> {
    let (a, b) = w.support(theta);
    let scale = 1.0 + (b - a) / 2.0;
    let opts = Adaptive { abs_tol: 1e-15 * scale.powi(n as i32), ..Adaptive::default() };
    Ok(adaptive(|x| (x - center).powi(n as i32) * w.density(x, theta), a, b, opts)?.value)
}

/// `M(X, μ, ν) = |∫ φ(y) exp(iμy²/2ν − iXy/ν) dy|² / (2π|ν|)` for a sampled
/// `φ`, which need not be normalized.
///
/// The ray is first scaled to `μ² + ν² = 1`. When `|ν| ≥ |μ|` the integral
/// is summed directly on the `y` grid; otherwise it is rewritten in momentum
/// space, where the chirp `exp(-ik²ν/2μ)` is mild, and summed over the
/// zero-padded discrete spectrum. Both sums are spectrally accurate for
/// smooth, well-contained states.
pub fn tomogram_from_wavefunction(phi: &WaveFunction, x: f64, mu: f64, nu: f64) -> Result<f64> {
    let r = mu.hypot(nu);
    if r == 0.0 || !r.is_finite() || !x.is_finite() {
        return Err(Error::DegenerateRay);
    }
    let (c, s, xr) = (mu / r, nu / r, x / r);
    let s = if nu.abs() <= NU_MIN { 0.0 } else { s };
    let value = if s.abs() >= c.abs() {
        let grid = phi.grid();
        let (lo, hi) = phi.support();
        let sum = chirp_sum(&phi.values()[lo..=hi], grid.point(lo), grid.spacing(), c / (2.0 * s), -xr / s);
        (sum * grid.spacing()).norm_sqr() / (2.0 * PI * s.abs())
    } else {
        let sp = phi.spectrum();
        let sum = chirp_sum(&sp.values, sp.k[0], sp.dk, -s / (2.0 * c), xr / c);
        (sum * sp.dk).norm_sqr() / (4.0 * PI * PI * c.abs())
    };
    Ok(value / r)
}

/// `Σ_j f_j exp(i(a x_j² + b x_j))` on the uniform grid `x_j = x0 + j dx`.
///
/// The phase factor is advanced by complex multiplication (its second
/// difference is constant) and recomputed exactly every 64 terms, which keeps
/// the rounding drift near `1e-14`.
pub(crate) fn chirp_sum(f: &[C64], x0: f64, dx: f64, a: f64, b: f64) -> C64 {
    const BLOCK: usize = 64;
    let q = C64::from_polar(1.0, 2.0 * a * dx * dx);
    let mut total = C64::new(0.0, 0.0);
    for (blk, chunk) in f.chunks(BLOCK).enumerate() {
        let x = x0 + (blk * BLOCK) as f64 * dx;
        let mut z = C64::from_polar(1.0, x * (a * x + b));
        let mut d = C64::from_polar(1.0, a * (2.0 * x * dx + dx * dx) + b * dx);
        for &v in chunk {
            total += v * z;
            z *= d;
            d *= q;
        }
    }
    total
}

/// Optical tomogram of a sampled wavefunction.
#[derive(Debug, Clone)]
pub struct WaveTomogram {
    psi: WaveFunction,
}

impl WaveTomogram {
    pub fn new(psi: WaveFunction) -> Self {
        WaveTomogram { psi }
    }

    pub fn wavefunction(&self) -> &WaveFunction {
        &self.psi
    }
}

impl OpticalTomogram for WaveTomogram {
    fn density(&self, x: f64, theta: f64) -> f64 {
        tomogram_from_wavefunction(&self.psi, x, theta.cos(), theta.sin()).unwrap_or(0.0)
    }

    fn support(&self, _theta: f64) -> (f64, f64) {
        let l = self.psi.grid().half_width();
        (-l, l)
    }

    fn symplectic(&self, x: f64, mu: f64, nu: f64) -> Result<f64> {
        tomogram_from_wavefunction(&self.psi, x, mu, nu)
    }
}

/// At a fixed phase, every tagged tomogram has the form
/// `poly(X) · N(X; mean, var)` with `poly = 1`, or `poly = H_n(X)² / (2ⁿ n!)`
/// for Fock states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEnvelope {
    pub mean: f64,
    pub var: f64,
    pub fock: Option<u32>,
}

fn hermite_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| GaussRule::hermite(32))
}

impl GaussianEnvelope {
    fn poly(&self, x: f64) -> f64 {
        let Some(n) = self.fock else { return 1.0 };
        // H_n(x) / sqrt(2ⁿ n!) by its three-term recurrence
        let (mut prev, mut cur) = (1.0, std::f64::consts::SQRT_2 * x);
        if n == 0 {
            return 1.0;
        }
        for k in 1..n {
            let kf = k as f64;
            let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        cur * cur
    }

    pub fn density(&self, x: f64) -> f64 {
        let d = x - self.mean;
        self.poly(x) * (-d * d / (2.0 * self.var)).exp() / (2.0 * PI * self.var).sqrt()
    }

    /// `E[f(X)]`; exact for polynomial `f` of degree up to `63 − 2n`.
    pub fn expectation<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        gaussian_expectation(hermite_rule(), self.mean, self.var, |x| self.poly(x) * f(x))
    }

    pub fn log_mgf(&self, t: f64) -> f64 {
        let shifted = GaussianEnvelope { mean: self.mean + t * self.var, ..*self };
        t * self.mean + 0.5 * t * t * self.var + shifted.expectation(|_| 1.0).ln()
    }
}

/// Closed-form tomogram of a tagged state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticTomogram {
    tag: StateTag,
}

impl AnalyticTomogram {
    pub fn new(tag: StateTag) -> Result<Self> {
        Ok(AnalyticTomogram { tag: tag.validate()? })
    }

    pub fn tag(&self) -> StateTag {
        self.tag
    }

    pub fn envelope(&self, theta: f64) -> GaussianEnvelope {
        let plain = |mean, var| GaussianEnvelope { mean, var, fock: None };
        match self.tag {
            StateTag::Vacuum => plain(0.0, 0.5),
            StateTag::Fock { n } => GaussianEnvelope { mean: 0.0, var: 0.5, fock: Some(n) },
            StateTag::Coherent { re, im } => {
                plain(std::f64::consts::SQRT_2 * (re * theta.cos() + im * theta.sin()), 0.5)
            }
            StateTag::Squeezed { r, phi } => {
                plain(0.0, 0.5 * ((2.0 * r).cosh() - (2.0 * r).sinh() * (2.0 * theta - phi).cos()))
            }
            StateTag::Thermal { nbar } => plain(0.0, nbar + 0.5),
        }
    }
}

impl OpticalTomogram for AnalyticTomogram {
    fn density(&self, x: f64, theta: f64) -> f64 {
        self.envelope(theta).density(x)
    }

    fn support(&self, theta: f64) -> (f64, f64) {
        let e = self.envelope(theta);
        let n = e.fock.unwrap_or(0) as f64;
        let half = 12.0 * e.var.sqrt() + (2.0 * n + 1.0).sqrt();
        (e.mean - half, e.mean + half)
    }

    fn raw_moment(&self, n: u32, theta: f64) -> Result<f64> {
        Ok(self.envelope(theta).expectation(|x| x.powi(n as i32)))
    }

    fn central_moments(&self, n_max: u32, theta: f64) -> Result<Vec<f64>> {
        let e = self.envelope(theta);
        let mean = e.expectation(|x| x);
        let mut out = vec![mean];
        for k in 2..=n_max {
            out.push(e.expectation(|x| (x - mean).powi(k as i32)));
        }
        Ok(out)
    }

    fn log_mgf(&self, t: f64, theta: f64) -> Result<f64> {
        let v = self.envelope(theta).log_mgf(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::MgfDivergence { t, theta })
        }
    }
}

/// Writes `theta,x,w` rows for every phase and quadrature value.
pub fn export_tomogram_csv<W: Write>(w: &dyn OpticalTomogram, thetas: &[f64], xs: &[f64], out: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(["theta", "x", "w"])?;
    for &th in thetas {
        for &x in xs {
            wr.write_record([th.to_string(), x.to_string(), w.density(x, th).to_string()])?;
        }
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::Grid;
    use super::*;

    fn wave(tag: &str) -> WaveFunction {
        WaveFunction::from_tag(tag.parse().unwrap(), Grid::default()).unwrap()
    }

    #[test]
    fn chirp_sum_matches_direct_evaluation() {
        let f: Vec<C64> = (0..1000).map(|j| C64::new((j as f64 * 0.01).sin(), 0.3)).collect();
        let (x0, dx, a, b) = (-5.0, 0.0101, 0.73, -2.1);
        let direct: C64 =
            f.iter().enumerate().map(|(j, &v)| {
                let x = x0 + j as f64 * dx;
                v * C64::from_polar(1.0, a * x * x + b * x)
            }).sum();
        assert!((chirp_sum(&f, x0, dx, a, b) - direct).norm() < 1e-11);
    }

    #[test]
    fn vacuum_matches_gaussian_at_all_phases() {
        let psi = wave("vacuum");
        for theta in [0.0, 0.3, 0.8, 1.2, std::f64::consts::FRAC_PI_2, 2.5, 4.0] {
            for x in [-3.0, -0.7, 0.0, 0.4, 2.2] {
                let w = tomogram_from_wavefunction(&psi, x, f64::cos(theta), f64::sin(theta)).unwrap();
                let exact = (-x * x).exp() / PI.sqrt();
                assert!((w - exact).abs() < 1e-12, "theta={theta} x={x}: {w} vs {exact}");
            }
        }
    }

    #[test]
    fn fock_one_matches_closed_form() {
        let psi = wave("fock:1");
        for theta in [0.1, 0.9, 2.0] {
            for x in [-2.0, -0.5, 1.3] {
                let w = tomogram_from_wavefunction(&psi, x, f64::cos(theta), f64::sin(theta)).unwrap();
                let exact = 2.0 / PI.sqrt() * x * x * (-x * x).exp();
                assert!((w - exact).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn position_limit() {
        let psi = wave("coherent:0.7,0.4");
        for x in [-1.0, 0.3, 1.9] {
            let w = tomogram_from_wavefunction(&psi, x, 1.0, 0.0).unwrap();
            assert!((w - psi.value_at(x).norm_sqr()).abs() < 1e-13);
            let near = tomogram_from_wavefunction(&psi, x, 1.0, 1e-7).unwrap();
            assert!((near - w).abs() < 1e-15 * w);
        }
        assert!(matches!(tomogram_from_wavefunction(&psi, 0.0, 0.0, 0.0), Err(Error::DegenerateRay)));
    }

    #[test]
    fn homogeneity() {
        let t = WaveTomogram::new(wave("squeezed:0.5,0.7"));
        for r in [0.5, 2.0, 10.0] {
            for (mu, nu) in [(0.8, 0.6), (0.2, -0.98), (1.0, 0.0)] {
                for x in [-1.0, 0.2, 0.9] {
                    let lhs = t.symplectic(x, r * mu, r * nu).unwrap();
                    let rhs = t.symplectic(x / r, mu, nu).unwrap() / r;
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn analytic_envelopes() {
        let sq = AnalyticTomogram::new(StateTag::Squeezed { r: 0.4, phi: 0.0 }).unwrap();
        for th in [0.0, 0.7, 2.0] {
            let v = sq.envelope(th).var;
            let alt = ((-0.8f64).exp() * th.cos().powi(2) + 0.8f64.exp() * th.sin().powi(2)) / 2.0;
            assert!((v - alt).abs() < 1e-15);
        }
        let f = AnalyticTomogram::new(StateTag::Fock { n: 1 }).unwrap();
        for t in [0.0, 0.5, 2.0, 30.0] {
            let exact = t * t / 4.0 + (1.0 + t * t / 2.0f64).ln();
            assert!((f.log_mgf(t, 0.3).unwrap() - exact).abs() < 1e-12 * exact.max(1.0));
        }
        let m = f.central_moments(4, 1.0).unwrap();
        assert!(m[0].abs() < 1e-14 && (m[1] - 1.5).abs() < 1e-13 && (m[3] - 15.0 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn numeric_moments_and_mgf() {
        let t = WaveTomogram::new(wave("coherent:0.6,0"));
        let m2 = t.raw_moment(2, 0.0).unwrap();
        assert!((m2 - (0.5 + 2.0 * 0.36)).abs() < 1e-10);
        let g = t.log_mgf(1.5, 0.4).unwrap();
        let mean = std::f64::consts::SQRT_2 * 0.6 * 0.4f64.cos();
        assert!((g - (1.5 * mean + 1.5 * 1.5 / 4.0)).abs() < 1e-9);
        assert!(matches!(t.log_mgf(200.0, 0.4), Err(Error::MgfDivergence { .. })));
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        let a = AnalyticTomogram::new(StateTag::Vacuum).unwrap();
        export_tomogram_csv(&a, &[0.0, 1.0], &[-1.0, 0.0, 1.0], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(text.starts_with("theta,x,w\n"));
    }
}

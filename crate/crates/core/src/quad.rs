//! Quadrature rules.
//!
//! Gaussian rules come from the Golub–Welsch eigenvalue problem for the
//! Jacobi matrix, followed by Newton polishing of the nodes and Christoffel
//! weights evaluated from the orthonormal recurrence. Adaptive integration
//! uses a globally subdivided Gauss–Kronrod 7/15 pair.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Nodes and weights of a Gaussian rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Three-term recurrence `x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}`
/// of the orthonormal family, with `mu0` the total mass of the weight.
struct Jacobi {
    a: Vec<f64>,
    b: Vec<f64>, // b[k] couples p_{k-1} and p_k, b[0] unused
    mu0: f64,
}

impl Jacobi {
    fn legendre(n: usize) -> Self {
        let b = (0..=n)
            .map(|k| {
                let k = k as f64;
                if k == 0.0 {
                    0.0
                } else {
                    k / (4.0 * k * k - 1.0).sqrt()
                }
            })
            .collect();
        Jacobi { a: vec![0.0; n], b, mu0: 2.0 }
    }

    fn laguerre(n: usize) -> Self {
        Jacobi {
            a: (0..n).map(|k| 2.0 * k as f64 + 1.0).collect(),
            b: (0..=n).map(|k| k as f64).collect(),
            mu0: 1.0,
        }
    }

    fn hermite(n: usize) -> Self {
        Jacobi {
            a: vec![0.0; n],
            b: (0..=n).map(|k| (k as f64 / 2.0).sqrt()).collect(),
            mu0: PI.sqrt(),
        }
    }

    /// Orthonormal values `p_0..p_{n-1}` at x, plus `p_n` and `p_n'`.
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let n = self.a.len();
        let mut p_prev = 0.0;
        let mut p = 1.0 / self.mu0.sqrt();
        let mut dp_prev = 0.0;
        let mut dp = 0.0;
        let mut sum_sq = p * p;
        for k in 0..n {
            let p_next = ((x - self.a[k]) * p - self.b[k] * p_prev) / self.b[k + 1];
            let dp_next = ((x - self.a[k]) * dp + p - self.b[k] * dp_prev) / self.b[k + 1];
            p_prev = p;
            p = p_next;
            dp_prev = dp;
            dp = dp_next;
            if k + 1 < n {
                sum_sq += p * p;
            }
        }
        (sum_sq, p, dp)
    }

    fn rule(&self) -> GaussRule {
        let n = self.a.len();
        let mut jm = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            jm[(k, k)] = self.a[k];
            if k + 1 < n {
                jm[(k, k + 1)] = self.b[k + 1];
                jm[(k + 1, k)] = self.b[k + 1];
            }
        }
        let mut nodes: Vec<f64> = jm.symmetric_eigen().eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.total_cmp(b));
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (_, p, dp) = self.eval(*x);
                if dp != 0.0 {
                    *x -= p / dp;
                }
            }
            let (sum_sq, _, _) = self.eval(*x);
            weights.push(1.0 / sum_sq);
        }
        GaussRule { nodes, weights }
    }
}

impl GaussRule {
    /// Gauss–Legendre on `[-1, 1]`.
    pub fn legendre(n: usize) -> Self {
        assert!(n > 0, "rule needs at least one node");
        Jacobi::legendre(n).rule()
    }

    /// Gauss–Laguerre for `∫_0^∞ f(t) e^{-t} dt`.
    pub fn laguerre(n: usize) -> Self {
        assert!(n > 0, "rule needs at least one node");
        Jacobi::laguerre(n).rule()
    }

    /// Gauss–Hermite for `∫ f(x) e^{-x²} dx`.
    pub fn hermite(n: usize) -> Self {
        assert!(n > 0, "rule needs at least one node");
        Jacobi::hermite(n).rule()
    }

    /// Gauss–Legendre mapped onto `[a, b]`.
    pub fn legendre_on(n: usize, a: f64, b: f64) -> Self {
        let base = Self::legendre(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        GaussRule {
            nodes: base.nodes.iter().map(|x| mid + half * x).collect(),
            weights: base.weights.iter().map(|w| half * w).collect(),
        }
    }

    /// Composite Gauss–Legendre: `panels` equal panels of `n` nodes each.
    pub fn composite_legendre(n: usize, panels: usize, a: f64, b: f64) -> Self {
        let base = Self::legendre(n);
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(n * panels);
        let mut weights = Vec::with_capacity(n * panels);
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * width;
            for (x, w) in base.nodes.iter().zip(&base.weights) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        GaussRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Expectation of `f` under the normal law `N(mean, var)` with a Hermite rule.
pub fn gaussian_expectation<F: FnMut(f64) -> f64>(rule: &GaussRule, mean: f64, var: f64, mut f: F) -> f64 {
    let s = (2.0 * var).sqrt();
    rule.integrate(|x| f(mean + s * x)) / PI.sqrt()
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Tolerances for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    /// Initial number of equal panels; helps with narrow peaks in wide windows.
    pub initial_panels: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive { rel_tol: 1e-12, abs_tol: 1e-15, max_panels: 2000, initial_panels: 16 }
    }
}

/// Globally adaptive Gauss–Kronrod 7/15 integration of `f` over `[a, b]`.
///
/// Fails when the estimated relative error is still above `1e-6` after
/// `max_panels` subdivisions.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: Adaptive) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    let mut heap = BinaryHeap::new();
    let n0 = opts.initial_panels.max(1);
    let w = (b - a) / n0 as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    for i in 0..n0 {
        let pa = a + i as f64 * w;
        let pb = if i + 1 == n0 { b } else { pa + w };
        let (v, e) = gk15(&mut f, pa, pb);
        total += v;
        err += e;
        heap.push(Panel { a: pa, b: pb, value: v, err: e });
    }
    while err > opts.abs_tol.max(opts.rel_tol * total.abs()) && heap.len() < opts.max_panels {
        let p = heap.pop().expect("heap holds at least one panel");
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.err;
        heap.push(Panel { a: p.a, b: m, value: v1, err: e1 });
        heap.push(Panel { a: m, b: p.b, value: v2, err: e2 });
    }
    // Re-sum to shed drift from the running updates.
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.err).sum();
    if !value.is_finite() || error > 1e-6 * value.abs().max(opts.abs_tol) {
        return Err(Error::Quadrature(format!(
            "estimated error {error:.3e} on value {value:.6e} over [{a}, {b}]"
        )));
    }
    Ok(Integral { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_is_exact_for_polynomials() {
        let r = GaussRule::legendre(8);
        // degree 15 is the limit for 8 nodes
        let v = r.integrate(|x| x.powi(14) + 3.0 * x.powi(7));
        assert_relative_eq!(v, 2.0 / 15.0, max_relative = 1e-14);
        assert_relative_eq!(r.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn laguerre_matches_factorials() {
        let r = GaussRule::laguerre(32);
        for k in 0..20 {
            let v = r.integrate(|t| t.powi(k));
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            assert_relative_eq!(v, fact, max_relative = 1e-12);
        }
        assert!(r.nodes.last().unwrap() > &100.0);
    }

    #[test]
    fn hermite_gaussian_moments() {
        let r = GaussRule::hermite(20);
        // E[X^4] for N(1, 0.5) = 1 + 6*0.5 + 3*0.25
        let v = gaussian_expectation(&r, 1.0, 0.5, |x| x.powi(4));
        assert_relative_eq!(v, 1.0 + 3.0 + 0.75, max_relative = 1e-13);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let v = adaptive(|x| (-x * x * 100.0).exp(), -20.0, 20.0, Adaptive::default()).unwrap();
        assert_relative_eq!(v.value, (PI / 100.0).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn adaptive_reports_nonconvergence() {
        let opts = Adaptive { max_panels: 4, initial_panels: 1, ..Adaptive::default() };
        assert!(adaptive(|x| (1.0 / x).sin() / x.sqrt(), 1e-9, 1.0, opts).is_err());
    }
}

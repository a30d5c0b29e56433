//! Probability vectors, stochastic maps acting on them, and Shannon-entropy
//! inequalities.
//!
//! Matrices act on column vectors, so a stochastic map has unit column sums.
//! Joint distributions of two subsystems with `d1` and `d2` outcomes are
//! stored row-major: index `i * d2 + k` is outcome `i` of the first system
//! and `k` of the second. For two coins this gives `(++, +-, -+, --)`.

mod entropy;
mod maps;

pub use entropy::{
    check_entropy_chain, merge_pair_bound, mutual_information_embedded, qubit_qutrit_embedding,
    shannon_entropy, shannon_entropy_of, subadditivity, subadditivity_check, xlnx, ChainReport,
    SubadditivityReport,
};
pub use maps::{
    enumerate_permutations, is_semigroup_closed, make_portrait, named, nested_chain_random,
    sequential_chain, set_partitions, MapKind, StochasticMap,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ p_k = 1`.
pub const NORM_TOL: f64 = 1e-9;
/// Components in `(-NEG_TOL, 0)` are clamped to zero; below that they are rejected.
pub const NEG_TOL: f64 = 1e-12;
/// Slack allowed when checking an entropy inequality.
pub const INEQ_TOL: f64 = 1e-12;

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProbVecRepr", into = "ProbVecRepr")]
pub struct ProbVec {
    components: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ProbVecRepr {
    dim: usize,
    components: Vec<f64>,
}

impl TryFrom<ProbVecRepr> for ProbVec {
    type Error = Error;

    fn try_from(r: ProbVecRepr) -> Result<Self> {
        if r.dim != r.components.len() {
            return Err(Error::DimensionMismatch { expected: r.dim, got: r.components.len() });
        }
        ProbVec::new(r.components)
    }
}

impl From<ProbVec> for ProbVecRepr {
    fn from(p: ProbVec) -> Self {
        ProbVecRepr { dim: p.dim(), components: p.components }
    }
}

impl ProbVec {
    /// Validates and wraps `components`.
    pub fn new(mut components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidProbVec("empty vector".into()));
        }
        for (i, x) in components.iter_mut().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidProbVec(format!("component {i} is not finite")));
            }
            if *x < -NEG_TOL {
                return Err(Error::InvalidProbVec(format!("component {i} is negative ({x})")));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let s: f64 = components.iter().sum();
        if (s - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidProbVec(format!("components sum to {s}, not 1")));
        }
        Ok(ProbVec { components })
    }

    /// Uniform vector, the centre of the simplex.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        ProbVec { components: vec![1.0 / n as f64; n] }
    }

    /// Vertex `k` of the simplex.
    pub fn vertex(n: usize, k: usize) -> Self {
        assert!(k < n);
        let mut components = vec![0.0; n];
        components[k] = 1.0;
        ProbVec { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.components
    }

    /// Row-major joint distribution of two independent systems.
    pub fn outer(&self, other: &ProbVec) -> ProbVec {
        let components = self
            .components
            .iter()
            .flat_map(|a| other.components.iter().map(move |b| a * b))
            .collect();
        ProbVec { components }
    }

    /// Marginals of a row-major `d1 x d2` joint distribution.
    pub fn marginals(&self, d1: usize, d2: usize) -> Result<(ProbVec, ProbVec)> {
        if d1 * d2 != self.dim() {
            return Err(Error::DimensionMismatch { expected: d1 * d2, got: self.dim() });
        }
        let mut first = vec![0.0; d1];
        let mut second = vec![0.0; d2];
        for i in 0..d1 {
            for k in 0..d2 {
                let v = self.components[i * d2 + k];
                first[i] += v;
                second[k] += v;
            }
        }
        Ok((ProbVec { components: first }, ProbVec { components: second }))
    }

    /// Component `i` moved to slot `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<ProbVec> {
        if perm.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: perm.len() });
        }
        let mut out = vec![f64::NAN; self.dim()];
        for (i, &j) in perm.iter().enumerate() {
            if j >= out.len() || !out[j].is_nan() {
                return Err(Error::InvalidPartition(format!("{perm:?} is not a permutation")));
            }
            out[j] = self.components[i];
        }
        Ok(ProbVec { components: out })
    }
}

impl AsRef<[f64]> for ProbVec {
    fn as_ref(&self) -> &[f64] {
        &self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_component_by_index() {
        let err = ProbVec::new(vec![0.5, 0.6, -0.1]).unwrap_err();
        assert!(err.to_string().contains("component 2"), "{err}");
    }

    #[test]
    fn clamps_tiny_negatives() {
        let p = ProbVec::new(vec![1.0, -5e-13]).unwrap();
        assert_eq!(p.components(), &[1.0, 0.0]);
    }

    #[test]
    fn rejects_bad_normalization() {
        assert!(ProbVec::new(vec![0.5, 0.4]).is_err());
        assert!(ProbVec::new(vec![]).is_err());
        assert!(ProbVec::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn marginals_follow_row_major_convention() {
        // (++, +-, -+, --)
        let p = ProbVec::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let (a, b) = p.marginals(2, 2).unwrap();
        assert!((a.components()[0] - 0.3).abs() < 1e-15);
        assert!((b.components()[0] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let p = ProbVec::new(vec![0.25, 0.75]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"dim":2,"components":[0.25,0.75]}"#);
        let bad: std::result::Result<ProbVec, _> =
            serde_json::from_str(r#"{"dim":3,"components":[0.25,0.75]}"#);
        assert!(bad.is_err());
    }
}

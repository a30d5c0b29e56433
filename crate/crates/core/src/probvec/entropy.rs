use serde::Serialize;

use super::{ProbVec, StochasticMap, INEQ_TOL};
use crate::error::{Error, Result};

/// `x ln x` with `0 ln 0 = 0`.
#[inline]
pub fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Shannon entropy in nats.
pub fn shannon_entropy(p: &ProbVec) -> f64 {
    -p.components().iter().map(|&x| xlnx(x)).sum::<f64>()
}

/// Validating entry point for raw component slices.
pub fn shannon_entropy_of(components: &[f64]) -> Result<f64> {
    Ok(shannon_entropy(&ProbVec::new(components.to_vec())?))
}

/// Entropies along a chain of coarse-grainings.
#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub input_entropy: f64,
    /// `H(M_k p)` in chain order.
    pub entropies: Vec<f64>,
    /// Whether each partition coarsens the previous one.
    pub nested: bool,
    /// Smallest step `H_{k} - H_{k+1}` (starting from the input entropy).
    pub worst_slack: f64,
    pub monotone: bool,
}

fn coarsens(fine: &[Vec<usize>], coarse: &[Vec<usize>]) -> bool {
    fine.iter().all(|f| coarse.iter().any(|c| f.iter().all(|i| c.contains(i))))
}

/// Evaluates `H(p) ≥ H(M_1 p) ≥ H(M_2 p) ≥ …` for a chain of portrait maps.
///
/// Every map must be a 0/1 coarse-graining of the right dimension, with a
/// nondecreasing number of zero rows. The ordering is guaranteed only when
/// each partition coarsens the previous one, which `nested` reports.
pub fn check_entropy_chain(p: &ProbVec, chain: &[StochasticMap]) -> Result<ChainReport> {
    let mut prev_zero = 0;
    let mut prev_blocks: Option<Vec<Vec<usize>>> = None;
    let mut nested = true;
    let mut entropies = Vec::with_capacity(chain.len());
    for (k, m) in chain.iter().enumerate() {
        let blocks = m
            .blocks()
            .ok_or_else(|| Error::InvalidMap(format!("chain element {k} is not a portrait map ({})", m.kind())))?;
        if m.zero_rows() < prev_zero {
            return Err(Error::InvalidMap(format!(
                "chain element {k} has {} zero rows, fewer than its predecessor ({prev_zero})",
                m.zero_rows()
            )));
        }
        prev_zero = m.zero_rows();
        if let Some(prev) = &prev_blocks {
            nested &= coarsens(prev, &blocks);
        }
        prev_blocks = Some(blocks);
        entropies.push(shannon_entropy(&m.apply(p)?));
    }
    let input_entropy = shannon_entropy(p);
    let worst_slack = std::iter::once(input_entropy)
        .chain(entropies.iter().copied())
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    Ok(ChainReport {
        input_entropy,
        entropies,
        nested,
        worst_slack,
        monotone: worst_slack >= -INEQ_TOL,
    })
}

/// Both sides of `H(A) + H(B) ≥ H(AB)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SubadditivityReport {
    /// Sum of marginal entropies.
    pub lhs: f64,
    /// Joint entropy.
    pub rhs: f64,
    pub holds: bool,
}

impl SubadditivityReport {
    pub fn gap(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Subadditivity for a row-major `d1 x d2` joint distribution.
pub fn subadditivity(p: &ProbVec, d1: usize, d2: usize) -> Result<SubadditivityReport> {
    let (a, b) = p.marginals(d1, d2)?;
    let lhs = shannon_entropy(&a) + shannon_entropy(&b);
    let rhs = shannon_entropy(p);
    Ok(SubadditivityReport { lhs, rhs, holds: lhs >= rhs - INEQ_TOL })
}

/// Subadditivity for two coins, `p = (p++, p+-, p-+, p--)`.
pub fn subadditivity_check(p: &ProbVec) -> Result<SubadditivityReport> {
    if p.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: p.dim() });
    }
    subadditivity(p, 2, 2)
}

/// Embeds a 4-vector as a qubit–qutrit joint distribution
/// `q = (0, 0, p1, p2, p3, p4)`, row-major over `(±) x (+1, 0, -1)`.
pub fn qubit_qutrit_embedding(p: &ProbVec) -> Result<ProbVec> {
    if p.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: p.dim() });
    }
    let c = p.components();
    ProbVec::new(vec![0.0, 0.0, c[0], c[1], c[2], c[3]])
}

/// Mutual information of the qubit–qutrit embedding:
/// `p4 ln p4 − (p2+p3+p4) ln(p2+p3+p4) − (p1+p4) ln(p1+p4)`.
pub fn mutual_information_embedded(p: &ProbVec) -> Result<f64> {
    if p.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: p.dim() });
    }
    let c = p.components();
    Ok(xlnx(c[3]) - xlnx(c[1] + c[2] + c[3]) - xlnx(c[0] + c[3]))
}

/// Slack of `H(p) ≥ H(p1+p2, p3, …, pN)`; nonnegative for every `p`.
pub fn merge_pair_bound(p: &ProbVec) -> f64 {
    let c = p.components();
    if c.len() < 2 {
        return 0.0;
    }
    let merged = -xlnx(c[0] + c[1]) - c[2..].iter().map(|&x| xlnx(x)).sum::<f64>();
    shannon_entropy(p) - merged
}

#[cfg(test)]
mod tests {
    use super::super::{named, sequential_chain, StochasticMap};
    use super::*;

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy(&pv(&[1.0, 0.0, 0.0, 0.0])), 0.0);
        assert!((shannon_entropy(&ProbVec::uniform(4)) - 4f64.ln()).abs() < 1e-15);
        // 40-digit mpmath evaluation of -Σ p ln p.
        let frozen = 1.279_854_225_833_667_5;
        assert!((shannon_entropy(&pv(&[0.1, 0.2, 0.3, 0.4])) - frozen).abs() < 1e-15);
    }

    #[test]
    fn entropy_of_rejects_invalid() {
        let e = shannon_entropy_of(&[0.5, -0.25, 0.75]).unwrap_err();
        assert!(e.to_string().contains("component 1"));
    }

    #[test]
    fn qutrit_merge_instance() {
        let p = pv(&[0.2, 0.5, 0.3]);
        let m = super::super::make_portrait(3, &[vec![0, 1], vec![2]]).unwrap();
        let r = check_entropy_chain(&p, &[m]).unwrap();
        assert!(r.input_entropy >= r.entropies[0]);
        let direct = -xlnx(0.7) - xlnx(0.3);
        assert!((r.entropies[0] - direct).abs() < 1e-15);
    }

    #[test]
    fn vertex_chain_is_all_zero() {
        let p = ProbVec::vertex(5, 0);
        let r = check_entropy_chain(&p, &sequential_chain(5)).unwrap();
        assert!(r.entropies.iter().all(|&h| h == 0.0));
        assert!(r.monotone && r.nested);
    }

    #[test]
    fn chain_rejects_non_portraits() {
        let p = ProbVec::uniform(4);
        assert!(check_entropy_chain(&p, &[StochasticMap::center(4)]).is_err());
        // decreasing zero-row count
        assert!(check_entropy_chain(&p, &[named::merge_123(), named::merge_12()]).is_err());
    }

    #[test]
    fn subadditivity_examples() {
        let a = pv(&[0.3, 0.7]);
        let b = pv(&[0.6, 0.4]);
        let r = subadditivity_check(&a.outer(&b)).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-15);
        let r = subadditivity_check(&pv(&[0.5, 0.0, 0.0, 0.5])).unwrap();
        assert!((r.lhs - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!((r.rhs - 2f64.ln()).abs() < 1e-15);
        assert!(r.holds);
        assert!(subadditivity_check(&ProbVec::uniform(3)).is_err());
    }

    #[test]
    fn information_examples() {
        assert_eq!(mutual_information_embedded(&pv(&[0.0, 0.0, 0.0, 1.0])).unwrap(), 0.0);
        // direct evaluation: (1/4)ln(1/4) - (3/4)ln(3/4) - (1/2)ln(1/2)
        let oracle = 0.25 * 0.25f64.ln() - 0.75 * 0.75f64.ln() - 0.5 * 0.5f64.ln();
        let i = mutual_information_embedded(&ProbVec::uniform(4)).unwrap();
        assert!((i - oracle).abs() < 1e-15);
        assert!(i > 0.0);
    }

    #[test]
    fn embedding_examples() {
        let q = qubit_qutrit_embedding(&pv(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(q.components(), &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let p = pv(&[0.1, 0.2, 0.3, 0.4]);
        let q = qubit_qutrit_embedding(&p).unwrap();
        let (qubit, qutrit) = q.marginals(2, 3).unwrap();
        assert!((qubit.components()[0] - 0.1).abs() < 1e-15);
        assert!((qubit.components()[1] - 0.9).abs() < 1e-15);
        assert!((qutrit.components()[2] - 0.5).abs() < 1e-15);
    }
}

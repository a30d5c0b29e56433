use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProbVec;
use crate::error::{Error, Result};

/// Column-sum and idempotency tolerance for stochastic maps.
pub const MAP_TOL: f64 = 1e-12;

/// Structural class of a stochastic map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    General,
    Bistochastic,
    Permutation,
    /// 0/1 coarse-graining with this many all-zero rows.
    Portrait { zero_rows: usize },
    /// Idempotent map onto a simplex vertex.
    Purifier,
    /// Every entry `1/N`: projects onto the simplex centre.
    Center,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKind::General => f.write_str("general-stochastic"),
            MapKind::Bistochastic => f.write_str("bistochastic"),
            MapKind::Permutation => f.write_str("permutation"),
            MapKind::Portrait { zero_rows } => write!(f, "portrait:{zero_rows}"),
            MapKind::Purifier => f.write_str("purifier"),
            MapKind::Center => f.write_str("center"),
        }
    }
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "general-stochastic" | "general" => MapKind::General,
            "bistochastic" => MapKind::Bistochastic,
            "permutation" => MapKind::Permutation,
            "purifier" => MapKind::Purifier,
            "center" => MapKind::Center,
            _ => {
                let k = s
                    .strip_prefix("portrait:")
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown map kind {s:?}")))?;
                MapKind::Portrait { zero_rows: k }
            }
        })
    }
}

/// Nonnegative `N x N` matrix with unit column sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct StochasticMap {
    dim: usize,
    entries: Vec<f64>,
    kind: MapKind,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    dim: usize,
    rows: Vec<Vec<f64>>,
    kind: String,
}

impl TryFrom<MapRepr> for StochasticMap {
    type Error = Error;

    fn try_from(r: MapRepr) -> Result<Self> {
        if r.rows.len() != r.dim {
            return Err(Error::DimensionMismatch { expected: r.dim, got: r.rows.len() });
        }
        StochasticMap::with_kind(r.rows, r.kind.parse()?)
    }
}

impl From<StochasticMap> for MapRepr {
    fn from(m: StochasticMap) -> Self {
        MapRepr { dim: m.dim, rows: m.rows(), kind: m.kind.to_string() }
    }
}

fn is_zero_one_stochastic(dim: usize, e: &[f64]) -> bool {
    (0..dim).all(|c| {
        let col: Vec<f64> = (0..dim).map(|r| e[r * dim + c]).collect();
        col.iter().all(|&x| x == 0.0 || x == 1.0) && col.iter().filter(|&&x| x == 1.0).count() == 1
    })
}

fn zero_rows(dim: usize, e: &[f64]) -> usize {
    (0..dim).filter(|&r| e[r * dim..(r + 1) * dim].iter().all(|&x| x == 0.0)).count()
}

impl StochasticMap {
    fn validate_stochastic(dim: usize, entries: &[f64]) -> Result<()> {
        for (i, &x) in entries.iter().enumerate() {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::InvalidMap(format!(
                    "entry ({}, {}) = {x} is not a nonnegative number",
                    i / dim,
                    i % dim
                )));
            }
        }
        for c in 0..dim {
            let s: f64 = (0..dim).map(|r| entries[r * dim + c]).sum();
            if (s - 1.0).abs() > MAP_TOL {
                return Err(Error::InvalidMap(format!("column {c} sums to {s}")));
            }
        }
        Ok(())
    }

    fn flatten(rows: Vec<Vec<f64>>) -> Result<(usize, Vec<f64>)> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidMap("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidMap(format!("row {r} has {} entries, expected {dim}", row.len())));
            }
            entries.extend(row);
        }
        Ok((dim, entries))
    }

    fn from_entries(dim: usize, entries: Vec<f64>) -> Result<Self> {
        Self::validate_stochastic(dim, &entries)?;
        let kind = Self::classify(dim, &entries);
        Ok(StochasticMap { dim, entries, kind })
    }

    /// Builds a map from rows and infers its [`MapKind`].
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let (dim, entries) = Self::flatten(rows)?;
        Self::from_entries(dim, entries)
    }

    /// Builds a map from rows and checks that it belongs to `kind`.
    pub fn with_kind(rows: Vec<Vec<f64>>, kind: MapKind) -> Result<Self> {
        let (dim, entries) = Self::flatten(rows)?;
        Self::validate_stochastic(dim, &entries)?;
        let m = StochasticMap { dim, entries, kind };
        m.check_kind()?;
        Ok(m)
    }

    fn classify(dim: usize, e: &[f64]) -> MapKind {
        if is_zero_one_stochastic(dim, e) {
            return match zero_rows(dim, e) {
                0 => MapKind::Permutation,
                k if k == dim - 1 => MapKind::Purifier,
                k => MapKind::Portrait { zero_rows: k },
            };
        }
        let c = 1.0 / dim as f64;
        if e.iter().all(|&x| (x - c).abs() <= MAP_TOL) {
            return MapKind::Center;
        }
        let bistochastic = (0..dim).all(|r| (e[r * dim..(r + 1) * dim].iter().sum::<f64>() - 1.0).abs() <= MAP_TOL);
        if bistochastic {
            MapKind::Bistochastic
        } else {
            MapKind::General
        }
    }

    fn check_kind(&self) -> Result<()> {
        let (n, e) = (self.dim, &self.entries);
        let fail = |why: &str| Err(Error::InvalidMap(format!("not a {} map: {why}", self.kind)));
        let row_sums_ok = (0..n).all(|r| (e[r * n..(r + 1) * n].iter().sum::<f64>() - 1.0).abs() <= MAP_TOL);
        match self.kind {
            MapKind::General => Ok(()),
            MapKind::Bistochastic => {
                if row_sums_ok {
                    Ok(())
                } else {
                    fail("row sums differ from 1")
                }
            }
            MapKind::Permutation => {
                if is_zero_one_stochastic(n, e) && zero_rows(n, e) == 0 {
                    Ok(())
                } else {
                    fail("needs exactly one 1 per row and column")
                }
            }
            MapKind::Portrait { zero_rows: k } => {
                if is_zero_one_stochastic(n, e) && zero_rows(n, e) == k {
                    Ok(())
                } else {
                    fail("needs a 0/1 coarse-graining with the stated number of zero rows")
                }
            }
            MapKind::Purifier => {
                let sq = self.compose(self);
                let idempotent = sq.iter().zip(e).all(|(a, b)| (a - b).abs() <= MAP_TOL);
                if idempotent && is_zero_one_stochastic(n, e) && zero_rows(n, e) == n - 1 {
                    Ok(())
                } else {
                    fail("needs an idempotent map onto a vertex")
                }
            }
            MapKind::Center => {
                let c = 1.0 / n as f64;
                if e.iter().all(|&x| (x - c).abs() <= MAP_TOL) {
                    Ok(())
                } else {
                    fail("all entries must equal 1/N")
                }
            }
        }
    }

    pub fn identity(n: usize) -> Self {
        let perm: Vec<usize> = (0..n).collect();
        Self::permutation(&perm).expect("identity is a permutation")
    }

    /// Permutation matrix sending component `i` to slot `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        let mut entries = vec![0.0; n * n];
        for (i, &j) in perm.iter().enumerate() {
            if j >= n || seen[j] {
                return Err(Error::InvalidPartition(format!("{perm:?} is not a permutation")));
            }
            seen[j] = true;
            entries[j * n + i] = 1.0;
        }
        Ok(StochasticMap { dim: n, entries, kind: MapKind::Permutation })
    }

    /// The map onto the simplex centre.
    pub fn center(n: usize) -> Self {
        StochasticMap { dim: n, entries: vec![1.0 / n as f64; n * n], kind: MapKind::Center }
    }

    /// The purifier onto vertex `k`: every column is the unit vector `e_k`.
    pub fn purifier(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::DimensionMismatch { expected: n, got: k });
        }
        let mut entries = vec![0.0; n * n];
        entries[k * n..(k + 1) * n].fill(1.0);
        let kind = if n == 1 { MapKind::Permutation } else { MapKind::Purifier };
        Ok(StochasticMap { dim: n, entries, kind })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries[r * self.dim + c]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    /// True for 0/1 coarse-grainings (portraits, purifiers and permutations).
    pub fn is_portrait_shaped(&self) -> bool {
        is_zero_one_stochastic(self.dim, &self.entries)
    }

    pub fn zero_rows(&self) -> usize {
        zero_rows(self.dim, &self.entries)
    }

    /// Blocks of input indices merged into each nonzero output row, if this
    /// map is a 0/1 coarse-graining. Blocks are listed by output row.
    pub fn blocks(&self) -> Option<Vec<Vec<usize>>> {
        if !self.is_portrait_shaped() {
            return None;
        }
        let n = self.dim;
        Some(
            (0..n)
                .map(|r| (0..n).filter(|&c| self.entries[r * n + c] == 1.0).collect::<Vec<_>>())
                .filter(|b| !b.is_empty())
                .collect(),
        )
    }

    /// `M p`.
    pub fn apply(&self, p: &ProbVec) -> Result<ProbVec> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.dim() });
        }
        let x = p.components();
        let out = self
            .entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        ProbVec::new(out)
    }

    fn compose(&self, other: &StochasticMap) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a != 0.0 {
                    for c in 0..n {
                        out[r * n + c] += a * other.entries[k * n + c];
                    }
                }
            }
        }
        out
    }

    /// Matrix product `self · other`, validated as a stochastic map.
    pub fn then_after(&self, other: &StochasticMap) -> Result<StochasticMap> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Self::from_entries(self.dim, self.compose(other))
    }

    /// Largest elementwise difference to `other`.
    pub fn max_abs_diff(&self, other: &StochasticMap) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Whether the product `a · b` is again a stochastic map.
pub fn is_semigroup_closed(a: &StochasticMap, b: &StochasticMap) -> Result<bool> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, got: b.dim });
    }
    Ok(StochasticMap::validate_stochastic(a.dim, &a.compose(b)).is_ok())
}

/// Portrait map of a partition of `0..n` (0-based blocks).
///
/// Blocks are ordered by their smallest element; block `i` is summed into
/// output slot `i` and the trailing `n - m` rows are zero.
pub fn make_portrait(n: usize, groups: &[Vec<usize>]) -> Result<StochasticMap> {
    if n == 0 {
        return Err(Error::InvalidPartition("dimension must be positive".into()));
    }
    let mut owner = vec![usize::MAX; n];
    for (g, block) in groups.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::InvalidPartition(format!("block {g} is empty")));
        }
        for &i in block {
            if i >= n {
                return Err(Error::InvalidPartition(format!("index {i} out of range 0..{n}")));
            }
            if owner[i] != usize::MAX {
                return Err(Error::InvalidPartition(format!("index {i} appears twice")));
            }
            owner[i] = g;
        }
    }
    if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InvalidPartition(format!("index {i} is not covered")));
    }
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by_key(|&g| groups[g].iter().min().copied());
    let mut slot = vec![0; groups.len()];
    for (s, &g) in order.iter().enumerate() {
        slot[g] = s;
    }
    let mut entries = vec![0.0; n * n];
    for (i, &g) in owner.iter().enumerate() {
        entries[slot[g] * n + i] = 1.0;
    }
    StochasticMap::from_entries(n, entries)
}

/// All set partitions of `0..n`, blocks sorted by smallest element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(0, n, &mut Vec::new(), &mut out);
    }
    out
}

/// All `n!` permutation matrices in lexicographic order of the image vector.
pub fn enumerate_permutations(n: usize) -> Result<Vec<StochasticMap>> {
    if n > 8 {
        return Err(Error::TooLarge(n));
    }
    if n == 0 {
        return Err(Error::InvalidPartition("dimension must be positive".into()));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![StochasticMap::permutation(&perm)?];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("successor exists");
        perm.swap(i, j);
        perm[i + 1..].reverse();
        out.push(StochasticMap::permutation(&perm)?);
    }
    Ok(out)
}

/// The chain `M_1, …, M_{n-1}` where `M_k` merges components `0..=k` into
/// the first slot. Each map coarsens the previous one.
pub fn sequential_chain(n: usize) -> Vec<StochasticMap> {
    (1..n)
        .map(|k| {
            let mut groups = vec![(0..=k).collect::<Vec<_>>()];
            groups.extend((k + 1..n).map(|i| vec![i]));
            make_portrait(n, &groups).expect("valid partition")
        })
        .collect()
}

/// A random nested chain: starting from singletons, two random blocks are
/// merged at each step until one block remains.
pub fn nested_chain_random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<StochasticMap> {
    let mut blocks: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut chain = Vec::with_capacity(n.saturating_sub(1));
    while blocks.len() > 1 {
        let a = rng.random_range(0..blocks.len());
        let mut b = rng.random_range(0..blocks.len() - 1);
        if b >= a {
            b += 1;
        }
        let merged = blocks.swap_remove(a.max(b));
        blocks[a.min(b)].extend(merged);
        chain.push(make_portrait(n, &blocks).expect("valid partition"));
    }
    chain
}

/// The fixed 4x4 matrices of the qubit/qutrit portrait construction.
pub mod named {
    use super::*;

    /// `(p1+p2, p3+p4, 0, 0)`.
    pub fn merge_12_34() -> StochasticMap {
        make_portrait(4, &[vec![0, 1], vec![2, 3]]).expect("valid partition")
    }

    /// `(p1+p3, p2+p4, 0, 0)`.
    pub fn merge_13_24() -> StochasticMap {
        make_portrait(4, &[vec![0, 2], vec![1, 3]]).expect("valid partition")
    }

    /// `(p1+p2, p3, p4, 0)`, the qutrit portrait.
    pub fn merge_12() -> StochasticMap {
        make_portrait(4, &[vec![0, 1], vec![2], vec![3]]).expect("valid partition")
    }

    /// `(p1+p2+p3, p4, 0, 0)`; squares to the purifier onto the first vertex.
    pub fn merge_123() -> StochasticMap {
        make_portrait(4, &[vec![0, 1, 2], vec![3]]).expect("valid partition")
    }

    /// Reversal of the components (anti-diagonal permutation).
    pub fn reversal(n: usize) -> StochasticMap {
        let perm: Vec<usize> = (0..n).rev().collect();
        StochasticMap::permutation(&perm).expect("valid permutation")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{draw_rng, simplex};

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    #[test]
    fn named_matrices_act_as_documented() {
        let p = pv(&[0.1, 0.2, 0.3, 0.4]);
        let close = |a: &ProbVec, b: &[f64]| a.components().iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15);
        assert!(close(&named::merge_12_34().apply(&p).unwrap(), &[0.3, 0.7, 0.0, 0.0]));
        assert!(close(&named::merge_13_24().apply(&p).unwrap(), &[0.4, 0.6, 0.0, 0.0]));
        assert!(close(&named::merge_12().apply(&p).unwrap(), &[0.3, 0.3, 0.4, 0.0]));
        assert!(close(&named::merge_123().apply(&p).unwrap(), &[0.6, 0.4, 0.0, 0.0]));
        assert!(close(&StochasticMap::center(4).apply(&p).unwrap(), &[0.25; 4]));
        assert!(close(&StochasticMap::purifier(4, 0).unwrap().apply(&p).unwrap(), &[1.0, 0.0, 0.0, 0.0]));
        assert!(close(&named::reversal(4).apply(&p).unwrap(), &[0.4, 0.3, 0.2, 0.1]));
    }

    #[test]
    fn merge_12_matches_literal_matrix() {
        let literal = vec![
            vec![1.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0, 0.0],
        ];
        assert_eq!(named::merge_12().rows(), literal);
        assert_eq!(named::merge_12().kind(), MapKind::Portrait { zero_rows: 1 });
    }

    #[test]
    fn merge_123_squares_to_purifier() {
        let m4 = named::merge_123();
        assert!(is_semigroup_closed(&m4, &m4).unwrap());
        let sq = m4.then_after(&m4).unwrap();
        let pur = StochasticMap::purifier(4, 0).unwrap();
        assert_eq!(sq.max_abs_diff(&pur), 0.0);
        assert_eq!(sq.kind(), MapKind::Purifier);
    }

    #[test]
    fn purifier_is_idempotent() {
        for k in 0..4 {
            let m = StochasticMap::purifier(4, k).unwrap();
            assert_eq!(m.then_after(&m).unwrap().max_abs_diff(&m), 0.0);
        }
    }

    #[test]
    fn make_portrait_errors() {
        assert!(make_portrait(4, &[vec![0, 1], vec![1, 2, 3]]).is_err());
        assert!(make_portrait(4, &[vec![0, 1], vec![2]]).is_err());
        assert!(make_portrait(4, &[vec![0, 1], vec![], vec![2, 3]]).is_err());
        assert!(make_portrait(4, &[vec![0, 1, 2, 3, 4]]).is_err());
    }

    #[test]
    fn identity_partition() {
        let m = make_portrait(2, &[vec![0], vec![1]]).unwrap();
        assert_eq!(m, StochasticMap::identity(2));
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(enumerate_permutations(4).unwrap().len(), 24);
        assert_eq!(enumerate_permutations(1).unwrap(), vec![StochasticMap::identity(1)]);
        assert!(enumerate_permutations(9).is_err());
        assert!(enumerate_permutations(4).unwrap().contains(&named::reversal(4)));
    }

    #[test]
    fn three_element_permutations_are_bistochastic() {
        // Oracle: brute force over all 3^3 maps {0,1,2} -> {0,1,2}, keep bijections.
        let mut oracle = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let v = [a, b, c];
                    if v.iter().collect::<std::collections::BTreeSet<_>>().len() == 3 {
                        oracle.push(StochasticMap::permutation(&v).unwrap());
                    }
                }
            }
        }
        let got = enumerate_permutations(3).unwrap();
        assert_eq!(got.len(), 6);
        for m in &got {
            assert!(oracle.contains(m));
            for r in 0..3 {
                assert_eq!((0..3).map(|c| m.get(r, c)).sum::<f64>(), 1.0);
            }
        }
    }

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for n in 1..=6 {
            assert_eq!(set_partitions(n).len(), bell[n]);
        }
    }

    #[test]
    fn kind_round_trip_and_validation() {
        let m = named::merge_12();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"kind\":\"portrait:1\""));
        let back: StochasticMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let wrong = r#"{"dim":2,"rows":[[1,1],[0,0]],"kind":"permutation"}"#;
        assert!(serde_json::from_str::<StochasticMap>(wrong).is_err());
        let nonstoch = r#"{"dim":2,"rows":[[0.5,1],[0.4,0]],"kind":"general-stochastic"}"#;
        assert!(serde_json::from_str::<StochasticMap>(nonstoch).is_err());
    }

    #[test]
    fn classification() {
        let b = StochasticMap::new(vec![vec![0.3, 0.7], vec![0.7, 0.3]]).unwrap();
        assert_eq!(b.kind(), MapKind::Bistochastic);
        let g = StochasticMap::new(vec![vec![0.3, 0.6], vec![0.7, 0.4]]).unwrap();
        assert_eq!(g.kind(), MapKind::General);
        assert_eq!(StochasticMap::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap().kind(), MapKind::Center);
    }

    #[test]
    fn random_chain_is_nested() {
        let mut rng = draw_rng(3, 0, 0);
        let chain = nested_chain_random(&mut rng, 6);
        assert_eq!(chain.len(), 5);
        for (k, m) in chain.iter().enumerate() {
            assert_eq!(m.zero_rows(), k + 1);
        }
        let p = ProbVec::new(simplex(&mut rng, 6)).unwrap();
        for m in &chain {
            assert!((m.apply(&p).unwrap().components().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}

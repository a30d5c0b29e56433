use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::output::{Check, Checks, Status};
use super::RunConfig;
use crate::error::{Error, Result};
use crate::par::map_range;
use crate::probvec::{
    check_entropy_chain, enumerate_permutations, merge_pair_bound, mutual_information_embedded, nested_chain_random,
    qubit_qutrit_embedding, sequential_chain, set_partitions, make_portrait, shannon_entropy, subadditivity, ProbVec,
    StochasticMap,
};
use crate::random::{draw_rng, simplex, sparse_simplex, streams};

/// Largest dimension for which every set partition is tried.
const EXHAUSTIVE_PARTITIONS: usize = 8;
/// Largest dimension for which every permutation is tried.
const EXHAUSTIVE_PERMUTATIONS: usize = 5;

pub const CHECK_NAMES: [&str; 10] = [
    "probability_vector",
    "portrait_monotonicity",
    "chain_monotonicity",
    "permutation_invariance",
    "center_maximality",
    "purifier",
    "merge_pair",
    "subadditivity",
    "qubit_qutrit_subadditivity",
    "mutual_information",
];

/// Raw vectors as read from a file; they are validated one by one so that a
/// non-probability entry is reported instead of aborting the run.
#[derive(Deserialize)]
#[serde(untagged)]
enum VectorFile {
    One(RawVec),
    Many(Vec<RawVec>),
    Bare(Vec<f64>),
    BareMany(Vec<Vec<f64>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVec {
    dim: Option<usize>,
    components: Vec<f64>,
}

/// Reads a probability vector, a list of them, or bare number arrays.
pub fn read_vectors(text: &str) -> Result<Vec<Vec<f64>>> {
    let parsed: VectorFile = serde_json::from_str(text)
        .map_err(|_| Error::Parse("expected a probability vector, a list of them, or bare number arrays".into()))?;
    let raw = match parsed {
        VectorFile::One(v) => vec![v],
        VectorFile::Many(v) => v,
        VectorFile::Bare(c) => vec![RawVec { dim: None, components: c }],
        VectorFile::BareMany(v) => v.into_iter().map(|c| RawVec { dim: None, components: c }).collect(),
    };
    raw.into_iter()
        .enumerate()
        .map(|(i, v)| match v.dim {
            Some(d) if d != v.components.len() => {
                Err(Error::Parse(format!("vector {i}: dim {d} but {} components", v.components.len())))
            }
            _ => Ok(v.components),
        })
        .collect()
}

/// Per-vector details, reported for file input.
#[derive(Debug, Clone, Serialize)]
pub struct VectorSummary {
    pub index: usize,
    pub dim: usize,
    pub entropy: Option<f64>,
    /// Entropies along the sequential merging chain.
    pub chain_entropies: Vec<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyResult {
    pub source: String,
    pub vectors_checked: usize,
    pub entropy_min: Option<f64>,
    pub entropy_max: Option<f64>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<VectorSummary>>,
}

type Slacks = Vec<(&'static str, f64)>;

/// All checks on one valid vector. `rng` supplies the random nested chain
/// and, above the exhaustive limit, the sampled permutations.
pub fn vector_slacks<R: Rng + ?Sized>(p: &ProbVec, rng: &mut R) -> Result<(Slacks, Vec<f64>)> {
    let n = p.dim();
    let h = shannon_entropy(p);
    let mut s: Slacks = Vec::new();

    let portraits: Vec<StochasticMap> = if n <= EXHAUSTIVE_PARTITIONS {
        set_partitions(n).iter().map(|g| make_portrait(n, g)).collect::<Result<_>>()?
    } else {
        sequential_chain(n)
    };
    for m in &portraits {
        s.push(("portrait_monotonicity", h - shannon_entropy(&m.apply(p)?)));
    }

    let sequential = check_entropy_chain(p, &sequential_chain(n))?;
    if n > 1 {
        s.push(("chain_monotonicity", sequential.worst_slack));
        s.push(("chain_monotonicity", check_entropy_chain(p, &nested_chain_random(rng, n))?.worst_slack));
    }

    let perms = if n <= EXHAUSTIVE_PERMUTATIONS {
        enumerate_permutations(n)?
    } else {
        let mut idx: Vec<usize> = (0..n).collect();
        let mut v = vec![crate::probvec::named::reversal(n)];
        for _ in 0..8 {
            idx.shuffle(rng);
            v.push(StochasticMap::permutation(&idx)?);
        }
        v
    };
    for m in &perms {
        s.push(("permutation_invariance", -(shannon_entropy(&m.apply(p)?) - h).abs()));
    }

    s.push(("center_maximality", -(shannon_entropy(&StochasticMap::center(n).apply(p)?) - (n as f64).ln()).abs()));
    s.push(("purifier", -shannon_entropy(&StochasticMap::purifier(n, 0)?.apply(p)?).abs()));
    s.push(("merge_pair", merge_pair_bound(p)));

    if n == 4 {
        for m in enumerate_permutations(4)? {
            let q = m.apply(p)?;
            s.push(("subadditivity", subadditivity(&q, 2, 2)?.gap()));
            s.push(("qubit_qutrit_subadditivity", subadditivity(&qubit_qutrit_embedding(&q)?, 2, 3)?.gap()));
            s.push(("mutual_information", mutual_information_embedded(&q)?));
        }
    }
    Ok((s, sequential.entropies))
}

fn new_checks(tol: f64) -> Checks {
    let mut c = Checks::default();
    for name in CHECK_NAMES {
        c.declare(name, tol);
    }
    c
}

fn evaluate(cfg: &RunConfig, vectors: Vec<Vec<f64>>, source: String, detailed: bool) -> Result<(Status, EntropyResult)> {
    let per = map_range(cfg.execution, vectors.len(), |i| -> Result<(Slacks, VectorSummary)> {
        let mut rng = draw_rng(cfg.seed, streams::ENTROPY, i as u64);
        let dim = vectors[i].len();
        match ProbVec::new(vectors[i].clone()) {
            Ok(p) => {
                let (mut s, chain) = vector_slacks(&p, &mut rng)?;
                s.push(("probability_vector", 0.0));
                let summary = VectorSummary { index: i, dim, entropy: Some(shannon_entropy(&p)), chain_entropies: chain, error: None };
                Ok((s, summary))
            }
            Err(e) => Ok((
                vec![("probability_vector", f64::NEG_INFINITY)],
                VectorSummary { index: i, dim, entropy: None, chain_entropies: Vec::new(), error: Some(e.to_string()) },
            )),
        }
    });
    let mut checks = new_checks(cfg.tolerances.entropy);
    let mut summaries = Vec::with_capacity(per.len());
    for r in per {
        let (s, summary) = r?;
        checks.extend(s);
        summaries.push(summary);
    }
    let checks = checks.finish();
    let entropies = summaries.iter().filter_map(|s| s.entropy);
    let entropy_min = entropies.clone().reduce(f64::min);
    let entropy_max = entropies.reduce(f64::max);
    let status = Status::from_pass(checks.iter().all(|c| c.holds));
    Ok((
        status,
        EntropyResult {
            source,
            vectors_checked: summaries.len(),
            entropy_min,
            entropy_max,
            checks,
            vectors: detailed.then_some(summaries),
        },
    ))
}

/// Checks the vectors of a JSON file.
pub fn run_file(cfg: &RunConfig, text: &str, source: String) -> Result<(Status, EntropyResult)> {
    let vectors = read_vectors(text)?;
    if vectors.is_empty() {
        return Err(Error::Parse("input holds no vectors".into()));
    }
    evaluate(cfg, vectors, source, true)
}

/// Checks `count` seeded random draws of dimension `n`; odd draws have
/// randomly zeroed components.
pub fn run_random(cfg: &RunConfig, n: usize, count: usize) -> Result<(Status, EntropyResult)> {
    if n == 0 || count == 0 {
        return Err(Error::Parse("--random needs a positive dimension and count".into()));
    }
    let vectors = map_range(cfg.execution, count, |i| {
        let mut rng = draw_rng(cfg.seed, streams::PROBVEC_DRAWS, i as u64);
        if i % 2 == 0 {
            simplex(&mut rng, n)
        } else {
            sparse_simplex(&mut rng, n, 0.3)
        }
    });
    evaluate(cfg, vectors, format!("random N={n} count={count}"), false)
}

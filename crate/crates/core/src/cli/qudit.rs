use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use super::output::{Check, Checks, Status};
use super::RunConfig;
use crate::error::{Error, Result};
use crate::par::map_range;
use crate::probvec::{nested_chain_random, sequential_chain};
use crate::qudit::{
    check_tomogram_chain, check_vn_bound, eigen_decompose, eigen_tomogram_identity, info_inequality_spin_three_halves,
    info_inequality_two_qubit, wigner_D, DensityMatrix, Spin, UnitaryMatrix,
};
use crate::random::{draw_rng, streams};

/// Reads one density matrix or a list of them.
pub fn read_states(text: &str) -> Result<Vec<DensityMatrix>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("density matrix JSON: {e}")))?;
    let parse = |v: serde_json::Value, what: String| {
        serde_json::from_value::<DensityMatrix>(v).map_err(|e| Error::Parse(format!("{what}: {e}")))
    };
    match value {
        serde_json::Value::Array(list) if list.is_empty() => Err(Error::Parse("input holds no density matrices".into())),
        serde_json::Value::Array(list) => {
            list.into_iter().enumerate().map(|(i, v)| parse(v, format!("matrix {i}"))).collect()
        }
        v => Ok(vec![parse(v, "density matrix".into())?]),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StateSummary {
    pub index: usize,
    pub dim: usize,
    pub s_vn: f64,
    /// Shannon entropy of the tomogram in the eigenbasis.
    pub eigenbasis_shannon: f64,
    /// Portrait entropies of the eigenbasis tomogram, sequential chain.
    pub portrait_entropies: Vec<f64>,
    /// Information functional per unitary (dimension 4 only).
    pub information: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuditResult {
    pub source: String,
    pub states_checked: usize,
    pub unitaries_per_state: usize,
    pub spin: Option<f64>,
    pub checks: Vec<Check>,
    pub s_vn_min: f64,
    pub s_vn_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<StateSummary>>,
}

type Slacks = Vec<(&'static str, f64)>;

fn random_euler<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64, f64) {
    let beta = (1.0 - 2.0 * rng.random::<f64>()).acos();
    (2.0 * PI * rng.random::<f64>(), beta, 2.0 * PI * rng.random::<f64>())
}

fn state_slacks<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    unitaries: usize,
    spin: Option<Spin>,
    rng: &mut R,
) -> Result<(Slacks, StateSummary)> {
    let d = rho.dim();
    let mut us: Vec<UnitaryMatrix> = (0..unitaries).map(|_| UnitaryMatrix::haar(rng, d)).collect();
    if let Some(s) = spin {
        for _ in 0..unitaries {
            us.push(wigner_D(s, random_euler(rng))?);
        }
    }
    let chains = [sequential_chain(d), nested_chain_random(rng, d)];
    let mut out: Slacks = Vec::new();
    let mut information = Vec::new();
    for u in &us {
        out.push(("spectral_identity", -eigen_tomogram_identity(rho, u)?.max_deviation));
        for c in &chains {
            out.push(("tomogram_chain", check_tomogram_chain(rho, u, c)?.worst_slack));
        }
        if d == 4 {
            let i = info_inequality_spin_three_halves(rho, u)?.information;
            information.push(i);
            out.push(("information_spin_three_halves", i));
        }
    }
    if d == 4 {
        for _ in 0..unitaries {
            let u = UnitaryMatrix::haar(rng, 2).tensor(&UnitaryMatrix::haar(rng, 2));
            out.push(("information_two_qubit", info_inequality_two_qubit(rho, &u)?.information));
        }
    }
    let vn = check_vn_bound(rho, &chains[0])?;
    let bound = vn.portrait_entropies.iter().map(|h| vn.s_vn - h).fold(f64::INFINITY, f64::min);
    if bound.is_finite() {
        out.push(("von_neumann_bound", bound));
    }
    out.push(("eigenbasis_entropy", -(vn.shannon_at_eigenbasis - vn.s_vn).abs()));
    let eig = eigen_decompose(rho)?;
    for c in &chains {
        out.push(("eigenbasis_chain", check_tomogram_chain(rho, &eig.u0.adjoint(), c)?.worst_slack));
    }
    let summary = StateSummary {
        index: 0,
        dim: d,
        s_vn: vn.s_vn,
        eigenbasis_shannon: vn.shannon_at_eigenbasis,
        portrait_entropies: vn.portrait_entropies,
        information,
    };
    Ok((out, summary))
}

fn evaluate(
    cfg: &RunConfig,
    states: &[DensityMatrix],
    unitaries: usize,
    spin: Option<Spin>,
    source: String,
    detailed: bool,
) -> Result<(Status, QuditResult)> {
    let per = map_range(cfg.execution, states.len(), |i| {
        let mut rng = draw_rng(cfg.seed, streams::QUDIT, i as u64);
        state_slacks(&states[i], unitaries, spin, &mut rng)
    });
    let t = &cfg.tolerances;
    let mut checks = Checks::default();
    for (name, tol) in [
        ("spectral_identity", t.qudit),
        ("tomogram_chain", t.entropy),
        ("von_neumann_bound", t.qudit),
        ("eigenbasis_entropy", t.qudit),
        ("eigenbasis_chain", t.entropy),
        ("information_spin_three_halves", t.information),
        ("information_two_qubit", t.information),
    ] {
        checks.declare(name, tol);
    }
    let mut summaries = Vec::with_capacity(per.len());
    for (i, r) in per.into_iter().enumerate() {
        let (s, mut summary) = r?;
        checks.extend(s);
        summary.index = i;
        summaries.push(summary);
    }
    let checks = checks.finish();
    let status = Status::from_pass(checks.iter().all(|c| c.holds));
    let s_vn_min = summaries.iter().map(|s| s.s_vn).fold(f64::INFINITY, f64::min);
    let s_vn_max = summaries.iter().map(|s| s.s_vn).fold(f64::NEG_INFINITY, f64::max);
    Ok((
        status,
        QuditResult {
            source,
            states_checked: summaries.len(),
            unitaries_per_state: unitaries,
            spin: spin.map(Spin::j),
            checks,
            s_vn_min,
            s_vn_max,
            states: detailed.then_some(summaries),
        },
    ))
}

fn resolve_spin(j: Option<f64>, d: usize) -> Result<Option<Spin>> {
    match j {
        None => Ok(None),
        Some(j) => {
            let s = Spin::new(j)?;
            if s.dim() != d {
                return Err(Error::DimensionMismatch { expected: s.dim(), got: d });
            }
            Ok(Some(s))
        }
    }
}

/// Checks the density matrices of a JSON file.
pub fn run_file(cfg: &RunConfig, text: &str, source: String, unitaries: usize, j: Option<f64>) -> Result<(Status, QuditResult)> {
    let states = read_states(text)?;
    let d = states[0].dim();
    if let Some(bad) = states.iter().find(|r| r.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: bad.dim() });
    }
    let spin = resolve_spin(j, d)?;
    evaluate(cfg, &states, unitaries, spin, source, true)
}

/// Checks `count` random states of dimension `d`; every fourth is pure.
pub fn run_random(cfg: &RunConfig, d: usize, count: usize, unitaries: usize, j: Option<f64>) -> Result<(Status, QuditResult)> {
    if d == 0 || count == 0 {
        return Err(Error::Parse("--random needs a positive dimension and count".into()));
    }
    let spin = resolve_spin(j, d)?;
    let states = map_range(cfg.execution, count, |i| {
        let mut rng = draw_rng(cfg.seed, streams::QUDIT_STATES, i as u64);
        if i % 4 == 3 {
            DensityMatrix::random_pure(&mut rng, d)
        } else {
            DensityMatrix::random(&mut rng, d)
        }
    });
    evaluate(cfg, &states, unitaries, spin, format!("random d={d} count={count}"), false)
}

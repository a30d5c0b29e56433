use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{c_from, moments_to_cumulants, ChEstimate, CumulantReport, GAUSSIAN_CH_TOL, MAX_ORDER};
use crate::cvstate::OpticalTomogram;
use crate::error::{Error, Result};
use crate::par::{map_range, Execution};
use crate::quad::GaussRule;
use crate::random::{draw_rng, streams};

/// Homodyne records `(θ, x)`; phases are kept in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneSamples {
    records: Vec<(f64, f64)>,
    source: String,
}

#[derive(Serialize, Deserialize)]
struct Row {
    theta: f64,
    x: f64,
}

impl HomodyneSamples {
    /// Phases outside `[0, 2π)` are wrapped into it.
    pub fn new(records: Vec<(f64, f64)>, source: impl Into<String>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::InsufficientSamples("no homodyne records".into()));
        }
        if let Some(i) = records.iter().position(|(t, x)| !(t.is_finite() && x.is_finite())) {
            return Err(Error::Parse(format!("record {i} is not finite")));
        }
        let records = records.into_iter().map(|(t, x)| (wrap(t), x)).collect();
        Ok(HomodyneSamples { records, source: source.into() })
    }

    /// Reads CSV with header `theta,x`.
    pub fn from_csv_reader<R: Read>(reader: R, source: impl Into<String>) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(reader);
        let headers = rd.headers()?.clone();
        if headers.iter().map(str::trim).collect::<Vec<_>>() != ["theta", "x"] {
            return Err(Error::Parse(format!("expected header theta,x, found {}", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let records = rd
            .deserialize::<Row>()
            .enumerate()
            .map(|(i, r)| r.map(|r| (r.theta, r.x)).map_err(|e| Error::Parse(format!("row {}: {e}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(records, source)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?, path.display().to_string())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(out);
        for &(theta, x) in &self.records {
            wr.serialize(Row { theta, x })?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn records(&self) -> &[(f64, f64)] {
        &self.records
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

fn wrap(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// KDE bandwidth rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bandwidth {
    /// `0.9 min(σ, IQR/1.34) N^{-1/5}`.
    Silverman,
    Fixed(f64),
}

/// How records are grouped by phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BinningConfig {
    /// When the data hold at most this many distinct phases, each phase is its
    /// own bin; otherwise `bins` equal-width bins over `[0, 2π)` are used.
    pub max_exact_phases: usize,
    pub bins: usize,
    pub min_count: usize,
    pub bandwidth: Bandwidth,
}

impl Default for BinningConfig {
    fn default() -> Self {
        BinningConfig { max_exact_phases: 64, bins: 16, min_count: 500, bandwidth: Bandwidth::Silverman }
    }
}

/// Records sharing one phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseBin {
    pub theta: f64,
    pub xs: Vec<f64>,
}

/// Groups records by phase and checks every bin has `min_count` records.
pub fn bin_samples(samples: &HomodyneSamples, cfg: &BinningConfig) -> Result<Vec<PhaseBin>> {
    let mut exact: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for &(t, x) in samples.records() {
        exact.entry(t.to_bits()).or_default().push(x);
    }
    let bins: Vec<PhaseBin> = if exact.len() <= cfg.max_exact_phases {
        exact.into_iter().map(|(t, xs)| PhaseBin { theta: f64::from_bits(t), xs }).collect()
    } else {
        let nb = cfg.bins.max(1);
        let width = TAU / nb as f64;
        let mut b: Vec<PhaseBin> =
            (0..nb).map(|i| PhaseBin { theta: (i as f64 + 0.5) * width, xs: Vec::new() }).collect();
        for &(t, x) in samples.records() {
            b[((t / width) as usize).min(nb - 1)].xs.push(x);
        }
        b
    };
    let short: Vec<String> = bins
        .iter()
        .filter(|b| b.xs.len() < cfg.min_count)
        .map(|b| format!("θ={:.4} ({} records)", b.theta, b.xs.len()))
        .collect();
    if !short.is_empty() {
        return Err(Error::InsufficientSamples(format!(
            "bins below {} records: {}",
            cfg.min_count,
            short.join(", ")
        )));
    }
    Ok(bins)
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, v.sqrt())
}

fn silverman(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    let (_, sd) = mean_sd(sorted);
    let q = |p: f64| sorted[((p * (n - 1) as f64).round() as usize).min(n - 1)];
    let iqr = (q(0.75) - q(0.25)) / 1.34;
    let spread = if iqr > 0.0 { sd.min(iqr) } else { sd };
    0.9 * spread * (n as f64).powf(-0.2)
}

#[derive(Debug, Clone)]
struct KdeBin {
    theta: f64,
    xs: Vec<f64>,
    h: f64,
}

impl KdeBin {
    fn density(&self, x: f64) -> f64 {
        let lo = self.xs.partition_point(|&v| v < x - 9.0 * self.h);
        let hi = self.xs.partition_point(|&v| v <= x + 9.0 * self.h);
        let s: f64 = self.xs[lo..hi].iter().map(|&v| (-0.5 * ((x - v) / self.h).powi(2)).exp()).sum();
        s / (self.xs.len() as f64 * self.h * (2.0 * PI).sqrt())
    }

    /// `E[X^n]` of the kernel mixture: `X = x_i + hZ`.
    fn raw_moment(&self, n: u32) -> f64 {
        let n = n as usize;
        // E[Z^k] for a standard normal
        let z = |k: usize| if k % 2 == 1 { 0.0 } else { (1..k).step_by(2).map(|j| j as f64).product::<f64>() };
        let mut binom = 1.0;
        let mut total = 0.0;
        for k in 0..=n {
            if k > 0 {
                binom = binom * (n - k + 1) as f64 / k as f64;
            }
            if k % 2 == 0 {
                let s: f64 = self.xs.iter().map(|x| x.powi((n - k) as i32)).sum::<f64>() / self.xs.len() as f64;
                total += binom * self.h.powi(k as i32) * z(k) * s;
            }
        }
        total
    }

    fn mgf(&self, t: f64) -> f64 {
        let s: f64 = self.xs.iter().map(|x| (t * x).exp()).sum::<f64>() / self.xs.len() as f64;
        s * (0.5 * t * t * self.h * self.h).exp()
    }
}

/// Kernel density estimate per phase bin, linearly interpolated in `Θ`
/// between bin centers (periodically).
#[derive(Debug, Clone)]
pub struct KdeTomogram {
    bins: Vec<KdeBin>,
}

impl KdeTomogram {
    pub fn phases(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.theta).collect()
    }

    pub fn bandwidths(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.h).collect()
    }

    /// Two bins bracketing `theta` and the weight of the second.
    fn bracket(&self, theta: f64) -> (usize, usize, f64) {
        let n = self.bins.len();
        if n == 1 {
            return (0, 0, 0.0);
        }
        let t = wrap(theta);
        let j = self.bins.partition_point(|b| b.theta <= t);
        let (a, b) = if j == 0 || j == n { (n - 1, 0) } else { (j - 1, j) };
        let gap = (self.bins[b].theta - self.bins[a].theta).rem_euclid(TAU);
        let off = (t - self.bins[a].theta).rem_euclid(TAU);
        (a, b, if gap > 0.0 { off / gap } else { 0.0 })
    }

    fn mix(&self, theta: f64, f: impl Fn(&KdeBin) -> f64) -> f64 {
        let (a, b, l) = self.bracket(theta);
        (1.0 - l) * f(&self.bins[a]) + if l > 0.0 { l * f(&self.bins[b]) } else { 0.0 }
    }
}

impl OpticalTomogram for KdeTomogram {
    fn density(&self, x: f64, theta: f64) -> f64 {
        self.mix(theta, |b| b.density(x))
    }

    fn support(&self, theta: f64) -> (f64, f64) {
        let (a, b, _) = self.bracket(theta);
        let lo = self.bins[a].xs[0].min(self.bins[b].xs[0]);
        let hi = self.bins[a].xs.last().unwrap().max(*self.bins[b].xs.last().unwrap());
        let pad = 10.0 * self.bins[a].h.max(self.bins[b].h);
        (lo - pad, hi + pad)
    }

    fn raw_moment(&self, n: u32, theta: f64) -> Result<f64> {
        Ok(self.mix(theta, |b| b.raw_moment(n)))
    }

    fn log_mgf(&self, t: f64, theta: f64) -> Result<f64> {
        let v = self.mix(theta, |b| b.mgf(t));
        if v.is_finite() && v > 0.0 {
            Ok(v.ln())
        } else {
            Err(Error::MgfDivergence { t, theta })
        }
    }
}

/// Kernel density tomogram of binned homodyne data.
pub fn empirical_tomogram(samples: &HomodyneSamples, cfg: &BinningConfig) -> Result<KdeTomogram> {
    let bins = bin_samples(samples, cfg)?;
    let bins = bins
        .into_iter()
        .map(|b| {
            let mut xs = b.xs;
            xs.sort_by(f64::total_cmp);
            let h = match cfg.bandwidth {
                Bandwidth::Silverman => silverman(&xs),
                Bandwidth::Fixed(h) => h,
            };
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::InsufficientSamples(format!("degenerate bandwidth at θ={:.4}", b.theta)));
            }
            Ok(KdeBin { theta: b.theta, xs, h })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KdeTomogram { bins })
}

/// Largest `t` (on a `0.05` grid up to 10) at which the sample mean of
/// `e^{tX}` has relative standard error at most `rel_se` in every bin.
pub fn stable_t_max(bins: &[PhaseBin], rel_se: f64) -> f64 {
    let mut best = 0.0;
    for step in 1..=200 {
        let t = 0.05 * step as f64;
        let ok = bins.iter().all(|b| {
            let (m, _) = mean_sd(&b.xs);
            let e: Vec<f64> = b.xs.iter().map(|x| (t * (x - m)).exp()).collect();
            let (em, esd) = mean_sd(&e);
            esd / (em * (e.len() as f64).sqrt()) <= rel_se
        });
        if !ok {
            break;
        }
        best = t;
    }
    best
}

/// Settings of the empirical cumulant report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmpiricalSettings {
    pub binning: BinningConfig,
    pub n_max: u32,
    pub t_grid: Vec<f64>,
    pub bootstrap: usize,
    /// Upper end of the `t` domain for `Ch`; the stability bound when absent.
    pub ch_t_max: Option<f64>,
    /// Gauss–Legendre nodes in `t` for the truncated `Ch`.
    pub ch_nodes: usize,
    /// Largest acceptable relative standard error of the empirical MGF.
    pub stability_rel_se: f64,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for EmpiricalSettings {
    fn default() -> Self {
        EmpiricalSettings {
            binning: BinningConfig::default(),
            n_max: 4,
            t_grid: vec![0.25, 0.5, 1.0, 2.0],
            bootstrap: 200,
            ch_t_max: None,
            ch_nodes: 16,
            stability_rel_se: 0.05,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

/// Per-bin sufficient statistics, centered on the bin mean.
struct BinStats {
    mean: f64,
    /// `powers[i][p-1] = c_i^p` with `c_i = x_i − mean`.
    powers: Vec<Vec<f64>>,
    /// `expo[i][k] = e^{t_k c_i}` at the Ch nodes.
    expo: Vec<Vec<f64>>,
}

struct Estimates {
    cumulants: Vec<Vec<f64>>,
    ch: Option<f64>,
}

fn estimate(stats: &[BinStats], idx: &[Vec<usize>], n_max: usize, ch: Option<(&[f64], &[f64], &[f64])>) -> Estimates {
    let mut cumulants = Vec::with_capacity(stats.len());
    let mut ch_value = 0.0;
    for (b, s) in stats.iter().enumerate() {
        let n = idx[b].len() as f64;
        let mut m = vec![0.0; n_max];
        let mut e = vec![0.0; s.expo.first().map_or(0, Vec::len)];
        for &i in &idx[b] {
            for (acc, v) in m.iter_mut().zip(&s.powers[i]) {
                *acc += v;
            }
            for (acc, v) in e.iter_mut().zip(&s.expo[i]) {
                *acc += v;
            }
        }
        m.iter_mut().for_each(|v| *v /= n);
        let mut k = moments_to_cumulants(&m);
        let (k1c, k2) = (k[0], k[1]);
        k[0] += s.mean;
        cumulants.push(k);
        if let Some((nodes, weights, theta_w)) = ch {
            let inner: f64 = nodes
                .iter()
                .zip(weights)
                .zip(&e)
                .map(|((&t, &w), &sum)| w * c_from((sum / n).ln(), t, k1c, k2))
                .sum();
            ch_value += theta_w[b] * inner;
        }
    }
    Estimates { cumulants, ch: ch.map(|_| ch_value) }
}

/// Periodic trapezoid weights on the sorted bin phases.
fn phase_weights(thetas: &[f64]) -> Vec<f64> {
    let n = thetas.len();
    let gap = |i: usize| (thetas[(i + 1) % n] - thetas[i]).rem_euclid(TAU);
    (0..n).map(|i| 0.5 * (gap((i + n - 1) % n) + gap(i))).collect()
}

/// Cumulants, `C(t, Θ)` and truncated `Ch` from homodyne data, with
/// stratified bootstrap standard errors.
///
/// The MGF is the per-bin sample mean of `e^{tX}`. Values at `t` beyond the
/// stability bound are reported as `null`. `Ch` covers `t ∈ [0, T]` and is
/// unavailable for data with a single phase.
pub fn empirical_cumulant_report(samples: &HomodyneSamples, settings: &EmpiricalSettings) -> Result<CumulantReport> {
    let n_max = settings.n_max;
    if !(2..=MAX_ORDER).contains(&n_max) {
        return Err(Error::InsufficientSamples(format!("cumulant order {n_max} outside 2..={MAX_ORDER}")));
    }
    let bins = bin_samples(samples, &settings.binning)?;
    let thetas: Vec<f64> = bins.iter().map(|b| b.theta).collect();
    let t_stable = stable_t_max(&bins, settings.stability_rel_se);

    let mut ch_note = None;
    let ch_domain = if bins.len() < 2 {
        ch_note = Some("data cover a single phase; Ch needs the full phase range".to_string());
        None
    } else {
        let t_max = settings.ch_t_max.unwrap_or(t_stable);
        if t_max <= 0.0 {
            ch_note = Some("empirical MGF is unstable for every t > 0".to_string());
            None
        } else {
            let rule = GaussRule::legendre_on(settings.ch_nodes.max(1), 0.0, t_max);
            let weights: Vec<f64> = rule.nodes.iter().zip(&rule.weights).map(|(t, w)| w * (-t).exp()).collect();
            Some((t_max, rule.nodes, weights, phase_weights(&thetas)))
        }
    };

    let stats: Vec<BinStats> = bins
        .iter()
        .map(|b| {
            let (mean, _) = mean_sd(&b.xs);
            let powers = b
                .xs
                .iter()
                .map(|x| {
                    let c = x - mean;
                    (1..=n_max as i32).map(|p| c.powi(p)).collect()
                })
                .collect();
            let expo = match &ch_domain {
                Some((_, nodes, _, _)) => b.xs.iter().map(|x| nodes.iter().map(|t| (t * (x - mean)).exp()).collect()).collect(),
                None => vec![Vec::new(); b.xs.len()],
            };
            BinStats { mean, powers, expo }
        })
        .collect();
    let ch_args = ch_domain.as_ref().map(|(_, n, w, tw)| (n.as_slice(), w.as_slice(), tw.as_slice()));

    let full: Vec<Vec<usize>> = bins.iter().map(|b| (0..b.xs.len()).collect()).collect();
    let point = estimate(&stats, &full, n_max as usize, ch_args);

    let c_values = bins
        .iter()
        .zip(&point.cumulants)
        .map(|(b, k)| {
            settings
                .t_grid
                .iter()
                .map(|&t| {
                    if t > t_stable && t != 0.0 {
                        return None;
                    }
                    let m = b.xs.iter().map(|x| (t * x).exp()).sum::<f64>() / b.xs.len() as f64;
                    Some(c_from(m.ln(), t, k[0], k[1]))
                })
                .collect()
        })
        .collect();

    let (cumulant_se, ch_se) = if settings.bootstrap >= 2 {
        let reps = map_range(settings.execution, settings.bootstrap, |r| {
            let mut rng = draw_rng(settings.seed, streams::BOOTSTRAP, r as u64);
            let idx: Vec<Vec<usize>> =
                bins.iter().map(|b| (0..b.xs.len()).map(|_| rng.random_range(0..b.xs.len())).collect()).collect();
            estimate(&stats, &idx, n_max as usize, ch_args)
        });
        let sd = |vals: &mut dyn Iterator<Item = f64>| {
            let v: Vec<f64> = vals.collect();
            mean_sd(&v).1
        };
        let k_se = (0..bins.len())
            .map(|b| (0..n_max as usize).map(|n| sd(&mut reps.iter().map(|e| e.cumulants[b][n]))).collect())
            .collect();
        let ch_se = point.ch.map(|_| sd(&mut reps.iter().map(|e| e.ch.unwrap_or(f64::NAN))));
        (Some(k_se), ch_se)
    } else {
        (None, None)
    };

    let ch = match (&ch_domain, point.ch) {
        (Some((t_max, ..)), Some(value)) => Some(ChEstimate {
            value,
            t_max: Some(*t_max),
            complete: *t_max <= t_stable,
            t_reached: *t_max,
            gaussian_consistent: match ch_se {
                Some(se) => value.abs() <= (3.0 * se).max(GAUSSIAN_CH_TOL),
                None => value.abs() < GAUSSIAN_CH_TOL,
            },
        }),
        _ => None,
    };
    Ok(CumulantReport {
        source: samples.source().to_string(),
        theta_grid: thetas,
        n_max,
        cumulants: point.cumulants,
        cumulant_se,
        t_grid: settings.t_grid.clone(),
        c_values,
        ch,
        ch_se,
        ch_note,
    })
}

/// Draws `per_theta` quadrature values at each phase from a tomogram, by
/// inverting its tabulated distribution function.
pub fn synthesize_samples(
    w: &dyn OpticalTomogram,
    thetas: &[f64],
    per_theta: usize,
    seed: u64,
    execution: Execution,
) -> Result<HomodyneSamples> {
    const TABLE: usize = 16384;
    let per = map_range(execution, thetas.len(), |i| {
        let th = thetas[i];
        let (a, b) = w.support(th);
        let dx = (b - a) / (TABLE - 1) as f64;
        let xs: Vec<f64> = (0..TABLE).map(|j| a + j as f64 * dx).collect();
        let dens: Vec<f64> = xs.iter().map(|&x| w.density(x, th).max(0.0)).collect();
        let mut cdf = vec![0.0; TABLE];
        for j in 1..TABLE {
            cdf[j] = cdf[j - 1] + 0.5 * dx * (dens[j] + dens[j - 1]);
        }
        let total = cdf[TABLE - 1];
        let mut rng = draw_rng(seed, streams::HOMODYNE, i as u64);
        (0..per_theta)
            .map(|_| {
                let u = rng.random::<f64>() * total;
                let j = cdf.partition_point(|&c| c < u).clamp(1, TABLE - 1);
                let (c0, c1) = (cdf[j - 1], cdf[j]);
                let f = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
                (th, xs[j - 1] + f * dx)
            })
            .collect::<Vec<_>>()
    });
    HomodyneSamples::new(per.into_iter().flatten().collect(), "synthetic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvstate::{AnalyticTomogram, StateTag};

    fn phases(n: usize) -> Vec<f64> {
        (0..n).map(|k| TAU * k as f64 / n as f64).collect()
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let s = HomodyneSamples::new(vec![(0.0, 1.0), (7.0, -0.5)], "t").unwrap();
        assert!((s.records()[1].0 - (7.0 - TAU)).abs() < 1e-15);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = HomodyneSamples::from_csv_reader(buf.as_slice(), "t").unwrap();
        assert_eq!(back, s);
        assert!(HomodyneSamples::from_csv_reader("a,b\n1,2\n".as_bytes(), "x").is_err());
        assert!(HomodyneSamples::from_csv_reader("theta,x\n1,zz\n".as_bytes(), "x").is_err());
        assert!(HomodyneSamples::from_csv_reader("theta,x\n".as_bytes(), "x").is_err());
    }

    #[test]
    fn binning_reports_short_bins() {
        let recs: Vec<_> = (0..600).map(|i| (if i < 550 { 0.0 } else { 1.0 }, i as f64)).collect();
        let s = HomodyneSamples::new(recs, "t").unwrap();
        let e = bin_samples(&s, &BinningConfig::default()).unwrap_err().to_string();
        assert!(e.contains("θ=1.0000 (50 records)"), "{e}");
    }

    #[test]
    fn sampler_reproduces_moments() {
        let w = AnalyticTomogram::new(StateTag::Coherent { re: 0.5, im: 0.0 }).unwrap();
        let s = synthesize_samples(&w, &[0.0], 200_000, 1, Execution::Sequential).unwrap();
        let xs: Vec<f64> = s.records().iter().map(|r| r.1).collect();
        let (m, sd) = mean_sd(&xs);
        let m_exact = std::f64::consts::SQRT_2 * 0.5;
        assert!((m - m_exact).abs() < 5.0 * (0.5f64 / 200_000.0).sqrt());
        assert!((sd * sd - 0.5).abs() < 0.01);
    }

    #[test]
    fn kde_is_normalized_and_moment_exact() {
        let w = AnalyticTomogram::new(StateTag::Fock { n: 1 }).unwrap();
        let s = synthesize_samples(&w, &phases(4), 2000, 2, Execution::Sequential).unwrap();
        let kde = empirical_tomogram(&s, &BinningConfig::default()).unwrap();
        for th in [0.0, 0.3, 5.9] {
            let (a, b) = kde.support(th);
            let rule = GaussRule::composite_legendre(16, 200, a, b);
            let norm = rule.integrate(|x| kde.density(x, th));
            assert!((norm - 1.0).abs() < 1e-6, "{norm}");
            let m2 = rule.integrate(|x| x * x * kde.density(x, th));
            assert!((m2 - kde.raw_moment(2, th).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn vacuum_report() {
        let w = AnalyticTomogram::new(StateTag::Vacuum).unwrap();
        let s = synthesize_samples(&w, &phases(8), 5000, 3, Execution::Sequential).unwrap();
        let set = EmpiricalSettings { bootstrap: 50, ..Default::default() };
        let r = empirical_cumulant_report(&s, &set).unwrap();
        let se = r.cumulant_se.as_ref().unwrap();
        for (k, e) in r.cumulants.iter().zip(se) {
            assert!((k[1] - 0.5).abs() < 4.0 * e[1]);
        }
        let ch = r.ch.unwrap();
        assert!(ch.value.abs() < 3.5 * r.ch_se.unwrap());
    }

    #[test]
    fn single_phase_has_no_ch() {
        let w = AnalyticTomogram::new(StateTag::Vacuum).unwrap();
        let s = synthesize_samples(&w, &[0.3], 1000, 4, Execution::Sequential).unwrap();
        let r = empirical_cumulant_report(&s, &EmpiricalSettings { bootstrap: 10, ..Default::default() }).unwrap();
        assert!(r.ch.is_none() && r.ch_note.is_some());
        assert_eq!(r.theta_grid.len(), 1);
    }
}

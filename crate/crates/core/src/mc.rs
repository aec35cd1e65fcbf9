//! Experiment orchestration: reproducible Monte Carlo estimation through
//! the size-bias coupling, disjointness frequencies, truncated moments,
//! distribution comparisons, and CSV/JSON emission.
//!
//! Every experiment is a pure function of its config: sample `i` draws from
//! the substream `(seed, i)`, per-sample results are collected in index
//! order, and aggregation is a sequential compensated reduction, so reports
//! are identical regardless of how many workers ran the samples.
//!
//! The second and third moments are estimated through the coupling
//! identities `E Y = E X^2 / n` and `E Y^2 = E X^3 / n` rather than by
//! averaging `X^2` or `X^3` directly.

use crate::error::{Error, Result};
use crate::graph::{edge_count, EdgeId, HamPath, RngStream};
use crate::limits;
use crate::oracle;
use crate::sizebias::{sample_xyz, CoupledSample};
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Hard cap for the sampling experiments; the subset table for one count at
/// n = 16 takes 8 MiB, which is the intended desk scale.
pub const MAX_SAMPLING_N: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Coupled (x, y, z) sampling and the moment estimates.
    Xyz,
    /// Frequency of X > 0.
    PrPositive,
    /// Pairwise and triple edge-disjointness frequencies of random paths.
    DisjointTriple,
    /// Xyz plus truncated moments at level M.
    Truncated,
    /// Empirical distribution of X/n against the log-normal candidate.
    DistCompare,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: u32,
    pub samples: u64,
    pub seed: u64,
    pub experiment: Experiment,
    /// Truncation level for `min(X/n, M)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    /// Include exact oracle reference values even when they are expensive.
    #[serde(default)]
    pub oracle_refs: bool,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!("need n >= 2, got {}", self.n)));
        }
        if self.samples < 1 {
            return Err(Error::invalid("need samples >= 1"));
        }
        if self.experiment == Experiment::Truncated {
            match self.m {
                Some(m) if m > 0.0 => {}
                _ => return Err(Error::invalid("truncated experiment needs M > 0")),
            }
        }
        if let Some(m) = self.m {
            if !(m > 0.0) {
                return Err(Error::invalid(format!("M must be positive, got {m}")));
            }
        }
        let needs_count_engine = !matches!(self.experiment, Experiment::DisjointTriple);
        if needs_count_engine && self.n > MAX_SAMPLING_N {
            return Err(Error::capacity(format!(
                "sampling experiments support n <= {MAX_SAMPLING_N}, got {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// A sample mean with its standard error (sample std over sqrt(samples)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

/// Compensated (Kahan) sum.
fn ksum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Two-pass compensated mean and standard error.
pub fn mean_stderr(xs: &[f64]) -> Estimate {
    let n = xs.len() as f64;
    let mean = ksum(xs.iter().copied()) / n;
    if xs.len() < 2 {
        return Estimate { mean, stderr: 0.0 };
    }
    let var = ksum(xs.iter().map(|x| (x - mean) * (x - mean))) / (n - 1.0);
    Estimate {
        mean,
        stderr: (var / n).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct References {
    pub ex_over_n: f64,
    pub ex2_over_n2: f64,
    pub ex3_over_n3: f64,
    pub ez_over_n: f64,
}

impl References {
    fn limits() -> References {
        let e = std::f64::consts::E;
        References {
            ex_over_n: 1.0,
            ex2_over_n2: e,
            ex3_over_n3: e.powi(3),
            ez_over_n: e.powi(-2),
        }
    }
}

/// Exact finite-n reference values, included when cheap or requested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRefs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ex2_over_n2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ex3_over_n3: Option<f64>,
    pub ez_over_n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedMoments {
    pub m: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub schema_version: u32,
    pub config: SimConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_x_over_n: Option<Estimate>,
    /// Estimates `E X^2 / n^2` through `E Y / n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_y_over_n: Option<Estimate>,
    /// Estimates `E X^3 / n^3` through `E Y^2 / n^2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_y2_over_n2: Option<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_z_over_n: Option<Estimate>,
    /// Mean of `(Y - e X)^2 / n^2`, the coupling gap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling_gap_over_n2: Option<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frac_x_positive: Option<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<TruncatedMoments>,
    pub references: References,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleRefs>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disjoint: Option<DisjointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist_compare: Option<DistCompareReport>,
}

/// Draw the coupled samples of a config on independent substreams, in
/// stream order.
pub fn xyz_samples(cfg: &SimConfig) -> Result<Vec<CoupledSample>> {
    cfg.validate()?;
    let p0 = HamPath::identity(cfg.n);
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| sample_xyz(cfg.n, RngStream::new(cfg.seed, i), &p0))
        .collect()
}

/// Only the `x` values (cheaper when y and z are not needed).
fn x_samples(cfg: &SimConfig) -> Result<Vec<u64>> {
    cfg.validate()?;
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let o = crate::graph::sample_uniform_ordering(
                cfg.n,
                &mut RngStream::new(cfg.seed, i).rng(),
            )?;
            Ok(crate::count::count_increasing_u64(&o, None))
        })
        .collect()
}

/// Mean of `min(x, M)^k` over samples of `X/n`.
pub fn truncated_moment(xs_over_n: &[f64], m: f64, k: u32) -> f64 {
    let vals: Vec<f64> = xs_over_n
        .iter()
        .map(|&x| x.min(m).powi(k as i32))
        .collect();
    mean_stderr(&vals).mean
}

fn oracle_refs(cfg: &SimConfig) -> Option<OracleRefs> {
    let n = cfg.n;
    let want = cfg.oracle_refs || n <= 8;
    if !want {
        return None;
    }
    let ex2 = (n <= 10).then(|| {
        oracle::exact_moment(n, 2)
            .expect("within oracle range")
            .to_f64()
            / (n as f64).powi(2)
    });
    let ex3 = (n <= 6).then(|| {
        oracle::exact_moment(n, 3)
            .expect("within oracle range")
            .to_f64()
            / (n as f64).powi(3)
    });
    Some(OracleRefs {
        ex2_over_n2: ex2,
        ex3_over_n3: ex3,
        ez_over_n: limits::kaplansky_ratio(n),
    })
}

/// Run one experiment; the report is a pure function of the config.
pub fn run_experiment(cfg: &SimConfig) -> Result<MomentReport> {
    cfg.validate()?;
    let mut report = MomentReport {
        schema_version: SCHEMA_VERSION,
        config: *cfg,
        mean_x_over_n: None,
        mean_y_over_n: None,
        mean_y2_over_n2: None,
        mean_z_over_n: None,
        coupling_gap_over_n2: None,
        frac_x_positive: None,
        truncated: None,
        references: References::limits(),
        oracle: None,
        disjoint: None,
        dist_compare: None,
    };
    let n = cfg.n as f64;
    match cfg.experiment {
        Experiment::Xyz | Experiment::Truncated => {
            let samples = xyz_samples(cfg)?;
            let e = std::f64::consts::E;
            let xs: Vec<f64> = samples.iter().map(|s| s.x as f64 / n).collect();
            let ys: Vec<f64> = samples.iter().map(|s| s.y as f64 / n).collect();
            let y2s: Vec<f64> = samples
                .iter()
                .map(|s| (s.y as f64 / n) * (s.y as f64 / n))
                .collect();
            let zs: Vec<f64> = samples.iter().map(|s| s.z as f64 / n).collect();
            let gaps: Vec<f64> = samples
                .iter()
                .map(|s| {
                    let d = s.y as f64 - e * s.x as f64;
                    d * d / (n * n)
                })
                .collect();
            let pos: Vec<f64> = samples
                .iter()
                .map(|s| if s.x > 0 { 1.0 } else { 0.0 })
                .collect();
            report.mean_x_over_n = Some(mean_stderr(&xs));
            report.mean_y_over_n = Some(mean_stderr(&ys));
            report.mean_y2_over_n2 = Some(mean_stderr(&y2s));
            report.mean_z_over_n = Some(mean_stderr(&zs));
            report.coupling_gap_over_n2 = Some(mean_stderr(&gaps));
            report.frac_x_positive = Some(mean_stderr(&pos));
            if let Some(m) = cfg.m {
                report.truncated = Some(TruncatedMoments {
                    m,
                    k1: truncated_moment(&xs, m, 1),
                    k2: truncated_moment(&xs, m, 2),
                    k3: truncated_moment(&xs, m, 3),
                });
            }
            report.oracle = oracle_refs(cfg);
        }
        Experiment::PrPositive => {
            let samples = x_samples(cfg)?;
            let xs: Vec<f64> = samples.iter().map(|&x| x as f64 / n).collect();
            let pos: Vec<f64> = samples
                .iter()
                .map(|&x| if x > 0 { 1.0 } else { 0.0 })
                .collect();
            report.mean_x_over_n = Some(mean_stderr(&xs));
            report.frac_x_positive = Some(mean_stderr(&pos));
            report.oracle = oracle_refs(cfg);
        }
        Experiment::DisjointTriple => {
            report.disjoint = Some(disjoint_triple_frequency(cfg.n, cfg.samples, cfg.seed)?);
        }
        Experiment::DistCompare => {
            report.dist_compare = Some(dist_compare(cfg.n, cfg.samples, cfg.seed)?);
        }
    }
    Ok(report)
}

/// Edge-disjointness frequencies of `(identity, B, C)` with `B`, `C`
/// uniform random directed Hamiltonian paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisjointReport {
    pub schema_version: u32,
    pub n: u32,
    pub samples: u64,
    pub seed: u64,
    /// All three pairs disjoint.
    pub triple: Estimate,
    pub pairwise_ab: Estimate,
    pub pairwise_ac: Estimate,
    pub pairwise_bc: Estimate,
    pub pairwise_mean: f64,
    pub reference_triple: f64,
    pub reference_pairwise: f64,
}

struct EdgeBits(Vec<u64>);

impl EdgeBits {
    fn new(m: usize) -> EdgeBits {
        EdgeBits(vec![0u64; m.div_ceil(64)])
    }
    fn clear(&mut self) {
        self.0.iter_mut().for_each(|w| *w = 0);
    }
    fn set(&mut self, e: EdgeId) {
        self.0[e.index() / 64] |= 1 << (e.index() % 64);
    }
    fn get(&self, e: EdgeId) -> bool {
        self.0[e.index() / 64] & (1 << (e.index() % 64)) != 0
    }
}

pub fn disjoint_triple_frequency(n: u32, samples: u64, seed: u64) -> Result<DisjointReport> {
    if n < 2 {
        return Err(Error::invalid(format!("need n >= 2, got {n}")));
    }
    if samples < 1 {
        return Err(Error::invalid("need samples >= 1"));
    }
    let m = edge_count(n);
    let mut a_bits = EdgeBits::new(m);
    for e in HamPath::identity(n).edge_iter() {
        a_bits.set(e);
    }
    // integer counters, order-insensitive: deterministic under any schedule
    let counts = (0..samples)
        .into_par_iter()
        .fold(
            || ([0u64; 4], EdgeBits::new(m), EdgeBits::new(m), Vec::new()),
            |(mut acc, mut b_bits, mut c_bits, mut perm), i| {
                let mut rng = RngStream::new(seed, i).rng();
                perm.clear();
                perm.extend(0..n);
                perm.shuffle(&mut rng);
                b_bits.clear();
                let mut ab = true;
                for w in perm.windows(2) {
                    let e = EdgeId::from_pair(w[0], w[1]);
                    ab &= !a_bits.get(e);
                    b_bits.set(e);
                }
                perm.clear();
                perm.extend(0..n);
                perm.shuffle(&mut rng);
                c_bits.clear();
                let (mut ac, mut bc) = (true, true);
                for w in perm.windows(2) {
                    let e = EdgeId::from_pair(w[0], w[1]);
                    ac &= !a_bits.get(e);
                    bc &= !b_bits.get(e);
                    c_bits.set(e);
                }
                acc[0] += ab as u64;
                acc[1] += ac as u64;
                acc[2] += bc as u64;
                acc[3] += (ab && ac && bc) as u64;
                (acc, b_bits, c_bits, perm)
            },
        )
        .map(|(acc, _, _, _)| acc)
        .reduce(
            || [0u64; 4],
            |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]],
        );
    let freq = |hits: u64| -> Estimate {
        let ns = samples as f64;
        let p = hits as f64 / ns;
        let stderr = if samples > 1 {
            (p * (1.0 - p) * ns / (ns - 1.0) / ns).sqrt()
        } else {
            0.0
        };
        Estimate { mean: p, stderr }
    };
    let e = std::f64::consts::E;
    let (ab, ac, bc, triple) = (freq(counts[0]), freq(counts[1]), freq(counts[2]), freq(counts[3]));
    Ok(DisjointReport {
        schema_version: SCHEMA_VERSION,
        n,
        samples,
        seed,
        triple,
        pairwise_ab: ab,
        pairwise_ac: ac,
        pairwise_bc: bc,
        pairwise_mean: (ab.mean + ac.mean + bc.mean) / 3.0,
        reference_triple: e.powi(-6),
        reference_pairwise: e.powi(-2),
    })
}

/// Comparison of the empirical `X/n` distribution against the moments
/// `e^{k(k-1)/2}` and the log-normal shape. Purely observational: the
/// limiting distribution is an open problem, so nothing here passes or
/// fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistCompareReport {
    pub schema_version: u32,
    pub n: u32,
    pub samples: u64,
    pub seed: u64,
    /// Raw empirical moments of X/n, k = 1, 2, 3.
    pub moments: [Estimate; 3],
    pub reference_moments: [f64; 3],
    pub positive_fraction: f64,
    /// Sup distance between the empirical CDF of ln(X/n) given X > 0 and
    /// the normal CDF with mean -1/2 and unit variance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_distance_log: Option<f64>,
}

/// Standard normal CDF via the Abramowitz-Stegun 7.1.26 erf approximation
/// (absolute error < 1.5e-7, plenty for a reported diagnostic).
pub fn standard_normal_cdf(x: f64) -> f64 {
    let t = x / std::f64::consts::SQRT_2;
    let s = t.signum();
    let t = t.abs();
    let u = 1.0 / (1.0 + 0.3275911 * t);
    let poly = u
        * (0.254829592 + u * (-0.284496736 + u * (1.421413741 + u * (-1.453152027 + u * 1.061405429))));
    let erf = s * (1.0 - poly * (-t * t).exp());
    0.5 * (1.0 + erf)
}

pub fn dist_compare(n: u32, samples: u64, seed: u64) -> Result<DistCompareReport> {
    let cfg = SimConfig {
        n,
        samples,
        seed,
        experiment: Experiment::PrPositive,
        m: None,
        oracle_refs: false,
    };
    let xs = x_samples(&cfg)?;
    let nf = n as f64;
    let over_n: Vec<f64> = xs.iter().map(|&x| x as f64 / nf).collect();
    let moments = [
        mean_stderr(&over_n),
        mean_stderr(&over_n.iter().map(|x| x * x).collect::<Vec<_>>()),
        mean_stderr(&over_n.iter().map(|x| x * x * x).collect::<Vec<_>>()),
    ];
    let mut logs: Vec<f64> = over_n
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x.ln())
        .collect();
    logs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ks = if logs.is_empty() {
        None
    } else {
        let nn = logs.len() as f64;
        let mut d = 0.0f64;
        for (i, t) in logs.iter().enumerate() {
            // CDF of Normal(-1/2, 1) at t
            let f = standard_normal_cdf(t + 0.5);
            d = d.max((f - i as f64 / nn).abs());
            d = d.max((f - (i as f64 + 1.0) / nn).abs());
        }
        Some(d)
    };
    let e = std::f64::consts::E;
    Ok(DistCompareReport {
        schema_version: SCHEMA_VERSION,
        n,
        samples,
        seed,
        moments,
        reference_moments: [1.0, e, e.powi(3)],
        positive_fraction: over_n.iter().filter(|&&x| x > 0.0).count() as f64
            / over_n.len() as f64,
        ks_distance_log: ks,
    })
}

// ---------------------------------------------------------------------------
// emission
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmitFormat {
    Csv,
    Json,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Byte-stable JSON rendering (pretty, fixed field order, trailing
/// newline).
pub fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn emit_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(json_string(value).as_bytes())
        .map_err(|e| io_err(path, e))
}

/// CSV rows of coupled samples; header is exactly
/// `n,seed,stream,sample,x,y,z`.
pub fn xyz_csv_string(samples: &[CoupledSample]) -> String {
    let mut out = String::from("n,seed,stream,sample,x,y,z\n");
    for (i, s) in samples.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.n, s.seed, s.stream, i, s.x, s.y, s.z
        ));
    }
    out
}

pub fn emit_xyz_csv(samples: &[CoupledSample], path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(xyz_csv_string(samples).as_bytes())
        .map_err(|e| io_err(path, e))
}

/// Exact moments as JSON records `{n, k, numerator, denominator, float}`.
pub fn moment_json(m: &oracle::ExactMoment) -> String {
    json_string(&m.record())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u32, samples: u64, seed: u64, experiment: Experiment) -> SimConfig {
        SimConfig {
            n,
            samples,
            seed,
            experiment,
            m: None,
            oracle_refs: false,
        }
    }

    #[test]
    fn xyz_at_n3_is_deterministic_with_zero_variance() {
        let report = run_experiment(&cfg(3, 50, 7, Experiment::Xyz)).unwrap();
        let x = report.mean_x_over_n.unwrap();
        assert_eq!(x.mean, 1.0);
        assert_eq!(x.stderr, 0.0);
        let z = report.mean_z_over_n.unwrap();
        assert_eq!(z.mean, 0.0);
    }

    #[test]
    fn reports_are_pure_functions_of_config() {
        let c = cfg(8, 40, 99, Experiment::Xyz);
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(json_string(&a), json_string(&b));
    }

    #[test]
    fn report_is_identical_across_worker_counts() {
        let c = cfg(7, 60, 5, Experiment::Xyz);
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let r1 = pool1.install(|| run_experiment(&c)).unwrap();
        let r4 = pool4.install(|| run_experiment(&c)).unwrap();
        assert_eq!(json_string(&r1), json_string(&r4));
    }

    #[test]
    fn csv_schema_is_exact() {
        let samples = xyz_samples(&cfg(4, 3, 11, Experiment::Xyz)).unwrap();
        let csv = xyz_csv_string(&samples);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "n,seed,stream,sample,x,y,z");
        assert_eq!(lines.count(), 3);
        let line2 = csv.lines().nth(1).unwrap();
        assert!(line2.starts_with("4,11,0,0,"));
    }

    #[test]
    fn json_round_trips_byte_identically() {
        let report = run_experiment(&cfg(6, 25, 3, Experiment::Xyz)).unwrap();
        let s1 = json_string(&report);
        let parsed: MomentReport = serde_json::from_str(&s1).unwrap();
        let s2 = json_string(&parsed);
        assert_eq!(s1, s2);
    }

    #[test]
    fn truncation_with_huge_level_is_identity() {
        let xs = [0.5, 1.5, 2.0, 0.0];
        let raw = mean_stderr(&xs).mean;
        assert_eq!(truncated_moment(&xs, 100.0, 1), raw);
        // and M = 1 clamps
        assert_eq!(truncated_moment(&xs, 1.0, 1), (0.5 + 1.0 + 1.0 + 0.0) / 4.0);
    }

    #[test]
    fn truncated_n4_matches_exhaustive_value() {
        // E min(X/4, 1) over all 720 orderings is 4/5; a large sample gets
        // within 3 standard errors
        let c = SimConfig {
            m: Some(1.0),
            ..cfg(4, 4000, 17, Experiment::Truncated)
        };
        let report = run_experiment(&c).unwrap();
        let t = report.truncated.unwrap();
        let se = report.mean_x_over_n.unwrap().stderr; // same scale
        assert!((t.k1 - 0.8).abs() < 3.0 * se.max(0.01), "{}", t.k1);
    }

    #[test]
    fn disjoint_small_n_is_impossible() {
        let r = disjoint_triple_frequency(3, 500, 1).unwrap();
        assert_eq!(r.triple.mean, 0.0);
        assert_eq!(r.pairwise_ab.mean, 0.0);
    }

    #[test]
    fn disjoint_triple_below_pairwise() {
        let r = disjoint_triple_frequency(30, 20_000, 2).unwrap();
        for pair in [&r.pairwise_ab, &r.pairwise_ac, &r.pairwise_bc] {
            assert!(r.triple.mean <= pair.mean + 1e-12);
        }
        // at n = 30 the pairwise frequency is already near e^-2
        assert!((r.pairwise_mean - r.reference_pairwise).abs() < 0.02);
    }

    #[test]
    fn stderr_shrinks_like_sqrt_two() {
        let a = run_experiment(&cfg(8, 4000, 13, Experiment::PrPositive)).unwrap();
        let b = run_experiment(&cfg(8, 8000, 13, Experiment::PrPositive)).unwrap();
        let ra = a.frac_x_positive.unwrap().stderr;
        let rb = b.frac_x_positive.unwrap().stderr;
        let ratio = ra / rb;
        assert!(
            (ratio - std::f64::consts::SQRT_2).abs() < 0.05 * std::f64::consts::SQRT_2,
            "ratio {ratio}"
        );
    }

    #[test]
    fn normal_cdf_sane() {
        assert!((standard_normal_cdf(0.0) - 0.5).abs() < 1e-7);
        assert!((standard_normal_cdf(1.959964) - 0.975).abs() < 1e-5);
        assert!(standard_normal_cdf(-8.0) < 1e-14);
    }

    #[test]
    fn dist_compare_reports_references() {
        let r = dist_compare(8, 300, 4).unwrap();
        assert_eq!(r.reference_moments[0], 1.0);
        assert!((r.reference_moments[1] - std::f64::consts::E).abs() < 1e-15);
        assert!(r.ks_distance_log.unwrap() <= 1.0);
    }

    #[test]
    fn config_validation() {
        assert!(cfg(1, 10, 0, Experiment::Xyz).validate().is_err());
        assert!(cfg(4, 0, 0, Experiment::Xyz).validate().is_err());
        assert!(cfg(4, 10, 0, Experiment::Truncated).validate().is_err());
        assert!(cfg(17, 10, 0, Experiment::Xyz).validate().is_err());
        assert!(cfg(100, 10, 0, Experiment::DisjointTriple).validate().is_ok());
    }

    #[test]
    fn emit_writes_files_with_io_context() {
        let dir = std::env::temp_dir().join("incpath-mc-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("report.json");
        let report = run_experiment(&cfg(5, 10, 1, Experiment::Xyz)).unwrap();
        emit_json(&report, &path).unwrap();
        let body = std::fs::read_to_string(&path).unwrap();
        assert_eq!(body, json_string(&report));
        let bad = dir.join("missing-dir").join("x.json");
        let err = emit_json(&report, &bad).unwrap_err();
        assert!(err.to_string().contains("missing-dir"));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn moment_json_has_exact_fields() {
        let m = oracle::exact_moment(4, 2).unwrap();
        let s = moment_json(&m);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["numerator"], "296");
        assert_eq!(v["denominator"], "15");
        assert_eq!(v["n"], 4);
    }
}

//! Reproducible experiment driver.
//!
//! Every experiment is a pure function of an [`ExperimentConfig`]: trial `i`
//! draws from `trial_rng(master_seed, i)`, trials run through
//! [`Execution::map`] which returns results in index order, and nothing
//! time-dependent is written. Re-running a config therefore reproduces its
//! output files byte for byte, sequentially or in parallel.
//!
//! Per-trial CSV columns: `trial,seed,V,N_real,N_curve,ratio,excluded`, with
//! `N_curve` the largest count over the configured curves and
//! `ratio = N_curve / (V · ln³ n)`. Excluded trials (root iteration did not
//! converge) leave `N_curve` and `ratio` empty.

use std::io::{Read, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::certificates::{
    default_c_grid, default_grid_points, estimate_turan_b, jensen_bound, random_exp_polynomial, sbar_check,
    theorem2_experiment, turan_ratio, zero_free_circle, CertificateParams, Interval, Theorem2Params,
    Theorem2Report, TuranEstimate,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::newton::{harmonic_v_bound, polygon};
use crate::poly::Polynomial;
use crate::rng::{trial_rng, trial_seed};
use crate::roots::{all_roots, count_real, LipschitzCurve};
use crate::theta::{ModelSampler, ModelSpec};

/// Header note attached to every curve-count summary.
pub const CURVE_FAMILY_NOTE: &str =
    "counts cover the configured curves only; the supremum over all L-Lipschitz curves is not computed";

/// Largest tolerated fraction of excluded trials.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.01;

/// A curve family in a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec {
    /// Both half-axes; a zero is counted once.
    RealAxis,
    PositiveRealAxis,
    /// `θ(r) = l · ln r`.
    Spiral { l: f64 },
    /// `[r, θ]` knots.
    Table { points: Vec<[f64; 2]> },
}

impl CurveSpec {
    pub fn build(&self) -> Result<Vec<LipschitzCurve>> {
        Ok(match self {
            CurveSpec::RealAxis => LipschitzCurve::real_line(),
            CurveSpec::PositiveRealAxis => vec![LipschitzCurve::positive_real_axis()],
            CurveSpec::Spiral { l } => vec![LipschitzCurve::log_spiral(*l)?],
            CurveSpec::Table { points } => {
                let pts: Vec<(f64, f64)> = points.iter().map(|&[r, t]| (r, t)).collect();
                vec![LipschitzCurve::from_table(&pts)?]
            }
        })
    }

    pub fn label(&self) -> String {
        match self {
            CurveSpec::RealAxis => "real_axis".into(),
            CurveSpec::PositiveRealAxis => "positive_real_axis".into(),
            CurveSpec::Spiral { l } => format!("spiral(L={l})"),
            CurveSpec::Table { points } => format!("table({} knots)", points.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theorem2Section {
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_interval")]
    pub interval: [f64; 2],
    #[serde(default = "one")]
    pub r: f64,
    #[serde(default)]
    pub c_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub grid_points: Option<usize>,
    #[serde(default)]
    pub c_candidate: Option<f64>,
    #[serde(default)]
    pub b_candidate: Option<f64>,
    #[serde(default)]
    pub samples: Option<u64>,
}

impl Default for Theorem2Section {
    fn default() -> Self {
        Self {
            m: default_m(),
            interval: default_interval(),
            r: 1.0,
            c_grid: None,
            grid_points: None,
            c_candidate: None,
            b_candidate: None,
            samples: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuranSection {
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_lengths")]
    pub lengths: Vec<f64>,
    /// Overrides the top-level trial count.
    #[serde(default)]
    pub trials: Option<usize>,
    /// Fresh random sums checked against each reported `b_emp`.
    #[serde(default = "default_consistency_samples")]
    pub consistency_samples: usize,
}

impl Default for TuranSection {
    fn default() -> Self {
        Self {
            m: default_m(),
            lengths: default_lengths(),
            trials: None,
            consistency_samples: default_consistency_samples(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySection {
    #[serde(default = "default_certify_degree")]
    pub max_degree: usize,
    #[serde(default = "default_jensen_degree")]
    pub jensen_max_degree: usize,
    #[serde(default = "default_r_range")]
    pub r_range: [f64; 2],
    /// Spread of `ln|λₖ|`: coefficients are `N(0,1)_ℂ · e^{spread·N(0,1)}`.
    #[serde(default = "default_spread")]
    pub log_spread: f64,
}

impl Default for CertifySection {
    fn default() -> Self {
        Self {
            max_degree: default_certify_degree(),
            jensen_max_degree: default_jensen_degree(),
            r_range: default_r_range(),
            log_spread: default_spread(),
        }
    }
}

fn default_m() -> usize {
    2
}
fn default_interval() -> [f64; 2] {
    [0.0, 1.0]
}
fn one() -> f64 {
    1.0
}
fn default_lengths() -> Vec<f64> {
    vec![0.1, 0.5, 1.0, 2.0]
}
fn default_consistency_samples() -> usize {
    1000
}
fn default_certify_degree() -> usize {
    64
}
fn default_jensen_degree() -> usize {
    32
}
fn default_r_range() -> [f64; 2] {
    [1e-3, 1e3]
}
fn default_spread() -> f64 {
    3.0
}
fn default_trials() -> usize {
    1000
}
fn default_model() -> ModelSpec {
    ModelSpec::rademacher(64)
}
fn default_curves() -> Vec<CurveSpec> {
    vec![CurveSpec::RealAxis]
}
fn default_a() -> f64 {
    1.0
}
fn default_curve_tol() -> f64 {
    1e-8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_model")]
    pub model: ModelSpec,
    /// Degree; overrides `model.n`.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_curves")]
    pub curves: Vec<CurveSpec>,
    /// Confidence exponent: the reported failure budget is `n^{−A}`.
    #[serde(default = "default_a", rename = "A")]
    pub a: f64,
    /// Angular tolerance for "on the curve", scaled by `1 + L`.
    #[serde(default = "default_curve_tol")]
    pub curve_tol: f64,
    /// Ratio level whose exceedance frequency is reported.
    #[serde(default)]
    pub c_threshold: Option<f64>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub execution: Execution,
    #[serde(default)]
    pub theorem2: Theorem2Section,
    #[serde(default)]
    pub turan: TuranSection,
    #[serde(default)]
    pub certify: CertifySection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl ExperimentConfig {
    /// Parses TOML, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))?
        } else {
            toml::from_str(text).map_err(|e| Error::config(e.to_string()))?
        };
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn degree(&self) -> Option<usize> {
        self.n.or(self.model.n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::config("trials must be at least 1"));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::config("A must be positive"));
        }
        if !(self.curve_tol > 0.0) {
            return Err(Error::config("curve_tol must be positive"));
        }
        if self.curves.is_empty() {
            return Err(Error::config("at least one curve is required"));
        }
        for c in &self.curves {
            c.build().map_err(|e| Error::config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn sampler(&self) -> Result<ModelSampler> {
        self.model.build(self.n)
    }

    fn curves(&self) -> Result<Vec<Vec<LipschitzCurve>>> {
        self.curves.iter().map(CurveSpec::build).collect()
    }

    /// Runs `op` on the configured worker pool.
    pub fn run<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        crate::exec::with_workers(self.workers, op)
    }
}

/// One Monte Carlo trial of the curve-count study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: u64,
    pub seed: u64,
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "N_real")]
    pub n_real: usize,
    /// Per configured curve; empty when excluded.
    #[serde(rename = "N_curve")]
    pub n_curve: Vec<usize>,
    /// Zeros just outside the curve tolerance, per curve.
    pub ambiguous: Vec<usize>,
    pub ratio: Option<f64>,
    pub excluded: bool,
    pub cert_pass: usize,
    pub cert_fail: usize,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl TrialReport {
    pub fn n_curve_max(&self) -> Option<usize> {
        self.n_curve.iter().copied().max()
    }
}

/// `N / (V · ln³ n)`.
pub fn ratio_statistic(count: usize, v: usize, n: usize) -> f64 {
    count as f64 / (v as f64 * (n as f64).ln().powi(3))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub count: usize,
    pub mean: f64,
    pub q50: f64,
    pub q90: f64,
    pub q99: f64,
    pub max: f64,
}

/// Nearest-rank quantile of sorted data: the `⌈p·N⌉`-th smallest value.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let k = ((p * n as f64).ceil() as usize).clamp(1, n);
    sorted[k - 1]
}

impl Quantiles {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut s = values.to_vec();
        s.sort_by(f64::total_cmp);
        Some(Self {
            count: s.len(),
            mean: values.iter().sum::<f64>() / values.len() as f64,
            q50: nearest_rank(&s, 0.5),
            q90: nearest_rank(&s, 0.9),
            q99: nearest_rank(&s, 0.99),
            max: s[s.len() - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Summary {
    pub note: String,
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub model: ModelSpec,
    pub curves: Vec<String>,
    #[serde(rename = "A")]
    pub a: f64,
    /// `n^{−A}`.
    pub failure_budget: f64,
    pub excluded: usize,
    pub excluded_fraction: f64,
    pub mean_v: f64,
    pub max_n_real: usize,
    /// `N_curve / (V ln³ n)` over included trials.
    pub ratio: Option<Quantiles>,
    /// `N_real / (V ln³ n)` over included trials.
    pub real_ratio: Option<Quantiles>,
    pub c_threshold: Option<f64>,
    /// Fraction of included trials with `ratio > c_threshold`.
    pub exceedance: Option<f64>,
    pub cert_pass: usize,
    pub cert_fail: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Run {
    pub summary: Theorem1Summary,
    pub trials: Vec<TrialReport>,
}

fn trial_rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Samples, polygons, real-zero counts and curve counts for every trial.
pub fn run_theorem1(config: &ExperimentConfig, exec: Execution) -> Result<Theorem1Run> {
    config.validate()?;
    let sampler = config.sampler()?;
    let n = sampler.degree();
    if n < 2 {
        return Err(Error::config("theorem1 needs degree n >= 2"));
    }
    let curves = config.curves()?;
    let reports: Vec<TrialReport> = exec
        .map(config.trials, |i| one_trial(config, &sampler, &curves, n, i as u64))
        .into_iter()
        .collect::<Result<_>>()?;
    let summary = summarize_theorem1(config, n, &reports);
    let run = Theorem1Run { summary, trials: reports };
    Ok(run)
}

fn one_trial(
    config: &ExperimentConfig,
    sampler: &ModelSampler,
    curves: &[Vec<LipschitzCurve>],
    n: usize,
    trial: u64,
) -> Result<TrialReport> {
    let start = Instant::now();
    let seed = trial_seed(config.master_seed, trial);
    let p = sampler.sample(&mut trial_rng_from_seed(seed))?;
    let poly = polygon(&p)?;
    let v = poly.vertex_count;

    let mut cert_pass = 0;
    let mut cert_fail = 0;
    for r in std::iter::once(1.0).chain(poly.breakpoint_radii.iter().copied()) {
        if sbar_check(&p, r)?.ok {
            cert_pass += 1;
        } else {
            cert_fail += 1;
        }
    }

    let roots = match all_roots(&p) {
        Ok(r) => Some(r),
        Err(Error::NoConvergence { .. }) => None,
        Err(e) => return Err(e),
    };
    let n_real = if p.is_real() {
        count_real(&p)?
    } else {
        match &roots {
            Some(r) => r.count_on_curves(&LipschitzCurve::real_line(), config.curve_tol).count,
            None => 0,
        }
    };
    let (n_curve, ambiguous, ratio) = match &roots {
        Some(r) => {
            let counts: Vec<_> = curves.iter().map(|c| r.count_on_curves(c, config.curve_tol)).collect();
            let n_curve: Vec<usize> = counts.iter().map(|c| c.count).collect();
            let max = n_curve.iter().copied().max().unwrap_or(0);
            (n_curve, counts.iter().map(|c| c.ambiguous).collect(), Some(ratio_statistic(max, v, n)))
        }
        None => (Vec::new(), Vec::new(), None),
    };
    Ok(TrialReport {
        trial,
        seed,
        v,
        n_real,
        excluded: roots.is_none(),
        n_curve,
        ambiguous,
        ratio,
        cert_pass,
        cert_fail,
        wall_time: start.elapsed(),
    })
}

fn effective_model(config: &ExperimentConfig, n: usize) -> ModelSpec {
    let mut m = config.model.clone();
    if !matches!(m.kind, crate::theta::ModelKind::Median { .. }) {
        m.n = Some(n);
    }
    m
}

/// Summary statistics of a set of trial reports; also used to re-derive a
/// summary from a CSV file.
pub fn summarize_theorem1(config: &ExperimentConfig, n: usize, reports: &[TrialReport]) -> Theorem1Summary {
    let included: Vec<&TrialReport> = reports.iter().filter(|r| !r.excluded).collect();
    let ratios: Vec<f64> = included.iter().filter_map(|r| r.ratio).collect();
    let real_ratios: Vec<f64> = included.iter().map(|r| ratio_statistic(r.n_real, r.v, n)).collect();
    let excluded = reports.len() - included.len();
    let exceedance = config.c_threshold.and_then(|c| {
        (!ratios.is_empty()).then(|| ratios.iter().filter(|&&x| x > c).count() as f64 / ratios.len() as f64)
    });
    Theorem1Summary {
        note: CURVE_FAMILY_NOTE.into(),
        n,
        trials: reports.len(),
        master_seed: config.master_seed,
        model: effective_model(config, n),
        curves: config.curves.iter().map(CurveSpec::label).collect(),
        a: config.a,
        failure_budget: (n as f64).powf(-config.a),
        excluded,
        excluded_fraction: excluded as f64 / reports.len().max(1) as f64,
        mean_v: reports.iter().map(|r| r.v as f64).sum::<f64>() / reports.len().max(1) as f64,
        max_n_real: reports.iter().map(|r| r.n_real).max().unwrap_or(0),
        ratio: Quantiles::of(&ratios),
        real_ratio: Quantiles::of(&real_ratios),
        c_threshold: config.c_threshold,
        exceedance,
        cert_pass: reports.iter().map(|r| r.cert_pass).sum(),
        cert_fail: reports.iter().map(|r| r.cert_fail).sum(),
    }
}

impl Theorem1Run {
    /// Errors when the exclusion budget or a certificate was violated; the
    /// run's output should be written before calling this.
    pub fn check(&self) -> Result<()> {
        let s = &self.summary;
        if s.cert_fail > 0 {
            return Err(Error::Assertion(format!("{} majorant checks failed", s.cert_fail)));
        }
        if s.excluded_fraction >= MAX_EXCLUDED_FRACTION {
            return Err(Error::Numerical(format!(
                "{} of {} trials excluded (limit {:.0}%)",
                s.excluded,
                s.trials,
                MAX_EXCLUDED_FRACTION * 100.0
            )));
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_trials_csv(&self.trials, w)
    }
}

pub const CSV_HEADER: [&str; 7] = ["trial", "seed", "V", "N_real", "N_curve", "ratio", "excluded"];

pub fn write_trials_csv<W: Write>(reports: &[TrialReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in reports {
        out.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.v.to_string(),
            r.n_real.to_string(),
            r.n_curve_max().map(|x| x.to_string()).unwrap_or_default(),
            r.ratio.map(|x| x.to_string()).unwrap_or_default(),
            u8::from(r.excluded).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// A CSV row as written by [`write_trials_csv`].
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct CsvRow {
    pub trial: u64,
    pub seed: u64,
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "N_real")]
    pub n_real: usize,
    #[serde(rename = "N_curve")]
    pub n_curve: Option<usize>,
    pub ratio: Option<f64>,
    pub excluded: u8,
}

pub fn read_trials_csv<R: Read>(r: R) -> Result<Vec<CsvRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(Error::config(format!("unexpected CSV header {headers:?}")));
    }
    rdr.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub rows: usize,
    pub mismatches: Vec<String>,
    pub ok: bool,
}

/// Recomputes each row's ratio and the whole summary from a trials CSV and
/// compares against the stored summary.
pub fn verify_csv(rows: &[CsvRow], summary: &Theorem1Summary) -> VerifyReport {
    let mut mismatches = Vec::new();
    let n = summary.n;
    let close = |a: f64, b: f64| a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    for (i, row) in rows.iter().enumerate() {
        if row.trial != i as u64 {
            mismatches.push(format!("row {i}: trial index {}", row.trial));
        }
        match (row.excluded, row.n_curve, row.ratio) {
            (0, Some(nc), Some(ratio)) => {
                let want = ratio_statistic(nc, row.v, n);
                if !close(ratio, want) {
                    mismatches.push(format!("row {i}: ratio {ratio} but N_curve/(V ln³n) = {want}"));
                }
            }
            (1, None, None) => {}
            _ => mismatches.push(format!("row {i}: inconsistent excluded/N_curve/ratio fields")),
        }
    }
    let reports: Vec<TrialReport> = rows
        .iter()
        .map(|r| TrialReport {
            trial: r.trial,
            seed: r.seed,
            v: r.v,
            n_real: r.n_real,
            n_curve: r.n_curve.into_iter().collect(),
            ambiguous: Vec::new(),
            ratio: r.ratio,
            excluded: r.excluded != 0,
            cert_pass: 0,
            cert_fail: 0,
            wall_time: Duration::ZERO,
        })
        .collect();
    let cfg = ExperimentConfig {
        model: summary.model.clone(),
        master_seed: summary.master_seed,
        a: summary.a,
        c_threshold: summary.c_threshold,
        ..ExperimentConfig::default()
    };
    let re = summarize_theorem1(&cfg, n, &reports);
    let mut diffs: Vec<(String, f64, f64)> = Vec::new();
    let mut cmp = |name: &str, a: f64, b: f64| diffs.push((name.to_string(), a, b));
    cmp("trials", summary.trials as f64, re.trials as f64);
    cmp("excluded", summary.excluded as f64, re.excluded as f64);
    cmp("mean_v", summary.mean_v, re.mean_v);
    cmp("max_n_real", summary.max_n_real as f64, re.max_n_real as f64);
    for (name, a, b) in [("ratio", &summary.ratio, &re.ratio), ("real_ratio", &summary.real_ratio, &re.real_ratio)] {
        match (a, b) {
            (Some(a), Some(b)) => {
                cmp(&format!("{name}.count"), a.count as f64, b.count as f64);
                cmp(&format!("{name}.mean"), a.mean, b.mean);
                cmp(&format!("{name}.q50"), a.q50, b.q50);
                cmp(&format!("{name}.q90"), a.q90, b.q90);
                cmp(&format!("{name}.q99"), a.q99, b.q99);
                cmp(&format!("{name}.max"), a.max, b.max);
            }
            (None, None) => {}
            _ => cmp(&format!("{name} present"), 1.0, 0.0),
        }
    }
    if let (Some(a), Some(b)) = (summary.exceedance, re.exceedance) {
        cmp("exceedance", a, b);
    }
    for (name, a, b) in diffs {
        if !close(a, b) {
            mismatches.push(format!("{name}: summary {a}, recomputed {b}"));
        }
    }
    VerifyReport {
        rows: rows.len(),
        ok: mismatches.is_empty(),
        mismatches,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollarySummary {
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub model: ModelSpec,
    pub mean_v: f64,
    pub stderr: f64,
    pub min_v: usize,
    pub max_v: usize,
    /// `2 (1 + 1/2 + … + 1/n)`.
    pub bound: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryRun {
    pub summary: CorollarySummary,
    /// `(trial, seed, V)`.
    pub trials: Vec<(u64, u64, usize)>,
}

impl CorollaryRun {
    pub fn check(&self) -> Result<()> {
        let s = &self.summary;
        if s.ok {
            Ok(())
        } else {
            Err(Error::Assertion(format!(
                "mean V = {} exceeds 2H_n + 3·stderr = {}",
                s.mean_v,
                s.bound + 3.0 * s.stderr
            )))
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["trial", "seed", "V"])?;
        for (t, s, v) in &self.trials {
            out.write_record([t.to_string(), s.to_string(), v.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Monte Carlo mean of `V(P)` against `2H_n`. Needs i.i.d. coefficients.
pub fn run_corollary_v(config: &ExperimentConfig, exec: Execution) -> Result<CorollaryRun> {
    config.validate()?;
    let sampler = config.sampler()?;
    if !sampler.is_iid() {
        return Err(Error::config("corollary-v needs a model with i.i.d. coefficients"));
    }
    let n = sampler.degree();
    let rows: Vec<(u64, u64, usize)> = exec
        .map(config.trials, |i| {
            let seed = trial_seed(config.master_seed, i as u64);
            let p = sampler.sample(&mut trial_rng_from_seed(seed))?;
            Ok((i as u64, seed, polygon(&p)?.vertex_count))
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let vs: Vec<f64> = rows.iter().map(|r| r.2 as f64).collect();
    let (mean, stderr) = mean_stderr(&vs);
    let bound = harmonic_v_bound(n)?;
    Ok(CorollaryRun {
        summary: CorollarySummary {
            n,
            trials: rows.len(),
            master_seed: config.master_seed,
            model: effective_model(config, n),
            mean_v: mean,
            stderr,
            min_v: rows.iter().map(|r| r.2).min().unwrap_or(0),
            max_v: rows.iter().map(|r| r.2).max().unwrap_or(0),
            bound,
            ok: mean <= bound + 3.0 * stderr,
        },
        trials: rows,
    })
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Flip-model failure fractions for the configured model. Random magnitude
/// laws are drawn once from trial 0's stream.
pub fn run_theorem2(config: &ExperimentConfig, exec: Execution) -> Result<Theorem2Report> {
    config.validate()?;
    let sampler = config.sampler()?;
    let model = sampler.draw_model(&mut trial_rng(config.master_seed, 0))?;
    let s = &config.theorem2;
    let params = Theorem2Params {
        cert: CertificateParams {
            m: s.m,
            interval: Interval::new(s.interval[0], s.interval[1]).map_err(|e| Error::config(e.to_string()))?,
            r: s.r,
            c_candidate: s.c_candidate,
            b_candidate: s.b_candidate,
            grid_points: s.grid_points,
        },
        c_grid: s.c_grid.clone().unwrap_or_else(default_c_grid),
        samples: s.samples,
        seed: config.master_seed,
    };
    theorem2_experiment(&model, &params, exec)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TuranReport {
    pub m: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub estimates: Vec<TuranEstimate>,
    pub consistency_samples: usize,
    /// Fresh sums with `turan_ratio < (b_emp |I|)^{m−1} (1 − 1e−9)`.
    pub consistency_violations: usize,
    /// `b_candidate ≤ b_emp` for every length, when a candidate is configured.
    pub b_candidate: Option<f64>,
    pub b_candidate_consistent: Option<bool>,
}

impl TuranReport {
    pub fn check(&self) -> Result<()> {
        if self.consistency_violations > 0 {
            return Err(Error::Assertion(format!(
                "{} fresh samples fall below the reported b_emp",
                self.consistency_violations
            )));
        }
        Ok(())
    }
}

/// Empirical Turán constants plus a self-consistency check on fresh samples.
pub fn run_turan_b(config: &ExperimentConfig, exec: Execution) -> Result<TuranReport> {
    config.validate()?;
    let s = &config.turan;
    let trials = s.trials.unwrap_or(config.trials);
    let estimates = estimate_turan_b(s.m, &s.lengths, trials, config.master_seed, exec)?;
    let check_seed = config.master_seed ^ 0xC0FF_EE00_D15C_A5E5;
    let mut violations = 0;
    for (j, est) in estimates.iter().enumerate() {
        let interval = Interval::centered(est.interval_length)?;
        let floor = (est.b_emp * est.interval_length).powi(s.m as i32 - 1) * (1.0 - 1e-9);
        let bad = exec.map(s.consistency_samples, |i| -> Result<bool> {
            let mut rng = trial_rng(check_seed, (j * s.consistency_samples + i) as u64);
            Ok(turan_ratio(&random_exp_polynomial(s.m, &mut rng), interval)? < floor)
        });
        for b in bad {
            violations += usize::from(b?);
        }
    }
    let b_candidate = config.theorem2.b_candidate;
    Ok(TuranReport {
        m: s.m,
        trials,
        master_seed: config.master_seed,
        b_candidate_consistent: b_candidate.map(|b| estimates.iter().all(|e| b <= e.b_emp)),
        estimates,
        consistency_samples: s.consistency_samples,
        consistency_violations: violations,
        b_candidate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifyFailure {
    pub certificate: String,
    pub trial: u64,
    pub coefficients: Polynomial,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifyReport {
    pub trials: usize,
    pub master_seed: u64,
    pub sbar_pass_rate: f64,
    pub jensen_pass_rate: f64,
    pub zero_free_certified_fraction: f64,
    pub zero_free_violations: usize,
    pub failures: Vec<CertifyFailure>,
}

impl CertifyReport {
    pub fn check(&self) -> Result<()> {
        if self.failures.is_empty() {
            Ok(())
        } else {
            Err(Error::Assertion(format!("{} certificate checks failed", self.failures.len())))
        }
    }
}

/// A random complex polynomial of degree `1..=max_degree` whose coefficient
/// magnitudes spread over `e^{±spread}`.
pub fn random_certify_polynomial<R: Rng + ?Sized>(max_degree: usize, spread: f64, rng: &mut R) -> Polynomial {
    let n = rng.random_range(1..=max_degree);
    let coeffs = (0..=n)
        .map(|_| {
            let scale = (spread * rng.sample::<f64, _>(StandardNormal)).exp();
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * scale
        })
        .collect();
    Polynomial::new(coeffs).expect("finite coefficients with non-zero leading term")
}

fn log_uniform<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    (rng.random_range(lo.ln()..=hi.ln())).exp()
}

struct CertifyTrial {
    sbar: bool,
    jensen: bool,
    certified: bool,
    violation: bool,
    failures: Vec<CertifyFailure>,
}

/// Sweeps the majorant, Jensen and zero-free-circle certificates over random inputs.
pub fn run_certify(config: &ExperimentConfig, exec: Execution) -> Result<CertifyReport> {
    config.validate()?;
    let s = &config.certify;
    if s.max_degree < 1 || s.jensen_max_degree < 1 {
        return Err(Error::config("certify degrees must be positive"));
    }
    let [r_lo, r_hi] = s.r_range;
    if !(r_lo > 0.0 && r_lo <= r_hi && r_hi.is_finite()) {
        return Err(Error::config("certify r_range must satisfy 0 < lo <= hi"));
    }
    let results: Vec<CertifyTrial> = exec
        .map(config.trials, |i| certify_trial(config, i as u64))
        .into_iter()
        .collect::<Result<_>>()?;
    let t = results.len() as f64;
    let count = |f: fn(&CertifyTrial) -> bool| results.iter().filter(|r| f(r)).count();
    Ok(CertifyReport {
        trials: results.len(),
        master_seed: config.master_seed,
        sbar_pass_rate: count(|r| r.sbar) as f64 / t,
        jensen_pass_rate: count(|r| r.jensen) as f64 / t,
        zero_free_certified_fraction: count(|r| r.certified) as f64 / t,
        zero_free_violations: count(|r| r.violation),
        failures: results.into_iter().flat_map(|r| r.failures).collect(),
    })
}

fn certify_trial(config: &ExperimentConfig, trial: u64) -> Result<CertifyTrial> {
    let s = &config.certify;
    let mut rng = trial_rng(config.master_seed, trial);
    let mut failures = Vec::new();
    let mut fail = |name: &str, p: &Polynomial, detail: String| {
        failures.push(CertifyFailure {
            certificate: name.into(),
            trial,
            coefficients: p.clone(),
            detail,
        })
    };

    let p = random_certify_polynomial(s.max_degree, s.log_spread, &mut rng);
    let r = log_uniform(s.r_range[0], s.r_range[1], &mut rng);
    let sb = sbar_check(&p, r)?;
    if !sb.ok {
        fail("sbar", &p, format!("r = {r}, lhs = {}, rhs = {}", sb.lhs, sb.rhs));
    }

    let q = random_certify_polynomial(s.jensen_max_degree, 0.0, &mut rng);
    let center = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let radius = log_uniform(0.1, 10.0, &mut rng);
    let j = jensen_bound(&q, center, radius, default_grid_points(q.degree()))?;
    if !j.ok {
        fail(
            "jensen",
            &q,
            format!("center = {center}, radius = {radius}, bound = {}, actual = {}", j.bound, j.actual),
        );
    }

    let z = random_certify_polynomial(s.max_degree, s.log_spread, &mut rng);
    let rz = log_uniform(1e-2, 1e2, &mut rng);
    let t = crate::poly::radius_to_t(rz);
    let cert = zero_free_circle(&z, t)?;
    let mut violation = false;
    if cert.certified {
        let radius = cert.radius;
        let roots = all_roots(&z)?;
        if let Some(w) = roots.roots.iter().find(|w| (w.norm() - radius).abs() <= 1e-9 * radius) {
            violation = true;
            fail("zero_free", &z, format!("t = {t}: root {w} on |z| = {radius}"));
        }
    }
    Ok(CertifyTrial {
        sbar: sb.ok,
        jensen: j.ok,
        certified: cert.certified,
        violation,
        failures,
    })
}

/// `(trial, seed, P)` for the first `config.trials` trials.
pub fn sample_polynomials(config: &ExperimentConfig) -> Result<Vec<(u64, u64, Polynomial)>> {
    config.validate()?;
    let sampler = config.sampler()?;
    (0..config.trials as u64)
        .map(|i| {
            let seed = trial_seed(config.master_seed, i);
            Ok((i, seed, sampler.sample(&mut trial_rng_from_seed(seed))?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::MagnitudeLaw;

    fn config(n: usize, trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            model: ModelSpec::rademacher(n),
            trials,
            master_seed: 11,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn nearest_rank_quantiles() {
        let q = Quantiles::of(&[3.0]).unwrap();
        assert_eq!((q.q50, q.q90, q.q99, q.max, q.mean), (3.0, 3.0, 3.0, 3.0, 3.0));
        let xs: Vec<f64> = (1..=100).map(f64::from).collect();
        let q = Quantiles::of(&xs).unwrap();
        assert_eq!((q.q50, q.q90, q.q99, q.max), (50.0, 90.0, 99.0, 100.0));
        assert!(Quantiles::of(&[]).is_none());
    }

    #[test]
    fn degree_two_rademacher() {
        let run = run_theorem1(&config(2, 64), Execution::Sequential).unwrap();
        let bound = 2.0 / (2.0 * 2f64.ln().powi(3));
        for t in &run.trials {
            assert_eq!(t.v, 2);
            assert!(t.n_real <= 2);
            assert!(t.ratio.unwrap() <= bound + 1e-12);
            assert_eq!(t.ratio.unwrap(), ratio_statistic(t.n_curve_max().unwrap(), t.v, 2));
        }
        run.check().unwrap();
    }

    #[test]
    fn single_trial_summary() {
        let run = run_theorem1(&config(8, 1), Execution::Sequential).unwrap();
        let q = run.summary.ratio.clone().unwrap();
        assert_eq!(q.q50, q.max);
        assert_eq!(q.q90, q.q99);
        assert_eq!(q.mean, q.q50);
    }

    #[test]
    fn theorem1_rejects_low_degree_and_zero_trials() {
        assert!(run_theorem1(&config(1, 10), Execution::Sequential).is_err());
        assert!(matches!(
            run_theorem1(&config(4, 0), Execution::Sequential),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn csv_roundtrip_verifies() {
        let mut cfg = config(16, 40);
        cfg.c_threshold = Some(0.1);
        let run = run_theorem1(&cfg, Execution::Parallel).unwrap();
        let mut buf = Vec::new();
        run.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("trial,seed,V,N_real,N_curve,ratio,excluded\n"));
        let rows = read_trials_csv(&buf[..]).unwrap();
        let rep = verify_csv(&rows, &run.summary);
        assert!(rep.ok, "{:?}", rep.mismatches);

        let mut tampered = rows.clone();
        tampered[3].ratio = Some(tampered[3].ratio.unwrap() + 0.5);
        assert!(!verify_csv(&tampered, &run.summary).ok);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let cfg = config(24, 30);
        let a = run_theorem1(&cfg, Execution::Sequential).unwrap();
        let b = run_theorem1(&cfg, Execution::Parallel).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn corollary_refuses_non_iid() {
        let mut cfg = config(2, 10);
        cfg.model = ExperimentConfig::parse(
            r#"[model]
kind = "median"
a = 0.0
pairs = [[1.0, -1.0], [2.0, -2.0], [1.0, -1.0]]
"#,
        )
        .unwrap()
        .model;
        assert!(matches!(run_corollary_v(&cfg, Execution::Sequential), Err(Error::Config(_))));
    }

    #[test]
    fn corollary_small_run() {
        let mut cfg = config(10, 500);
        cfg.model = ModelSpec::symmetric(MagnitudeLaw::Normal { sigma: 1.0 }, 10);
        let run = run_corollary_v(&cfg, Execution::Parallel).unwrap();
        assert!(run.summary.min_v >= 2);
        assert!(run.summary.mean_v >= 2.0);
        run.check().unwrap();
    }

    #[test]
    fn config_parsing() {
        let cfg = ExperimentConfig::parse(
            r#"
trials = 5
master_seed = 9
A = 2.0
curves = [{ kind = "real_axis" }, { kind = "spiral", l = 1.5 }]

[model]
kind = "symmetric"
magnitudes = { law = "uniform", low = 0.0, high = 1.0 }
n = 12

[theorem2]
m = 3
interval = [0.0, 0.5]
"#,
        )
        .unwrap();
        assert_eq!(cfg.degree(), Some(12));
        assert_eq!(cfg.curves.len(), 2);
        assert_eq!(cfg.theorem2.m, 3);
        cfg.validate().unwrap();
        assert!(ExperimentConfig::parse("bogus_key = 1").is_err());
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::parse(&json).unwrap(), cfg);
    }

    #[test]
    fn certify_small_sweep() {
        let mut cfg = config(4, 40);
        cfg.certify.max_degree = 16;
        cfg.certify.jensen_max_degree = 8;
        let rep = run_certify(&cfg, Execution::Parallel).unwrap();
        assert_eq!(rep.sbar_pass_rate, 1.0);
        assert_eq!(rep.jensen_pass_rate, 1.0);
        assert_eq!(rep.zero_free_violations, 0);
        rep.check().unwrap();
    }
}

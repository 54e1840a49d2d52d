//! Runnable forms of the analytic estimates behind the zero-counting bounds.
//!
//! * [`arc_max`] / [`turan_ratio`] / [`estimate_turan_b`]: sup-norms of
//!   exponential sums on arcs and the Turán-type constant `b`.
//! * [`sbar_check`]: `S(r; (1−z)P) ≥ (1+r)/(2(n+1)) · S(r; P)`.
//! * [`jensen_bound`]: zeros in a half-radius disk versus the log-ratio of maxima.
//! * [`zero_free_circle`]: dominance of the central term with geometric slack.
//! * [`theorem2_experiment`]: exhaustive sign-flip statistics of
//!   `max_I |P(re^{iθ})| / S(r, P)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::poly::Polynomial;
use crate::rng::{mix64, trial_rng};
use crate::roots::all_roots;
use crate::theta::{FlipModel, SignSequence, MAX_ENUMERATION_DEGREE};

/// Parabolic refinement steps per local maximum in [`arc_max`].
const REFINE_ITERS: usize = 20;
/// Allowed relative change of [`arc_max`] when the grid is doubled.
pub const GRID_DOUBLING_TOL: f64 = 1e-9;
/// Number of logarithmic histogram bins in [`Theorem2Report`].
pub const HISTOGRAM_BINS: usize = 64;
/// Decades covered by the histogram: `[1e−16, 1]`.
const HISTOGRAM_DECADES: f64 = 16.0;

/// A closed interval `[lo, hi]` of angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::domain(format!("invalid interval [{lo}, {hi}]")));
        }
        if hi - lo > 2.0 * PI * (1.0 + 1e-12) {
            return Err(Error::domain(format!("interval length {} exceeds 2π", hi - lo)));
        }
        Ok(Self { lo, hi })
    }

    /// `[−len/2, len/2]`.
    pub fn centered(len: f64) -> Result<Self> {
        Self::new(-len / 2.0, len / 2.0)
    }

    pub fn full_circle() -> Self {
        Self { lo: -PI, hi: PI }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// `max(1024, 64·(m+1))`.
pub fn default_grid_points(m: usize) -> usize {
    1024.max(64 * (m + 1))
}

/// A function of an angle whose modulus is maximized by [`arc_max`].
pub trait ArcFunction: Sync {
    fn value(&self, t: f64) -> Complex64;

    fn modulus(&self, t: f64) -> f64 {
        self.value(t).norm()
    }
}

/// `p(t) = Σ aₖ e^{iℓₖt}` with distinct integer frequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpPolynomial {
    terms: Vec<(Complex64, i64)>,
}

impl ExpPolynomial {
    pub fn new(terms: Vec<(Complex64, i64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("exponential sum needs at least one term"));
        }
        let mut freqs: Vec<i64> = terms.iter().map(|t| t.1).collect();
        freqs.sort_unstable();
        if freqs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("frequencies must be pairwise distinct"));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(Complex64, i64)] {
        &self.terms
    }

    /// `Σ |aₖ|`.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|(a, _)| a.norm()).sum()
    }
}

impl ArcFunction for ExpPolynomial {
    fn value(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(a, l)| a * Complex64::cis(l as f64 * t))
            .sum()
    }
}

/// `θ ↦ P(c + ρ e^{iθ})`.
#[derive(Clone, Copy, Debug)]
pub struct OnCircle<'a> {
    pub poly: &'a Polynomial,
    pub center: Complex64,
    pub radius: f64,
}

impl<'a> OnCircle<'a> {
    pub fn origin(poly: &'a Polynomial, radius: f64) -> Self {
        Self {
            poly,
            center: Complex64::new(0.0, 0.0),
            radius,
        }
    }
}

impl ArcFunction for OnCircle<'_> {
    fn value(&self, t: f64) -> Complex64 {
        self.poly.eval(self.center + Complex64::from_polar(self.radius, t))
    }
}

/// `max_{t∈I} |f(t)|`: an equispaced grid (endpoints included) followed by
/// parabolic refinement around every significant local maximum. Never below
/// the grid maximum.
pub fn arc_max<F: ArcFunction + ?Sized>(f: &F, interval: Interval, grid_points: usize) -> Result<f64> {
    if grid_points < 2 {
        return Err(Error::domain("arc_max needs at least 2 grid points"));
    }
    let len = interval.length();
    if len == 0.0 {
        return Ok(f.modulus(interval.lo));
    }
    let h = len / (grid_points - 1) as f64;
    let ts: Vec<f64> = (0..grid_points)
        .map(|j| if j + 1 == grid_points { interval.hi } else { interval.lo + h * j as f64 })
        .collect();
    let vals: Vec<f64> = ts.iter().map(|&t| f.modulus(t)).collect();
    let grid_max = vals.iter().copied().fold(0.0, f64::max);
    if !grid_max.is_finite() {
        return Err(Error::Numerical("non-finite value on arc".into()));
    }
    let mut best = grid_max;
    let last = grid_points - 1;
    for j in 0..grid_points {
        let v = vals[j];
        if v < 0.5 * grid_max {
            continue;
        }
        let left_ok = j == 0 || v > vals[j - 1];
        let right_ok = j == last || v >= vals[j + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let refined = if j == 0 || j == last {
            let (a, c) = if j == 0 { (ts[0], ts[1]) } else { (ts[last - 1], ts[last]) };
            let mid = 0.5 * (a + c);
            let fm = f.modulus(mid);
            if fm > vals[j].max(if j == 0 { vals[1] } else { vals[last - 1] }) {
                refine(f, (a, f.modulus(a)), (mid, fm), (c, f.modulus(c)))
            } else {
                v
            }
        } else {
            refine(f, (ts[j - 1], vals[j - 1]), (ts[j], v), (ts[j + 1], vals[j + 1]))
        };
        best = best.max(refined);
    }
    Ok(best)
}

// Successive parabolic interpolation on a bracket a < b < c with f(b) ≥ f(a), f(c).
fn refine<F: ArcFunction + ?Sized>(f: &F, a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    const GOLD: f64 = 0.381_966_011_250_105;
    let (mut a, mut b, mut c) = (a, b, c);
    for _ in 0..REFINE_ITERS {
        if c.0 - a.0 <= 4.0 * f64::EPSILON * (1.0 + b.0.abs()) {
            break;
        }
        let p = (b.0 - a.0) * (b.1 - c.1);
        let q = (b.0 - c.0) * (b.1 - a.1);
        let den = p - q;
        let mut x = if den != 0.0 {
            b.0 - 0.5 * ((b.0 - a.0) * p - (b.0 - c.0) * q) / den
        } else {
            f64::NAN
        };
        if !(x > a.0 && x < c.0) || x == b.0 {
            x = if b.0 - a.0 > c.0 - b.0 {
                b.0 - GOLD * (b.0 - a.0)
            } else {
                b.0 + GOLD * (c.0 - b.0)
            };
        }
        let fx = f.modulus(x);
        if fx > b.1 {
            if x < b.0 {
                c = b;
            } else {
                a = b;
            }
            b = (x, fx);
        } else if x < b.0 {
            a = (x, fx);
        } else {
            c = (x, fx);
        }
    }
    b.1
}

/// [`arc_max`] cross-checked against a grid of twice the density.
pub fn arc_max_checked<F: ArcFunction + ?Sized>(f: &F, interval: Interval, grid_points: usize) -> Result<f64> {
    let coarse = arc_max(f, interval, grid_points)?;
    let fine = arc_max(f, interval, 2 * grid_points - 1)?;
    let scale = coarse.abs().max(fine.abs());
    if (coarse - fine).abs() > GRID_DOUBLING_TOL * scale {
        return Err(Error::Numerical(format!(
            "arc maximum moved from {coarse} to {fine} when doubling the grid ({grid_points} points)"
        )));
    }
    Ok(coarse.max(fine))
}

/// `max_I |p| / Σ|aₖ|`.
pub fn turan_ratio(p: &ExpPolynomial, interval: Interval) -> Result<f64> {
    let grid = default_grid_points(p.terms.len());
    Ok(arc_max(p, interval, grid)? / p.l1_norm())
}

/// Parameters shared by the certificate experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateParams {
    pub m: usize,
    pub interval: Interval,
    pub r: f64,
    #[serde(default)]
    pub c_candidate: Option<f64>,
    #[serde(default)]
    pub b_candidate: Option<f64>,
    #[serde(default)]
    pub grid_points: Option<usize>,
}

impl CertificateParams {
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::config("m must be positive"));
        }
        Interval::new(self.interval.lo, self.interval.hi).map_err(|e| Error::config(e.to_string()))?;
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::config(format!("radius must be positive, got {}", self.r)));
        }
        if let Some(g) = self.grid_points {
            if g < 64 * (self.m + 1) {
                return Err(Error::config(format!(
                    "grid_points {g} below 64·(m+1) = {}",
                    64 * (self.m + 1)
                )));
            }
        }
        for (name, v) in [("c_candidate", self.c_candidate), ("b_candidate", self.b_candidate)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(Error::config(format!("{name} must be positive")));
                }
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> usize {
        self.grid_points.unwrap_or_else(|| default_grid_points(self.m))
    }
}

/// Empirical Turán constant for one `(m, |I|)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuranEstimate {
    pub m: usize,
    pub interval_length: f64,
    pub trials: usize,
    pub min_ratio: f64,
    /// `min_ratio^{1/(m−1)} / |I|`.
    pub b_emp: f64,
    /// The minimizing exponential sum.
    pub worst: ExpPolynomial,
}

const LOCAL_SEARCH_STEPS: usize = 200;

/// Random exponential sum with `m` terms: frequencies `0..m` half of the
/// time, otherwise a random `m`-subset of `0..3m`; complex normal coefficients.
pub fn random_exp_polynomial<R: Rng + ?Sized>(m: usize, rng: &mut R) -> ExpPolynomial {
    let freqs: Vec<i64> = if rng.random_bool(0.5) {
        (0..m as i64).collect()
    } else {
        let mut pool: Vec<i64> = (0..3 * m as i64).collect();
        for i in 0..m {
            let j = rng.random_range(i..pool.len());
            pool.swap(i, j);
        }
        let mut f = pool[..m].to_vec();
        f.sort_unstable();
        f
    };
    let terms = freqs
        .into_iter()
        .map(|l| (Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)), l))
        .collect();
    ExpPolynomial::new(terms).expect("distinct frequencies")
}

/// Minimizes [`turan_ratio`] over `trials` random sums per interval length,
/// each followed by a coordinate-wise local search. The reported `b_emp` is
/// an upper bound on the optimal constant.
///
/// Trial `i` for the `j`-th length draws from a stream fixed by
/// `(seed, j, i)`, so increasing `trials` can only lower `b_emp`.
pub fn estimate_turan_b(
    m: usize,
    interval_lengths: &[f64],
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<TuranEstimate>> {
    if m < 2 {
        return Err(Error::config("Turán estimate needs m >= 2"));
    }
    if trials < 10 {
        return Err(Error::config("Turán estimate needs at least 10 trials"));
    }
    let mut out = Vec::with_capacity(interval_lengths.len());
    for (j, &len) in interval_lengths.iter().enumerate() {
        let interval = Interval::centered(len).map_err(|e| Error::config(e.to_string()))?;
        if len <= 0.0 {
            return Err(Error::config("interval lengths must be positive"));
        }
        let stream = mix64(seed ^ mix64(j as u64 + 0x5475_7261_6e00));
        let results = exec.map(trials, |i| {
            let mut rng = trial_rng(stream, i as u64);
            minimize_ratio(random_exp_polynomial(m, &mut rng), interval, &mut rng)
        });
        let mut best: Option<(f64, ExpPolynomial)> = None;
        for r in results {
            let (ratio, p) = r?;
            if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                best = Some((ratio, p));
            }
        }
        let (min_ratio, worst) = best.expect("trials >= 10");
        out.push(TuranEstimate {
            m,
            interval_length: len,
            trials,
            min_ratio,
            b_emp: min_ratio.powf(1.0 / (m - 1) as f64) / len,
            worst,
        });
    }
    Ok(out)
}

fn minimize_ratio<R: Rng + ?Sized>(
    mut p: ExpPolynomial,
    interval: Interval,
    rng: &mut R,
) -> Result<(f64, ExpPolynomial)> {
    let mut ratio = turan_ratio(&p, interval)?;
    let mut step = 0.3;
    for s in 0..LOCAL_SEARCH_STEPS {
        let i = s % p.terms.len();
        let mut cand = p.clone();
        let scale = step * (p.l1_norm() / p.terms.len() as f64);
        let delta = Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal));
        cand.terms[i].0 += delta * scale;
        if cand.l1_norm() == 0.0 {
            continue;
        }
        let r = turan_ratio(&cand, interval)?;
        if r < ratio {
            ratio = r;
            p = cand;
            step = (step * 1.2).min(1.0);
        } else {
            step = (step * 0.7).max(1e-6);
        }
    }
    Ok((ratio, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SbarCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `S(r; (1−z)P) ≥ (1+r)/(2(n+1)) · S(r; P)`, with relative slack `1e−12`.
pub fn sbar_check(p: &Polynomial, r: f64) -> Result<SbarCheck> {
    let lhs = p.bar_transform().s_majorant(r)?;
    let rhs = (1.0 + r) / (2.0 * (p.degree() + 1) as f64) * p.s_majorant(r)?;
    Ok(SbarCheck {
        lhs,
        rhs,
        ok: lhs >= rhs * (1.0 - 1e-12),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JensenCheck {
    /// `log(max_{|z−c|=R}|P| / max_{|z−c|=R/2}|P|) / log(5/4)`.
    pub bound: f64,
    /// Computed zeros in the closed disk `|z−c| ≤ R/2`, with multiplicity.
    pub actual: usize,
    pub ok: bool,
}

/// Zero count in the half-radius disk against the Jensen-type bound with
/// Blaschke factor `4/5`.
pub fn jensen_bound(p: &Polynomial, center: Complex64, radius: f64, grid_points: usize) -> Result<JensenCheck> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::domain(format!("disk radius must be positive, got {radius}")));
    }
    let full = Interval::full_circle();
    let outer = arc_max(&OnCircle { poly: p, center, radius }, full, grid_points)?;
    let inner = arc_max(
        &OnCircle {
            poly: p,
            center,
            radius: radius / 2.0,
        },
        full,
        grid_points,
    )?;
    if inner < 1e-300 {
        return Err(Error::Numerical("polynomial numerically vanishes on the inner circle".into()));
    }
    let bound = (outer / inner).ln() / 1.25f64.ln();
    let actual = if p.degree() == 0 {
        0
    } else {
        all_roots(p)?
            .roots
            .iter()
            .filter(|z| (*z - center).norm() <= radius / 2.0)
            .count()
    };
    Ok(JensenCheck {
        bound,
        actual,
        ok: actual as f64 <= bound.ceil(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroFreeCertificate {
    pub certified: bool,
    /// `min_{k≠ν} [log|λ_ν| − 2πνt − (log|λₖ| − 2πkt + 2π|k−ν|)]`.
    pub margin: f64,
    pub central_index: usize,
    /// `e^{−2πt}`.
    pub radius: f64,
}

/// Certifies that `P` has no zero on `|z| = e^{−2πt}` when the central term
/// beats every other term by the factor `e^{2π|k−ν|}`: the tail is then at
/// most `2Σ_{j≥1} e^{−2πj} < 1` times the central term.
pub fn zero_free_circle(p: &Polynomial, t: f64) -> Result<ZeroFreeCertificate> {
    let nu = p.central_index(t)?;
    let two_pi = 2.0 * PI;
    let central = p.coeffs()[nu].norm().ln() - two_pi * nu as f64 * t;
    let margin = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|&(k, c)| k != nu && c.norm() > 0.0)
        .map(|(k, c)| {
            let other = c.norm().ln() - two_pi * k as f64 * t + two_pi * (k as f64 - nu as f64).abs();
            central - other
        })
        .fold(f64::INFINITY, f64::min);
    Ok(ZeroFreeCertificate {
        certified: margin >= 0.0,
        margin,
        central_index: nu,
        radius: crate::poly::t_to_radius(t),
    })
}

/// Parameters of [`theorem2_experiment`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Params {
    #[serde(flatten)]
    pub cert: CertificateParams,
    pub c_grid: Vec<f64>,
    /// Monte Carlo sample count when the degree is too large to enumerate.
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub seed: u64,
}

/// `10^{−3} … 10^{1}` in 97 log-spaced steps.
pub fn default_c_grid() -> Vec<f64> {
    (0..=96).map(|j| 10f64.powf(-3.0 + 4.0 * j as f64 / 96.0)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureRow {
    pub c: f64,
    /// `n⁻² (c|I|)^{6m}`.
    pub threshold: f64,
    pub failures: u64,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioHistogram {
    /// Bin `j` covers `[10^{lo + j·w}, 10^{lo + (j+1)·w})`; the first bin also
    /// holds everything smaller.
    pub log10_lo: f64,
    pub log10_width: f64,
    pub counts: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub params: Theorem2Params,
    pub n: usize,
    pub sequences: u64,
    pub exhaustive: bool,
    pub target: f64,
    pub ratio_min: f64,
    pub ratio_median: f64,
    pub ratio_max: f64,
    pub histogram: RatioHistogram,
    pub failure_table: Vec<FailureRow>,
    /// Largest grid `c` with failure fraction `≤ 2^{−m}`.
    pub c_star: Option<f64>,
    pub f_at_c_star: Option<f64>,
    pub candidate: Option<FailureRow>,
    /// Fewer than one sequence's worth of probability mass fits under `2^{−m}`.
    pub resolution_limited: bool,
    pub sequence_with_min_ratio: String,
}

/// Distribution over sign sequences of `max_{θ∈I}|P_σ(re^{iθ})| / S(r, P_σ)`
/// and the failure fractions `f(c) = #{σ : ratio ≤ n⁻²(c|I|)^{6m}} / #σ`.
///
/// All `2^{n+1}` sequences are enumerated when `n ≤ 24`; otherwise
/// `max(2^{m+10}, samples)` uniform sequences are drawn.
pub fn theorem2_experiment(model: &FlipModel, params: &Theorem2Params, exec: Execution) -> Result<Theorem2Report> {
    params.cert.validate()?;
    if params.c_grid.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
        return Err(Error::config("c_grid entries must be positive"));
    }
    let n = model.degree();
    if n < 1 {
        return Err(Error::config("theorem 2 experiment needs degree >= 1"));
    }
    let zero = Complex64::new(0.0, 0.0);
    if model.pairs()[n].0 == zero || model.pairs()[n].1 == zero {
        return Err(Error::config("λₙ± must be non-zero"));
    }
    let m = params.cert.m;
    let interval = params.cert.interval;
    let r = params.cert.r;
    let grid = params.cert.grid();

    let exhaustive = n <= MAX_ENUMERATION_DEGREE;
    let total: u64 = if exhaustive {
        1u64 << (n + 1)
    } else {
        let min = 1u64.checked_shl((m + 10) as u32).unwrap_or(u64::MAX);
        params.samples.unwrap_or(0).max(min)
    };

    const BLOCK: u64 = 256;
    let blocks = total.div_ceil(BLOCK) as usize;
    let block_results = exec.map(blocks, |b| -> Result<Vec<(f64, u64)>> {
        let start = b as u64 * BLOCK;
        let end = (start + BLOCK).min(total);
        (start..end)
            .map(|i| {
                let sigma = if exhaustive {
                    SignSequence::from_index(n + 1, i)
                } else {
                    SignSequence::random(n + 1, &mut trial_rng(params.seed, i))
                };
                let p = crate::theta::sample_flip(model, &sigma)?;
                let arc = arc_max_checked(&OnCircle::origin(&p, r), interval, grid)?;
                Ok((arc / p.s_majorant(r)?, i))
            })
            .collect()
    });
    let mut ratios: Vec<(f64, u64)> = Vec::with_capacity(total as usize);
    for b in block_results {
        ratios.extend(b?);
    }

    let mut counts = vec![0u64; HISTOGRAM_BINS];
    let width = HISTOGRAM_DECADES / HISTOGRAM_BINS as f64;
    for &(x, _) in &ratios {
        let pos = ((x.log10() + HISTOGRAM_DECADES) / width).floor();
        let bin = if pos.is_nan() || pos < 0.0 { 0 } else { (pos as usize).min(HISTOGRAM_BINS - 1) };
        counts[bin] += 1;
    }

    let mut sorted: Vec<f64> = ratios.iter().map(|r| r.0).collect();
    sorted.sort_by(f64::total_cmp);
    let argmin = ratios
        .iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one sequence");
    let min_sigma = if exhaustive {
        SignSequence::from_index(n + 1, argmin.1)
    } else {
        SignSequence::random(n + 1, &mut trial_rng(params.seed, argmin.1))
    };

    let len = interval.length();
    let row = |c: f64| {
        let threshold = (c * len).powi(6 * m as i32) / (n as f64 * n as f64);
        let failures = sorted.partition_point(|&x| x <= threshold) as u64;
        FailureRow {
            c,
            threshold,
            failures,
            fraction: failures as f64 / total as f64,
        }
    };
    let failure_table: Vec<FailureRow> = params.c_grid.iter().map(|&c| row(c)).collect();
    let target = 0.5f64.powi(m as i32);
    let star = failure_table
        .iter()
        .filter(|r| r.fraction <= target)
        .max_by(|a, b| a.c.total_cmp(&b.c));

    Ok(Theorem2Report {
        params: params.clone(),
        n,
        sequences: total,
        exhaustive,
        target,
        ratio_min: sorted[0],
        ratio_median: sorted[(sorted.len() - 1) / 2],
        ratio_max: *sorted.last().unwrap(),
        histogram: RatioHistogram {
            log10_lo: -HISTOGRAM_DECADES,
            log10_width: width,
            counts,
        },
        c_star: star.map(|r| r.c),
        f_at_c_star: star.map(|r| r.fraction),
        candidate: params.cert.c_candidate.map(row),
        resolution_limited: (total as f64) * target < 1.0,
        failure_table,
        sequence_with_min_ratio: min_sigma.to_string(),
    })
}

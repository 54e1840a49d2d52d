//! The sign-flip coefficient model and property (Θ).
//!
//! A [`FlipModel`] fixes two candidate values `λₖ⁺, λₖ⁻` per coefficient and
//! a common center `a`; a random polynomial is obtained by choosing each
//! sign independently and uniformly. Property (Θ) asks that every pair be
//! far apart relative to its distance from `a`:
//!
//! ```text
//! |λₖ⁺ − λₖ⁻| ≥ κ (|λₖ⁺ − a| + |λₖ⁻ − a|)
//! ```

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

pub const DEFAULT_KAPPA: f64 = 0.5;

/// Largest degree accepted by [`enumerate_flips`] (`2^25` sign sequences).
pub const MAX_ENUMERATION_DEGREE: usize = 24;

/// Relative slack granted to the (Θ) inequality for rounding in equality cases.
const THETA_REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignSequence(pub Vec<Sign>);

impl SignSequence {
    /// The `index`-th sequence of length `len` in lexicographic order,
    /// `+` before `−`, position 0 most significant.
    pub fn from_index(len: usize, index: u64) -> Self {
        SignSequence(
            (0..len)
                .map(|k| {
                    if (index >> (len - 1 - k)) & 1 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect(),
        )
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        SignSequence(
            (0..len)
                .map(|_| if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn flip(&mut self, k: usize) {
        self.0[k] = self.0[k].flipped();
    }
}

impl std::fmt::Display for SignSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaCheck {
    pub ok: bool,
    /// `min_k (|λₖ⁺−λₖ⁻| − κ(|λₖ⁺−a| + |λₖ⁻−a|))`.
    pub worst_margin: f64,
}

/// Checks the (Θ) inequality for every pair.
pub fn check_theta(pairs: &[(Complex64, Complex64)], a: Complex64, kappa: f64) -> ThetaCheck {
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for &(p, m) in pairs {
        let spread = (p - a).norm() + (m - a).norm();
        let margin = (p - m).norm() - kappa * spread;
        ok &= margin >= -THETA_REL_TOL * spread;
        worst = worst.min(margin);
    }
    ThetaCheck { ok, worst_margin: worst }
}

/// Pairs up `2N` atoms by repeatedly removing the two remaining atoms at
/// maximal distance; the center is the midpoint of the last pair.
///
/// Pairs come back in extraction order (non-increasing distance). Ties go to
/// the lexicographically smallest index pair.
pub fn greedy_pairing(atoms: &[Complex64]) -> Result<(Vec<(Complex64, Complex64)>, Complex64)> {
    if atoms.len() < 2 || atoms.len() % 2 == 1 {
        return Err(Error::domain(format!(
            "greedy pairing needs an even number (>= 2) of atoms, got {}",
            atoms.len()
        )));
    }
    let mut remaining: Vec<usize> = (0..atoms.len()).collect();
    let mut pairs = Vec::with_capacity(atoms.len() / 2);
    while !remaining.is_empty() {
        let mut best = (0, 1, -1.0f64);
        for i in 0..remaining.len() {
            for j in i + 1..remaining.len() {
                let d = (atoms[remaining[i]] - atoms[remaining[j]]).norm();
                if d > best.2 {
                    best = (i, j, d);
                }
            }
        }
        let (i, j, _) = best;
        pairs.push((atoms[remaining[i]], atoms[remaining[j]]));
        remaining.remove(j);
        remaining.remove(i);
    }
    let (x, y) = *pairs.last().unwrap();
    let center = (x + y) * 0.5;
    let check = check_theta(&pairs, center, DEFAULT_KAPPA);
    if !check.ok {
        return Err(Error::Assertion(format!(
            "greedy pairing violates (Θ): margin {}",
            check.worst_margin
        )));
    }
    Ok((pairs, center))
}

/// Value pairs `(λₖ⁺, λₖ⁻)`, `k = 0..n`, with center `a` and constant `κ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlipModel {
    pairs: Vec<(Complex64, Complex64)>,
    center: Complex64,
    kappa: f64,
}

impl FlipModel {
    /// Validates finiteness, `κ ∈ (0, 1]` and the (Θ) inequality.
    pub fn new(pairs: Vec<(Complex64, Complex64)>, center: Complex64, kappa: f64) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::config("flip model needs at least one coefficient pair"));
        }
        if !(kappa > 0.0 && kappa <= 1.0) {
            return Err(Error::config(format!("kappa must lie in (0, 1], got {kappa}")));
        }
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        if !finite(center) || pairs.iter().any(|&(p, m)| !finite(p) || !finite(m)) {
            return Err(Error::config("flip model values must be finite"));
        }
        let check = check_theta(&pairs, center, kappa);
        if !check.ok {
            return Err(Error::config(format!(
                "pairs violate (Θ) with kappa {kappa}: worst margin {}",
                check.worst_margin
            )));
        }
        Ok(Self { pairs, center, kappa })
    }

    /// Additionally requires `λ₀± ≠ 0` and `λₙ± ≠ 0`.
    pub fn nondegenerate(pairs: Vec<(Complex64, Complex64)>, center: Complex64, kappa: f64) -> Result<Self> {
        let m = Self::new(pairs, center, kappa)?;
        if !m.is_nondegenerate() {
            return Err(Error::config("λ₀± and λₙ± must all be non-zero"));
        }
        Ok(m)
    }

    /// `(v, −v)` pairs around `a = 0`.
    pub fn symmetric(values: &[Complex64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| (v, -v)).collect(), Complex64::new(0.0, 0.0), DEFAULT_KAPPA)
    }

    pub fn degree(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn pairs(&self) -> &[(Complex64, Complex64)] {
        &self.pairs
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn is_nondegenerate(&self) -> bool {
        let zero = Complex64::new(0.0, 0.0);
        let (a, b) = self.pairs[0];
        let (c, d) = self.pairs[self.degree()];
        a != zero && b != zero && c != zero && d != zero
    }

    pub fn check(&self) -> ThetaCheck {
        check_theta(&self.pairs, self.center, self.kappa)
    }

    pub fn coefficient(&self, k: usize, sign: Sign) -> Complex64 {
        match sign {
            Sign::Plus => self.pairs[k].0,
            Sign::Minus => self.pairs[k].1,
        }
    }

    /// Polynomial of the `index`-th sign sequence in lexicographic order.
    pub fn flip_by_index(&self, index: u64) -> Result<(SignSequence, Polynomial)> {
        let sigma = SignSequence::from_index(self.pairs.len(), index);
        let p = sample_flip(self, &sigma)?;
        Ok((sigma, p))
    }
}

/// `λ^σ = (λ₀^{σ₀}, …, λₙ^{σₙ})`.
pub fn sample_flip(model: &FlipModel, sigma: &SignSequence) -> Result<Polynomial> {
    if sigma.len() != model.pairs.len() {
        return Err(Error::domain(format!(
            "sign sequence has length {}, model has {} coefficients",
            sigma.len(),
            model.pairs.len()
        )));
    }
    Polynomial::new(
        sigma
            .0
            .iter()
            .enumerate()
            .map(|(k, &s)| model.coefficient(k, s))
            .collect(),
    )
}

/// All `2^{n+1}` sign sequences in lexicographic order, with their polynomials.
pub fn enumerate_flips(model: &FlipModel) -> Result<impl Iterator<Item = (SignSequence, Polynomial)> + '_> {
    let n = model.degree();
    if n > MAX_ENUMERATION_DEGREE {
        return Err(Error::domain(format!(
            "refusing to enumerate 2^{} sign sequences (degree {n} > {MAX_ENUMERATION_DEGREE})",
            n + 1
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    if n > 0 && (model.pairs[n].0 == zero || model.pairs[n].1 == zero) {
        return Err(Error::domain("λₙ± must be non-zero for every flip to have degree n"));
    }
    let total = 1u64 << (n + 1);
    Ok((0..total).map(move |i| model.flip_by_index(i).expect("validated flip")))
}

/// Distribution of the values `v` in symmetric `(v, −v)` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum MagnitudeLaw {
    /// `v ≡ value`; `value = 1` gives Rademacher coefficients.
    Constant { value: f64 },
    Uniform { low: f64, high: f64 },
    Normal { sigma: f64 },
    /// `v = (x + iy)/√2` with `x, y ~ N(0, σ²)`.
    ComplexNormal { sigma: f64 },
}

impl MagnitudeLaw {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            MagnitudeLaw::Constant { value } => value.is_finite() && value != 0.0,
            MagnitudeLaw::Uniform { low, high } => low.is_finite() && high.is_finite() && low < high,
            MagnitudeLaw::Normal { sigma } | MagnitudeLaw::ComplexNormal { sigma } => {
                sigma.is_finite() && sigma > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("invalid magnitude law {self:?}")))
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match *self {
            MagnitudeLaw::Constant { value } => Complex64::new(value, 0.0),
            MagnitudeLaw::Uniform { low, high } => {
                Complex64::new(Uniform::new(low, high).expect("validated").sample(rng), 0.0)
            }
            MagnitudeLaw::Normal { sigma } => {
                Complex64::new(Normal::new(0.0, sigma).expect("validated").sample(rng), 0.0)
            }
            MagnitudeLaw::ComplexNormal { sigma } => {
                let d = Normal::new(0.0, sigma / std::f64::consts::SQRT_2).expect("validated");
                Complex64::new(d.sample(rng), d.sample(rng))
            }
        }
    }
}

/// Draws a [`FlipModel`] per trial.
#[derive(Clone, Debug)]
pub enum ModelSampler {
    /// Fresh `(v, −v)` pairs each draw.
    Symmetric { law: MagnitudeLaw, n: usize, kappa: f64 },
    /// Each coefficient picks one of the greedy atom pairs uniformly.
    IidAtoms {
        pairs: Vec<(Complex64, Complex64)>,
        center: Complex64,
        n: usize,
        kappa: f64,
    },
    /// The same model every draw.
    Fixed(FlipModel),
}

pub fn make_symmetric_model(law: MagnitudeLaw, n: usize) -> Result<ModelSampler> {
    if n < 1 {
        return Err(Error::config("degree must be at least 1"));
    }
    law.validate()?;
    Ok(ModelSampler::Symmetric { law, n, kappa: DEFAULT_KAPPA })
}

/// The i.i.d. model for a law uniform on `2N` atoms.
pub fn make_iid_atoms_model(atoms: &[Complex64], n: usize) -> Result<ModelSampler> {
    if n < 1 {
        return Err(Error::config("degree must be at least 1"));
    }
    let (pairs, center) = greedy_pairing(atoms).map_err(|e| Error::config(e.to_string()))?;
    Ok(ModelSampler::IidAtoms { pairs, center, n, kappa: DEFAULT_KAPPA })
}

/// Real pairs symmetric about a common median `a`: `λₖ⁺ + λₖ⁻ = 2a`.
pub fn make_median_model(a: f64, pairs: &[(f64, f64)]) -> Result<FlipModel> {
    for (k, &(p, m)) in pairs.iter().enumerate() {
        if ((p + m) - 2.0 * a).abs() > 1e-12 * (1.0 + p.abs() + m.abs() + a.abs()) {
            return Err(Error::config(format!("pair {k} ({p}, {m}) is not symmetric about {a}")));
        }
    }
    FlipModel::new(
        pairs.iter().map(|&(p, m)| (Complex64::new(p, 0.0), Complex64::new(m, 0.0))).collect(),
        Complex64::new(a, 0.0),
        DEFAULT_KAPPA,
    )
}

impl ModelSampler {
    pub fn degree(&self) -> usize {
        match self {
            ModelSampler::Symmetric { n, .. } | ModelSampler::IidAtoms { n, .. } => *n,
            ModelSampler::Fixed(m) => m.degree(),
        }
    }

    /// Whether the sampled coefficients are i.i.d.
    pub fn is_iid(&self) -> bool {
        !matches!(self, ModelSampler::Fixed(_))
    }

    pub fn with_kappa(mut self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k <= 1.0) {
            return Err(Error::config(format!("kappa must lie in (0, 1], got {k}")));
        }
        match &mut self {
            ModelSampler::Symmetric { kappa, .. } | ModelSampler::IidAtoms { kappa, .. } => *kappa = k,
            ModelSampler::Fixed(m) => {
                *m = FlipModel::new(m.pairs.clone(), m.center, k)?;
            }
        }
        Ok(self)
    }

    pub fn draw_model<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<FlipModel> {
        match self {
            ModelSampler::Symmetric { law, n, kappa } => {
                let pairs = (0..=*n)
                    .map(|_| {
                        let v = law.draw(rng);
                        (v, -v)
                    })
                    .collect();
                FlipModel::new(pairs, Complex64::new(0.0, 0.0), *kappa)
            }
            ModelSampler::IidAtoms { pairs, center, n, kappa } => {
                let chosen = (0..=*n).map(|_| pairs[rng.random_range(0..pairs.len())]).collect();
                FlipModel::new(chosen, *center, *kappa)
            }
            ModelSampler::Fixed(m) => Ok(m.clone()),
        }
    }

    /// Draws a model, then a uniform sign sequence.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Polynomial> {
        let model = self.draw_model(rng)?;
        let sigma = SignSequence::random(model.pairs.len(), rng);
        sample_flip(&model, &sigma)
    }
}

/// Model description as found in config files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Symmetric { magnitudes: MagnitudeLaw },
    /// Atoms as `[re, im]`; the law is uniform over them.
    IidAtoms { atoms: Vec<[f64; 2]> },
    /// Per-coefficient real pairs `[λ⁺, λ⁻]` symmetric about `a`.
    Median { a: f64, pairs: Vec<[f64; 2]> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(flatten)]
    pub kind: ModelKind,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_true")]
    pub nondegenerate: bool,
}

fn default_kappa() -> f64 {
    DEFAULT_KAPPA
}

fn default_true() -> bool {
    true
}

impl ModelSpec {
    pub fn rademacher(n: usize) -> Self {
        Self::symmetric(MagnitudeLaw::Constant { value: 1.0 }, n)
    }

    pub fn symmetric(magnitudes: MagnitudeLaw, n: usize) -> Self {
        ModelSpec {
            kind: ModelKind::Symmetric { magnitudes },
            n: Some(n),
            kappa: DEFAULT_KAPPA,
            nondegenerate: true,
        }
    }

    /// Builds the sampler; `n_override` (e.g. from the command line) wins over the file.
    pub fn build(&self, n_override: Option<usize>) -> Result<ModelSampler> {
        let n = n_override.or(self.n);
        let sampler = match &self.kind {
            ModelKind::Symmetric { magnitudes } => {
                let n = n.ok_or_else(|| Error::config("symmetric model needs n"))?;
                make_symmetric_model(magnitudes.clone(), n)?
            }
            ModelKind::IidAtoms { atoms } => {
                let n = n.ok_or_else(|| Error::config("iid_atoms model needs n"))?;
                let atoms: Vec<Complex64> = atoms.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                if self.nondegenerate && atoms.iter().any(|z| z.norm() == 0.0) {
                    return Err(Error::config("a zero atom breaks non-degeneracy"));
                }
                make_iid_atoms_model(&atoms, n)?
            }
            ModelKind::Median { a, pairs } => {
                if let Some(n) = n {
                    if n + 1 != pairs.len() {
                        return Err(Error::config(format!(
                            "median model has {} pairs but n = {n}",
                            pairs.len()
                        )));
                    }
                }
                let pairs: Vec<(f64, f64)> = pairs.iter().map(|&[p, m]| (p, m)).collect();
                let model = make_median_model(*a, &pairs)?;
                if self.nondegenerate && !model.is_nondegenerate() {
                    return Err(Error::config("λ₀± and λₙ± must all be non-zero"));
                }
                ModelSampler::Fixed(model)
            }
        };
        sampler.with_kappa(self.kappa)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn greedy_examples() {
        let (pairs, a) = greedy_pairing(&[c(0.0), c(1.0)]).unwrap();
        assert_eq!(pairs, vec![(c(0.0), c(1.0))]);
        assert_eq!(a, c(0.5));

        let (pairs, a) = greedy_pairing(&[c(0.0), c(1.0), c(10.0), c(11.0)]).unwrap();
        assert_eq!(pairs, vec![(c(0.0), c(11.0)), (c(1.0), c(10.0))]);
        assert_eq!(a, c(5.5));
        let check = check_theta(&pairs, a, 0.5);
        assert!(check.ok);
        assert_eq!(check.worst_margin, 4.5);

        assert!(greedy_pairing(&[c(0.0), c(1.0), c(2.0)]).is_err());
        assert!(greedy_pairing(&[]).is_err());
    }

    #[test]
    fn greedy_tie_break_is_lexicographic() {
        // square: both diagonals have equal length; (0,2) comes first
        let atoms = [c(0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 1.0), Complex64::new(0.0, 1.0)];
        let (pairs, _) = greedy_pairing(&atoms).unwrap();
        assert_eq!(pairs[0], (atoms[0], atoms[2]));
        assert_eq!(pairs[1], (atoms[1], atoms[3]));
    }

    #[test]
    fn greedy_random_atoms() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..200 {
            let n = 2 * rng.random_range(1..=40);
            let atoms: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
                .collect();
            let (pairs, a) = greedy_pairing(&atoms).unwrap();
            assert!(check_theta(&pairs, a, 0.5).ok);
            let d: Vec<f64> = pairs.iter().map(|(x, y)| (x - y).norm()).collect();
            assert!(d.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn theta_check_examples() {
        let x = Complex64::new(2.0, -1.0);
        let check = check_theta(&[(x, -x)], c(0.0), 0.5);
        assert!(check.ok);
        assert!((check.worst_margin - x.norm()).abs() < 1e-15);

        let bad = check_theta(&[(c(1.0), c(1.1))], c(0.0), 0.5);
        assert!(!bad.ok);
        assert!((bad.worst_margin - (0.1 - 1.05)).abs() < 1e-12);
    }

    #[test]
    fn median_examples() {
        let m = make_median_model(0.0, &[(-3.0, 3.0)]).unwrap();
        assert_eq!(m.check().worst_margin, 3.0);
        let m = make_median_model(1.0, &[(0.0, 2.0)]).unwrap();
        assert_eq!(m.check().worst_margin, 1.0);
        assert!(make_median_model(1.0, &[(0.0, 3.0)]).is_err());
        // margin = ½(|λ⁺−a| + |λ⁻−a|)
        let m = make_median_model(0.5, &[(-1.5, 2.5), (0.0, 1.0), (4.0, -3.0)]).unwrap();
        let expected = m
            .pairs()
            .iter()
            .map(|(p, q)| 0.5 * ((p - c(0.5)).norm() + (q - c(0.5)).norm()))
            .fold(f64::INFINITY, f64::min);
        assert!((m.check().worst_margin - expected).abs() < 1e-12);
    }

    #[test]
    fn model_validation() {
        assert!(FlipModel::new(vec![(c(1.0), c(1.1))], c(0.0), 0.5).is_err());
        assert!(FlipModel::new(vec![(c(1.0), c(-1.0))], c(0.0), 0.0).is_err());
        assert!(FlipModel::new(vec![(c(1.0), c(-1.0))], c(0.0), 1.5).is_err());
        assert!(FlipModel::new(vec![], c(0.0), 0.5).is_err());
        assert!(FlipModel::nondegenerate(vec![(c(0.0), c(0.0)), (c(1.0), c(-1.0))], c(0.0), 0.5).is_err());
        assert!(make_symmetric_model(MagnitudeLaw::Uniform { low: 1.0, high: 0.0 }, 3).is_err());
        assert!(make_symmetric_model(MagnitudeLaw::Normal { sigma: 1.0 }, 0).is_err());
    }

    #[test]
    fn rademacher_pairs() {
        let s = make_symmetric_model(MagnitudeLaw::Constant { value: 1.0 }, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let m = s.draw_model(&mut rng).unwrap();
        assert!(m.pairs().iter().all(|&p| p == (c(1.0), c(-1.0))));
        assert_eq!(m.check().worst_margin, 1.0);
    }

    #[test]
    fn sample_flip_examples() {
        let m = FlipModel::symmetric(&[c(1.0), c(2.0), c(3.0)]).unwrap();
        let all_plus = SignSequence(vec![Sign::Plus; 3]);
        assert_eq!(sample_flip(&m, &all_plus).unwrap().coeffs(), &[c(1.0), c(2.0), c(3.0)]);
        let mut one = all_plus.clone();
        one.flip(1);
        let p = sample_flip(&m, &one).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0), c(-2.0), c(3.0)]);
        assert!(sample_flip(&m, &SignSequence(vec![Sign::Plus; 2])).is_err());
    }

    #[test]
    fn enumeration() {
        let m = FlipModel::symmetric(&[c(1.0), c(1.0)]).unwrap();
        let seqs: Vec<String> = enumerate_flips(&m).unwrap().map(|(s, _)| s.to_string()).collect();
        assert_eq!(seqs, ["++", "+-", "-+", "--"]);

        let m = FlipModel::symmetric(&[c(1.0); 4]).unwrap();
        let set: std::collections::HashSet<SignSequence> = enumerate_flips(&m).unwrap().map(|(s, _)| s).collect();
        assert_eq!(set.len(), 16);

        // probability of "λ₀ + λ₁ > 0" for Rademacher is 1/4
        let m = FlipModel::symmetric(&[c(1.0); 3]).unwrap();
        let hits = enumerate_flips(&m)
            .unwrap()
            .filter(|(_, p)| (p.coeffs()[0] + p.coeffs()[1]).re > 0.0)
            .count();
        assert_eq!(hits as f64 / 8.0, 0.25);

        let big = FlipModel::symmetric(&[c(1.0); 26]).unwrap();
        assert!(enumerate_flips(&big).is_err());
        let zero_lead = FlipModel::new(vec![(c(1.0), c(-1.0)), (c(0.0), c(0.0))], c(0.0), 0.5).unwrap();
        assert!(enumerate_flips(&zero_lead).is_err());
    }

    /// χ² critical values at the 1% level.
    const CHI2_1DF: f64 = 6.635;
    const CHI2_3DF: f64 = 11.345;

    #[test]
    fn flip_sampling_is_uniform_and_independent() {
        let model = FlipModel::symmetric(&[c(1.5), c(0.5), c(2.0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let draws = 10_000;
        let mut single = [0usize; 2];
        let mut joint = [0usize; 4];
        for _ in 0..draws {
            let sigma = SignSequence::random(3, &mut rng);
            let p = sample_flip(&model, &sigma).unwrap();
            let a = (p.coeffs()[0].re < 0.0) as usize;
            let b = (p.coeffs()[2].re < 0.0) as usize;
            single[a] += 1;
            joint[2 * a + b] += 1;
        }
        let chi2 = |obs: &[usize], expected: f64| {
            obs.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum::<f64>()
        };
        assert!(chi2(&single, draws as f64 / 2.0) < CHI2_1DF);
        assert!(chi2(&joint, draws as f64 / 4.0) < CHI2_3DF);
    }

    #[test]
    fn symmetric_model_sign_frequencies() {
        let s = make_symmetric_model(MagnitudeLaw::Uniform { low: 0.5, high: 2.0 }, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let mut neg = [0usize; 5];
        for _ in 0..10_000 {
            let p = s.sample(&mut rng).unwrap();
            for (k, c) in p.coeffs().iter().enumerate() {
                neg[k] += (c.re < 0.0) as usize;
            }
        }
        for count in neg {
            let obs = [count, 10_000 - count];
            let chi2: f64 = obs.iter().map(|&o| (o as f64 - 5000.0).powi(2) / 5000.0).sum();
            assert!(chi2 < CHI2_1DF, "{obs:?}");
        }
    }

    #[test]
    fn iid_atoms_are_uniform() {
        let atoms = [c(-2.0), c(0.3), c(1.0), c(5.0)];
        let s = make_iid_atoms_model(&atoms, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let mut counts = [0usize; 4];
        for _ in 0..10_000 {
            let p = s.sample(&mut rng).unwrap();
            let v = p.coeffs()[2].re;
            counts[atoms.iter().position(|a| a.re == v).unwrap()] += 1;
        }
        let chi2: f64 = counts.iter().map(|&o| (o as f64 - 2500.0).powi(2) / 2500.0).sum();
        assert!(chi2 < CHI2_3DF, "{counts:?}");
    }

    #[test]
    fn spec_parsing() {
        let spec: ModelSpec = serde_json::from_str(
            r#"{"kind":"symmetric","magnitudes":{"law":"constant","value":1.0},"n":4}"#,
        )
        .unwrap();
        assert_eq!(spec, ModelSpec::rademacher(4));
        assert!(spec.build(None).unwrap().is_iid());

        let spec: ModelSpec = toml::from_str(
            "kind = \"median\"\na = 1.0\npairs = [[0.5, 1.5], [3.0, -1.0]]\nkappa = 0.5\n",
        )
        .unwrap();
        let sampler = spec.build(None).unwrap();
        assert!(!sampler.is_iid());
        assert_eq!(sampler.degree(), 1);
        assert!(spec.build(Some(5)).is_err());

        let spec: ModelSpec =
            serde_json::from_str(r#"{"kind":"iid_atoms","atoms":[[0,0],[1,0]],"n":3}"#).unwrap();
        assert!(spec.build(None).is_err());
        let spec: ModelSpec =
            serde_json::from_str(r#"{"kind":"iid_atoms","atoms":[[0,0],[1,0]],"n":3,"nondegenerate":false}"#)
                .unwrap();
        assert!(spec.build(None).is_ok());
    }
}

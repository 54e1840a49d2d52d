//! Dense complex polynomials `P(z) = Σ λₖ zᵏ` together with the majorants
//! and transforms used throughout the crate.
//!
//! The logarithmic scale is fixed to `z = e^{−2πw}`, `w = t + is`: the
//! radius `r` and the "time" `t` are related by `r = e^{−2πt}`
//! (see [`radius_to_t`] and [`t_to_radius`]).

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A polynomial with complex coefficients `λ₀..λₙ`.
///
/// The leading coefficient is non-zero, except for the zero constant `(0,)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial from `λ₀..λₙ`.
    ///
    /// Rejects empty input, non-finite coefficients and a vanishing leading
    /// coefficient (unless the whole polynomial is the zero constant).
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("polynomial needs at least one coefficient"));
        }
        if let Some(k) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::domain(format!("coefficient {k} is not finite")));
        }
        let n = coeffs.len() - 1;
        if n > 0 && coeffs[n] == Complex64::new(0.0, 0.0) {
            return Err(Error::domain("leading coefficient vanishes (degree drops)"));
        }
        Ok(Self { coeffs })
    }

    /// Like [`Polynomial::new`], additionally requiring `λ₀ ≠ 0`.
    pub fn nondegenerate(coeffs: Vec<Complex64>) -> Result<Self> {
        let p = Self::new(coeffs)?;
        if p.coeffs[0] == Complex64::new(0.0, 0.0) {
            return Err(Error::domain("constant coefficient vanishes"));
        }
        Ok(p)
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// `λ₀ ≠ 0` and `λₙ ≠ 0`.
    pub fn is_nondegenerate(&self) -> bool {
        let zero = Complex64::new(0.0, 0.0);
        self.coeffs[0] != zero && self.coeffs[self.degree()] != zero
    }

    /// Horner evaluation, highest degree first.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative at `z`.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// The majorant `S(r, P) = Σ |λₖ| rᵏ`.
    pub fn s_majorant(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::domain(format!("majorant radius must be positive, got {r}")));
        }
        Ok(self.abs_horner(r))
    }

    pub(crate) fn abs_horner(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// `h(t) = max_k (log|λₖ| − 2πkt)` over the non-zero coefficients.
    pub fn h_function(&self, t: f64) -> Result<f64> {
        self.dominant_term(t).map(|(_, h)| h)
    }

    /// `H(t) = e^{h(t)}`.
    pub fn big_h(&self, t: f64) -> Result<f64> {
        self.h_function(t).map(f64::exp)
    }

    /// The central index: the largest `ν` maximizing `log|λ_ν| − 2πνt`.
    pub fn central_index(&self, t: f64) -> Result<usize> {
        self.dominant_term(t).map(|(nu, _)| nu)
    }

    fn dominant_term(&self, t: f64) -> Result<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (k, c) in self.coeffs.iter().enumerate() {
            let a = c.norm();
            if a == 0.0 {
                continue;
            }
            let v = a.ln() - 2.0 * PI * k as f64 * t;
            // `>=` so that ties resolve to the largest index.
            if best.is_none_or(|(_, b)| v >= b) {
                best = Some((k, v));
            }
        }
        best.ok_or_else(|| Error::domain("all coefficients vanish"))
    }

    /// `P*(z) = zⁿ P(1/z)`: the coefficient sequence reversed.
    ///
    /// Trailing zeros created by a vanishing `λ₀` are trimmed so the result
    /// stays well formed.
    pub fn reverse(&self) -> Polynomial {
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().rev().copied().collect();
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex64::new(0.0, 0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// `P̄(z) = (1 − z) P(z)`.
    pub fn bar_transform(&self) -> Polynomial {
        let n = self.degree();
        let mut out = Vec::with_capacity(n + 2);
        out.push(self.coeffs[0]);
        for k in 1..=n {
            out.push(self.coeffs[k] - self.coeffs[k - 1]);
        }
        out.push(-self.coeffs[n]);
        if self.is_zero() {
            out.truncate(1);
        }
        Polynomial { coeffs: out }
    }

    /// Coefficients of `P'`.
    pub fn derivative(&self) -> Polynomial {
        if self.degree() == 0 {
            return Polynomial { coeffs: vec![Complex64::new(0.0, 0.0)] };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Polynomial { coeffs }
    }

    /// One `re im` pair per line, index order `0..n`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.coeffs {
            let _ = writeln!(s, "{} {}", c.re, c.im);
        }
        s
    }

    /// Parses the `re im` line format. Blank lines and `#` comments are skipped;
    /// a line with a single number is read as a real coefficient.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse = |tok: &str| {
                tok.parse::<f64>()
                    .map_err(|e| Error::config(format!("line {}: {e}", lineno + 1)))
            };
            let mut parts = line.split_whitespace();
            let re = parse(parts.next().unwrap())?;
            let im = parts.next().map(parse).transpose()?.unwrap_or(0.0);
            if parts.next().is_some() {
                return Err(Error::config(format!("line {}: expected `re im`", lineno + 1)));
            }
            coeffs.push(Complex64::new(re, im));
        }
        Self::new(coeffs)
    }

    /// Reads either the JSON pair format or the text format.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('[') {
            Ok(serde_json::from_str(text)?)
        } else {
            Self::from_text(text)
        }
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(|c| [c.re, c.im]))
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        Polynomial::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// `r = e^{−2πt}`.
pub fn t_to_radius(t: f64) -> f64 {
    (-2.0 * PI * t).exp()
}

/// `t = −ln(r) / 2π`.
pub fn radius_to_t(r: f64) -> f64 {
    -r.ln() / (2.0 * PI)
}

/// The exponential polynomial `Q(w) = P(e^{−2πw}) = Σ λₖ e^{−2πkw}`.
#[derive(Clone, Debug)]
pub struct ExpPolynomialView {
    base: Polynomial,
}

impl ExpPolynomialView {
    pub fn new(base: Polynomial) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &Polynomial {
        &self.base
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.base.eval((-2.0 * PI * w).exp())
    }

    /// The upper bound `(n+1)·H(t)` for `|Q(t + is)|`, uniform in `s`.
    pub fn vertical_line_bound(&self, t: f64) -> Result<f64> {
        Ok((self.base.degree() + 1) as f64 * self.base.big_h(t)?)
    }
}

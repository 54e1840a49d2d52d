use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::newton::initial_root_radii;
use crate::poly::Polynomial;

pub const MAX_ITERS: usize = 500;
const CORRECTION_TOL: f64 = 1e-13;
const POLISH_STEPS: usize = 2;

/// Evaluates `P` at `z` in the orientation that keeps Horner stable:
/// directly for `|z| ≤ 1`, through the reversed polynomial otherwise.
struct Evaluator<'a> {
    coeffs: &'a [Complex64],
    abs: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    fn new(p: &'a Polynomial) -> Self {
        Self {
            coeffs: p.coeffs(),
            abs: p.coeffs().iter().map(|c| c.norm()).collect(),
        }
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Newton correction `P(z)/P'(z)` and backward error `|P(z)| / S(|z|)`.
    fn newton(&self, z: Complex64) -> (Complex64, f64) {
        let zero = Complex64::new(0.0, 0.0);
        let n = self.degree();
        if z.norm() <= 1.0 {
            let (mut p, mut dp, mut s) = (zero, zero, 0.0);
            let r = z.norm();
            for (c, a) in self.coeffs.iter().zip(&self.abs).rev() {
                dp = dp * z + p;
                p = p * z + c;
                s = s * r + a;
            }
            let corr = if p == zero { zero } else { p / dp };
            (corr, p.norm() / s)
        } else {
            let y = z.inv();
            let ry = y.norm();
            let (mut q, mut dq, mut s) = (zero, zero, 0.0);
            // reversed coefficient order: q(y) = Σ λ_{n−k} y^k
            for (c, a) in self.coeffs.iter().zip(&self.abs) {
                dq = dq * y + q;
                q = q * y + c;
                s = s * ry + a;
            }
            let corr = if q == zero {
                zero
            } else {
                // P'/P = y (n − y q'/q)
                (y * (Complex64::new(n as f64, 0.0) - y * dq / q)).inv()
            };
            (corr, q.norm() / s)
        }
    }
}

fn initial_guesses(p: &Polynomial) -> Result<Vec<Complex64>> {
    let radii = initial_root_radii(p)?;
    let mut guesses = Vec::with_capacity(radii.len());
    let mut start = 0;
    let mut edge = 0usize;
    while start < radii.len() {
        let r = radii[start];
        let span = radii[start..].iter().take_while(|&&x| x == r).count();
        let offset = 0.4 + 2.0 * PI * 0.618_033_988_749_895 * edge as f64;
        for j in 0..span {
            let jitter = 0.05 * ((j as f64 * 1.618_033_988_749_895).fract() - 0.5);
            let angle = offset + 2.0 * PI * (j as f64 + jitter) / span as f64;
            guesses.push(Complex64::from_polar(r, angle));
        }
        start += span;
        edge += 1;
    }
    Ok(guesses)
}

/// Aberth–Ehrlich iteration on a non-degenerate polynomial.
///
/// Returns the roots and their backward errors `|P(z)|/S(|z|)`.
pub(crate) fn aberth(p: &Polynomial) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let n = p.degree();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let eval = Evaluator::new(p);
    // Horner's own rounding floor; below it the iterate is a root of a nearby polynomial.
    let floor = 4.0 * (n + 1) as f64 * f64::EPSILON;

    let mut z = initial_guesses(p)?;
    let mut done = vec![false; n];
    let mut backward = vec![f64::INFINITY; n];
    let mut max_corr = f64::INFINITY;

    for _ in 0..MAX_ITERS {
        max_corr = 0.0f64;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, be) = eval.newton(z[i]);
            backward[i] = be;
            let zi = z[i];
            let s: Complex64 = z
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &zj)| (zi - zj).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            z[i] = zi - w;
            let rel = w.norm() / (1.0 + zi.norm());
            max_corr = max_corr.max(rel);
            if rel < CORRECTION_TOL || be <= floor {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(polish(&eval, z));
        }
    }
    for (b, &zi) in backward.iter_mut().zip(&z) {
        *b = eval.newton(zi).1;
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERS,
        max_correction: max_corr,
        best: z,
        residuals: backward,
    })
}

fn polish(eval: &Evaluator<'_>, mut z: Vec<Complex64>) -> (Vec<Complex64>, Vec<f64>) {
    let mut residuals = Vec::with_capacity(z.len());
    for zi in z.iter_mut() {
        let (mut corr, mut be) = eval.newton(*zi);
        for _ in 0..POLISH_STEPS {
            let cand = *zi - corr;
            if !(cand.re.is_finite() && cand.im.is_finite()) {
                break;
            }
            let (c2, b2) = eval.newton(cand);
            if b2 > be {
                break;
            }
            *zi = cand;
            corr = c2;
            be = b2;
        }
        residuals.push(be);
    }
    (z, residuals)
}

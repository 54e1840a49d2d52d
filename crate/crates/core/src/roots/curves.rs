use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::{all_roots, RootSet};
use crate::error::{Error, Result};
use crate::poly::Polynomial;

type ThetaFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A curve `{ r e^{iθ(r)} : r > 0 }` with `|θ(r₁) − θ(r₂)| ≤ L |log(r₁/r₂)|`.
#[derive(Clone)]
pub struct LipschitzCurve {
    theta: Arc<ThetaFn>,
    lipschitz: f64,
    description: String,
}

impl fmt::Debug for LipschitzCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LipschitzCurve")
            .field("lipschitz", &self.lipschitz)
            .field("description", &self.description)
            .finish()
    }
}

impl LipschitzCurve {
    pub fn new(
        theta: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lipschitz: f64,
        description: impl Into<String>,
    ) -> Result<Self> {
        if !(lipschitz >= 0.0) || !lipschitz.is_finite() {
            return Err(Error::config(format!("Lipschitz constant must be finite and >= 0, got {lipschitz}")));
        }
        Ok(Self {
            theta: Arc::new(theta),
            lipschitz,
            description: description.into(),
        })
    }

    /// `θ ≡ 0`.
    pub fn positive_real_axis() -> Self {
        Self::new(|_| 0.0, 0.0, "positive real axis").unwrap()
    }

    /// `θ ≡ π`.
    pub fn negative_real_axis() -> Self {
        Self::new(|_| PI, 0.0, "negative real axis").unwrap()
    }

    /// The real line as the union of its two half-axes.
    pub fn real_line() -> Vec<Self> {
        vec![Self::positive_real_axis(), Self::negative_real_axis()]
    }

    /// `θ(r) = L ln r`, the steepest L-Lipschitz curve.
    pub fn log_spiral(l: f64) -> Result<Self> {
        Self::new(move |r: f64| l * r.ln(), l.abs(), format!("spiral theta = {l} ln r"))
    }

    /// Piecewise-linear interpolation of `(r, θ)` samples in `(ln r, θ)`,
    /// constant beyond the first and last sample. `L` is the steepest segment.
    pub fn from_table(points: &[(f64, f64)]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::config("curve table is empty"));
        }
        if points.iter().any(|&(r, t)| !(r > 0.0) || !r.is_finite() || !t.is_finite()) {
            return Err(Error::config("curve table needs finite θ and r > 0"));
        }
        let knots: Vec<(f64, f64)> = points.iter().map(|&(r, t)| (r.ln(), t)).collect();
        if knots.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::config("curve table radii must be strictly increasing"));
        }
        let lipschitz = knots
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
            .fold(0.0, f64::max);
        let theta = move |r: f64| {
            let x = r.ln();
            let j = knots.partition_point(|k| k.0 <= x);
            if j == 0 {
                knots[0].1
            } else if j == knots.len() {
                knots[j - 1].1
            } else {
                let (x0, t0) = knots[j - 1];
                let (x1, t1) = knots[j];
                t0 + (t1 - t0) * (x - x0) / (x1 - x0)
            }
        };
        Self::new(theta, lipschitz, format!("table with {} knots", points.len()))
    }

    pub fn theta(&self, r: f64) -> f64 {
        (self.theta)(r)
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Angular distance from `z` to the curve point at radius `|z|`, in `[0, π]`.
    pub fn angular_distance(&self, z: Complex64) -> f64 {
        let d = (z.arg() - self.theta(z.norm())).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d)
    }

    /// Samples random pairs in `[1e−3, 1e3]` and checks the Lipschitz bound.
    pub fn check_lipschitz<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> bool {
        (0..samples).all(|_| {
            let r1 = 10f64.powf(rng.random_range(-3.0..3.0));
            let r2 = 10f64.powf(rng.random_range(-3.0..3.0));
            (self.theta(r1) - self.theta(r2)).abs() <= self.lipschitz * (r1 / r2).ln().abs() + 1e-9
        })
    }
}

/// Zeros found on a curve (or union of curves), with multiplicity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CurveCount {
    pub count: usize,
    /// Clusters at angular distance in `(tol, 10·tol)`: close enough that the
    /// classification may be a rounding artifact.
    pub ambiguous: usize,
}

impl RootSet {
    /// Counts clusters within angular tolerance `tol·(1+L)` of any of `curves`.
    /// Zeros at the origin are never on a curve.
    pub fn count_on_curves(&self, curves: &[LipschitzCurve], tol: f64) -> CurveCount {
        let mut out = CurveCount::default();
        for cl in self.clusters() {
            let z = cl.center();
            if z.norm() == 0.0 {
                continue;
            }
            let mut on = false;
            let mut near = false;
            for c in curves {
                let scaled = tol * (1.0 + c.lipschitz());
                let d = c.angular_distance(z);
                if d <= scaled {
                    on = true;
                } else if d < 10.0 * scaled {
                    near = true;
                }
            }
            if on {
                out.count += cl.multiplicity;
            } else if near {
                out.ambiguous += cl.multiplicity;
            }
        }
        out
    }
}

/// `N(Γ; P)`.
pub fn count_on_curve(p: &Polynomial, curve: &LipschitzCurve, tol: f64) -> Result<CurveCount> {
    count_on_curves(p, std::slice::from_ref(curve), tol)
}

/// Zeros on the union of `curves`, each zero counted once.
pub fn count_on_curves(p: &Polynomial, curves: &[LipschitzCurve], tol: f64) -> Result<CurveCount> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("curve tolerance must be positive, got {tol}")));
    }
    Ok(all_roots(p)?.count_on_curves(curves, tol))
}

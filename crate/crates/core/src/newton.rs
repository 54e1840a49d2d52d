//! The Newton–Hadamard polygon of a polynomial.
//!
//! The polygon is the upper convex hull of `{(k, log|λₖ|) : λₖ ≠ 0}`. Its
//! vertices are exactly the indices that are, for some radius `r`, the
//! largest maximizer of `|λₖ| rᵏ`; collinear interior points are therefore
//! dropped. `V(P)` is the number of vertices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Relative tolerance of the turn test in [`upper_hull`].
pub const HULL_EPS: f64 = 1e-12;

/// Indices of the upper convex envelope of `points` (sorted by strictly
/// increasing `x`). Collinear and near-collinear interior points are excluded.
pub fn upper_hull(points: &[(f64, f64)]) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Err(Error::domain("upper hull of an empty point set"));
    }
    if points.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::domain("hull points must have strictly increasing x"));
    }
    let mut stack: Vec<usize> = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        while stack.len() >= 2
            && !is_right_turn(points[stack[stack.len() - 2]], points[stack[stack.len() - 1]], points[i])
        {
            stack.pop();
        }
        stack.push(i);
    }
    Ok(stack)
}

// Strict clockwise turn o -> a -> b, beyond the relative tolerance.
fn is_right_turn(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> bool {
    let (ax, ay) = (a.0 - o.0, a.1 - o.1);
    let (bx, by) = (b.0 - o.0, b.1 - o.1);
    let cross = ax * by - ay * bx;
    let scale = ax.hypot(ay) * bx.hypot(by);
    cross < -HULL_EPS * scale
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonHadamardPolygon {
    pub vertex_indices: Vec<usize>,
    /// `r_j` is where dominance passes from `vertex_indices[j-1]` to `vertex_indices[j]`.
    pub breakpoint_radii: Vec<f64>,
    #[serde(rename = "V")]
    pub vertex_count: usize,
}

impl NewtonHadamardPolygon {
    pub fn of(p: &Polynomial) -> Result<Self> {
        let (ks, pts): (Vec<usize>, Vec<(f64, f64)>) = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(k, c)| (k, (k as f64, c.norm().ln())))
            .unzip();
        if ks.is_empty() {
            return Err(Error::domain("all coefficients vanish"));
        }
        let hull = upper_hull(&pts)?;
        let vertex_indices: Vec<usize> = hull.iter().map(|&i| ks[i]).collect();
        let breakpoint_radii = hull
            .windows(2)
            .map(|w| {
                let (x0, y0) = pts[w[0]];
                let (x1, y1) = pts[w[1]];
                ((y0 - y1) / (x1 - x0)).exp()
            })
            .collect();
        Ok(Self {
            vertex_count: vertex_indices.len(),
            vertex_indices,
            breakpoint_radii,
        })
    }

    /// Edges as `(k_{j-1}, k_j, r_j)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.vertex_indices
            .windows(2)
            .zip(&self.breakpoint_radii)
            .map(|(w, &r)| (w[0], w[1], r))
    }

    /// The vertex that dominates at radius `r` (the largest maximizer of
    /// `|λₖ| rᵏ` away from breakpoints).
    pub fn dominant_vertex(&self, r: f64) -> usize {
        let j = self.breakpoint_radii.partition_point(|&b| b <= r);
        self.vertex_indices[j]
    }
}

pub fn polygon(p: &Polynomial) -> Result<NewtonHadamardPolygon> {
    NewtonHadamardPolygon::of(p)
}

/// `V(P)`.
pub fn vertex_count(p: &Polynomial) -> Result<usize> {
    polygon(p).map(|g| g.vertex_count)
}

/// `2·Hₙ = 2 Σ_{j=1}^{n} 1/j`, the upper bound on `E[V(P)]` for i.i.d. coefficients.
pub fn harmonic_v_bound(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("harmonic bound needs n >= 1"));
    }
    Ok(2.0 * (1..=n).rev().map(|j| 1.0 / j as f64).sum::<f64>())
}

/// Root-modulus estimates from the polygon: each edge contributes its
/// breakpoint radius with multiplicity equal to its horizontal span.
pub fn initial_root_radii(p: &Polynomial) -> Result<Vec<f64>> {
    if !p.is_nondegenerate() {
        return Err(Error::domain("root radii need λ₀·λₙ ≠ 0"));
    }
    let g = polygon(p)?;
    let mut radii = Vec::with_capacity(p.degree());
    for (k0, k1, r) in g.edges() {
        radii.extend(std::iter::repeat_n(r, k1 - k0));
    }
    Ok(radii)
}

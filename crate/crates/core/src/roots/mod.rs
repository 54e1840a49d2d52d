//! Zero finding and zero counting.
//!
//! [`all_roots`] runs an Aberth–Ehrlich simultaneous iteration seeded from
//! the Newton–Hadamard polygon; [`count_real`] counts real zeros exactly,
//! from inclusion discs or Sturm chains; [`LipschitzCurve`] and [`count_on_curve`] count zeros
//! lying on a curve `r ↦ r e^{iθ(r)}`.

mod aberth;
mod curves;
mod inclusion;
mod sturm;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

pub use aberth::MAX_ITERS;
pub use curves::{count_on_curve, count_on_curves, CurveCount, LipschitzCurve};
pub use sturm::{cauchy_bound, count_real_exact, real_root_count, sturm_count, RealRootCount};

use crate::error::Result;
use crate::poly::Polynomial;

/// Roots closer than `CLUSTER_REL · (1 + |z|)` are merged into one zero of
/// higher multiplicity.
pub const CLUSTER_REL: f64 = 1e-7;

/// All `n` roots of a polynomial, with per-root backward errors.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|P(z)| / S(|z|, P)` for each root.
    pub residuals: Vec<f64>,
}

/// A group of numerically coincident roots.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RootCluster {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub residual: f64,
}

impl RootCluster {
    pub fn center(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn cluster_radius(z: Complex64) -> f64 {
        CLUSTER_REL * (1.0 + z.norm())
    }

    /// Single-linkage clustering at [`RootSet::cluster_radius`].
    pub fn clusters(&self) -> Vec<RootCluster> {
        let n = self.roots.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (self.roots[i], self.roots[j]);
                let tol = CLUSTER_REL * (1.0 + a.norm().max(b.norm()));
                if (a - b).norm() <= tol {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[rj.max(ri)] = ri.min(rj);
                    }
                }
            }
        }
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            match groups.iter_mut().find(|(root, _)| *root == r) {
                Some((_, members)) => members.push(i),
                None => groups.push((r, vec![i])),
            }
        }
        groups
            .into_iter()
            .map(|(_, members)| {
                let m = members.len() as f64;
                let center: Complex64 = members.iter().map(|&i| self.roots[i]).sum::<Complex64>() / m;
                let residual = members.iter().map(|&i| self.residuals[i]).fold(0.0, f64::max);
                RootCluster {
                    re: center.re,
                    im: center.im,
                    multiplicity: members.len(),
                    residual,
                }
            })
            .collect()
    }

    /// Relative deviations from `Σ z = −λ_{n−1}/λₙ` and `Π z = (−1)ⁿ λ₀/λₙ`,
    /// each scaled by `1 + |expected|`.
    pub fn vieta_residuals(&self, p: &Polynomial) -> (f64, f64) {
        let n = p.degree();
        if n == 0 {
            return (0.0, 0.0);
        }
        let c = p.coeffs();
        let lead = c[n];
        let sum_expected = -c[n - 1] / lead;
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let prod_expected = c[0] / lead * sign;
        let sum: Complex64 = self.roots.iter().sum();
        let prod: Complex64 = self.roots.iter().product();
        (
            (sum - sum_expected).norm() / (1.0 + sum_expected.norm()),
            (prod - prod_expected).norm() / (1.0 + prod_expected.norm()),
        )
    }

    /// Number of roots with `|Im z| < tol · (1 + |z|)`.
    pub fn count_near_real(&self, tol: f64) -> usize {
        self.roots
            .iter()
            .filter(|z| z.im.abs() < tol * (1.0 + z.norm()))
            .count()
    }
}

impl Serialize for RootSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.clusters())
    }
}

/// All roots of `p` (degree `n ≥ 1`, `λₙ ≠ 0`).
///
/// Zeros at the origin (vanishing low-order coefficients) are split off
/// exactly; the rest come from the Aberth–Ehrlich iteration, converged when
/// every Newton correction is below `1e−13·(1+|z|)` or the backward error
/// has reached Horner's rounding floor, then polished with two Newton steps.
pub fn all_roots(p: &Polynomial) -> Result<RootSet> {
    if p.is_zero() {
        return Err(crate::error::Error::domain("roots of the zero polynomial"));
    }
    let k0 = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let zero = Complex64::new(0.0, 0.0);
    let mut roots = vec![zero; k0];
    let mut residuals = vec![0.0; k0];
    if k0 < p.degree() {
        let reduced = Polynomial::new(p.coeffs()[k0..].to_vec())?;
        let (z, res) = aberth::aberth(&reduced)?;
        roots.extend(z);
        residuals.extend(res);
    }
    Ok(RootSet { roots, residuals })
}

/// `N(ℝ; P)`: real zeros of a real polynomial, with multiplicity.
///
/// Tries a certified count from inclusion discs around the Aberth roots
/// first and falls back to [`count_real_exact`] whenever the discs do not
/// separate the zeros. Both paths give the exact count.
pub fn count_real(p: &Polynomial) -> Result<usize> {
    if !p.is_real() {
        return Err(crate::error::Error::domain("real-zero counting needs real coefficients"));
    }
    if p.is_zero() {
        return Err(crate::error::Error::domain("real zeros of the zero polynomial"));
    }
    let k0 = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    if k0 == p.degree() {
        return Ok(k0);
    }
    let reduced = Polynomial::new(p.coeffs()[k0..].to_vec())?;
    if let Ok((z, _)) = aberth::aberth(&reduced) {
        if let Some(c) = inclusion::certified_real_count(&reduced, &z) {
            return Ok(k0 + c);
        }
    }
    count_real_exact(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn real(cs: &[f64]) -> Polynomial {
        Polynomial::from_real(cs).unwrap()
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    fn assert_roots(p: &Polynomial, expected: &[Complex64]) {
        let got = sorted(all_roots(p).unwrap().roots);
        let want = sorted(expected.to_vec());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-12, "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn small_examples() {
        let c = Complex64::new;
        assert_roots(&real(&[1.0, 0.0, 1.0]), &[c(0.0, -1.0), c(0.0, 1.0)]);
        assert_roots(&real(&[-1.0, 0.0, 1.0]), &[c(-1.0, 0.0), c(1.0, 0.0)]);
        assert_roots(&real(&[-6.0, 1.0, 1.0]), &[c(-3.0, 0.0), c(2.0, 0.0)]);
        assert_roots(&real(&[0.0, 0.0, 1.0, 1.0]), &[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(all_roots(&real(&[0.0])).is_err());
        assert!(all_roots(&real(&[2.0])).unwrap().is_empty());
    }

    #[test]
    fn double_root_clusters() {
        let rs = all_roots(&real(&[1.0, -2.0, 1.0])).unwrap();
        let cl = rs.clusters();
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].multiplicity, 2);
        assert!((cl[0].center() - Complex64::new(1.0, 0.0)).norm() < 1e-7);
        let json = serde_json::to_value(&rs).unwrap();
        assert_eq!(json[0]["multiplicity"], 2);
    }

    #[test]
    fn random_polynomials_satisfy_vieta_and_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let n = rng.random_range(1..=64);
            let cs: Vec<Complex64> = (0..=n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let p = Polynomial::new(cs).unwrap();
            let rs = all_roots(&p).unwrap();
            assert_eq!(rs.len(), n);
            let (s, pr) = rs.vieta_residuals(&p);
            assert!(s < 1e-6 && pr < 1e-6, "vieta {s} {pr}");
            for (z, &res) in rs.roots.iter().zip(&rs.residuals) {
                let direct = p.eval(*z).norm() / p.s_majorant(z.norm()).unwrap();
                assert!(res <= 1e-8 && direct <= 1e-8);
            }
        }
    }

    #[test]
    fn wide_dynamic_range() {
        // roots 1e-3, 1, 1e3
        let c = Complex64::new;
        let mut cs = vec![c(1.0, 0.0)];
        for r in [1e-3, 1.0, 1e3] {
            let mut out = vec![c(0.0, 0.0); cs.len() + 1];
            for (k, a) in cs.iter().enumerate() {
                out[k + 1] += a;
                out[k] -= a * r;
            }
            cs = out;
        }
        let rs = all_roots(&Polynomial::new(cs).unwrap()).unwrap();
        let mut mods: Vec<f64> = rs.roots.iter().map(|z| z.norm()).collect();
        mods.sort_by(f64::total_cmp);
        for (m, want) in mods.iter().zip([1e-3, 1.0, 1e3]) {
            assert!((m - want).abs() < 1e-9 * want);
        }
    }

    #[test]
    fn count_real_matches_exact_sturm() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..300 {
            let n = rng.random_range(1..=80);
            let cs: Vec<f64> = (0..=n)
                .map(|_| match rng.random_range(0..3) {
                    0 => if rng.random_bool(0.5) { 1.0 } else { -1.0 },
                    _ => rng.sample(StandardNormal),
                })
                .collect();
            let p = real(&cs);
            assert_eq!(count_real(&p).unwrap(), count_real_exact(&p).unwrap(), "{cs:?}");
        }
        // multiple roots and zeros at the origin go through the fallback
        let p = real(&[0.0, 0.0, 1.0, -2.0, 1.0]);
        assert_eq!(count_real(&p).unwrap(), 4);
        assert_eq!(count_real(&real(&[0.0, 0.0, 5.0])).unwrap(), 2);
        assert!(count_real(&real(&[0.0])).is_err());
        assert_eq!(count_real(&real(&[2.0])).unwrap(), 0);
    }
}

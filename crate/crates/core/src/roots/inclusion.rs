//! Certified real-zero counts from approximate roots.
//!
//! For a degree-`m` polynomial and distinct approximations `z₁..z_m`, the
//! discs `|z − zᵢ| ≤ m·|Wᵢ|` with `Wᵢ = P(zᵢ) / (λ_m Π_{j≠i}(zᵢ − z_j))`
//! cover all zeros, and every connected component of `k` discs holds exactly
//! `k` zeros. With pairwise disjoint discs each holds one simple zero. For
//! real coefficients zeros come in conjugate pairs, so a disc meeting the
//! real axis whose mirror image meets no other disc holds a real zero.

use num_complex::Complex64;

use crate::poly::Polynomial;

// Rounding slack on a Horner evaluation, in units of S(|z|).
fn eval_slack(n: usize) -> f64 {
    16.0 * (n + 1) as f64 * f64::EPSILON
}

/// `ln(|P(z)| + slack·S(|z|))`, an upper bound on `ln|P(z)|` for the exact value.
fn log_abs_bound(p: &Polynomial, z: Complex64) -> f64 {
    let c = p.coeffs();
    let n = p.degree();
    let (val, s, scale) = if z.norm() <= 1.0 {
        let mut v = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        let r = z.norm();
        for a in c.iter().rev() {
            v = v * z + a;
            s = s * r + a.norm();
        }
        (v.norm(), s, 0.0)
    } else {
        let w = z.inv();
        let r = w.norm();
        let mut v = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        for a in c {
            v = v * w + a;
            s = s * r + a.norm();
        }
        (v.norm(), s, n as f64 * z.norm().ln())
    };
    (val + eval_slack(n) * s).ln() + scale
}

/// Number of real zeros of `p` when the inclusion discs around `roots`
/// certify it, `None` otherwise. Needs real coefficients, `λ₀ ≠ 0` and
/// one approximation per zero.
pub(crate) fn certified_real_count(p: &Polynomial, roots: &[Complex64]) -> Option<usize> {
    let m = p.degree();
    if m == 0 || roots.len() != m || !p.is_real() || p.coeffs()[0].norm() == 0.0 {
        return None;
    }
    let log_lead = p.coeffs()[m].norm().ln();
    let mut radii = Vec::with_capacity(m);
    for (i, &zi) in roots.iter().enumerate() {
        let mut log_prod = 0.0;
        for (j, &zj) in roots.iter().enumerate() {
            if i != j {
                log_prod += (zi - zj).norm().ln();
            }
        }
        let log_w = log_abs_bound(p, zi) - log_lead - log_prod;
        let rho = (m as f64).ln() + log_w;
        let rho = rho.exp() * (1.0 + 1e-9);
        if !rho.is_finite() {
            return None;
        }
        radii.push(rho);
    }
    let separated = |a: Complex64, ra: f64, b: Complex64, rb: f64| {
        (a - b).norm() > (ra + rb) * (1.0 + 1e-9) + 4.0 * f64::EPSILON * (a.norm() + b.norm())
    };
    for i in 0..m {
        for j in i + 1..m {
            if !separated(roots[i], radii[i], roots[j], radii[j]) {
                return None;
            }
        }
    }
    let mut count = 0;
    for i in 0..m {
        if roots[i].im.abs() > radii[i] {
            continue;
        }
        let mirror = roots[i].conj();
        if (0..m).any(|j| j != i && !separated(mirror, radii[i], roots[j], radii[j])) {
            return None;
        }
        count += 1;
    }
    Some(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(cs: &[f64]) -> Polynomial {
        Polynomial::from_real(cs).unwrap()
    }

    #[test]
    fn exact_roots_certify() {
        let c = Complex64::new;
        assert_eq!(certified_real_count(&real(&[-1.0, 0.0, 1.0]), &[c(1.0, 0.0), c(-1.0, 0.0)]), Some(2));
        assert_eq!(certified_real_count(&real(&[1.0, 0.0, 1.0]), &[c(0.0, 1.0), c(0.0, -1.0)]), Some(0));
    }

    #[test]
    fn refuses_bad_input() {
        let c = Complex64::new;
        // double root: discs collapse onto each other
        assert_eq!(certified_real_count(&real(&[1.0, -2.0, 1.0]), &[c(1.0, 0.0), c(1.0, 0.0)]), None);
        // poor approximations overlap
        assert_eq!(certified_real_count(&real(&[-1.0, 0.0, 1.0]), &[c(0.1, 0.0), c(-0.1, 0.0)]), None);
        // wrong number of approximations, zero constant term
        assert_eq!(certified_real_count(&real(&[-1.0, 0.0, 1.0]), &[c(1.0, 0.0)]), None);
        assert_eq!(certified_real_count(&real(&[0.0, 1.0]), &[c(0.0, 0.0)]), None);
    }

    #[test]
    fn near_real_pair_is_not_miscounted() {
        // x² − 2εx + ε² + δ² with roots ε ± iδ, δ tiny
        let (e, d) = (0.5, 1e-12);
        let p = real(&[e * e + d * d, -2.0 * e, 1.0]);
        let roots = [Complex64::new(e, d), Complex64::new(e, -d)];
        assert_ne!(certified_real_count(&p, &roots), Some(2));
    }
}

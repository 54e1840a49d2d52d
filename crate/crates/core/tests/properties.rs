use std::f64::consts::PI;

use flipzeros::certificates::{arc_max, sbar_check, ExpPolynomial, Interval};
use flipzeros::roots::{count_on_curves, count_real, count_real_exact};
use flipzeros::theta::{enumerate_flips, greedy_pairing, FlipModel};
use flipzeros::{all_roots, polygon, Complex64, LipschitzCurve, Polynomial};
use proptest::prelude::*;

fn real_poly(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(prop_oneof![-4.0..4.0f64, Just(1.0), Just(-1.0)], 2..=max_degree + 1)
        .prop_filter("non-zero ends", |c| c[0] != 0.0 && *c.last().unwrap() != 0.0)
        .prop_map(|c| Polynomial::from_real(&c).unwrap())
}

fn complex_poly(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64, -8.0..8.0f64), 2..=max_degree + 1)
        .prop_map(|c| Polynomial::new(c.into_iter().map(|(re, im, s)| Complex64::new(re, im) * s.exp()).collect()).unwrap())
        .prop_filter("non-zero ends", |p| p.coeffs()[0].norm() > 0.0 && p.coeffs()[p.degree()].norm() > 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn real_zero_count_bounds_and_parity(p in real_poly(40)) {
        let n = p.degree();
        let k = count_real(&p).unwrap();
        prop_assert!(k <= n);
        // non-real zeros pair up
        prop_assert_eq!((n - k) % 2, 0);
        prop_assert_eq!(k, count_real_exact(&p).unwrap());
        prop_assert_eq!(k, count_real(&p.reverse()).unwrap());
    }

    #[test]
    fn sandwich_and_polygon(p in complex_poly(30), t in -1.0..1.0f64) {
        let n = p.degree();
        let h = p.big_h(t).unwrap();
        let s = p.s_majorant((-2.0 * PI * t).exp()).unwrap();
        prop_assert!(h <= s * (1.0 + 1e-12));
        prop_assert!(s <= (n + 1) as f64 * h * (1.0 + 1e-12));
        let poly = polygon(&p).unwrap();
        prop_assert!(poly.vertex_count >= 2 && poly.vertex_count <= n + 1);
        prop_assert!(poly.vertex_indices.contains(&p.central_index(t).unwrap()));
    }

    #[test]
    fn roots_residuals_and_curve_counts(p in complex_poly(40), l in 0.0..3.0f64) {
        let rs = all_roots(&p).unwrap();
        prop_assert_eq!(rs.len(), p.degree());
        for z in &rs.roots {
            prop_assert!(p.eval(*z).norm() <= 1e-8 * p.s_majorant(z.norm()).unwrap());
        }
        let mut curves = LipschitzCurve::real_line();
        curves.push(LipschitzCurve::log_spiral(l).unwrap());
        prop_assert!(count_on_curves(&p, &curves, 1e-8).unwrap().count <= p.degree());
    }

    #[test]
    fn majorant_of_one_minus_z_times_p(p in complex_poly(64), lr in -6.9..6.9f64) {
        prop_assert!(sbar_check(&p, lr.exp()).unwrap().ok);
    }

    #[test]
    fn arc_max_triangle_inequality(
        terms in prop::collection::btree_map(-20i64..20, (-2.0..2.0f64, -2.0..2.0f64), 1..6),
        lo in -PI..PI,
        len in 0.0..2.0 * PI,
    ) {
        let p = ExpPolynomial::new(terms.into_iter().map(|(l, (re, im))| (Complex64::new(re, im), l)).collect()).unwrap();
        let m = arc_max(&p, Interval::new(lo, lo + len).unwrap(), 1024).unwrap();
        prop_assert!(m <= p.l1_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn greedy_pairs_have_non_increasing_distances(
        atoms in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..40)
    ) {
        let mut atoms: Vec<Complex64> = atoms.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        if atoms.len() % 2 == 1 {
            atoms.pop();
        }
        prop_assume!(!atoms.is_empty());
        let (pairs, _) = greedy_pairing(&atoms).unwrap();
        let d: Vec<f64> = pairs.iter().map(|(a, b)| (a - b).norm()).collect();
        prop_assert!(d.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn enumeration_is_exhaustive_and_distinct() {
    let vals: Vec<Complex64> = (1..=6).map(|k| Complex64::new(k as f64, 0.0)).collect();
    let model = FlipModel::symmetric(&vals).unwrap();
    let seqs: std::collections::HashSet<String> =
        enumerate_flips(&model).unwrap().map(|(s, _)| s.to_string()).collect();
    assert_eq!(seqs.len(), 64);
}

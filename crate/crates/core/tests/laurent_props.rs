mod common;

use common::*;
use knot_torsion::alexander::alexander_polynomial;
use knot_torsion::laurent::{polynomial_roots, Laurent, LaurentMatrix};
use knot_torsion::C64;
use proptest::prelude::*;

fn int_laurent() -> impl Strategy<Value = Laurent<i64>> {
    (-2i64..=2, prop::collection::vec(-3i64..=3, 1..=3)).prop_map(|(lo, c)| Laurent::new(lo, c))
}

fn int_matrix(n: usize) -> impl Strategy<Value = LaurentMatrix<i64>> {
    prop::collection::vec(int_laurent(), n * n)
        .prop_map(move |v| LaurentMatrix::from_fn(n, n, |i, j| v[i * n + j].clone()))
}

fn unit_point() -> impl Strategy<Value = C64> {
    (0.3f64..2.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, a)| C64::from_polar(r, a))
}

proptest! {
    #[test]
    fn determinant_is_multiplicative(a in int_matrix(3), b in int_matrix(3)) {
        let lhs = a.mul(&b).det().unwrap();
        let rhs = &a.det().unwrap() * &b.det().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn complex_determinant_matches_exact(a in int_matrix(3)) {
        let exact = a.det().unwrap().to_complex();
        let float = a.to_complex().det().unwrap();
        let scale = exact.max_abs_coeff().max(1.0);
        let worst = (&float - &exact).max_abs_coeff();
        prop_assert!(worst <= 1e-8 * scale, "{float} vs {exact}");
    }

    #[test]
    fn determinant_commutes_with_evaluation(a in int_matrix(3), t in unit_point()) {
        let det_then_eval = a.det().unwrap().evaluate(t);
        let eval_then_det = a.evaluate(t).determinant();
        let scale = det_then_eval.norm().max(1.0);
        prop_assert!((det_then_eval - eval_then_det).norm() <= 1e-9 * scale);
    }

    #[test]
    fn evaluation_is_a_ring_map(p in int_laurent(), q in int_laurent(), t in unit_point()) {
        let (pt, qt) = (p.evaluate(t), q.evaluate(t));
        let tol = 1e-10 * (1.0 + pt.norm() * qt.norm() + pt.norm() + qt.norm());
        prop_assert!(((&p * &q).evaluate(t) - pt * qt).norm() <= tol);
        prop_assert!(((&p + &q).evaluate(t) - (pt + qt)).norm() <= tol);
        prop_assert!(((&p - &q).evaluate(t) - (pt - qt)).norm() <= tol);
    }

    #[test]
    fn exact_division_round_trips(p in int_laurent(), q in int_laurent()) {
        prop_assume!(!q.is_zero());
        let prod = &p * &q;
        prop_assert_eq!(prod.divide_exact(&q, 0.0).unwrap(), p);
    }

    #[test]
    fn derivative_matches_finite_difference(p in int_laurent(), t in unit_point()) {
        let exact = p.derivative().evaluate(t);
        let fd = fd_derivative(|x| p.evaluate(x), t, 1e-4);
        prop_assert!((exact - fd).norm() <= 1e-6 * (1.0 + exact.norm()));
    }

    #[test]
    fn roots_of_products_of_linear_factors(rs in prop::collection::vec(unit_point(), 1..=5)) {
        let mut coeffs = vec![C64::new(1.0, 0.0)];
        for r in &rs {
            let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] -= c * r;
                next[i + 1] += c;
            }
            coeffs = next;
        }
        let found = polynomial_roots(&coeffs);
        prop_assert_eq!(found.len(), rs.len());
        for r in &rs {
            let best = found.iter().map(|f| (f - r).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best <= 1e-5, "missing root {r}");
        }
    }
}

#[test]
fn fixture_polynomials_are_palindromic() {
    for (name, p) in all_presentations() {
        let delta = alexander_polynomial(&p).unwrap().delta;
        assert!(delta.is_symmetric(0.0), "{name}: {delta}");
        assert_eq!(delta.min_degree(), -delta.max_degree());
        let coeffs = delta.coeffs();
        assert!(coeffs.iter().eq(coeffs.iter().rev()), "{name}");
        assert_eq!(coeffs.iter().sum::<i64>(), 1, "{name}: Δ(1) = 1");
    }
}

#[test]
fn display_and_serde() {
    let p: Laurent<i64> = Laurent::new(-1, vec![2, -3, 2]);
    assert_eq!(p.to_string(), "2t - 3 + 2t^-1");
    let json = serde_json::to_string(&p).unwrap();
    let back: Laurent<i64> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, p);
}

mod common;

use common::*;
use knot_torsion::alexander::{alexander_polynomial, fox_alexander_det};
use knot_torsion::reps::{
    abelian_rep, random_sl2, reducible_nonabelian, riley_family, riley_polynomial, Representation,
};
use knot_torsion::torsion::{
    cross_oracle, generic_acyclic_torsion, generic_acyclic_torsion_with_order, lambda_torsion_up_to_sign,
    presentation_complex, twisted_fox_matrix, wada_invariant, Action,
};
use knot_torsion::C64;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// An irreducible Riley representation near a generic `s`.
fn riley(name: &str, s: C64) -> Representation {
    let p = two_bridge(name);
    let poly = riley_polynomial(&p, s).unwrap();
    poly.roots()
        .into_iter()
        .filter(|u| u.norm() > 1e-8)
        .map(|u| riley_family(&p, s, u).unwrap())
        .filter(|r| r.residual() < 1e-9)
        .min_by(|a, b| a.residual().total_cmp(&b.residual()))
        .expect("a genuine Riley root")
}

fn random_points(rng: &mut StdRng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

#[test]
fn cross_oracle_on_riley_representations() {
    let mut rng = StdRng::seed_from_u64(17);
    for name in ["trefoil", "figure-eight", "5_2"] {
        let rep = riley(name, C64::from_polar(1.15, 0.7));
        let points = random_points(&mut rng, 20);
        let report = cross_oracle(&rep, &points).unwrap();
        assert!(report.max_relative_error <= 1e-8, "{name}: {report:?}");
    }
}

#[test]
fn torsion_is_independent_of_basis_choices() {
    let mut rng = StdRng::seed_from_u64(23);
    for (name, p) in all_presentations() {
        let z0 = alexander_polynomial(&p).unwrap().roots[0].z0;
        let rep = reducible_nonabelian(z0, &p).unwrap();
        let t0 = C64::new(1.3, 0.6);
        let complex = presentation_complex(&rep, t0).unwrap();
        let base = generic_acyclic_torsion(&complex).unwrap();
        for _ in 0..5 {
            let orders: Vec<Vec<usize>> = complex
                .dims()
                .iter()
                .map(|&n| {
                    let mut v: Vec<usize> = (0..n).collect();
                    v.shuffle(&mut rng);
                    v
                })
                .collect();
            let other = generic_acyclic_torsion_with_order(&complex, &orders).unwrap();
            assert!((other - base).norm() <= 1e-8 * base.norm(), "{name}: {other} vs {base}");
        }
    }
}

#[test]
fn lambda_torsion_is_conjugation_invariant() {
    let mut rng = StdRng::seed_from_u64(29);
    for name in ["trefoil", "figure-eight", "5_2"] {
        let rep = riley(name, C64::from_polar(1.05, 0.9));
        let base = lambda_torsion_up_to_sign(&rep).unwrap().value.norm();
        for _ in 0..10 {
            let conj = rep.conjugate(&random_sl2(&mut rng));
            let other = lambda_torsion_up_to_sign(&conj).unwrap().value.norm();
            assert!((other - base).abs() <= 1e-8 * base, "{name}: {other} vs {base}");
        }
    }
}

#[test]
fn trefoil_lambda_torsion_is_constant() {
    for s in [
        C64::from_polar(1.2, 0.3),
        C64::from_polar(0.8, 1.9),
        C64::new(1.7, -0.4),
    ] {
        let value = lambda_torsion_up_to_sign(&riley("trefoil", s)).unwrap().value;
        assert!((value.norm() - 3.0).abs() < 1e-8, "{value}");
    }
}

#[test]
fn denominator_matches_closed_form() {
    for name in ["trefoil", "figure-eight", "5_2"] {
        let rep = riley(name, C64::from_polar(0.9, 2.1));
        let w = wada_invariant(&rep, 1).unwrap();
        assert!(w.denominator_deviation <= 1e-9, "{name}: {}", w.denominator_deviation);
        let x1 = rep.images()[0];
        let tr = (x1 * x1).trace();
        for t in [C64::new(0.4, 1.1), C64::new(-1.5, 0.2)] {
            let closed = (t - 1.0) * (t * t - tr * t + 1.0);
            let got = w.denominator.evaluate(t);
            assert!((got - closed).norm() <= 1e-9 * closed.norm(), "{name}");
        }
    }
}

#[test]
fn trivial_scalar_action_gives_fox_determinant() {
    for (name, p) in all_presentations() {
        let ones = vec![C64::new(1.0, 0.0); p.generator_count()];
        let action = Action::scalar(&p, &ones).unwrap();
        let det = twisted_fox_matrix(&action, 1).unwrap().det().unwrap();
        let exact = fox_alexander_det(&p, 1).unwrap().to_complex();
        assert!(det.relative_deviation(&exact) < 1e-10, "{name}: {det} vs {exact}");
    }
}

/// For abelian ρ the adjoint splits into the weights `λ², 1, λ^{-2}`, so
/// `det A¹` is the product of three scalar determinants.
#[test]
fn abelian_adjoint_splits_into_scalar_actions() {
    for (name, p) in all_presentations() {
        let z = C64::new(0.3, 0.2);
        let rep = abelian_rep(z, &p).unwrap();
        let full = twisted_fox_matrix(&Action::adjoint(&rep), 1).unwrap().det().unwrap();
        let k = p.generator_count();
        let mut product = knot_torsion::laurent::Laurent::<C64>::one();
        for w in [(2.0 * z).exp(), C64::new(1.0, 0.0), (-2.0 * z).exp()] {
            let action = Action::scalar(&p, &vec![w; k]).unwrap();
            product = &product * &twisted_fox_matrix(&action, 1).unwrap().det().unwrap();
        }
        assert!(full.relative_deviation(&product) < 1e-9, "{name}: {full} vs {product}");
    }
}

#[test]
fn balancing_is_a_norm_reducing_conjugation() {
    let mut rng = StdRng::seed_from_u64(31);
    let norm = |r: &Representation| r.images().iter().map(|g| g.matrix().norm_squared()).sum::<f64>();
    for name in ["trefoil", "figure-eight", "5_2"] {
        let rep = riley(name, C64::from_polar(1.05, 0.9)).conjugate(&random_sl2(&mut rng));
        let (balanced, h) = rep.balanced();
        assert!(norm(&balanced) <= norm(&rep), "{name}");
        assert!(balanced.residual() < 1e-9, "{name}");
        let again = rep.conjugate(&h);
        for (a, b) in again.images().iter().zip(balanced.images()) {
            assert!((a.matrix() - b.matrix()).norm() < 1e-12);
        }
        // Irreducible orbits are closed, so the moment map can be driven
        // down to the stopping threshold.
        let mu: nalgebra::Matrix2<C64> = balanced
            .images()
            .iter()
            .map(|g| g.matrix() * g.matrix().adjoint() - g.matrix().adjoint() * g.matrix())
            .sum();
        assert!(mu.norm() <= 1e-3 * norm(&balanced), "{name}");
    }
}

/// Without balancing, `det A¹` is still conjugation invariant, at an
/// accuracy limited by the conditioning of the conjugator.
#[test]
fn unbalanced_numerator_is_conjugation_invariant() {
    let mut rng = StdRng::seed_from_u64(37);
    for name in ["trefoil", "figure-eight", "5_2"] {
        let rep = riley(name, C64::from_polar(1.15, 0.7));
        let base = knot_torsion::torsion::build_a1(&rep, 1).unwrap().det().unwrap();
        for _ in 0..5 {
            let conj = rep.conjugate(&random_sl2(&mut rng));
            let other = knot_torsion::torsion::build_a1(&conj, 1).unwrap().det_with(
                knot_torsion::laurent::InterpolationOptions {
                    tolerance: 1e-6,
                    trim: 0.0,
                },
            );
            let other = other.unwrap();
            assert!(
                other.relative_deviation(&base) < 1e-6,
                "{name}: {}",
                other.relative_deviation(&base)
            );
        }
    }
}

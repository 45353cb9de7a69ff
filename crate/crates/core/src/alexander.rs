//! Untwisted Alexander polynomial, its roots, and the abelian torsion function.

use serde::{Deserialize, Serialize};

use crate::laurent::{polynomial_roots, Laurent, LaurentMatrix};
use crate::words::{fox_derivative, Presentation};
use crate::{cplx, Error, Result, C64};

/// Default relative threshold on `|Δ'(r)|` separating simple roots.
pub const DEFAULT_SIMPLICITY: f64 = 1e-6;

/// Relative residual above which a point is not accepted as a root of `Δ`.
pub const ROOT_TOLERANCE: f64 = 1e-8;

/// A root `r` of `Δ` with its principal half-logarithm `z0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlexanderRoot {
    #[serde(with = "cplx")]
    pub value: C64,
    pub simple: bool,
    /// `½ (ln|r| + i Arg r)` with `Arg ∈ (-π, π]`.
    #[serde(with = "cplx")]
    pub z0: C64,
}

/// Normalized Alexander polynomial and its roots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlexanderData {
    pub delta: Laurent<i64>,
    pub roots: Vec<AlexanderRoot>,
    pub simplicity_threshold: f64,
}

/// Integer Fox matrix `α(∂r_i/∂x_j)` with generator column `deleted` (1-based)
/// removed.
pub fn fox_alexander_matrix(p: &Presentation, deleted: usize) -> Result<LaurentMatrix<i64>> {
    let k = p.generator_count();
    if deleted == 0 || deleted > k {
        return Err(Error::Presentation(format!(
            "deleted column {deleted} is out of range 1..={k}"
        )));
    }
    let cols: Vec<usize> = (1..=k).filter(|&j| j != deleted).collect();
    Ok(LaurentMatrix::from_fn(k - 1, k - 1, |i, c| {
        fox_derivative(&p.relators()[i], cols[c])
            .terms()
            .fold(Laurent::zero(), |acc, (w, n)| &acc + &Laurent::monomial(n, p.alpha(w)))
    }))
}

/// Unnormalized `det` of [`fox_alexander_matrix`].
pub fn fox_alexander_det(p: &Presentation, deleted: usize) -> Result<Laurent<i64>> {
    fox_alexander_matrix(p, deleted)?.det()
}

/// Alexander polynomial from the Fox matrix with column `x1` deleted.
pub fn alexander_polynomial(p: &Presentation) -> Result<AlexanderData> {
    alexander_polynomial_with(p, 1, DEFAULT_SIMPLICITY)
}

pub fn alexander_polynomial_with(p: &Presentation, deleted: usize, simplicity: f64) -> Result<AlexanderData> {
    p.require_meridional()?;
    let det = fox_alexander_det(p, deleted)?;
    if det.is_zero() {
        return Err(Error::DegenerateDeterminant);
    }
    let delta = det.normalize_symmetric(0.0)?.polynomial;
    let roots = roots_of(&delta, simplicity);
    Ok(AlexanderData {
        delta,
        roots,
        simplicity_threshold: simplicity,
    })
}

fn roots_of(delta: &Laurent<i64>, simplicity: f64) -> Vec<AlexanderRoot> {
    let coeffs: Vec<C64> = delta.coeffs().iter().map(|&c| C64::new(c as f64, 0.0)).collect();
    let derivative = delta.derivative().to_complex();
    let mut roots: Vec<AlexanderRoot> = polynomial_roots(&coeffs)
        .into_iter()
        .map(|value| AlexanderRoot {
            value,
            simple: derivative.relative_value(value) > simplicity,
            z0: 0.5 * value.ln(),
        })
        .collect();
    // Largest modulus first, then decreasing argument.
    roots.sort_by(|a, b| {
        let key = |r: &AlexanderRoot| ((r.value.norm() * 1e9).round(), r.value.arg());
        let (ma, aa) = key(a);
        let (mb, ab) = key(b);
        mb.total_cmp(&ma).then(ab.total_cmp(&aa))
    });
    roots
}

impl AlexanderData {
    pub fn evaluate(&self, t: C64) -> C64 {
        self.delta.evaluate(t)
    }

    pub fn derivative_at(&self, t: C64) -> C64 {
        self.delta.derivative().evaluate(t)
    }

    /// `|Δ(t)|` relative to `Σ |c_d| |t|^d`.
    pub fn relative_value(&self, t: C64) -> f64 {
        self.delta.relative_value(t)
    }

    /// Requires `e^{2 z0}` to be a root, returning it.
    pub fn require_root(&self, z0: C64) -> Result<C64> {
        let r = (2.0 * z0).exp();
        let v = self.relative_value(r);
        if v > ROOT_TOLERANCE {
            return Err(Error::NotARoot(self.evaluate(r).norm()));
        }
        Ok(r)
    }

    /// Simplicity of the root `r` under the stored threshold.
    pub fn is_simple_root(&self, r: C64) -> bool {
        self.delta.derivative().relative_value(r) > self.simplicity_threshold
    }
}

/// `Δ(e^{2z}) / (e^z - e^{-z})`.
pub fn abelian_torsion(z: C64, a: &AlexanderData) -> Result<C64> {
    let den = z.exp() - (-z).exp();
    if den.norm() < 1e-12 {
        return Err(Error::SmallDenominator(den.norm()));
    }
    Ok(a.evaluate((2.0 * z).exp()) / den)
}

/// Squared half-derivative of [`abelian_torsion`] at a simple bifurcation
/// point, computed two ways.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhsLimit {
    /// `(Δ'(r) r)² / (r + 1/r - 2)` with `r = e^{2 z0}`.
    #[serde(with = "cplx")]
    pub value: C64,
    /// Same quantity from Richardson-extrapolated central differences.
    #[serde(with = "cplx")]
    pub finite_difference: C64,
    pub relative_difference: f64,
}

/// Central difference step used by [`rhs_limit`].
pub const FD_STEP: f64 = 1e-6;

pub fn rhs_limit(z0: C64, a: &AlexanderData) -> Result<RhsLimit> {
    rhs_limit_with(z0, a, 1e-6)
}

/// [`rhs_limit`] with an explicit agreement tolerance between the methods.
pub fn rhs_limit_with(z0: C64, a: &AlexanderData, tol: f64) -> Result<RhsLimit> {
    let r = a.require_root(z0)?;
    if !a.is_simple_root(r) {
        return Err(Error::NonSimpleRoot);
    }
    let den = r + 1.0 / r - 2.0;
    if den.norm() < 1e-12 {
        return Err(Error::SmallDenominator(den.norm()));
    }
    let value = (a.derivative_at(r) * r).powi(2) / den;

    let central = |h: f64| -> Result<C64> {
        let plus = abelian_torsion(z0 + h, a)?;
        let minus = abelian_torsion(z0 - h, a)?;
        Ok((plus - minus) / (2.0 * h))
    };
    let d1 = central(FD_STEP)?;
    let d2 = central(FD_STEP / 2.0)?;
    let derivative = (4.0 * d2 - d1) / 3.0;
    let finite_difference = (0.5 * derivative).powi(2);
    let relative_difference = (finite_difference - value).norm() / value.norm().max(f64::MIN_POSITIVE);
    if !(relative_difference <= tol) {
        return Err(Error::DerivativeMismatch(relative_difference));
    }
    Ok(RhsLimit {
        value,
        finite_difference,
        relative_difference,
    })
}

/// `|Δ'(1/r) + Δ'(r) r²|` relative to the larger of the two terms.
pub fn symmetry_check(a: &AlexanderData, r: C64) -> f64 {
    let lhs = a.derivative_at(1.0 / r);
    let rhs = a.derivative_at(r) * r * r;
    let scale = lhs.norm().max(rhs.norm());
    if scale == 0.0 {
        0.0
    } else {
        (lhs + rhs).norm() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn trefoil() -> Presentation {
        "gens: x1 x2\nrel: x1*x2*x1*X2*X1*X2".parse().unwrap()
    }

    fn figure_eight() -> Presentation {
        "braid: 3; 1 -2 1 -2".parse().unwrap()
    }

    #[test]
    fn trefoil_polynomial_and_roots() {
        let a = alexander_polynomial(&trefoil()).unwrap();
        assert_eq!(a.delta, Laurent::new(-1, vec![1, -1, 1]));
        assert_eq!(a.roots.len(), 2);
        let r = a.roots[0].value;
        assert!((r - C64::from_polar(1.0, PI / 3.0)).norm() < 1e-12);
        assert!((a.roots[0].z0 - C64::new(0.0, PI / 6.0)).norm() < 1e-12);
        assert!(a.roots.iter().all(|r| r.simple));
    }

    #[test]
    fn figure_eight_polynomial_and_roots() {
        let a = alexander_polynomial(&figure_eight()).unwrap();
        assert_eq!(a.delta, Laurent::new(-1, vec![-1, 3, -1]));
        let golden = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((a.roots[0].value - C64::new(golden, 0.0)).norm() < 1e-12);
        assert!((a.roots[1].value - C64::new(1.0 / golden, 0.0)).norm() < 1e-12);
        assert!((a.roots[0].z0.re - 0.5 * golden.ln()).abs() < 1e-12);
    }

    #[test]
    fn unknot_has_no_roots() {
        let a = alexander_polynomial(&Presentation::unknot()).unwrap();
        assert_eq!(a.delta, Laurent::one());
        assert!(a.roots.is_empty());
        let z = C64::new(0.3, 0.2);
        let v = abelian_torsion(z, &a).unwrap();
        assert!((v - 1.0 / (z.exp() - (-z).exp())).norm() < 1e-14);
    }

    #[test]
    fn abelian_torsion_vanishes_at_roots() {
        let a = alexander_polynomial(&trefoil()).unwrap();
        let v = abelian_torsion(C64::new(0.0, PI / 6.0), &a).unwrap();
        assert!(v.norm() < 1e-14);
        assert!(abelian_torsion(C64::new(0.0, 0.0), &a).is_err());
    }

    #[test]
    fn rhs_limit_values() {
        let a = alexander_polynomial(&trefoil()).unwrap();
        let z0 = C64::new(0.0, PI / 6.0);
        let rhs = rhs_limit(z0, &a).unwrap();
        assert!((rhs.value.norm() - 3.0).abs() < 1e-12);
        let mirrored = rhs_limit(-z0, &a).unwrap();
        assert!((mirrored.value - rhs.value).norm() < 1e-12);
        assert!(rhs_limit(C64::new(0.3, 0.0), &a).is_err());

        let b = alexander_polynomial(&figure_eight()).unwrap();
        let rhs = rhs_limit(b.roots[0].z0, &b).unwrap();
        assert!(rhs.value.im.abs() < 1e-12);
        assert!((rhs.value.re - 5.0).abs() < 1e-10);
    }

    #[test]
    fn symmetry_residuals() {
        for p in [trefoil(), figure_eight()] {
            let a = alexander_polynomial(&p).unwrap();
            for r in &a.roots {
                assert!(symmetry_check(&a, r.value) <= 1e-12);
            }
        }
    }

    #[test]
    fn column_choice_changes_det_by_a_unit() {
        let p = figure_eight();
        let base = alexander_polynomial_with(&p, 1, DEFAULT_SIMPLICITY).unwrap().delta;
        for j in 2..=p.generator_count() {
            let other = alexander_polynomial_with(&p, j, DEFAULT_SIMPLICITY).unwrap().delta;
            assert_eq!(other, base);
        }
    }
}

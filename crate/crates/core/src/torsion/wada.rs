use serde::{Deserialize, Serialize};

use super::action::{build_a1, Action};
use crate::alexander::alexander_polynomial;
use crate::config::Tolerances;
use crate::laurent::Laurent;
use crate::reps::{reducible_nonabelian, Representation};
use crate::words::Word;
use crate::{cplx, Error, Result, C64};

/// `det A¹ / det Φ(x_j - 1)` for the adjoint action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WadaInvariant {
    pub deleted_column: usize,
    pub numerator: Laurent<C64>,
    pub denominator: Laurent<C64>,
    /// `(t - 1)(t² - Tr ρ(x_j²) t + 1)`.
    pub closed_form_denominator: Laurent<C64>,
    pub denominator_deviation: f64,
}

impl WadaInvariant {
    pub fn value_at(&self, t: C64) -> C64 {
        self.numerator.evaluate(t) / self.denominator.evaluate(t)
    }
}

fn require_residual(rep: &Representation, tol: f64) -> Result<()> {
    if !(rep.residual() <= tol) {
        return Err(Error::Residual {
            residual: rep.residual(),
            tolerance: tol,
        });
    }
    Ok(())
}

fn closed_form_denominator(rep: &Representation, j: usize) -> Laurent<C64> {
    let tr = rep.trace_of(&Word::generator(j).pow(2));
    let one = C64::new(1.0, 0.0);
    let t_minus_1 = Laurent::new(0, vec![-one, one]);
    &t_minus_1 * &Laurent::new(0, vec![one, -tr, one])
}

pub fn wada_invariant(rep: &Representation, deleted: usize) -> Result<WadaInvariant> {
    wada_invariant_with(rep, deleted, &Tolerances::default())
}

pub fn wada_invariant_with(rep: &Representation, deleted: usize, tol: &Tolerances) -> Result<WadaInvariant> {
    require_residual(rep, tol.general)?;
    // Both determinants are conjugation invariant; a balanced gauge keeps
    // the entries of A¹ small.
    let (gauge, _) = rep.balanced();
    let numerator = build_a1(&gauge, deleted)?.det_with(tol.interpolation_options())?;
    let denominator = Action::adjoint(&gauge)
        .generator_minus_one(deleted)
        .det_with(tol.interpolation_options())?;
    if denominator.is_zero() {
        return Err(Error::DegenerateDeterminant);
    }
    let closed = closed_form_denominator(rep, deleted);
    let denominator_deviation = denominator.relative_deviation(&closed);
    if !(denominator_deviation <= 1e-9) {
        return Err(Error::UnitMismatch(format!(
            "det Φ(x{deleted} - 1) deviates from its closed form by {denominator_deviation:.3e}"
        )));
    }
    Ok(WadaInvariant {
        deleted_column: deleted,
        numerator,
        denominator,
        closed_form_denominator: closed,
        denominator_deviation,
    })
}

/// Non-acyclic torsion magnitude data at an irreducible representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaTorsion {
    /// `G(1) / (2 - Tr ρ(x1²))`, defined up to sign.
    #[serde(with = "cplx")]
    pub value: C64,
    /// `G = det A¹ / (t - 1)²`.
    pub g: Laurent<C64>,
    #[serde(with = "cplx")]
    pub trace_x1_squared: C64,
}

pub fn lambda_torsion_up_to_sign(rep: &Representation) -> Result<LambdaTorsion> {
    lambda_torsion_with(rep, &Tolerances::default())
}

pub fn lambda_torsion_with(rep: &Representation, tol: &Tolerances) -> Result<LambdaTorsion> {
    require_residual(rep, tol.general)?;
    let (gauge, _) = rep.balanced();
    let det = build_a1(&gauge, 1)?.det_with(tol.interpolation_options())?;
    let one = C64::new(1.0, 0.0);
    let square = Laurent::new(0, vec![one, -2.0 * one, one]);
    let g = det.divide_exact(&square, tol.division)?;
    let trace = rep.trace_of(&Word::generator(1).pow(2));
    let den = 2.0 - trace;
    if den.norm() < 1e-12 {
        return Err(Error::SmallDenominator(den.norm()));
    }
    Ok(LambdaTorsion {
        value: g.evaluate(one) / den,
        g,
        trace_x1_squared: trace,
    })
}

/// `Δ(t) Δ(t e^{2z0}) Δ(t e^{-2z0})`.
pub fn triple_product(delta: &Laurent<i64>, z0: C64) -> Laurent<C64> {
    let d = delta.to_complex();
    let c = (2.0 * z0).exp();
    &(&d * &d.scale_variable(c)) * &d.scale_variable(1.0 / c)
}

/// `ε t^m` with `numerator ≈ ε t^m reference`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitFit {
    pub epsilon: i64,
    pub shift: i64,
    /// `max |numerator - ε t^m reference| / max |numerator|`.
    pub deviation: f64,
}

/// Fits `ε` and `m` from the leading coefficients and fails if the resulting
/// deviation exceeds `tol`.
pub fn fit_unit_multiple(numerator: &Laurent<C64>, reference: &Laurent<C64>, tol: f64) -> Result<UnitFit> {
    let (Some(&lead_n), Some(&lead_r)) = (numerator.leading(), reference.leading()) else {
        return Err(Error::UnitMismatch("vanishing polynomial".into()));
    };
    let ratio = lead_n / lead_r;
    let epsilon = if ratio.re >= 0.0 { 1 } else { -1 };
    if (ratio - epsilon as f64).norm() > tol.max(1e-6) {
        return Err(Error::UnitMismatch(format!(
            "leading coefficient ratio {ratio} is not ±1"
        )));
    }
    let shift = numerator.max_degree() - reference.max_degree();
    let fitted = reference.shift(shift).scale(&C64::new(epsilon as f64, 0.0));
    let deviation = fitted.relative_deviation(numerator);
    if !(deviation <= tol) {
        return Err(Error::UnitMismatch(format!(
            "deviation {deviation:.3e} after fitting ε = {epsilon}, m = {shift}"
        )));
    }
    Ok(UnitFit {
        epsilon,
        shift,
        deviation,
    })
}

/// Comparison of `det A¹` at the reducible representation with the triple
/// product of Alexander polynomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    #[serde(with = "cplx")]
    pub z0: C64,
    pub numerator: Laurent<C64>,
    pub triple_product: Laurent<C64>,
    pub epsilon: i64,
    pub shift: i64,
    /// `max |det A¹ - ε t^m Π| / max |det A¹|`.
    pub deviation: f64,
}

pub fn factorization_at_reducible(p: &crate::words::Presentation, z0: C64) -> Result<FactorizationReport> {
    factorization_at_reducible_with(p, z0, 1e-8)
}

/// As [`factorization_at_reducible`] with an explicit deviation tolerance.
pub fn factorization_at_reducible_with(
    p: &crate::words::Presentation,
    z0: C64,
    tol: f64,
) -> Result<FactorizationReport> {
    let data = alexander_polynomial(p)?;
    let rep = reducible_nonabelian(z0, p)?;
    let numerator = build_a1(&rep, 1)?.det()?;
    let triple = triple_product(&data.delta, z0);
    let fit = fit_unit_multiple(&numerator, &triple, tol)?;
    let (epsilon, shift, deviation) = (fit.epsilon, fit.shift, fit.deviation);
    Ok(FactorizationReport {
        z0,
        numerator,
        triple_product: triple,
        epsilon,
        shift,
        deviation,
    })
}

//! Bifurcation points of the character variety and the numerical limit
//! experiment along Riley continuation paths.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::alexander::{
    abelian_torsion, alexander_polynomial_with, rhs_limit_with, AlexanderData, AlexanderRoot, RhsLimit,
};
use crate::config::Tolerances;
use crate::reps::{abelian_rep, reducible_nonabelian, riley_family, riley_polynomial, Representation, RileyPolynomial};
use crate::torsion::lambda_torsion_with;
use crate::words::{Presentation, Word};
use crate::{cplx, Error, Result, C64};

/// A root of `Δ` together with the reducible non-abelian representation there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BifurcationPoint {
    #[serde(with = "cplx")]
    pub root: C64,
    #[serde(with = "cplx")]
    pub z0: C64,
    pub simple: bool,
    pub representation: Representation,
    /// Present for simple roots only.
    pub rhs: Option<RhsLimit>,
    /// Largest trace difference from `φ_{z0}` over sampled words.
    pub character_deviation: f64,
}

/// A root at which the construction failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointFailure {
    pub root: AlexanderRoot,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BifurcationScan {
    pub alexander: AlexanderData,
    pub points: Vec<BifurcationPoint>,
    pub failures: Vec<PointFailure>,
}

impl BifurcationScan {
    /// The point whose `z0` is closest to `z0`.
    pub fn nearest(&self, z0: C64) -> Option<&BifurcationPoint> {
        self.points
            .iter()
            .min_by(|a, b| (a.z0 - z0).norm().total_cmp(&(b.z0 - z0).norm()))
    }
}

const CHARACTER_SAMPLES: usize = 20;

fn character_deviation(rep: &Representation, z0: C64) -> Result<f64> {
    let p = rep.presentation();
    let ab = abelian_rep(z0, p)?;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let k = p.generator_count() as i32;
    let mut worst: f64 = 0.0;
    for _ in 0..CHARACTER_SAMPLES {
        let w = Word::new((0..8).map(|_| {
            let g = rng.random_range(1..=k);
            if rng.random_bool(0.5) {
                g
            } else {
                -g
            }
        }));
        let (a, b) = (rep.trace_of(&w), ab.trace_of(&w));
        worst = worst.max((a - b).norm() / b.norm().max(1.0));
    }
    Ok(worst)
}

fn build_point(
    p: &Presentation,
    a: &AlexanderData,
    root: &AlexanderRoot,
    tol: &Tolerances,
) -> Result<BifurcationPoint> {
    let representation = reducible_nonabelian(root.z0, p)?;
    let rhs = if root.simple {
        Some(rhs_limit_with(root.z0, a, tol.derivative)?)
    } else {
        None
    };
    let character_deviation = character_deviation(&representation, root.z0)?;
    if !(character_deviation <= tol.general) {
        return Err(Error::Residual {
            residual: character_deviation,
            tolerance: tol.general,
        });
    }
    Ok(BifurcationPoint {
        root: root.value,
        z0: root.z0,
        simple: root.simple,
        representation,
        rhs,
        character_deviation,
    })
}

/// One entry per root of `Δ`; roots whose construction fails are listed in
/// [`BifurcationScan::failures`].
pub fn bifurcation_points(p: &Presentation) -> Result<BifurcationScan> {
    bifurcation_points_with(p, &Tolerances::default())
}

pub fn bifurcation_points_with(p: &Presentation, tol: &Tolerances) -> Result<BifurcationScan> {
    let alexander = alexander_polynomial_with(p, 1, tol.simplicity)?;
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for root in &alexander.roots {
        match build_point(p, &alexander, root, tol) {
            Ok(pt) => points.push(pt),
            Err(e) => failures.push(PointFailure {
                root: root.clone(),
                error: e.to_string(),
            }),
        }
    }
    Ok(BifurcationScan {
        alexander,
        points,
        failures,
    })
}

/// `|Δ(e^{2z0}) / (e^{z0} - e^{-z0})|`.
pub fn abelian_zero_check(b: &BifurcationPoint, a: &AlexanderData) -> Result<f64> {
    Ok(abelian_torsion(b.z0, a)?.norm())
}

/// Parameters of [`verify_limit`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitOptions {
    pub steps: usize,
    /// Relative offset `s_0 / s0 - 1` of the first sample.
    pub start_offset: f64,
    pub max_newton_iterations: usize,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            steps: 12,
            start_offset: 0.1,
            max_newton_iterations: 50,
        }
    }
}

/// Smallest offset the schedule may reach; the Riley Jacobian degenerates at
/// the bifurcation point itself.
pub const OFFSET_FLOOR: f64 = 1e-6;

/// One sample on the continuation path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitStep {
    pub offset: f64,
    /// `|s - s0|`.
    pub distance: f64,
    #[serde(with = "cplx")]
    pub s: C64,
    #[serde(with = "cplx")]
    pub u: C64,
    pub residual: f64,
    /// `|Tr ρ([x1, x2]) - 2|`.
    pub commutator_margin: f64,
    pub newton_iterations: usize,
    pub torsion: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitExperiment {
    #[serde(with = "cplx")]
    pub z0: C64,
    pub options: LimitOptions,
    pub steps: Vec<LimitStep>,
    pub extrapolated: f64,
    /// Convergence order used by the extrapolation, if one could be estimated.
    pub estimated_order: Option<f64>,
    pub rhs_magnitude: f64,
    pub relative_error: f64,
    /// Successive torsion differences shrink over the final four steps.
    pub monotone: bool,
    /// Every sample stays at least `1e-8` away from the reducible locus.
    pub irreducible: bool,
    pub min_commutator_margin: f64,
}

fn commutator_margin(rep: &Representation) -> f64 {
    let w = Word::new([1, 2, -1, -2]);
    (rep.trace_of(&w) - 2.0).norm()
}

fn scaled_residual(poly: &RileyPolynomial, u: C64) -> f64 {
    let r = u.norm();
    let scale: f64 = poly
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c.norm() * r.powi(i as i32))
        .sum();
    poly.evaluate(u).norm() / scale.max(f64::MIN_POSITIVE)
}

/// Damped Newton on the Riley polynomial; `None` when it stalls.
fn newton(poly: &RileyPolynomial, mut u: C64, tol: f64, max_iter: usize) -> Option<(C64, usize)> {
    let mut res = scaled_residual(poly, u);
    for it in 0..=max_iter {
        if res <= tol {
            return Some((u, it));
        }
        if it == max_iter {
            break;
        }
        let d = poly.derivative(u);
        if d.norm() == 0.0 {
            return None;
        }
        let step = poly.evaluate(u) / d;
        let mut lambda = 1.0;
        loop {
            let next = u - step * lambda;
            let r = scaled_residual(poly, next);
            if r < res || lambda < 1e-3 {
                u = next;
                res = r;
                break;
            }
            lambda *= 0.5;
        }
    }
    None
}

/// Nontrivial roots of the Riley polynomial that give genuine representations.
fn admissible_roots(
    p: &Presentation,
    poly: &RileyPolynomial,
    s: C64,
    opts: &LimitOptions,
    tol: &Tolerances,
) -> Vec<C64> {
    poly.roots()
        .into_iter()
        .map(|u| newton(poly, u, tol.newton, opts.max_newton_iterations).map_or(u, |x| x.0))
        .filter(|u| u.norm() > 1e-10)
        .filter(|&u| riley_family(p, s, u).is_ok_and(|rep| rep.residual() <= tol.general))
        .collect()
}

fn extrapolate(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len();
    let (t1, t2, t3) = (values[n - 3], values[n - 2], values[n - 1]);
    let (d1, d2) = (t2 - t1, t3 - t2);
    if d2.abs() <= 1e-14 * t3.abs() {
        return (t3, None);
    }
    let ratio = d1 / d2;
    if !(ratio > 0.0) || !ratio.is_finite() {
        return (2.0 * t3 - t2, None);
    }
    let order = ratio.log2().clamp(0.25, 4.0);
    (t3 + d2 / (order.exp2() - 1.0), Some(order))
}

/// Follows the Riley curve into the bifurcation point `b` along
/// `s_j = s0 (1 + start_offset 2^{-j})` and compares the extrapolated
/// `|λ-torsion|` with `|rhs|`.
pub fn verify_limit(p: &Presentation, b: &BifurcationPoint, opts: LimitOptions) -> Result<LimitExperiment> {
    verify_limit_with(p, b, opts, &Tolerances::default())
}

pub fn verify_limit_with(
    p: &Presentation,
    b: &BifurcationPoint,
    opts: LimitOptions,
    tol: &Tolerances,
) -> Result<LimitExperiment> {
    let rhs = b.rhs.ok_or(Error::NonSimpleRoot)?;
    if opts.steps < 3 {
        return Err(Error::Continuation(format!(
            "need at least 3 steps, got {}",
            opts.steps
        )));
    }
    let last_offset = opts.start_offset * (-(opts.steps as f64 - 1.0)).exp2();
    if !(opts.start_offset > 0.0) || last_offset < OFFSET_FLOOR * (1.0 - 1e-12) {
        return Err(Error::Continuation(format!(
            "final offset {last_offset:.3e} is below the floor {OFFSET_FLOOR:.0e}"
        )));
    }
    let s0 = b.z0.exp();
    let mut steps: Vec<LimitStep> = Vec::with_capacity(opts.steps);
    let mut path: Vec<C64> = Vec::new();
    for j in 0..opts.steps {
        let offset = opts.start_offset * (-(j as f64)).exp2();
        let s = s0 * (1.0 + offset);
        let poly = riley_polynomial(p, s)?;
        let predicted = match path.len() {
            0 => None,
            1 => Some(path[0]),
            n => Some(path[n - 1] * (path[n - 1] / path[n - 2])),
        };
        let tracked = predicted.and_then(|seed| {
            newton(&poly, seed, tol.newton, opts.max_newton_iterations)
                .filter(|(u, _)| u.norm() > 1e-10)
                .filter(|&(u, _)| riley_family(p, s, u).is_ok_and(|r| r.residual() <= tol.general))
        });
        let (u, iterations) = match tracked {
            Some(found) => found,
            None => {
                let target = predicted.unwrap_or(C64::new(0.0, 0.0));
                let u = admissible_roots(p, &poly, s, &opts, tol)
                    .into_iter()
                    .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
                    .ok_or_else(|| {
                        Error::Continuation(format!("no nontrivial Riley root at step {j} (offset {offset:.3e})"))
                    })?;
                (u, 0)
            }
        };
        path.push(u);
        let rep = riley_family(p, s, u)?;
        let (torsion, error) = match lambda_torsion_with(&rep, tol) {
            Ok(t) => (Some(t.value.norm()), None),
            Err(e) => (None, Some(e.to_string())),
        };
        steps.push(LimitStep {
            offset,
            distance: (s - s0).norm(),
            s,
            u,
            residual: rep.residual(),
            commutator_margin: commutator_margin(&rep),
            newton_iterations: iterations,
            torsion,
            error,
        });
    }

    let values: Vec<f64> = steps.iter().filter_map(|s| s.torsion).collect();
    if values.len() < 3 {
        return Err(Error::Continuation(format!(
            "only {} of {} samples produced a torsion value",
            values.len(),
            steps.len()
        )));
    }
    let (extrapolated, estimated_order) = extrapolate(&values);
    let rhs_magnitude = rhs.value.norm();
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let floor = 1e-12 * values[values.len() - 1].abs();
    let monotone = diffs.len() < 4
        || diffs[diffs.len() - 4..]
            .windows(2)
            .all(|w| w[1] <= w[0] || w[1] <= floor);
    let min_commutator_margin = steps.iter().map(|s| s.commutator_margin).fold(f64::INFINITY, f64::min);
    Ok(LimitExperiment {
        z0: b.z0,
        options: opts,
        steps,
        extrapolated,
        estimated_order,
        rhs_magnitude,
        relative_error: (extrapolated - rhs_magnitude).abs() / rhs_magnitude,
        monotone,
        irreducible: min_commutator_margin >= 1e-8,
        min_commutator_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn trefoil() -> Presentation {
        "gens: x1 x2\nrel: x1*x2*x1*X2*X1*X2".parse().unwrap()
    }

    fn figure_eight() -> Presentation {
        "gens: x1 x2\nrel: x1*X2*X1*x2*x1*X2*x1*x2*X1*X2".parse().unwrap()
    }

    #[test]
    fn trefoil_points() {
        let scan = bifurcation_points(&trefoil()).unwrap();
        assert_eq!(scan.points.len(), 2);
        assert!(scan.failures.is_empty());
        assert!((scan.points[0].z0 - C64::new(0.0, PI / 6.0)).norm() < 1e-12);
        assert!((scan.points[1].z0 - C64::new(0.0, -PI / 6.0)).norm() < 1e-12);
        for b in &scan.points {
            assert!(b.simple);
            assert!(abelian_zero_check(b, &scan.alexander).unwrap() < 1e-12);
        }
        assert!(bifurcation_points(&Presentation::unknot()).unwrap().points.is_empty());
    }

    #[test]
    fn perturbed_point_is_not_a_zero() {
        let scan = bifurcation_points(&trefoil()).unwrap();
        let mut b = scan.points[0].clone();
        b.z0 += 0.1;
        assert!(abelian_zero_check(&b, &scan.alexander).unwrap() > 1e-3);
    }

    #[test]
    fn extrapolation_orders() {
        let linear: Vec<f64> = (0..3).map(|j| 5.0 + 0.1 * 0.5f64.powi(j)).collect();
        let (l, order) = extrapolate(&linear);
        assert!((l - 5.0).abs() < 1e-12);
        assert!((order.unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(extrapolate(&[3.0, 3.0, 3.0]), (3.0, None));
    }

    #[test]
    fn limits_match_rhs() {
        for p in [trefoil(), figure_eight()] {
            let scan = bifurcation_points(&p).unwrap();
            for b in &scan.points {
                let exp = verify_limit(&p, b, LimitOptions::default()).unwrap();
                assert!(exp.relative_error <= 1e-3, "{exp:#?}");
                assert!(exp.steps.iter().all(|s| s.residual <= 1e-8));
            }
        }
    }

    #[test]
    fn rejects_bad_schedules() {
        let p = trefoil();
        let scan = bifurcation_points(&p).unwrap();
        let b = &scan.points[0];
        let short = LimitOptions {
            steps: 2,
            ..LimitOptions::default()
        };
        assert!(verify_limit(&p, b, short).is_err());
        let tiny = LimitOptions {
            start_offset: 1e-5,
            ..LimitOptions::default()
        };
        assert!(verify_limit(&p, b, tiny).is_err());
        let mut nonsimple = b.clone();
        nonsimple.rhs = None;
        assert!(matches!(
            verify_limit(&p, &nonsimple, LimitOptions::default()),
            Err(Error::NonSimpleRoot)
        ));
    }
}

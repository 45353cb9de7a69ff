use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use super::sl2::SL2Value;
use crate::alexander::alexander_polynomial;
use crate::linalg::nullspace;
use crate::words::{Presentation, Word};
use crate::{Error, Result, C64};

/// Largest accepted relator residual for a genuine representation.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Generator images of a presentation in `SL2(C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    presentation: Presentation,
    images: Vec<SL2Value>,
    residual: f64,
}

/// On-disk `.rep.json` layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub images: Vec<SL2Value>,
    pub residual: f64,
}

impl Representation {
    /// Records the images and their relator residual without enforcing it.
    pub fn new(p: &Presentation, images: Vec<SL2Value>) -> Result<Self> {
        if images.len() != p.generator_count() {
            return Err(Error::Presentation(format!(
                "{} images for {} generators",
                images.len(),
                p.generator_count()
            )));
        }
        let mut rep = Representation {
            presentation: p.clone(),
            images,
            residual: 0.0,
        };
        rep.residual = rep.relator_residual();
        Ok(rep)
    }

    /// Fails unless the relator residual is at most `tol`.
    pub fn validated(self, tol: f64) -> Result<Self> {
        if !(self.residual <= tol) {
            return Err(Error::Residual {
                residual: self.residual,
                tolerance: tol,
            });
        }
        Ok(self)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn images(&self) -> &[SL2Value] {
        &self.images
    }

    /// Max over relators of the largest entry of `ρ(r) - I`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// `ρ(w)`, multiplying images left to right.
    pub fn evaluate(&self, w: &Word) -> Matrix2<C64> {
        w.letters().iter().fold(Matrix2::identity(), |acc, &l| {
            let g = &self.images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                acc * g.matrix()
            } else {
                acc * g.inverse().matrix()
            }
        })
    }

    pub fn image_of(&self, w: &Word) -> SL2Value {
        SL2Value::from_matrix_unchecked(self.evaluate(w))
    }

    pub fn trace_of(&self, w: &Word) -> C64 {
        self.evaluate(w).trace()
    }

    fn relator_residual(&self) -> f64 {
        self.presentation
            .relators()
            .iter()
            .map(|r| {
                (self.evaluate(r) - Matrix2::identity())
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// `g ρ g⁻¹`.
    pub fn conjugate(&self, g: &SL2Value) -> Self {
        let g_inv = g.inverse();
        let images = self.images.iter().map(|x| (g * x) * g_inv).collect();
        Representation::new(&self.presentation, images).expect("same generator count")
    }

    /// A conjugate `h ρ h⁻¹` with `h` positive Hermitian, chosen by descent
    /// on `Σ_i ‖ρ(x_i)‖²_F`, together with `h`.
    ///
    /// The descent direction is the moment map `Σ_i (X X* - X* X)`; it stops
    /// once that is below `1e-3` of the norm. Reducible representations
    /// have no minimizer, and the relative stopping rule keeps their
    /// off-diagonal part from being driven to zero.
    pub fn balanced(&self) -> (Representation, SL2Value) {
        const RELATIVE_MOMENT: f64 = 1e-3;
        let mut images: Vec<Matrix2<C64>> = self.images.iter().map(|g| *g.matrix()).collect();
        let mut h = Matrix2::<C64>::identity();
        let norm = |xs: &[Matrix2<C64>]| xs.iter().map(|x| x.norm_squared()).sum::<f64>();
        let mut f = norm(&images);
        let mut step = 0.25;
        for _ in 0..200 {
            let mu: Matrix2<C64> = images.iter().map(|x| x * x.adjoint() - x.adjoint() * x).sum();
            let m = mu.norm();
            if m <= RELATIVE_MOMENT * f || step < 1e-6 {
                break;
            }
            // exp(-c μ) for traceless Hermitian μ with eigenvalues ±r.
            let r = (mu[(0, 0)].re.powi(2) + mu[(0, 1)].norm_sqr()).sqrt();
            let c = step / f;
            let p = Matrix2::identity() * C64::from((c * r).cosh()) - mu * C64::from((c * r).sinh() / r);
            let p_inv = Matrix2::identity() * C64::from((c * r).cosh()) + mu * C64::from((c * r).sinh() / r);
            let trial: Vec<Matrix2<C64>> = images.iter().map(|x| p * x * p_inv).collect();
            let ft = norm(&trial);
            if ft < f {
                images = trial;
                h = p * h;
                f = ft;
            } else {
                step *= 0.5;
            }
        }
        let h = SL2Value::from_matrix_unchecked(h);
        (self.conjugate(&h), h)
    }

    pub fn to_file(&self) -> RepFile {
        RepFile {
            images: self.images.clone(),
            residual: self.residual,
        }
    }

    /// Rebuilds from a `.rep.json` payload, recomputing the residual.
    pub fn from_file(p: &Presentation, file: &RepFile) -> Result<Self> {
        Representation::new(p, file.images.clone())
    }
}

impl Serialize for Representation {
    /// Same layout as [`RepFile`].
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

pub fn trace_of(rep: &Representation, w: &Word) -> C64 {
    rep.trace_of(w)
}

/// `φ_z`: every generator maps to `diag(e^z, e^{-z})`.
pub fn abelian_rep(z: C64, p: &Presentation) -> Result<Representation> {
    p.require_meridional()?;
    let g = SL2Value::diagonal(z.exp());
    Representation::new(p, vec![g; p.generator_count()])
}

/// Upper-triangular non-abelian representation `x_i ↦ [[e^{z0}, α_i], [0, e^{-z0}]]`.
///
/// The upper-right entry of each `ρ(r_j)` is linear in `α`. Its kernel always
/// contains the all-ones vector (conjugation by a unipotent matrix); the
/// returned `α` is a kernel vector with that direction projected out, scaled
/// so that its first nonzero coordinate is 1.
pub fn reducible_nonabelian(z0: C64, p: &Presentation) -> Result<Representation> {
    p.require_meridional()?;
    let data = alexander_polynomial(p)?;
    data.require_root(z0)?;

    let k = p.generator_count();
    let c = z0.exp();
    let zero = C64::new(0.0, 0.0);
    let rep_for = |alpha: &[C64]| -> Representation {
        let images = alpha.iter().map(|&a| SL2Value::upper(c, a)).collect();
        Representation::new(p, images).expect("k images")
    };
    let base = rep_for(&vec![zero; k]);
    let mut system = DMatrix::<C64>::zeros(p.relators().len(), k);
    for i in 0..k {
        let mut alpha = vec![zero; k];
        alpha[i] = C64::new(1.0, 0.0);
        let probe = rep_for(&alpha);
        for (j, r) in p.relators().iter().enumerate() {
            system[(j, i)] = probe.evaluate(r)[(0, 1)] - base.evaluate(r)[(0, 1)];
        }
    }

    let kernel = nullspace(&system, 1e-8);
    let dim = kernel.len();
    let ones = 1.0 / (k as f64).sqrt();
    let best = kernel
        .into_iter()
        .map(|v| {
            let overlap: C64 = v.iter().sum::<C64>() * ones;
            v.map(|x| x - overlap * ones)
        })
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .ok_or(Error::OnlyCoboundary(0))?;
    if best.norm() < 1e-6 {
        return Err(Error::OnlyCoboundary(dim));
    }
    let scale = best.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let pivot = best
        .iter()
        .copied()
        .find(|x| x.norm() > 1e-8 * scale)
        .expect("nonzero vector");
    let alpha: Vec<C64> = best.iter().map(|x| x / pivot).collect();
    rep_for(&alpha).validated(RESIDUAL_TOLERANCE)
}

/// `α` with `e^{2α} - trace·e^α + 1 = 0`, taking `|e^α| ≥ 1` and, when both
/// eigenvalues lie on the unit circle, `Im α ≥ 0`.
pub fn eigenvalue_parameter(trace: C64) -> C64 {
    let disc = (trace * trace - 4.0).sqrt();
    let l1 = (trace + disc) / 2.0;
    let l2 = (trace - disc) / 2.0;
    let (a1, a2) = (l1.ln(), l2.ln());
    if (a1.re - a2.re).abs() <= 1e-12 {
        if a1.im >= a2.im {
            a1
        } else {
            a2
        }
    } else if a1.re > a2.re {
        a1
    } else {
        a2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::random_sl2;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn trefoil() -> Presentation {
        "gens: x1 x2\nrel: x1*x2*x1*X2*X1*X2".parse().unwrap()
    }

    fn figure_eight() -> Presentation {
        "braid: 3; 1 -2 1 -2".parse().unwrap()
    }

    fn random_word<R: Rng>(rng: &mut R, k: usize, len: usize) -> Word {
        Word::new((0..len).map(|_| {
            let g = rng.random_range(1..=k as i32);
            if rng.random_bool(0.5) {
                g
            } else {
                -g
            }
        }))
    }

    #[test]
    fn abelian_reps() {
        let p = trefoil();
        let rep = abelian_rep(C64::new(0.0, 0.0), &p).unwrap();
        assert!(rep.images().iter().all(|g| *g == SL2Value::identity()));
        let z = C64::new(0.0, PI / 6.0);
        let rep = abelian_rep(z, &p).unwrap();
        assert!(rep.residual() < 1e-14);
        let x1: Word = "x1".parse().unwrap();
        assert!((rep.trace_of(&x1) - 2.0 * (PI / 6.0).cos()).norm() < 1e-14);
        let x1x2: Word = "x1*x2".parse().unwrap();
        assert!((rep.trace_of(&x1x2) - ((2.0 * z).exp() + (-2.0 * z).exp())).norm() < 1e-14);
        let torus: Presentation = "gens: x1 x2\nrel: x1^3*x2^-2".parse().unwrap();
        assert!(matches!(abelian_rep(z, &torus), Err(Error::NotMeridional(_))));
    }

    #[test]
    fn reducible_trefoil() {
        let p = trefoil();
        let rep = reducible_nonabelian(C64::new(0.0, PI / 6.0), &p).unwrap();
        assert!(rep.residual() <= 1e-10);
        let a: Vec<C64> = rep.images().iter().map(|g| g.b()).collect();
        assert!((a[0] - 1.0).norm() < 1e-12);
        assert!((a[1] + 1.0).norm() < 1e-12);
        let off = reducible_nonabelian(C64::new(0.0, PI / 6.0) + 0.3, &p);
        assert!(matches!(off, Err(Error::NotARoot(_))));
    }

    #[test]
    fn reducible_figure_eight_shares_abelian_character() {
        let p = figure_eight();
        let z0 = C64::new(0.5 * ((3.0 + 5f64.sqrt()) / 2.0).ln(), 0.0);
        let rep = reducible_nonabelian(z0, &p).unwrap();
        assert!(rep.residual() <= 1e-10);
        let ab = abelian_rep(z0, &p).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let w = random_word(&mut rng, p.generator_count(), 8);
            let (t1, t2) = (rep.trace_of(&w), ab.trace_of(&w));
            assert!((t1 - t2).norm() <= 1e-8 * t2.norm().max(1.0));
        }
    }

    #[test]
    fn conjugation_keeps_residual_small() {
        let p = trefoil();
        let rep = reducible_nonabelian(C64::new(0.0, PI / 6.0), &p).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        let g = random_sl2(&mut rng);
        let conj = rep.conjugate(&g);
        assert!(conj.residual() < 1e-10);
        let w: Word = "x1*x2*X1".parse().unwrap();
        assert!((conj.trace_of(&w) - rep.trace_of(&w)).norm() < 1e-10);
    }

    #[test]
    fn eigenvalue_branches() {
        assert_eq!(eigenvalue_parameter(C64::new(2.0, 0.0)), C64::new(0.0, 0.0));
        let a = eigenvalue_parameter(C64::new(-2.0, 0.0));
        assert!((a - C64::new(0.0, PI)).norm() < 1e-7);
        let z = C64::new(-0.4, 0.9);
        let a = eigenvalue_parameter(z.exp() + (-z).exp());
        assert!((a - (-z)).norm() < 1e-12);
        let a = eigenvalue_parameter(C64::new(1.0, 0.0));
        assert!((a - C64::new(0.0, PI / 3.0)).norm() < 1e-12);
    }

    #[test]
    fn rep_file_round_trip() {
        let p = trefoil();
        let rep = reducible_nonabelian(C64::new(0.0, PI / 6.0), &p).unwrap();
        let json = serde_json::to_string(&rep.to_file()).unwrap();
        let file: RepFile = serde_json::from_str(&json).unwrap();
        let back = Representation::from_file(&p, &file).unwrap();
        assert_eq!(back.images(), rep.images());
    }
}

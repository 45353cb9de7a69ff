use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::laurent::{Laurent, LaurentMatrix};
use crate::reps::{adjoint, Representation, SL2Value};
use crate::words::{fox_derivative, GroupRingElement, Presentation, Word};
use crate::{Error, Result, C64};

/// A representation `Φ(w) = t^{α(w)} M(w)` of the group ring into matrices
/// over `C[t, t⁻¹]`, where `M` is a homomorphism into `GL_d(C)`.
#[derive(Clone, Debug)]
pub struct Action {
    presentation: Presentation,
    generators: Vec<DMatrix<C64>>,
    inverses: Vec<DMatrix<C64>>,
    /// For `Ad ∘ ρ`, the `SL2` images: words are multiplied out in `SL2` and
    /// `Ad` applied once, which keeps non-normal products accurate.
    lift: Option<Vec<SL2Value>>,
}

impl Action {
    /// Explicit generator matrices; each must be invertible.
    pub fn from_matrices(p: &Presentation, generators: Vec<DMatrix<C64>>) -> Result<Self> {
        if generators.len() != p.generator_count() {
            return Err(Error::Presentation(format!(
                "{} matrices for {} generators",
                generators.len(),
                p.generator_count()
            )));
        }
        let inverses = generators
            .iter()
            .map(|g| {
                g.clone()
                    .try_inverse()
                    .ok_or_else(|| Error::Unsupported("singular generator matrix".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Action {
            presentation: p.clone(),
            generators,
            inverses,
            lift: None,
        })
    }

    /// `M = Ad ∘ ρ` in the basis `{E, H, F}`.
    pub fn adjoint(rep: &Representation) -> Self {
        let generators = rep
            .images()
            .iter()
            .map(|g| {
                let m = adjoint(g);
                DMatrix::from_fn(3, 3, |i, j| m.matrix()[(i, j)])
            })
            .collect();
        let mut action =
            Action::from_matrices(rep.presentation(), generators).expect("adjoint matrices are invertible");
        action.lift = Some(rep.images().to_vec());
        action
    }

    /// One-dimensional action `x_i ↦ t^{n_i} w_i`.
    pub fn scalar(p: &Presentation, weights: &[C64]) -> Result<Self> {
        Action::from_matrices(p, weights.iter().map(|&w| DMatrix::from_element(1, 1, w)).collect())
    }

    pub fn dim(&self) -> usize {
        self.generators.first().map_or(1, |g| g.nrows())
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// `M(w)`.
    pub fn matrix_of(&self, w: &Word) -> DMatrix<C64> {
        if let Some(images) = &self.lift {
            let g = w.letters().iter().fold(SL2Value::identity(), |acc, &l| {
                let x = &images[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    &acc * x
                } else {
                    acc * x.inverse()
                }
            });
            let m = adjoint(&g);
            return DMatrix::from_fn(3, 3, |i, j| m.matrix()[(i, j)]);
        }
        let d = self.dim();
        w.letters().iter().fold(DMatrix::identity(d, d), |acc, &l| {
            let i = l.unsigned_abs() as usize - 1;
            if l > 0 {
                acc * &self.generators[i]
            } else {
                acc * &self.inverses[i]
            }
        })
    }

    /// `Φ(g)` for a group-ring element, as a `d × d` Laurent matrix.
    pub fn apply(&self, g: &GroupRingElement) -> LaurentMatrix<C64> {
        let d = self.dim();
        let mut by_degree: BTreeMap<i64, DMatrix<C64>> = BTreeMap::new();
        for (w, c) in g.terms() {
            let m = self.matrix_of(w) * C64::new(c as f64, 0.0);
            *by_degree
                .entry(self.presentation.alpha(w))
                .or_insert_with(|| DMatrix::zeros(d, d)) += m;
        }
        LaurentMatrix::from_fn(d, d, |a, b| {
            by_degree.iter().fold(Laurent::zero(), |acc, (&deg, m)| {
                &acc + &Laurent::monomial(m[(a, b)], deg)
            })
        })
    }

    /// `Φ(x_j - 1)` for the 1-based generator `j`.
    pub fn generator_minus_one(&self, j: usize) -> LaurentMatrix<C64> {
        let g = &GroupRingElement::from_word(Word::generator(j)) - &GroupRingElement::one();
        self.apply(&g)
    }
}

/// Block matrix `Φ(∂r_i/∂x_j)`: row block `i` per relator, column block per
/// generator `j ≠ deleted` (1-based).
pub fn twisted_fox_matrix(action: &Action, deleted: usize) -> Result<LaurentMatrix<C64>> {
    let p = action.presentation();
    let k = p.generator_count();
    if deleted == 0 || deleted > k {
        return Err(Error::Presentation(format!(
            "deleted column {deleted} is out of range 1..={k}"
        )));
    }
    let d = action.dim();
    let cols: Vec<usize> = (1..=k).filter(|&j| j != deleted).collect();
    let mut out = LaurentMatrix::zeros(d * (k - 1), d * (k - 1));
    for (i, r) in p.relators().iter().enumerate() {
        for (c, &j) in cols.iter().enumerate() {
            let block = action.apply(&fox_derivative(r, j));
            for a in 0..d {
                for b in 0..d {
                    out.set(i * d + a, c * d + b, block.get(a, b).clone());
                }
            }
        }
    }
    Ok(out)
}

/// `A¹`: the adjoint twisted Fox matrix with generator column `deleted` removed.
pub fn build_a1(rep: &Representation, deleted: usize) -> Result<LaurentMatrix<C64>> {
    rep.presentation().require_meridional()?;
    twisted_fox_matrix(&Action::adjoint(rep), deleted)
}

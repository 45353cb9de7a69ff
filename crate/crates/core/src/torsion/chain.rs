use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::action::Action;
use super::wada::wada_invariant;
use crate::linalg::{max_abs, rank};
use crate::reps::Representation;
use crate::words::fox_derivative;
use crate::{cplx, Error, Result, C64};

/// Rank cutoff used when selecting bases and checking acyclicity.
const RANK_TOLERANCE: f64 = 1e-8;

/// `0 → C_n → ⋯ → C_0 → 0` over `C` with the standard bases as preferred
/// bases. `boundaries[i]` is `d_{i+1}: C_{i+1} → C_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasedChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<DMatrix<C64>>,
}

impl BasedChainComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<DMatrix<C64>>) -> Result<Self> {
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::Unsupported(format!(
                "{} boundary maps for {} chain groups",
                boundaries.len(),
                dims.len()
            )));
        }
        for (i, d) in boundaries.iter().enumerate() {
            if d.nrows() != dims[i] || d.ncols() != dims[i + 1] {
                return Err(Error::NotSquare {
                    rows: d.nrows(),
                    cols: d.ncols(),
                });
            }
        }
        for pair in boundaries.windows(2) {
            let scale = max_abs(&pair[0]).max(1.0) * max_abs(&pair[1]).max(1.0);
            let defect = max_abs(&(&pair[0] * &pair[1])) / scale;
            if !(defect <= 1e-10) {
                return Err(Error::NotAComplex(defect));
            }
        }
        Ok(BasedChainComplex { dims, boundaries })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundaries(&self) -> &[DMatrix<C64>] {
        &self.boundaries
    }

    /// `d_i: C_i → C_{i-1}`; zero for `i = 0` and `i > n`.
    fn boundary(&self, i: usize) -> DMatrix<C64> {
        if i == 0 || i >= self.dims.len() {
            let rows = if i == 0 { 0 } else { self.dims[i - 1] };
            let cols = self.dims.get(i).copied().unwrap_or(0);
            return DMatrix::zeros(rows, cols);
        }
        self.boundaries[i - 1].clone()
    }
}

/// Column indices of `d` whose images are independent, scanned in `order`.
fn select_basis(d: &DMatrix<C64>, order: &[usize]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = 0;
    for &j in order {
        let mut trial = chosen.clone();
        trial.push(j);
        let m = DMatrix::from_fn(d.nrows(), trial.len(), |r, c| d[(r, trial[c])]);
        let rk = rank(&m, RANK_TOLERANCE);
        if rk > current {
            chosen = trial;
            current = rk;
        }
    }
    chosen
}

/// Torsion `Π_i det[d_{i+1}(b^{i+1}) | b^i]^{(-1)^{i+1}}` with bases scanned
/// in index order.
pub fn generic_acyclic_torsion(c: &BasedChainComplex) -> Result<C64> {
    let orders: Vec<Vec<usize>> = c.dims.iter().map(|&n| (0..n).collect()).collect();
    generic_acyclic_torsion_with_order(c, &orders)
}

/// As [`generic_acyclic_torsion`], scanning the standard basis of `C_i` in
/// `orders[i]` when selecting `b^i`.
pub fn generic_acyclic_torsion_with_order(c: &BasedChainComplex, orders: &[Vec<usize>]) -> Result<C64> {
    let n = c.dims.len();
    let b: Vec<Vec<usize>> = orders
        .iter()
        .take(n)
        .enumerate()
        .map(|(i, order)| select_basis(&c.boundary(i), order))
        .collect();
    let mut torsion = C64::new(1.0, 0.0);
    for i in 0..n {
        let dim = c.dims[i];
        let next = b.get(i + 1).map_or(0, Vec::len);
        let rank_defect = dim as i64 - next as i64 - b[i].len() as i64;
        if rank_defect != 0 {
            return Err(Error::NotAcyclic(rank_defect.unsigned_abs() as usize));
        }
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        if next > 0 {
            let d = c.boundary(i + 1);
            for (col, &j) in b[i + 1].iter().enumerate() {
                m.set_column(col, &d.column(j));
            }
        }
        for (off, &j) in b[i].iter().enumerate() {
            m[(j, next + off)] = C64::new(1.0, 0.0);
        }
        let det = if dim == 0 { C64::new(1.0, 0.0) } else { m.determinant() };
        if det.norm() == 0.0 {
            return Err(Error::NotAcyclic(1));
        }
        torsion = if i % 2 == 0 { torsion / det } else { torsion * det };
    }
    Ok(torsion)
}

/// Twisted chain complex of the presentation 2-complex at `t = t0`:
/// `C^{3(k-1)} → C^{3k} → C^3`.
pub fn presentation_complex(rep: &Representation, t0: C64) -> Result<BasedChainComplex> {
    let p = rep.presentation();
    let k = p.generator_count();
    let action = Action::adjoint(rep);
    let mut d2 = DMatrix::<C64>::zeros(3 * k, 3 * (k - 1));
    for (i, r) in p.relators().iter().enumerate() {
        for j in 1..=k {
            let block = action.apply(&fox_derivative(r, j)).evaluate(t0).transpose();
            d2.view_mut((3 * (j - 1), 3 * i), (3, 3)).copy_from(&block);
        }
    }
    let mut d1 = DMatrix::<C64>::zeros(3, 3 * k);
    for j in 1..=k {
        let block = action.generator_minus_one(j).evaluate(t0).transpose();
        d1.view_mut((0, 3 * (j - 1)), (3, 3)).copy_from(&block);
    }
    BasedChainComplex::new(vec![3, 3 * k, 3 * (k - 1)], vec![d1, d2])
}

/// Generic torsion of [`presentation_complex`] against the Wada value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossOracleReport {
    pub epsilon: i64,
    pub shift: i64,
    #[serde(with = "cplx::vec")]
    pub points: Vec<C64>,
    pub relative_errors: Vec<f64>,
    pub max_relative_error: f64,
}

/// Fits `ε t0^m` at the first point (`|m| ≤ 12`), then reports the relative
/// error of `torsion = ε t^m · wada` at every point.
pub fn cross_oracle(rep: &Representation, points: &[C64]) -> Result<CrossOracleReport> {
    let wada = wada_invariant(rep, 1)?;
    let mut pairs = Vec::with_capacity(points.len());
    for &t in points {
        let tor = generic_acyclic_torsion(&presentation_complex(rep, t)?)?;
        pairs.push((t, tor, wada.value_at(t)));
    }
    let Some(&(t_first, tor_first, w_first)) = pairs.first() else {
        return Err(Error::Unsupported("no sample points".into()));
    };
    let ratio = tor_first / w_first;
    let (epsilon, shift) = (-12i64..=12)
        .flat_map(|m| [(1i64, m), (-1i64, m)])
        .min_by(|a, b| {
            let err = |(e, m): (i64, i64)| (ratio - t_first.powi(m as i32) * e as f64).norm();
            err(*a).total_cmp(&err(*b))
        })
        .expect("nonempty range");
    let relative_errors: Vec<f64> = pairs
        .iter()
        .map(|&(t, tor, w)| {
            let expected = w * t.powi(shift as i32) * epsilon as f64;
            (tor - expected).norm() / expected.norm()
        })
        .collect();
    let max_relative_error = relative_errors.iter().copied().fold(0.0, f64::max);
    Ok(CrossOracleReport {
        epsilon,
        shift,
        points: points.to_vec(),
        relative_errors,
        max_relative_error,
    })
}

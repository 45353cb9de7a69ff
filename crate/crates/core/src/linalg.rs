//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::C64;

/// Largest entry magnitude (0 for an empty matrix).
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values of `m`, padded with zero rows or columns to a square matrix
/// so the result always has `max(rows, cols)` entries.
fn padded(m: &DMatrix<C64>) -> DMatrix<C64> {
    let n = m.nrows().max(m.ncols());
    let mut p = DMatrix::zeros(n, n);
    p.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
    p
}

/// Numerical rank: singular values above `tol · max(1, σ_max)`.
pub fn rank(m: &DMatrix<C64>, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let cutoff = tol * sv.max().max(1.0);
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal basis of the right nullspace of `m`, with the same cutoff as
/// [`rank`].
pub fn nullspace(m: &DMatrix<C64>, tol: f64) -> Vec<DVector<C64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..cols)
            .map(|i| {
                DVector::from_fn(
                    cols,
                    |j, _| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) },
                )
            })
            .collect();
    }
    let p = padded(m);
    let svd = p.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let cutoff = tol * svd.singular_values.max().max(1.0);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(i, _)| v_t.row(i).adjoint().into_owned())
        .collect()
}

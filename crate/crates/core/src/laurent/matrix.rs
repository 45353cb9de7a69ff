use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::poly::{Coefficient, Laurent, DEFAULT_TRIM};
use crate::{Error, Result, C64};

/// Dense row-major matrix with Laurent polynomial entries.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix<C> {
    rows: usize,
    cols: usize,
    entries: Vec<Laurent<C>>,
}

/// Settings for the evaluation and interpolation determinant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpolationOptions {
    /// Relative residual allowed at the off-grid verification point.
    pub tolerance: f64,
    /// Relative trim applied to the interpolated coefficients.
    pub trim: f64,
}

impl Default for InterpolationOptions {
    fn default() -> Self {
        InterpolationOptions {
            tolerance: 1e-8,
            trim: DEFAULT_TRIM,
        }
    }
}

impl<C: Coefficient> LaurentMatrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            entries: vec![Laurent::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Laurent::one() } else { Laurent::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Laurent<C>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        LaurentMatrix { rows, cols, entries }
    }

    /// Row-major rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Laurent<C>>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        LaurentMatrix {
            rows: n,
            cols: m,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Laurent<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Laurent<C>) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(Laurent::zero(), |acc, k| &acc + &(self.get(i, k) * rhs.get(k, j)))
        })
    }

    pub fn to_complex(&self) -> LaurentMatrix<C64> {
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(Laurent::to_complex).collect(),
        }
    }

    pub fn evaluate(&self, t: C64) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).evaluate(t))
    }

    /// Submatrix without column `col`.
    pub fn delete_column(&self, col: usize) -> Self {
        Self::from_fn(self.rows, self.cols - 1, |i, j| {
            self.get(i, if j < col { j } else { j + 1 }).clone()
        })
    }

    fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Per row: lowest exponent and exponent span, `None` for zero rows.
    fn row_ranges(&self) -> Vec<Option<(i64, usize)>> {
        (0..self.rows)
            .map(|i| {
                let row = (0..self.cols).map(|j| self.get(i, j)).filter(|p| !p.is_zero());
                let lo = row.clone().map(|p| p.min_degree()).min()?;
                let hi = row.map(|p| p.max_degree()).max()?;
                Some((lo, (hi - lo) as usize))
            })
            .collect()
    }
}

impl LaurentMatrix<i64> {
    /// Exact determinant by fraction-free elimination over `Z[t]`.
    pub fn det(&self) -> Result<Laurent<i64>> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Laurent::one());
        }
        let ranges = self.row_ranges();
        let mut offset = 0i64;
        let mut m: Vec<Vec<Vec<i64>>> = Vec::with_capacity(n);
        for (i, range) in ranges.iter().enumerate() {
            let Some((lo, span)) = *range else {
                return Ok(Laurent::zero());
            };
            offset += lo;
            m.push(
                (0..n)
                    .map(|j| {
                        let mut v = self.get(i, j).coefficients_between(lo, lo + span as i64);
                        trim(&mut v);
                        v
                    })
                    .collect(),
            );
        }
        let mut sign = 1i64;
        let mut prev = vec![1i64];
        for k in 0..n - 1 {
            if m[k][k].is_empty() {
                match (k + 1..n).find(|&r| !m[r][k].is_empty()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(Laurent::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let a = poly_mul(&m[i][j], &m[k][k])?;
                    let b = poly_mul(&m[i][k], &m[k][j])?;
                    m[i][j] = poly_div(&poly_sub(&a, &b)?, &prev)?;
                }
                m[i][k].clear();
            }
            prev = m[k][k].clone();
        }
        let d = Laurent::new(offset, m[n - 1][n - 1].clone());
        Ok(if sign < 0 { -d } else { d })
    }
}

impl LaurentMatrix<C64> {
    /// Determinant with [`InterpolationOptions::default`].
    pub fn det(&self) -> Result<Laurent<C64>> {
        self.det_with(InterpolationOptions::default())
    }

    /// Determinant by evaluation at roots of unity and an inverse DFT.
    ///
    /// Each row is first multiplied by the power of `t` that makes its lowest
    /// exponent zero, so the shifted determinant is a polynomial of degree at
    /// most the sum of the row spans. The interpolant is checked against a
    /// direct evaluation at an extra point off the sampling grid.
    pub fn det_with(&self, opts: InterpolationOptions) -> Result<Laurent<C64>> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Laurent::one());
        }
        let ranges = self.row_ranges();
        if ranges.iter().any(Option::is_none) {
            return Ok(Laurent::zero());
        }
        let ranges: Vec<(i64, usize)> = ranges.into_iter().flatten().collect();
        let offset: i64 = ranges.iter().map(|r| r.0).sum();
        let degree: usize = ranges.iter().map(|r| r.1).sum();
        let nodes = degree + 1;

        let shifted_det = |t: C64| -> C64 {
            let m = DMatrix::from_fn(n, n, |i, j| self.get(i, j).shift(-ranges[i].0).evaluate(t));
            m.determinant()
        };
        let values: Vec<C64> = (0..nodes)
            .map(|k| shifted_det(C64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64)))
            .collect();
        let coeffs: Vec<C64> = (0..nodes)
            .map(|j| {
                values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * C64::from_polar(1.0, -2.0 * PI * ((j * k) % nodes) as f64 / nodes as f64))
                    .sum::<C64>()
                    / nodes as f64
            })
            .collect();

        let probe = C64::from_polar(1.0, 2.0 * PI * 0.3819660112501051 / nodes as f64);
        let direct = shifted_det(probe);
        let interpolated = coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * probe + c);
        let big = values.iter().map(|v| v.norm()).fold(direct.norm(), f64::max);
        let small = values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        let residual = if big == 0.0 {
            0.0
        } else {
            (direct - interpolated).norm() / big
        };
        if !(residual <= opts.tolerance) {
            return Err(Error::Interpolation {
                residual,
                tolerance: opts.tolerance,
                degree,
                spread: if small == 0.0 { f64::INFINITY } else { big / small },
            });
        }
        Ok(Laurent::with_trim(offset, coeffs, opts.trim))
    }
}

fn trim(v: &mut Vec<i64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let p = x.checked_mul(*y).ok_or(Error::Overflow)?;
            out[i + j] = out[i + j].checked_add(p).ok_or(Error::Overflow)?;
        }
    }
    Ok(out)
}

fn poly_sub(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    let mut out = vec![0i64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = x.checked_sub(y).ok_or(Error::Overflow)?;
    }
    trim(&mut out);
    Ok(out)
}

/// Exact quotient; Bareiss guarantees divisibility, so a remainder is a bug.
fn poly_div(a: &[i64], d: &[i64]) -> Result<Vec<i64>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let m = d.len();
    if a.len() < m {
        return Err(Error::NotDivisible(f64::INFINITY));
    }
    let lead = d[m - 1];
    let mut rem = a.to_vec();
    let mut q = vec![0i64; a.len() - m + 1];
    for i in (0..q.len()).rev() {
        let top = rem[i + m - 1];
        if top % lead != 0 {
            return Err(Error::NotDivisible(f64::INFINITY));
        }
        let c = top / lead;
        for (j, y) in d.iter().enumerate() {
            let p = c.checked_mul(*y).ok_or(Error::Overflow)?;
            rem[i + j] = rem[i + j].checked_sub(p).ok_or(Error::Overflow)?;
        }
        q[i] = c;
    }
    if rem.iter().any(|&x| x != 0) {
        return Err(Error::NotDivisible(f64::INFINITY));
    }
    trim(&mut q);
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(min: i64, c: &[i64]) -> Laurent<i64> {
        Laurent::new(min, c.to_vec())
    }

    #[test]
    fn one_by_one() {
        let m = LaurentMatrix::from_rows(vec![vec![int(0, &[-1, 1])]]);
        assert_eq!(m.det().unwrap(), int(0, &[-1, 1]));
        let f = m.to_complex().det().unwrap();
        assert!(f.relative_deviation(&int(0, &[-1, 1]).to_complex()) < 1e-12);
    }

    #[test]
    fn diagonal_monomials_cancel() {
        let m = LaurentMatrix::from_rows(vec![
            vec![int(1, &[1]), Laurent::zero()],
            vec![Laurent::zero(), int(-1, &[1])],
        ]);
        assert_eq!(m.det().unwrap(), Laurent::one());
        let f = m.to_complex().det().unwrap();
        assert!(f.relative_deviation(&Laurent::one()) < 1e-12);
    }

    #[test]
    fn two_by_two_example() {
        // [[1-t, 1], [-t, 1-t]] has determinant t^2 - t + 1
        let m = LaurentMatrix::from_rows(vec![
            vec![int(0, &[1, -1]), int(0, &[1])],
            vec![int(1, &[-1]), int(0, &[1, -1])],
        ]);
        let expected = int(0, &[1, -1, 1]);
        assert_eq!(m.det().unwrap(), expected);
        assert!(m.to_complex().det().unwrap().relative_deviation(&expected.to_complex()) < 1e-12);
    }

    #[test]
    fn pivoting_and_zero_rows() {
        let m = LaurentMatrix::from_rows(vec![
            vec![Laurent::zero(), int(0, &[1])],
            vec![int(2, &[1]), int(0, &[3])],
        ]);
        assert_eq!(m.det().unwrap(), int(2, &[-1]));
        let z = LaurentMatrix::from_rows(vec![
            vec![Laurent::zero(), Laurent::zero()],
            vec![int(0, &[1]), int(0, &[3])],
        ]);
        assert!(z.det().unwrap().is_zero());
        assert!(z.to_complex().det().unwrap().is_zero());
        assert!(matches!(
            LaurentMatrix::<i64>::zeros(2, 3).det(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn delete_column_and_transpose() {
        let m = LaurentMatrix::from_fn(2, 3, |i, j| int(0, &[(3 * i + j) as i64 + 1]));
        let d = m.delete_column(1);
        assert_eq!(d.get(1, 1), &int(0, &[6]));
        assert_eq!(m.transpose().get(2, 0), &int(0, &[3]));
    }
}

use super::{require_finite, DenseMatrix, Vector};
use crate::error::{Error, Result};

/// Relative pivot threshold below which [`solve`] reports a singular matrix.
pub const DEFAULT_PIVOT_TOL: f64 = 1e-12;

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
///
/// A pivot smaller than `tol * max|a|` yields [`Error::SingularMatrix`];
/// callers that can tolerate singular systems should fall back to
/// [`super::pseudoinverse`].
pub fn solve(a: &DenseMatrix, b: &[f64], tol: f64) -> Result<Vector> {
    let n = a.order();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    require_finite(a)?;
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("right-hand side is not finite".into()));
    }

    let threshold = tol * a.max_abs();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut x = b.to_vec();

    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty pivot range");
        if pivot == 0.0 || pivot < threshold {
            return Err(Error::SingularMatrix { column: col, pivot });
        }
        m.swap(col, pivot_row);
        x.swap(col, pivot_row);

        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot = &upper[col];
        for (off, row) in lower.iter_mut().enumerate() {
            let factor = row[col] / pivot[col];
            if factor == 0.0 {
                continue;
            }
            for (a, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                *a -= factor * p;
            }
            x[col + 1 + off] -= factor * x[col];
        }
    }

    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|c| m[row][c] * x[c]).sum();
        x[row] = (x[row] - tail) / m[row][row];
    }
    Ok(Vector::from(x))
}

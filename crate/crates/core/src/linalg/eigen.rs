use super::{require_finite, DenseMatrix, Vector};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Extreme eigenvalues of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBounds {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub spectral_radius: f64,
}

/// Full spectrum of a symmetric matrix, eigenvalues ascending.
///
/// Column `k` of `vectors` is the unit eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vector,
    pub vectors: DenseMatrix,
}

/// Eigen-decomposition by cyclic Jacobi rotations.
///
/// Each sweep visits every off-diagonal pair `(p, q)` once and applies the
/// plane rotation that zeroes `a_pq`. Sweeps stop once the off-diagonal
/// Frobenius mass falls to roundoff relative to the whole matrix.
///
/// `tol` is the symmetry tolerance, see [`DenseMatrix::is_symmetric`].
pub fn symmetric_eigen(h: &DenseMatrix, tol: f64) -> Result<SymmetricEigen> {
    require_finite(h)?;
    if !h.is_symmetric(tol) {
        return Err(Error::InvalidMatrix("matrix is not symmetric".into()));
    }
    let n = h.order();
    let mut a = h.clone();
    // symmetrize so rotations act on an exactly symmetric matrix
    for i in 0..n {
        for j in i + 1..n {
            let m = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, m);
            a.set(j, i, m);
        }
    }
    let mut v = DenseMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = f64::EPSILON * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag = a.diagonal();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    let mut vectors = DenseMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, dst, v.get(i, src));
        }
    }
    Ok(SymmetricEigen {
        values: Vector::from(values),
        vectors,
    })
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn spectral_bounds(h: &DenseMatrix, tol: f64) -> Result<SpectralBounds> {
    let eig = symmetric_eigen(h, tol)?;
    let lambda_min = eig.values[0];
    let lambda_max = eig.values[eig.values.dim() - 1];
    Ok(SpectralBounds {
        lambda_min,
        lambda_max,
        spectral_radius: lambda_min.abs().max(lambda_max.abs()),
    })
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.order();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).powi(2);
            }
        }
    }
    sum.sqrt()
}

/// `A <- Jᵀ A J`, `V <- V J` with `J` the rotation in the `(p, q)` plane.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.order();
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, c * akp - s * akq);
        a.set(k, q, s * akp + c * akq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, c * apk - s * aqk);
        a.set(q, k, s * apk + c * aqk);
    }
    a.set(p, q, 0.0);
    a.set(q, p, 0.0);
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, c * vkp - s * vkq);
        v.set(k, q, s * vkp + c * vkq);
    }
}

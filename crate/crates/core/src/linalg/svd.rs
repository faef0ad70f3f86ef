use super::{require_finite, DenseMatrix, Vector};
use crate::error::{Error, Result};

/// Default relative cut-off for the numerical rank in [`pseudoinverse`].
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// `A = U · diag(σ) · Vᵀ`. Columns of `u` belonging to a zero singular value
/// are left at zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseMatrix,
    pub singular_values: Vector,
    pub v: DenseMatrix,
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Columns of a working copy of `A` are rotated pairwise until mutually
/// orthogonal; the accumulated rotations form `V`, column norms are the
/// singular values. Singular values are not sorted.
pub fn svd(a: &DenseMatrix) -> Result<Svd> {
    require_finite(a)?;
    let n = a.order();
    // column-major working copy: w[j] is column j of A·V
    let mut w: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| a.get(i, j)).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = w[p].iter().map(|x| x * x).sum();
                let beta: f64 = w[q].iter().map(|x| x * x).sum();
                let gamma: f64 = w[p].iter().zip(&w[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut u = DenseMatrix::zeros(n);
    let mut vm = DenseMatrix::zeros(n);
    let mut sigma = Vec::with_capacity(n);
    for j in 0..n {
        let norm = w[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        sigma.push(norm);
        for i in 0..n {
            if norm > 0.0 {
                u.set(i, j, w[j][i] / norm);
            }
            vm.set(i, j, v[j][i]);
        }
    }
    Ok(Svd {
        u,
        singular_values: Vector::from(sigma),
        v: vm,
    })
}

/// Moore–Penrose pseudoinverse `A⁺ = V Σ⁺ Uᵀ`.
///
/// Singular values `σ <= rank_tol · σ_max · n` count as zero.
pub fn pseudoinverse(a: &DenseMatrix, rank_tol: f64) -> Result<DenseMatrix> {
    if !(rank_tol >= 0.0 && rank_tol.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "rank tolerance must be finite and non-negative, got {rank_tol}"
        )));
    }
    let Svd {
        u,
        singular_values,
        v,
    } = svd(a)?;
    let n = a.order();
    let sigma_max = singular_values.norm_inf();
    let cutoff = rank_tol * sigma_max * n as f64;

    let mut out = DenseMatrix::zeros(n);
    for (k, &s) in singular_values.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        for i in 0..n {
            let vik = v.get(i, k) * inv;
            if vik == 0.0 {
                continue;
            }
            for j in 0..n {
                let cur = out.get(i, j);
                out.set(i, j, cur + vik * u.get(j, k));
            }
        }
    }
    Ok(out)
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let xq = *y;
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

//! Quadratic gradients: a gradient premultiplied by a positive diagonal
//! accelerator built from second-order information.
//!
//! Two accelerators are provided:
//!
//! * [`bound_diagonal`] takes a bound matrix `H̄` (or the Hessian itself) and
//!   uses reciprocal absolute row sums, `B̄_jj = 1 / (ε + Σ_i |h̄_ji|)`.
//! * [`new_quadratic_gradient`] solves for a diagonal `R` that reproduces the
//!   Newton step, `diag(r) · g = H⁻¹ g`, through `r = (H · diag(g))⁺ · g`, and
//!   uses `B̄_R = diag(1 / (ε + |r_i|))`. Unlike the row-sum form this is not a
//!   Loewner bound on the Hessian, so it carries no monotonicity guarantee.
//!
//! [`spectral_learning_rate`] is the scalar special case `1 / (ε + max |λ_i|)`.

use crate::error::{Error, Result};
use crate::linalg::{
    pseudoinverse, solve, spectral_bounds, DenseMatrix, Vector, DEFAULT_PIVOT_TOL,
};

pub const DEFAULT_EPSILON: f64 = 1e-8;

/// Symmetry tolerance used when extracting eigenvalues of a Hessian.
pub const HESSIAN_SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Row-sum accelerator from a bound matrix.
    Original,
    /// Pseudoinverse accelerator from `(H · diag(g))⁺ · g`.
    New,
}

/// Strictly positive diagonal matrix, stored as its diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalAccelerator {
    diag: Vector,
    epsilon: f64,
}

impl DiagonalAccelerator {
    /// Identity accelerator; `G = g`.
    pub fn identity(dim: usize) -> Self {
        Self {
            diag: Vector::filled(dim, 1.0),
            epsilon: 0.0,
        }
    }

    pub fn diag(&self) -> &Vector {
        &self.diag
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.diag.dim()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticGradient {
    pub value: Vector,
    pub accelerator: DiagonalAccelerator,
    pub variant: Variant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewQgIntermediate {
    /// Diagonal of `R`.
    pub r: Vector,
    pub used_pseudoinverse: bool,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(epsilon))
    }
}

fn check_inputs(h: &DenseMatrix, g: &[f64]) -> Result<()> {
    if g.len() != h.order() {
        return Err(Error::DimensionMismatch {
            expected: h.order(),
            actual: g.len(),
        });
    }
    if !h.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite Hessian or gradient".into()));
    }
    Ok(())
}

/// `B̄_jj = 1 / (ε + Σ_i |h̄_ji|)`.
pub fn bound_diagonal(hbar: &DenseMatrix, epsilon: f64) -> Result<DiagonalAccelerator> {
    check_epsilon(epsilon)?;
    let diag: Vec<f64> = (0..hbar.order())
        .map(|j| {
            let row_sum: f64 = hbar.row(j).iter().map(|v| v.abs()).sum();
            1.0 / (epsilon + row_sum)
        })
        .collect();
    Ok(DiagonalAccelerator {
        diag: Vector::from(diag),
        epsilon,
    })
}

/// `G = B̄ · g` for the row-sum accelerator.
pub fn quadratic_gradient(accel: &DiagonalAccelerator, g: &[f64]) -> Result<QuadraticGradient> {
    apply(accel, g, Variant::Original)
}

fn apply(accel: &DiagonalAccelerator, g: &[f64], variant: Variant) -> Result<QuadraticGradient> {
    if g.len() != accel.dim() {
        return Err(Error::DimensionMismatch {
            expected: accel.dim(),
            actual: g.len(),
        });
    }
    let value = accel
        .diag
        .iter()
        .zip(g)
        .map(|(b, gi)| b * gi)
        .collect::<Vec<_>>();
    Ok(QuadraticGradient {
        value: Vector::from(value),
        accelerator: accel.clone(),
        variant,
    })
}

/// `r = (H · diag(g))⁺ · g`.
///
/// When `H` is invertible and no `g_i` vanishes this is computed exactly as
/// `r_i = (H⁻¹ g)_i / g_i`; otherwise through the pseudoinverse.
pub fn new_r_vector(h: &DenseMatrix, g: &[f64], rank_tol: f64) -> Result<NewQgIntermediate> {
    check_inputs(h, g)?;
    if g.iter().all(|&gi| gi != 0.0) {
        match solve(h, g, DEFAULT_PIVOT_TOL) {
            Ok(newton) => {
                let r: Vec<f64> = newton.iter().zip(g).map(|(n, gi)| n / gi).collect();
                if r.iter().all(|v| v.is_finite()) {
                    return Ok(NewQgIntermediate {
                        r: Vector::from(r),
                        used_pseudoinverse: false,
                    });
                }
            }
            Err(Error::SingularMatrix { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let hd = h.scale_columns(g)?;
    let r = pseudoinverse(&hd, rank_tol)?.mul_vec(g)?;
    Ok(NewQgIntermediate {
        r,
        used_pseudoinverse: true,
    })
}

/// `B̄_R = diag(1 / (ε + |r_i|))` and `G = B̄_R · g`.
pub fn new_accelerator(
    h: &DenseMatrix,
    g: &[f64],
    epsilon: f64,
    rank_tol: f64,
) -> Result<(DiagonalAccelerator, NewQgIntermediate)> {
    check_epsilon(epsilon)?;
    let inter = new_r_vector(h, g, rank_tol)?;
    let diag: Vec<f64> = inter.r.iter().map(|r| 1.0 / (epsilon + r.abs())).collect();
    Ok((
        DiagonalAccelerator {
            diag: Vector::from(diag),
            epsilon,
        },
        inter,
    ))
}

pub fn new_quadratic_gradient(
    h: &DenseMatrix,
    g: &[f64],
    epsilon: f64,
    rank_tol: f64,
) -> Result<QuadraticGradient> {
    let (accel, _) = new_accelerator(h, g, epsilon, rank_tol)?;
    apply(&accel, g, Variant::New)
}

/// `1 / (ε + max |λ_i|)` for a symmetric `h`.
pub fn spectral_learning_rate(h: &DenseMatrix, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let bounds = spectral_bounds(h, HESSIAN_SYMMETRY_TOL)?;
    Ok(1.0 / (epsilon + bounds.spectral_radius))
}

//! Benchmark objectives with analytic gradients and Hessians.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnownOptimum {
    pub point: Vector,
    pub value: f64,
}

/// A twice-differentiable scalar field.
///
/// Callers must pass points of length [`Objective::dim`]; the evaluators
/// index without checking.
pub trait Objective: Send + Sync {
    /// Registry identifier, e.g. `"rosenbrock:5"`.
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn sense(&self) -> Sense;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vector;
    fn hessian(&self, x: &[f64]) -> DenseMatrix;
    fn known_optima(&self) -> Vec<KnownOptimum>;
}

impl fmt::Debug for dyn Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("name", &self.name())
            .field("dim", &self.dim())
            .field("sense", &self.sense())
            .finish()
    }
}

/// `Σ 100 (x_{i+1} − x_i²)² + (1 − x_i)²`
#[derive(Debug, Clone, Copy)]
pub struct Rosenbrock {
    n: usize,
}

pub fn rosenbrock(n: usize) -> Result<Rosenbrock> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(Rosenbrock { n })
}

impl Objective for Rosenbrock {
    fn name(&self) -> String {
        format!("rosenbrock:{}", self.n)
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn sense(&self) -> Sense {
        Sense::Minimize
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
            .sum()
    }

    fn gradient(&self, x: &[f64]) -> Vector {
        let n = self.n;
        let mut g = vec![0.0; n];
        for i in 0..n - 1 {
            let inner = x[i + 1] - x[i] * x[i];
            g[i] += -400.0 * x[i] * inner - 2.0 * (1.0 - x[i]);
            g[i + 1] += 200.0 * inner;
        }
        Vector::from(g)
    }

    fn hessian(&self, x: &[f64]) -> DenseMatrix {
        let n = self.n;
        let mut h = DenseMatrix::zeros(n);
        for i in 0..n - 1 {
            let d = h.get(i, i) + 1200.0 * x[i] * x[i] - 400.0 * x[i + 1] + 2.0;
            h.set(i, i, d);
            let d = h.get(i + 1, i + 1) + 200.0;
            h.set(i + 1, i + 1, d);
            h.set(i, i + 1, -400.0 * x[i]);
            h.set(i + 1, i, -400.0 * x[i]);
        }
        h
    }

    fn known_optima(&self) -> Vec<KnownOptimum> {
        vec![KnownOptimum {
            point: Vector::filled(self.n, 1.0),
            value: 0.0,
        }]
    }
}

/// Sum of squared residuals of two variables, each residual given with its
/// gradient and Hessian. Beale, Booth and Himmelblau are all of this shape.
trait Residuals2 {
    /// `(r, ∇r, ∇²r as [xx, xy, yy])` for each residual.
    fn residuals(&self, x: f64, y: f64) -> Vec<(f64, [f64; 2], [f64; 3])>;
}

fn residual_value<R: Residuals2>(r: &R, p: &[f64]) -> f64 {
    r.residuals(p[0], p[1]).iter().map(|(v, _, _)| v * v).sum()
}

fn residual_gradient<R: Residuals2>(r: &R, p: &[f64]) -> Vector {
    let mut g = [0.0; 2];
    for (v, dv, _) in r.residuals(p[0], p[1]) {
        g[0] += 2.0 * v * dv[0];
        g[1] += 2.0 * v * dv[1];
    }
    Vector::from(g.to_vec())
}

fn residual_hessian<R: Residuals2>(r: &R, p: &[f64]) -> DenseMatrix {
    let (mut xx, mut xy, mut yy) = (0.0, 0.0, 0.0);
    for (v, dv, d2) in r.residuals(p[0], p[1]) {
        xx += 2.0 * (dv[0] * dv[0] + v * d2[0]);
        xy += 2.0 * (dv[0] * dv[1] + v * d2[1]);
        yy += 2.0 * (dv[1] * dv[1] + v * d2[2]);
    }
    DenseMatrix::new(2, vec![xx, xy, xy, yy]).expect("2x2")
}

macro_rules! residual_objective {
    ($ty:ident, $id:literal) => {
        impl Objective for $ty {
            fn name(&self) -> String {
                $id.to_string()
            }
            fn dim(&self) -> usize {
                2
            }
            fn sense(&self) -> Sense {
                Sense::Minimize
            }
            fn value(&self, x: &[f64]) -> f64 {
                residual_value(self, x)
            }
            fn gradient(&self, x: &[f64]) -> Vector {
                residual_gradient(self, x)
            }
            fn hessian(&self, x: &[f64]) -> DenseMatrix {
                residual_hessian(self, x)
            }
            fn known_optima(&self) -> Vec<KnownOptimum> {
                Self::OPTIMA
                    .iter()
                    .map(|p| KnownOptimum {
                        point: Vector::from(p.to_vec()),
                        value: 0.0,
                    })
                    .collect()
            }
        }
    };
}

/// `(1.5 − x + xy)² + (2.25 − x + xy²)² + (2.625 − x + xy³)²`
#[derive(Debug, Clone, Copy, Default)]
pub struct Beale;

pub fn beale() -> Beale {
    Beale
}

impl Beale {
    const OPTIMA: [[f64; 2]; 1] = [[3.0, 0.5]];
}

impl Residuals2 for Beale {
    fn residuals(&self, x: f64, y: f64) -> Vec<(f64, [f64; 2], [f64; 3])> {
        [1.5, 2.25, 2.625]
            .iter()
            .zip(1..=3)
            .map(|(&c, k)| {
                let yk = y.powi(k);
                let yk1 = y.powi(k - 1);
                let kf = k as f64;
                let yk2 = if k >= 2 { y.powi(k - 2) } else { 0.0 };
                (
                    c - x + x * yk,
                    [yk - 1.0, kf * x * yk1],
                    [0.0, kf * yk1, kf * (kf - 1.0) * x * yk2],
                )
            })
            .collect()
    }
}

residual_objective!(Beale, "beale");

/// `(x + 2y − 7)² + (2x + y − 5)²`
#[derive(Debug, Clone, Copy, Default)]
pub struct Booth;

pub fn booth() -> Booth {
    Booth
}

impl Booth {
    const OPTIMA: [[f64; 2]; 1] = [[1.0, 3.0]];
}

impl Residuals2 for Booth {
    fn residuals(&self, x: f64, y: f64) -> Vec<(f64, [f64; 2], [f64; 3])> {
        vec![
            (x + 2.0 * y - 7.0, [1.0, 2.0], [0.0; 3]),
            (2.0 * x + y - 5.0, [2.0, 1.0], [0.0; 3]),
        ]
    }
}

residual_objective!(Booth, "booth");

/// `(x² + y − 11)² + (x + y² − 7)²`
#[derive(Debug, Clone, Copy, Default)]
pub struct Himmelblau;

pub fn himmelblau() -> Himmelblau {
    Himmelblau
}

impl Himmelblau {
    // the three irrational minima are the double-rounded roots of the
    // residual system, refined to 40 digits
    #[allow(clippy::excessive_precision)]
    const OPTIMA: [[f64; 2]; 4] = [
        [3.0, 2.0],
        [-2.805118086952745, 3.131312518250573],
        [-3.779310253377747, -3.2831859912861696],
        [3.5844283403304917, -1.8481265269644036],
    ];
}

impl Residuals2 for Himmelblau {
    fn residuals(&self, x: f64, y: f64) -> Vec<(f64, [f64; 2], [f64; 3])> {
        vec![
            (x * x + y - 11.0, [2.0 * x, 1.0], [2.0, 0.0, 0.0]),
            (x + y * y - 7.0, [1.0, 2.0 * y], [0.0, 0.0, 2.0]),
        ]
    }
}

residual_objective!(Himmelblau, "himmelblau");

/// Concave quadratic `−2x₁² + 2x₁x₂ − x₂²`, to be maximized.
///
/// Its Hessian `[[−4, 2], [2, −2]]` is the standard counterexample showing
/// that the pseudoinverse-based quadratic gradient need not be a Loewner
/// bound.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadraticCounterexample;

pub fn quadratic_counterexample() -> QuadraticCounterexample {
    QuadraticCounterexample
}

impl Objective for QuadraticCounterexample {
    fn name(&self) -> String {
        "quadratic-counterexample".to_string()
    }

    fn dim(&self) -> usize {
        2
    }

    fn sense(&self) -> Sense {
        Sense::Maximize
    }

    fn value(&self, x: &[f64]) -> f64 {
        -2.0 * x[0] * x[0] + 2.0 * x[0] * x[1] - x[1] * x[1]
    }

    fn gradient(&self, x: &[f64]) -> Vector {
        Vector::from(vec![-4.0 * x[0] + 2.0 * x[1], 2.0 * x[0] - 2.0 * x[1]])
    }

    fn hessian(&self, _x: &[f64]) -> DenseMatrix {
        DenseMatrix::new(2, vec![-4.0, 2.0, 2.0, -2.0]).expect("2x2")
    }

    fn known_optima(&self) -> Vec<KnownOptimum> {
        vec![KnownOptimum {
            point: Vector::zeros(2),
            value: 0.0,
        }]
    }
}

/// Identifiers accepted by [`by_name`]. `rosenbrock` also accepts `:<n>`.
pub const FUNCTION_IDS: [&str; 5] = [
    "rosenbrock",
    "beale",
    "booth",
    "himmelblau",
    "quadratic-counterexample",
];

/// Looks up an objective by registry id. Bare `rosenbrock` means two variables.
pub fn by_name(id: &str) -> Result<Box<dyn Objective>> {
    let id = id.trim();
    if let Some(rest) = id.strip_prefix("rosenbrock") {
        if rest.is_empty() {
            return Ok(Box::new(rosenbrock(2)?));
        }
        if let Some(n) = rest.strip_prefix(':') {
            let n: usize = n
                .parse()
                .map_err(|_| Error::UnknownFunction(id.to_string()))?;
            return Ok(Box::new(rosenbrock(n)?));
        }
        return Err(Error::UnknownFunction(id.to_string()));
    }
    match id {
        "beale" => Ok(Box::new(Beale)),
        "booth" => Ok(Box::new(Booth)),
        "himmelblau" => Ok(Box::new(Himmelblau)),
        "quadratic-counterexample" => Ok(Box::new(QuadraticCounterexample)),
        _ => Err(Error::UnknownFunction(id.to_string())),
    }
}

/// Max-norm discrepancies between analytic and central-difference derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDifferenceReport {
    /// `max_i |∂f/∂x_i − (f(x + h e_i) − f(x − h e_i)) / 2h|`
    pub grad_err: f64,
    /// Same, comparing Hessian columns against differences of the gradient.
    pub hess_err: f64,
}

pub fn finite_difference_check(
    f: &(impl Objective + ?Sized),
    x: &[f64],
    h: f64,
) -> FiniteDifferenceReport {
    assert!(h > 0.0, "finite-difference step must be positive");
    let n = f.dim();
    let g = f.gradient(x);
    let hess = f.hessian(x);
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    let mut grad_err: f64 = 0.0;
    let mut hess_err: f64 = 0.0;
    for i in 0..n {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        let fd = (f.value(&xp) - f.value(&xm)) / (2.0 * h);
        grad_err = grad_err.max((fd - g[i]).abs());
        let gp = f.gradient(&xp);
        let gm = f.gradient(&xm);
        for j in 0..n {
            let fd = (gp[j] - gm[j]) / (2.0 * h);
            hess_err = hess_err.max((fd - hess.get(j, i)).abs());
        }
        xp[i] = x[i];
        xm[i] = x[i];
    }
    FiniteDifferenceReport { grad_err, hess_err }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn suite() -> Vec<Box<dyn Objective>> {
        vec![
            Box::new(rosenbrock(2).unwrap()),
            Box::new(rosenbrock(5).unwrap()),
            Box::new(beale()),
            Box::new(booth()),
            Box::new(himmelblau()),
            Box::new(quadratic_counterexample()),
        ]
    }

    #[test]
    fn rosenbrock_examples() {
        let f = rosenbrock(2).unwrap();
        assert_eq!(f.value(&[1.0, 1.0]), 0.0);
        assert_eq!(f.gradient(&[1.0, 1.0]).as_slice(), &[0.0, 0.0]);
        assert_eq!(f.value(&[0.0, 0.0]), 1.0);
        assert_eq!(f.gradient(&[0.0, 0.0]).as_slice(), &[-2.0, 0.0]);
        assert_eq!(
            f.hessian(&[0.0, 0.0]),
            DenseMatrix::from_rows(&[[2.0, 0.0], [0.0, 200.0]]).unwrap()
        );
        assert_eq!(rosenbrock(5).unwrap().value(&[1.0; 5]), 0.0);
        assert!((f.value(&[-1.2, 1.0]) - 24.2).abs() < 1e-12);
        assert!(matches!(rosenbrock(1), Err(Error::InvalidDimension(1))));
    }

    #[test]
    fn beale_examples() {
        let f = beale();
        assert_eq!(f.value(&[3.0, 0.5]), 0.0);
        assert_eq!(f.value(&[0.0, 0.0]), 14.203125);
        assert_eq!(f.gradient(&[3.0, 0.5]).as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn booth_examples() {
        let f = booth();
        assert_eq!(f.value(&[1.0, 3.0]), 0.0);
        assert_eq!(f.value(&[0.0, 0.0]), 74.0);
        assert_eq!(f.gradient(&[0.0, 0.0]).as_slice(), &[-34.0, -38.0]);
        let expected = DenseMatrix::from_rows(&[[10.0, 8.0], [8.0, 10.0]]).unwrap();
        for p in [[0.0, 0.0], [-3.0, 7.5], [100.0, -2.0]] {
            assert_eq!(f.hessian(&p), expected);
        }
    }

    #[test]
    fn himmelblau_examples() {
        let f = himmelblau();
        assert_eq!(f.value(&[3.0, 2.0]), 0.0);
        assert_eq!(f.value(&[0.0, 0.0]), 170.0);
        assert_eq!(f.gradient(&[3.0, 2.0]).as_slice(), &[0.0, 0.0]);
        assert_eq!(f.known_optima().len(), 4);
    }

    #[test]
    fn counterexample_examples() {
        let f = quadratic_counterexample();
        assert_eq!(f.sense(), Sense::Maximize);
        assert_eq!(f.gradient(&[-1.0, -1.5]).as_slice(), &[1.0, 1.0]);
        assert_eq!(
            f.hessian(&[0.3, 0.1]),
            DenseMatrix::from_rows(&[[-4.0, 2.0], [2.0, -2.0]]).unwrap()
        );
        assert_eq!(f.value(&[0.0, 0.0]), 0.0);
        assert_eq!(f.gradient(&[0.0, 0.0]).as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn known_optima_are_stationary() {
        for f in suite() {
            for opt in f.known_optima() {
                assert!(f.gradient(&opt.point).norm() <= 1e-9, "{}", f.name());
                assert!(
                    (f.value(&opt.point) - opt.value).abs() <= 1e-12,
                    "{}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn finite_difference_examples() {
        let r = finite_difference_check(&booth(), &[0.3, -1.2], 1e-5);
        assert!(r.grad_err <= 1e-6, "{r:?}");
        let r = finite_difference_check(&rosenbrock(2).unwrap(), &[-1.2, 1.0], 1e-5);
        assert!(r.grad_err <= 1e-5, "{r:?}");
        for p in [[0.0, 0.0], [-1.0, -1.5], [4.2, -3.3]] {
            let r = finite_difference_check(&quadratic_counterexample(), &p, 1e-5);
            assert!(r.hess_err <= 1e-7, "{r:?}");
        }
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(by_name("rosenbrock:7").unwrap().dim(), 7);
        assert_eq!(by_name("rosenbrock").unwrap().dim(), 2);
        for id in FUNCTION_IDS {
            assert!(by_name(id).is_ok(), "{id}");
        }
        assert_eq!(by_name("booth").unwrap().name(), "booth");
        assert!(matches!(by_name("nosuch"), Err(Error::UnknownFunction(_))));
        assert!(matches!(
            by_name("rosenbrock:x"),
            Err(Error::UnknownFunction(_))
        ));
        assert!(matches!(
            by_name("rosenbrock:1"),
            Err(Error::InvalidDimension(1))
        ));
    }

    proptest! {
        #[test]
        fn derivatives_match_central_differences(
            idx in 0usize..6,
            raw in proptest::collection::vec(-5.0f64..5.0, 5),
        ) {
            let f = &suite()[idx];
            let x = &raw[..f.dim()];
            let r = finite_difference_check(f.as_ref(), x, 1e-5);
            let gscale = 1.0 + f.gradient(x).norm_inf();
            let hscale = 1.0 + f.hessian(x).max_abs();
            prop_assert!(r.grad_err / gscale <= 1e-4);
            prop_assert!(r.hess_err / hscale <= 1e-4);
            prop_assert!(f.hessian(x).is_symmetric(1e-12));
        }
    }
}

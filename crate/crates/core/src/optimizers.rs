//! Iteration engines sharing one stepping interface.
//!
//! | method            | update                                                   |
//! |-------------------|----------------------------------------------------------|
//! | `GdSpectral`      | `x ← x − lr·g`, `lr = 1/(ε + max|λ(H)|)`                  |
//! | `NagSpectral`     | `V ← β − lr·g`, `β ← (1−γ)V_new + γV_old`                 |
//! | `EnhancedNag`     | `V ← β − (1+lr)·B̄g`, same momentum mix                   |
//! | `EnhancedAdagrad` | `x ← x − (1+η)/(ε + √ΣG²) ⊙ G`                           |
//! | `Adam`            | bias-corrected Adam on `g` with stepsize `α`             |
//! | `EnhancedAdam`    | bias-corrected Adam on `G = B̄g` with stepsize `η`        |
//!
//! Everything is written for minimization. Objectives with
//! [`Sense::Maximize`] are run as minimization of `−F`, which turns each
//! update above into the corresponding ascent step.

use crate::error::{Error, Result};
use crate::functions::{Objective, Sense};
use crate::linalg::{DenseMatrix, Vector, DEFAULT_RANK_TOL};
use crate::quadgrad::{self, DiagonalAccelerator, DEFAULT_EPSILON};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    GdSpectral,
    NagSpectral,
    EnhancedNag,
    EnhancedAdagrad,
    Adam,
    EnhancedAdam,
}

impl Method {
    pub fn uses_quadratic_gradient(self) -> bool {
        matches!(
            self,
            Method::EnhancedNag | Method::EnhancedAdagrad | Method::EnhancedAdam
        )
    }
}

/// Which accelerator turns `g` into `G` for the enhanced methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QgVariant {
    /// `G = g`.
    None,
    /// `B̄ = I`. Numerically the same as `None`, kept so the reduction of the
    /// enhanced methods to their plain counterparts can be exercised through
    /// the accelerator code path.
    Identity,
    Original,
    New,
}

/// Where the Hessian used for accelerators and spectral rates comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum HessianSource {
    /// Re-evaluated at the current iterate every step.
    Current,
    /// Evaluated once at the starting point and reused.
    FixedAtStart,
    /// A caller-supplied bound matrix for the objective as stated (not negated
    /// for maximization problems).
    Supplied(DenseMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub method: Method,
    /// `α` for Adam, `η` for the enhanced Adam and Adagrad updates. Unused by
    /// the spectral-rate methods.
    pub stepsize: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon_accel: f64,
    pub epsilon_adam: f64,
    pub qg_variant: QgVariant,
    pub max_iterations: usize,
    pub divergence_bound: f64,
    pub gradient_tol: f64,
    pub rank_tol: f64,
    pub hessian: HessianSource,
}

impl OptimizerConfig {
    pub fn new(method: Method) -> Self {
        let (stepsize, qg_variant) = match method {
            Method::Adam => (0.1, QgVariant::None),
            Method::EnhancedAdam | Method::EnhancedAdagrad => (0.1, QgVariant::Original),
            Method::EnhancedNag => (1.0, QgVariant::Original),
            Method::GdSpectral | Method::NagSpectral => (1.0, QgVariant::None),
        };
        Self {
            method,
            stepsize,
            beta1: 0.9,
            beta2: 0.999,
            epsilon_accel: DEFAULT_EPSILON,
            epsilon_adam: 1e-8,
            qg_variant,
            max_iterations: 30,
            divergence_bound: 1e12,
            gradient_tol: 1e-12,
            rank_tol: DEFAULT_RANK_TOL,
            hessian: HessianSource::Current,
        }
    }

    pub fn with_stepsize(mut self, stepsize: f64) -> Self {
        self.stepsize = stepsize;
        self
    }

    pub fn with_qg_variant(mut self, variant: QgVariant) -> Self {
        self.qg_variant = variant;
        self
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn with_hessian(mut self, source: HessianSource) -> Self {
        self.hessian = source;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("beta1 and beta2 must lie in [0, 1)");
        }
        if !(self.stepsize > 0.0 && self.stepsize.is_finite()) {
            return bad("stepsize must be positive and finite");
        }
        if !(self.epsilon_accel > 0.0 && self.epsilon_adam > 0.0) {
            return bad("epsilons must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if self.divergence_bound.is_nan() || self.divergence_bound <= 0.0 {
            return bad("divergence_bound must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    pub t: usize,
    pub theta: Vector,
    /// `V_t` of the NAG recursion.
    pub momentum_prev: Vector,
    pub m: Vector,
    pub v: Vector,
    pub adagrad_accum: Vector,
    /// Nesterov sequence `a_t`, `a_0 = 1`.
    pub nag_sequence: f64,
    /// Mixing weight `γ` applied by the most recent NAG step.
    pub nag_gamma: f64,
    fixed_hessian: Option<DenseMatrix>,
}

impl OptimizerState {
    pub fn new(x0: Vector) -> Self {
        let n = x0.dim();
        Self {
            t: 0,
            momentum_prev: x0.clone(),
            theta: x0,
            m: Vector::zeros(n),
            v: Vector::zeros(n),
            adagrad_accum: Vector::zeros(n),
            nag_sequence: 1.0,
            nag_gamma: 0.0,
            fixed_hessian: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub iteration: usize,
    /// `F(θ)` of the objective as stated.
    pub objective: f64,
    pub iterate: Vector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    BudgetExhausted,
    /// Gradient norm fell to `gradient_tol` before `iteration` could run.
    Converged {
        iteration: usize,
    },
    /// Step `iteration` produced a non-finite or out-of-bound iterate.
    Diverged {
        iteration: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
    pub outcome: Outcome,
}

impl Trajectory {
    pub fn diverged(&self) -> bool {
        matches!(self.outcome, Outcome::Diverged { .. })
    }

    pub fn last(&self) -> &TrajectoryRecord {
        self.records
            .last()
            .expect("trajectory always holds iteration 0")
    }
}

/// Gradient of the minimization form.
fn descent_gradient(f: &(impl Objective + ?Sized), x: &[f64]) -> Vector {
    let g = f.gradient(x);
    match f.sense() {
        Sense::Minimize => g,
        Sense::Maximize => g.scaled(-1.0),
    }
}

/// Hessian (or supplied bound) of the minimization form.
fn descent_hessian(
    f: &(impl Objective + ?Sized),
    state: &mut OptimizerState,
    config: &OptimizerConfig,
) -> DenseMatrix {
    let raw = match &config.hessian {
        HessianSource::Current => f.hessian(&state.theta),
        HessianSource::FixedAtStart => state
            .fixed_hessian
            .get_or_insert_with(|| f.hessian(&state.theta))
            .clone(),
        HessianSource::Supplied(m) => m.clone(),
    };
    match f.sense() {
        Sense::Minimize => raw,
        Sense::Maximize => raw.scaled(-1.0),
    }
}

fn spectral_rate(h: &DenseMatrix, config: &OptimizerConfig, t: usize) -> Result<f64> {
    if !h.is_finite() {
        return Err(Error::Diverged { step: t + 1 });
    }
    quadgrad::spectral_learning_rate(h, config.epsilon_accel)
}

/// `G` for the configured accelerator.
fn accelerated_gradient(
    f: &(impl Objective + ?Sized),
    state: &mut OptimizerState,
    config: &OptimizerConfig,
    g: &Vector,
) -> Result<Vector> {
    let qg = match config.qg_variant {
        QgVariant::None => return Ok(g.clone()),
        QgVariant::Identity => {
            quadgrad::quadratic_gradient(&DiagonalAccelerator::identity(g.dim()), g)?
        }
        QgVariant::Original => {
            let h = descent_hessian(f, state, config);
            quadgrad::quadratic_gradient(&quadgrad::bound_diagonal(&h, config.epsilon_accel)?, g)?
        }
        QgVariant::New => {
            let h = descent_hessian(f, state, config);
            match quadgrad::new_quadratic_gradient(&h, g, config.epsilon_accel, config.rank_tol) {
                Ok(qg) => qg,
                Err(Error::InvalidInput(_) | Error::InvalidMatrix(_)) => {
                    return Err(Error::Diverged { step: state.t + 1 })
                }
                Err(e) => return Err(e),
            }
        }
    };
    Ok(qg.value)
}

fn commit(state: &mut OptimizerState, theta: Vec<f64>) -> Result<()> {
    if theta.iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged { step: state.t + 1 });
    }
    state.theta = Vector::from(theta);
    state.t += 1;
    Ok(())
}

/// Gradient step with the spectral learning rate of the current Hessian.
pub fn step_gd_spectral(
    f: &(impl Objective + ?Sized),
    state: &mut OptimizerState,
    config: &OptimizerConfig,
) -> Result<()> {
    let g = descent_gradient(f, &state.theta);
    let h = descent_hessian(f, state, config);
    let lr = spectral_rate(&h, config, state.t)?;
    let theta = state
        .theta
        .iter()
        .zip(g.iter())
        .map(|(x, gi)| x - lr * gi)
        .collect();
    commit(state, theta)
}

/// Nesterov step with spectral learning rate; `enhanced` swaps `lr·g` for
/// `(1 + lr)·G`.
pub fn step_nag(
    f: &(impl Objective + ?Sized),
    state: &mut OptimizerState,
    config: &OptimizerConfig,
    enhanced: bool,
) -> Result<()> {
    let g = descent_gradient(f, &state.theta);
    let h = descent_hessian(f, state, config);
    let lr = spectral_rate(&h, config, state.t)?;
    let (direction, scale) = if enhanced {
        (accelerated_gradient(f, state, config, &g)?, 1.0 + lr)
    } else {
        (g, lr)
    };

    let a = state.nag_sequence;
    let a_next = (1.0 + (1.0 + 4.0 * a * a).sqrt()) / 2.0;
    let gamma = (a - 1.0) / a_next;

    let v_next: Vec<f64> = state
        .theta
        .iter()
        .zip(direction.iter())
        .map(|(b, d)| b - scale * d)
        .collect();
    let theta: Vec<f64> = v_next
        .iter()
        .zip(state.momentum_prev.iter())
        .map(|(vn, vp)| (1.0 - gamma) * vn + gamma * vp)
        .collect();
    if v_next.iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged { step: state.t + 1 });
    }
    commit(state, theta)?;
    state.momentum_prev = Vector::from(v_next);
    state.nag_sequence = a_next;
    state.nag_gamma = gamma;
    Ok(())
}

/// Adagrad on the quadratic gradient with per-coordinate rate
/// `(1 + η) / (ε + √Σ G²)`.
pub fn step_enhanced_adagrad(
    f: &(impl Objective + ?Sized),
    state: &mut OptimizerState,
    config: &OptimizerConfig,
) -> Result<()> {
    let g = descent_gradient(f, &state.theta);
    let big_g = accelerated_gradient(f, state, config, &g)?;
    let accum: Vec<f64> = state
        .adagrad_accum
        .iter()
        .zip(big_g.iter())
        .map(|(a, gi)| a + gi * gi)
        .collect();
    let gain = 1.0 + config.stepsize;
    let theta = state
        .theta
        .iter()
        .zip(big_g.iter())
        .zip(&accum)
        .map(|((x, gi), a)| x - gain / (config.epsilon_adam + a.sqrt()) * gi)
        .collect();
    commit(state, theta)?;
    state.adagrad_accum = Vector::from(accum);
    Ok(())
}

/// Bias-corrected Adam; `enhanced` feeds `G` instead of `g` into the moments.
pub fn step_adam(
    f: &(impl Objective + ?Sized),
    state: &mut OptimizerState,
    config: &OptimizerConfig,
    enhanced: bool,
) -> Result<()> {
    let g = descent_gradient(f, &state.theta);
    let g = if enhanced {
        accelerated_gradient(f, state, config, &g)?
    } else {
        g
    };
    let t = state.t + 1;
    let (b1, b2) = (config.beta1, config.beta2);
    let m: Vec<f64> = state
        .m
        .iter()
        .zip(g.iter())
        .map(|(m, gi)| b1 * m + (1.0 - b1) * gi)
        .collect();
    let v: Vec<f64> = state
        .v
        .iter()
        .zip(g.iter())
        .map(|(v, gi)| b2 * v + (1.0 - b2) * gi * gi)
        .collect();
    let c1 = 1.0 - b1.powi(t as i32);
    let c2 = 1.0 - b2.powi(t as i32);
    let theta = state
        .theta
        .iter()
        .zip(m.iter().zip(&v))
        .map(|(x, (mi, vi))| {
            let m_hat = mi / c1;
            let v_hat = vi / c2;
            x - config.stepsize * m_hat / (v_hat.sqrt() + config.epsilon_adam)
        })
        .collect();
    commit(state, theta)?;
    state.m = Vector::from(m);
    state.v = Vector::from(v);
    Ok(())
}

/// One step of `config.method`.
pub fn step(
    f: &(impl Objective + ?Sized),
    state: &mut OptimizerState,
    config: &OptimizerConfig,
) -> Result<()> {
    match config.method {
        Method::GdSpectral => step_gd_spectral(f, state, config),
        Method::NagSpectral => step_nag(f, state, config, false),
        Method::EnhancedNag => step_nag(f, state, config, true),
        Method::EnhancedAdagrad => step_enhanced_adagrad(f, state, config),
        Method::Adam => step_adam(f, state, config, false),
        Method::EnhancedAdam => step_adam(f, state, config, true),
    }
}

/// Runs `config.method` from `x0` and logs `F` at every iterate, starting with
/// iteration 0.
///
/// Stops after `max_iterations` steps, when `‖g‖ <= gradient_tol`, or when an
/// iterate leaves `[-divergence_bound, divergence_bound]` or stops being
/// finite. Divergence ends the run but is reported through
/// [`Trajectory::outcome`]; only invalid inputs produce an `Err`.
pub fn run(
    f: &(impl Objective + ?Sized),
    config: &OptimizerConfig,
    x0: &Vector,
) -> Result<Trajectory> {
    config.validate()?;
    if x0.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            actual: x0.dim(),
        });
    }
    if !x0.is_finite() {
        return Err(Error::InvalidInput("starting point is not finite".into()));
    }

    let mut state = OptimizerState::new(x0.clone());
    let mut records = vec![TrajectoryRecord {
        iteration: 0,
        objective: f.value(x0),
        iterate: x0.clone(),
    }];
    let mut outcome = Outcome::BudgetExhausted;

    for iteration in 1..=config.max_iterations {
        if f.gradient(&state.theta).norm() <= config.gradient_tol {
            outcome = Outcome::Converged { iteration };
            break;
        }
        match step(f, &mut state, config) {
            Ok(()) => {}
            Err(Error::Diverged { .. }) => {
                outcome = Outcome::Diverged { iteration };
                break;
            }
            Err(e) => return Err(e),
        }
        let objective = f.value(&state.theta);
        if !objective.is_finite() || state.theta.norm_inf() > config.divergence_bound {
            outcome = Outcome::Diverged { iteration };
            break;
        }
        records.push(TrajectoryRecord {
            iteration,
            objective,
            iterate: state.theta.clone(),
        });
    }

    Ok(Trajectory { records, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{booth, quadratic_counterexample, rosenbrock};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cfg(method: Method) -> OptimizerConfig {
        OptimizerConfig::new(method)
    }

    #[test]
    fn gd_spectral_first_step_on_booth() {
        let mut s = OptimizerState::new(Vector::zeros(2));
        step_gd_spectral(&booth(), &mut s, &cfg(Method::GdSpectral)).unwrap();
        assert_relative_eq!(s.theta[0], 34.0 / 18.0, epsilon = 1e-7);
        assert_relative_eq!(s.theta[1], 38.0 / 18.0, epsilon = 1e-7);
        assert_relative_eq!(s.theta[0], 1.8889, epsilon = 1e-4);
        assert_relative_eq!(s.theta[1], 2.1111, epsilon = 1e-4);
        assert_eq!(s.t, 1);
    }

    #[test]
    fn stationary_points_are_fixed() {
        let cases: Vec<(Box<dyn Objective>, Vector)> = vec![
            (Box::new(booth()), Vector::from(vec![1.0, 3.0])),
            (Box::new(quadratic_counterexample()), Vector::zeros(2)),
            (Box::new(rosenbrock(3).unwrap()), Vector::filled(3, 1.0)),
        ];
        for method in ALL_METHODS {
            for variant in [QgVariant::Original, QgVariant::New, QgVariant::Identity] {
                let config = cfg(method).with_qg_variant(variant);
                for (f, x) in &cases {
                    let mut s = OptimizerState::new(x.clone());
                    for _ in 0..3 {
                        step(f.as_ref(), &mut s, &config).unwrap();
                    }
                    assert_eq!(&s.theta, x, "{method:?}/{variant:?} on {}", f.name());
                }
            }
        }
    }

    const ALL_METHODS: [Method; 6] = [
        Method::GdSpectral,
        Method::NagSpectral,
        Method::EnhancedNag,
        Method::EnhancedAdagrad,
        Method::Adam,
        Method::EnhancedAdam,
    ];

    #[test]
    fn nag_first_step_has_no_momentum() {
        let f = booth();
        let mut s = OptimizerState::new(Vector::zeros(2));
        step_nag(&f, &mut s, &cfg(Method::NagSpectral), false).unwrap();
        assert_eq!(s.nag_gamma, 0.0);
        assert_eq!(s.theta, s.momentum_prev);
    }

    #[test]
    fn enhanced_nag_on_counterexample() {
        let f = quadratic_counterexample();
        let mut s = OptimizerState::new(Vector::from(vec![-1.0, -1.5]));
        step_nag(&f, &mut s, &cfg(Method::EnhancedNag), true).unwrap();
        let eps = DEFAULT_EPSILON;
        let lr = 1.0 / (3.0 + 5f64.sqrt() + eps);
        let expected = [
            -1.0 + (1.0 + lr) / (6.0 + eps),
            -1.5 + (1.0 + lr) / (4.0 + eps),
        ];
        assert_relative_eq!(s.momentum_prev[0], expected[0], epsilon = 1e-12);
        assert_relative_eq!(s.momentum_prev[1], expected[1], epsilon = 1e-12);
        assert_relative_eq!(s.momentum_prev[0], -0.80150, epsilon = 1e-5);
        assert_relative_eq!(s.momentum_prev[1], -1.20225, epsilon = 1e-5);
        assert_eq!(s.theta, s.momentum_prev);
    }

    #[test]
    fn nag_gamma_stays_in_unit_interval() {
        let f = rosenbrock(2).unwrap();
        let mut s = OptimizerState::new(Vector::from(vec![-1.2, 1.0]));
        let mut prev = -1.0;
        for _ in 0..200 {
            step_nag(&f, &mut s, &cfg(Method::NagSpectral), false).unwrap();
            assert!((0.0..1.0).contains(&s.nag_gamma));
            assert!(s.nag_gamma >= prev);
            prev = s.nag_gamma;
        }
    }

    #[test]
    fn adagrad_first_step_is_sign_like() {
        let f = booth();
        let config = cfg(Method::EnhancedAdagrad).with_stepsize(0.5);
        let mut s = OptimizerState::new(Vector::zeros(2));
        step_enhanced_adagrad(&f, &mut s, &config).unwrap();
        // g = (-34, -38) so G < 0 and the step is +(1 + η) per coordinate
        assert_relative_eq!(s.theta[0], 1.5, epsilon = 1e-8);
        assert_relative_eq!(s.theta[1], 1.5, epsilon = 1e-8);
    }

    /// Linear objective along the first axis: constant gradient (1, 0), zero Hessian.
    struct Ramp;

    impl Objective for Ramp {
        fn name(&self) -> String {
            "ramp".into()
        }
        fn dim(&self) -> usize {
            2
        }
        fn sense(&self) -> Sense {
            Sense::Minimize
        }
        fn value(&self, x: &[f64]) -> f64 {
            x[0]
        }
        fn gradient(&self, _x: &[f64]) -> Vector {
            Vector::from(vec![1.0, 0.0])
        }
        fn hessian(&self, _x: &[f64]) -> DenseMatrix {
            DenseMatrix::zeros(2)
        }
        fn known_optima(&self) -> Vec<crate::functions::KnownOptimum> {
            vec![]
        }
    }

    #[test]
    fn adagrad_accumulates_squares() {
        let config = cfg(Method::EnhancedAdagrad)
            .with_qg_variant(QgVariant::Identity)
            .with_stepsize(0.25);
        let mut s = OptimizerState::new(Vector::zeros(2));
        step_enhanced_adagrad(&Ramp, &mut s, &config).unwrap();
        let x1 = s.theta[0];
        step_enhanced_adagrad(&Ramp, &mut s, &config).unwrap();
        let eps = config.epsilon_adam;
        assert_relative_eq!(x1, -1.25 / (eps + 1.0), epsilon = 1e-15);
        assert_relative_eq!(
            s.theta[0] - x1,
            -1.25 / (eps + 2f64.sqrt()),
            epsilon = 1e-15
        );
        assert_eq!(s.adagrad_accum.as_slice(), &[2.0, 0.0]);
        assert_eq!(s.theta[1], 0.0);
    }

    #[test]
    fn adam_first_step_moves_by_stepsize() {
        let f = rosenbrock(2).unwrap();
        let config = cfg(Method::Adam).with_stepsize(0.1);
        let x0 = [-1.2, 1.0];
        let g = f.gradient(&x0);
        let mut s = OptimizerState::new(Vector::from(x0.to_vec()));
        step_adam(&f, &mut s, &config, false).unwrap();
        for i in 0..2 {
            assert_relative_eq!(s.theta[i], x0[i] - 0.1 * g[i].signum(), epsilon = 1e-9);
        }
    }

    #[test]
    fn adam_with_zero_gradient_keeps_zero_moments() {
        let mut s = OptimizerState::new(Vector::from(vec![1.0, 3.0]));
        for _ in 0..5 {
            step_adam(&booth(), &mut s, &cfg(Method::Adam), false).unwrap();
        }
        assert_eq!(s.theta.as_slice(), &[1.0, 3.0]);
        assert_eq!(s.m.as_slice(), &[0.0, 0.0]);
        assert_eq!(s.v.as_slice(), &[0.0, 0.0]);
        assert_eq!(s.t, 5);
    }

    #[test]
    fn enhanced_adam_with_identity_is_adam() {
        let f = rosenbrock(2).unwrap();
        let x0 = Vector::from(vec![-1.2, 1.0]);
        let naive = cfg(Method::Adam)
            .with_stepsize(0.7)
            .with_max_iterations(100);
        let enhanced = cfg(Method::EnhancedAdam)
            .with_stepsize(0.7)
            .with_qg_variant(QgVariant::Identity)
            .with_max_iterations(100);
        let a = run(&f, &naive, &x0).unwrap();
        let b = run(&f, &enhanced, &x0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn run_gd_spectral_on_booth_converges() {
        let t = run(
            &booth(),
            &cfg(Method::GdSpectral).with_max_iterations(200),
            &Vector::zeros(2),
        )
        .unwrap();
        assert!(t.last().objective <= 1e-6);
        assert_eq!(t.records[0].objective, 74.0);
    }

    #[test]
    fn run_from_optimum_is_constant() {
        for method in ALL_METHODS {
            let t = run(&booth(), &cfg(method), &Vector::from(vec![1.0, 3.0])).unwrap();
            assert!(t.records.iter().all(|r| r.objective == 0.0));
            assert_eq!(t.outcome, Outcome::Converged { iteration: 1 });
        }
    }

    #[test]
    fn run_adam_on_rosenbrock_descends() {
        let f = rosenbrock(2).unwrap();
        let t = run(
            &f,
            &cfg(Method::Adam).with_max_iterations(30),
            &Vector::from(vec![-1.2, 1.0]),
        )
        .unwrap();
        assert_eq!(t.records.len(), 31);
        assert!((t.records[0].objective - 24.2).abs() < 1e-12);
        assert!(t.last().objective < 24.2);
    }

    #[test]
    fn run_flags_divergence() {
        let f = booth();
        let mut config = cfg(Method::Adam)
            .with_stepsize(10.0)
            .with_max_iterations(50);
        config.divergence_bound = 5.0;
        let t = run(&f, &config, &Vector::zeros(2)).unwrap();
        assert!(t.diverged());
        assert!(t.records.iter().all(|r| r.iterate.norm_inf() <= 5.0));
    }

    #[test]
    fn run_rejects_bad_inputs() {
        let f = booth();
        assert!(matches!(
            run(&f, &cfg(Method::Adam), &Vector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            run(&f, &cfg(Method::Adam), &Vector::from(vec![f64::NAN, 0.0])),
            Err(Error::InvalidInput(_))
        ));
        let mut bad = cfg(Method::Adam);
        bad.beta1 = 1.0;
        assert!(matches!(
            run(&f, &bad, &Vector::zeros(2)),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            run(
                &f,
                &cfg(Method::Adam).with_max_iterations(0),
                &Vector::zeros(2)
            ),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn maximization_ascends() {
        let f = quadratic_counterexample();
        let t = run(
            &f,
            &cfg(Method::GdSpectral).with_max_iterations(50),
            &Vector::from(vec![-1.0, -1.5]),
        )
        .unwrap();
        for w in t.records.windows(2) {
            assert!(w[1].objective >= w[0].objective);
        }
        assert!(t.last().objective > -1e-6);
    }

    #[test]
    fn fixed_hessian_is_taken_at_start() {
        let f = rosenbrock(2).unwrap();
        let x0 = Vector::from(vec![-1.2, 1.0]);
        let fixed = cfg(Method::GdSpectral).with_hessian(HessianSource::FixedAtStart);
        let supplied =
            cfg(Method::GdSpectral).with_hessian(HessianSource::Supplied(f.hessian(&x0)));
        let a = run(&f, &fixed, &x0).unwrap();
        let b = run(&f, &supplied, &x0).unwrap();
        assert_eq!(a, b);
        let current = run(&f, &cfg(Method::GdSpectral), &x0).unwrap();
        assert_ne!(a, current);
    }

    #[test]
    fn runs_are_deterministic() {
        let f = rosenbrock(5).unwrap();
        let mut x0 = vec![1.0; 5];
        x0[0] = -1.2;
        let x0 = Vector::from(x0);
        for method in ALL_METHODS {
            for variant in [QgVariant::Original, QgVariant::New] {
                let c = cfg(method).with_qg_variant(variant).with_max_iterations(40);
                assert_eq!(run(&f, &c, &x0).unwrap(), run(&f, &c, &x0).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn adam_moment_invariants(
            x0 in proptest::collection::vec(-2.0f64..2.0, 3),
            variant in prop_oneof![Just(QgVariant::None), Just(QgVariant::Original), Just(QgVariant::New)],
        ) {
            let f = rosenbrock(3).unwrap();
            let config = cfg(Method::EnhancedAdam).with_qg_variant(variant).with_stepsize(0.05);
            let mut s = OptimizerState::new(Vector::from(x0));
            let mut max_g: f64 = 0.0;
            for _ in 0..40 {
                let g = descent_gradient(&f, &s.theta);
                let mut probe = s.clone();
                let big_g = accelerated_gradient(&f, &mut probe, &config, &g).unwrap();
                max_g = max_g.max(big_g.norm());
                if step_adam(&f, &mut s, &config, true).is_err() {
                    break;
                }
                prop_assert!(s.v.iter().all(|v| *v >= 0.0));
                prop_assert!(s.m.norm() <= max_g * (1.0 + 1e-12));
            }
        }
    }
}

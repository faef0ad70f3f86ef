//! Experiment drivers producing loss tables.
//!
//! Two families are provided:
//!
//! * [`experiment_lemma_lr`]: plain gradient descent, naive NAG and enhanced
//!   NAG, all driven by the spectral learning rate, on any registered
//!   objective.
//! * [`experiment_adam_qg`]: Adam against enhanced Adam with the row-sum and
//!   the pseudoinverse quadratic gradient on an `n`-variable Rosenbrock
//!   function.
//!
//! Column labels are fixed; downstream plotting scripts select columns by
//! these exact names.

mod csv;

pub use csv::{format_value, CsvRow, CsvTable, ITERATION_COLUMN};

use std::thread;

use crate::error::{Error, Result};
use crate::functions::{self, Objective, Sense};
use crate::linalg::Vector;
use crate::optimizers::{
    run, HessianSource, Method, OptimizerConfig, Outcome, QgVariant, Trajectory,
};

pub const LEMMA_LR_COLUMNS: [&str; 3] = [
    "fSFHasLRrawgradientmethod",
    "naiveNAGwithfSFHasLR",
    "enhancedNAGwithQGandfSFHasLR",
];

pub const ADAM_QG_COLUMNS: [&str; 3] = ["Adam", "AdamOldQG", "AdamNewQG"];

/// Stepsizes reported by [`adam_qg_eta_sweep`].
pub const ETA_SWEEP: [f64; 3] = [1.0, 1.5, 2.0];

pub const DEFAULT_ADAM_STEPSIZE: f64 = 0.1;
/// Adam's update is invariant to a constant diagonal rescaling of its input,
/// so `η` is a step length exactly like `α`; matching them keeps the columns
/// comparable.
pub const DEFAULT_ETA: f64 = DEFAULT_ADAM_STEPSIZE;

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub function_id: String,
    pub x0: Vector,
    pub iterations: usize,
    pub methods: Vec<(String, OptimizerConfig)>,
}

impl ExperimentSpec {
    fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        for (i, (label, _)) in self.methods.iter().enumerate() {
            if self.methods[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate method label {label}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOptions {
    /// Starting point; [`default_x0`] when absent.
    pub x0: Option<Vector>,
    /// Stepsize of the enhanced Adam columns.
    pub eta: f64,
    /// Evaluate the Hessian once at `x0` instead of at every iterate.
    pub fixed_hessian: bool,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            x0: None,
            eta: DEFAULT_ETA,
            fixed_hessian: false,
        }
    }
}

/// `(1, 1)` for Beale, `(−1.2, 1, …, 1)` for Rosenbrock, the origin otherwise.
pub fn default_x0(f: &dyn Objective) -> Vector {
    let name = f.name();
    if name == "beale" {
        Vector::from(vec![1.0, 1.0])
    } else if name.starts_with("rosenbrock") {
        let mut x = vec![1.0; f.dim()];
        x[0] = -1.2;
        Vector::from(x)
    } else {
        Vector::zeros(f.dim())
    }
}

/// Runs every method of `spec` and tabulates the loss, one row per iteration
/// `0..=iterations`.
///
/// The loss is `F` for minimization problems and `−F` for maximization
/// problems. A run that stopped early on a vanishing gradient is padded with
/// its last value; a diverged run is padded with `nan`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<CsvTable> {
    spec.validate()?;
    let f = functions::by_name(&spec.function_id)?;
    let sign = match f.sense() {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };

    let trajectories: Vec<Result<Trajectory>> = thread::scope(|scope| {
        let handles: Vec<_> = spec
            .methods
            .iter()
            .map(|(_, config)| {
                let config = config.clone().with_max_iterations(spec.iterations);
                let f = f.as_ref();
                let x0 = &spec.x0;
                scope.spawn(move || run(f, &config, x0))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("optimizer thread panicked"))
            .collect()
    });
    let trajectories = trajectories.into_iter().collect::<Result<Vec<_>>>()?;

    let columns: Vec<Vec<Option<f64>>> = trajectories
        .iter()
        .map(|t| loss_column(t, sign, spec.iterations))
        .collect();
    let rows = (0..=spec.iterations)
        .map(|i| CsvRow {
            iteration: i,
            values: columns.iter().map(|c| c[i]).collect(),
        })
        .collect();
    CsvTable::new(spec.methods.iter().map(|(l, _)| l.clone()).collect(), rows)
}

fn loss_column(t: &Trajectory, sign: f64, iterations: usize) -> Vec<Option<f64>> {
    let mut col: Vec<Option<f64>> = t.records.iter().map(|r| Some(sign * r.objective)).collect();
    let pad = match t.outcome {
        Outcome::Diverged { .. } => None,
        Outcome::Converged { .. } | Outcome::BudgetExhausted => col.last().copied().flatten(),
    };
    col.resize(iterations + 1, pad);
    col
}

fn hessian_source(fixed: bool) -> HessianSource {
    if fixed {
        HessianSource::FixedAtStart
    } else {
        HessianSource::Current
    }
}

fn resolve_x0(f: &dyn Objective, opts: &ExperimentOptions) -> Result<Vector> {
    match &opts.x0 {
        Some(x) if x.dim() != f.dim() => Err(Error::DimensionMismatch {
            expected: f.dim(),
            actual: x.dim(),
        }),
        Some(x) => Ok(x.clone()),
        None => Ok(default_x0(f)),
    }
}

/// Gradient descent, naive NAG and enhanced NAG with the spectral learning
/// rate.
pub fn experiment_lemma_lr(
    function_id: &str,
    iterations: usize,
    opts: &ExperimentOptions,
) -> Result<CsvTable> {
    let f = functions::by_name(function_id)?;
    let hessian = hessian_source(opts.fixed_hessian);
    let methods = [Method::GdSpectral, Method::NagSpectral, Method::EnhancedNag]
        .into_iter()
        .zip(LEMMA_LR_COLUMNS)
        .map(|(m, label)| {
            (
                label.to_string(),
                OptimizerConfig::new(m).with_hessian(hessian.clone()),
            )
        })
        .collect();
    run_experiment(&ExperimentSpec {
        function_id: f.name(),
        x0: resolve_x0(f.as_ref(), opts)?,
        iterations,
        methods,
    })
}

/// Adam versus enhanced Adam with the original and the new quadratic
/// gradient on `rosenbrock(n_vars)`.
pub fn experiment_adam_qg(
    n_vars: usize,
    iterations: usize,
    opts: &ExperimentOptions,
) -> Result<CsvTable> {
    let f = functions::rosenbrock(n_vars)?;
    let hessian = hessian_source(opts.fixed_hessian);
    let enhanced = |variant| {
        OptimizerConfig::new(Method::EnhancedAdam)
            .with_stepsize(opts.eta)
            .with_qg_variant(variant)
            .with_hessian(hessian.clone())
    };
    let methods = vec![
        (
            ADAM_QG_COLUMNS[0].to_string(),
            OptimizerConfig::new(Method::Adam).with_stepsize(DEFAULT_ADAM_STEPSIZE),
        ),
        (
            ADAM_QG_COLUMNS[1].to_string(),
            enhanced(QgVariant::Original),
        ),
        (ADAM_QG_COLUMNS[2].to_string(), enhanced(QgVariant::New)),
    ];
    run_experiment(&ExperimentSpec {
        function_id: f.name(),
        x0: resolve_x0(&f, opts)?,
        iterations,
        methods,
    })
}

/// [`experiment_adam_qg`] for every `η` in [`ETA_SWEEP`].
pub fn adam_qg_eta_sweep(
    n_vars: usize,
    iterations: usize,
    opts: &ExperimentOptions,
) -> Result<Vec<(f64, CsvTable)>> {
    ETA_SWEEP
        .iter()
        .map(|&eta| {
            let opts = ExperimentOptions {
                eta,
                ..opts.clone()
            };
            experiment_adam_qg(n_vars, iterations, &opts).map(|t| (eta, t))
        })
        .collect()
}

//! Quadratic-gradient optimization.
//!
//! A quadratic gradient is an ordinary gradient premultiplied by a positive
//! diagonal matrix distilled from the Hessian (or a bound on it). This crate
//! provides the accelerator constructions ([`quadgrad`]), the optimizers that
//! consume them ([`optimizers`]), a suite of test objectives with analytic
//! derivatives ([`functions`]), the dense linear algebra they rest on
//! ([`linalg`]) and drivers that tabulate loss curves as CSV
//! ([`experiments`]).
//!
//! ```
//! use quadgrad_core::{functions, optimizers::{run, Method, OptimizerConfig}, Vector};
//!
//! let booth = functions::booth();
//! let config = OptimizerConfig::new(Method::GdSpectral).with_max_iterations(200);
//! let trajectory = run(&booth, &config, &Vector::zeros(2)).unwrap();
//! assert!(trajectory.last().objective < 1e-6);
//! ```

pub mod error;
pub mod experiments;
pub mod functions;
pub mod linalg;
pub mod optimizers;
pub mod quadgrad;

pub use error::{Error, Result};
pub use experiments::{CsvTable, ExperimentOptions};
pub use functions::{Objective, Sense};
pub use linalg::{DenseMatrix, SpectralBounds, Vector};
pub use optimizers::{
    Method, OptimizerConfig, OptimizerState, QgVariant, Trajectory, TrajectoryRecord,
};
pub use quadgrad::{DiagonalAccelerator, QuadraticGradient};

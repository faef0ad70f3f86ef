//! `quadgrad`: run an experiment and write its loss table as CSV.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use quadgrad_core::experiments::{self, DEFAULT_ETA};
use quadgrad_core::{CsvTable, Error, ExperimentOptions, Vector};

const EXIT_BAD_FLAGS: u8 = 2;
const EXIT_UNKNOWN_FUNCTION: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    /// Gradient descent, naive NAG and enhanced NAG with the spectral learning rate.
    LemmaLr,
    /// Adam against enhanced Adam with the original and new quadratic gradient.
    AdamQg,
}

#[derive(Debug, Parser)]
#[command(
    name = "quadgrad",
    version,
    about = "Quadratic-gradient optimizer benchmarks"
)]
struct Cli {
    #[arg(long, value_enum, default_value = "lemma-lr")]
    experiment: Experiment,

    /// Objective for lemma-lr: rosenbrock[:<n>], beale, booth, himmelblau,
    /// quadratic-counterexample.
    #[arg(long)]
    function: Option<String>,

    /// Number of Rosenbrock variables (adam-qg, or bare `rosenbrock`).
    #[arg(long, default_value_t = 2)]
    nvars: usize,

    #[arg(long, default_value_t = 30)]
    iters: usize,

    /// Starting point, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,

    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Stepsize of the enhanced Adam columns.
    #[arg(long, default_value_t = DEFAULT_ETA)]
    eta: f64,

    /// Reserved; every experiment is deterministic.
    #[arg(long)]
    seed: Option<u64>,

    /// Evaluate the Hessian once at x0 and reuse it.
    #[arg(long)]
    fixed_hessian: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Run(Error),
    Io(io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Run(Error::UnknownFunction(_)) => EXIT_UNKNOWN_FUNCTION,
            CliError::Usage(_) | CliError::Run(_) => EXIT_BAD_FLAGS,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

fn parse_x0(text: &str) -> Result<Vector, CliError> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("--x0: {e}")))?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Usage("--x0 entries must be finite".into()));
    }
    Vector::new(values).map_err(|e| CliError::Usage(format!("--x0: {e}")))
}

fn build_table(cli: &Cli) -> Result<CsvTable, CliError> {
    if cli.iters == 0 {
        return Err(CliError::Usage("--iters must be at least 1".into()));
    }
    if !(cli.eta > 0.0 && cli.eta.is_finite()) {
        return Err(CliError::Usage("--eta must be positive".into()));
    }
    let opts = ExperimentOptions {
        x0: cli.x0.as_deref().map(parse_x0).transpose()?,
        eta: cli.eta,
        fixed_hessian: cli.fixed_hessian,
    };
    let table = match cli.experiment {
        Experiment::LemmaLr => {
            let id = cli
                .function
                .as_deref()
                .ok_or_else(|| CliError::Usage("lemma-lr needs --function".into()))?;
            let id = if id == "rosenbrock" {
                format!("rosenbrock:{}", cli.nvars)
            } else {
                id.to_string()
            };
            experiments::experiment_lemma_lr(&id, cli.iters, &opts)?
        }
        Experiment::AdamQg => {
            if let Some(id) = &cli.function {
                quadgrad_core::functions::by_name(id)?;
            }
            experiments::experiment_adam_qg(cli.nvars, cli.iters, &opts)?
        }
    };
    Ok(table)
}

fn write_table(table: &CsvTable, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(CliError::Io)?);
            table.write_to(&mut w).map_err(CliError::Io)?;
            w.flush().map_err(CliError::Io)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write_to(&mut lock).map_err(CliError::Io)?;
            lock.flush().map_err(CliError::Io)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_BAD_FLAGS)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = build_table(&cli).and_then(|t| write_table(&t, cli.out.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Run(err) => eprintln!("error: {err}"),
                CliError::Io(err) => eprintln!("error: {err}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}

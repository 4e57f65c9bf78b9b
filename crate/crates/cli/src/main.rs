//! `mlnsolve`: run block-size sweeps or adaptive-n sequences on Matrix
//! Market systems and write the results as CSV.
//!
//! Exit codes: 0 all converged, 2 iteration budget exhausted, 3 breakdown,
//! 4 input error, 5 preconditioner failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mlbicgstab::harness::{
    exit_code_for_error, exit_code_for_flags, parse_manifest, run_sequence, run_sweep, sequence_csv, sweep_csv,
    AdaptiveState, ExperimentSpec, MonotonicClock, PrecondKind, RhsSource, SolverKind,
};
use mlbicgstab::solvers::{ShadowStrategy, SolverConfig};
use mlbicgstab::Error;

#[derive(Debug, Parser)]
#[command(name = "mlnsolve", version, about = "ML(n)BiCGStab experiment runner")]
struct Args {
    /// System matrix in Matrix Market format.
    #[arg(long, required_unless_present = "sequence")]
    matrix: Option<PathBuf>,

    /// Right-hand side in Matrix Market format.
    #[arg(long, conflicts_with = "rhs_ones")]
    rhs: Option<PathBuf>,

    /// Use b = A·1 (the default when no --rhs is given).
    #[arg(long)]
    rhs_ones: bool,

    #[arg(long, default_value = "mlbicgstabt", value_parser = ["mlbicgstabt", "mlbicg", "bicgstab"])]
    solver: String,

    /// Comma-separated block sizes; the first is the starting n in sequence mode.
    #[arg(long, value_delimiter = ',', default_value = "4")]
    n: Vec<usize>,

    #[arg(long, default_value = "ilu0", value_parser = ["ilu0", "none"])]
    precond: String,

    #[arg(long, default_value_t = 1e-7)]
    tol: f64,

    #[arg(long, default_value_t = 1000)]
    max_it: usize,

    /// ω safeguard threshold in [0, 1); 0.7 is a common choice.
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(
        long,
        default_value = "residual-gauss",
        value_parser = ["residual-gauss", "residual-gauss-complex", "sign-gauss"]
    )]
    shadow: String,

    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Manifest of systems (`matrix [rhs]` per line) for adaptive-n mode.
    #[arg(long)]
    sequence: Option<PathBuf>,

    #[arg(long, default_value_t = 1)]
    step: usize,

    #[arg(long, default_value_t = 1)]
    n_min: usize,

    #[arg(long, default_value_t = 64)]
    n_max: usize,
}

fn spec_from(args: &Args) -> Result<ExperimentSpec, Error> {
    let rhs = match &args.rhs {
        Some(p) => RhsSource::File(p.clone()),
        None => RhsSource::Ones,
    };
    Ok(ExperimentSpec {
        matrix_path: args.matrix.clone().unwrap_or_default(),
        rhs,
        solver: args.solver.parse::<SolverKind>()?,
        n_list: args.n.clone(),
        precond: args.precond.parse::<PrecondKind>()?,
        shadow: args.shadow.parse::<ShadowStrategy>()?,
        cfg: SolverConfig {
            tol: args.tol,
            max_it: args.max_it,
            kappa: args.kappa,
            seed: args.seed,
            ..SolverConfig::default()
        },
        output_path: args.out.clone(),
    })
}

fn run(args: &Args) -> Result<i32, Error> {
    let spec = spec_from(args)?;
    if let Some(manifest) = &args.sequence {
        let systems = parse_manifest(manifest)?;
        let n0 = *spec
            .n_list
            .first()
            .ok_or_else(|| Error::InvalidConfig("n list is empty".into()))?;
        let mut state = AdaptiveState::new(n0, args.step, args.n_min, args.n_max)?;
        let rows = run_sequence(&spec, &systems, &mut state, &mut MonotonicClock::default())?;
        if spec.output_path.is_none() {
            print!("{}", sequence_csv(&rows));
        }
        Ok(exit_code_for_flags(rows.iter().map(|r| r.flag)))
    } else {
        let rows = run_sweep(&spec)?;
        if spec.output_path.is_none() {
            print!("{}", sweep_csv(&rows));
        }
        Ok(exit_code_for_flags(rows.iter().map(|r| r.flag)))
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("mlnsolve: {e}");
            let code = exit_code_for_error(&e);
            if code == 5 {
                eprintln!("mlnsolve: ILU(0) failed; rerun with --precond none");
            }
            ExitCode::from(code as u8)
        }
    }
}

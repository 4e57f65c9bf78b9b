//! Experiment runner: block-size sweeps and adaptive-n sequences.
//!
//! The initial guess is always zero. Shadow matrices for block size `n`
//! are drawn with seed `seed ^ n`. Timings cover the solve call only; the
//! ILU(0) setup is not included.
//!
//! Sweep CSV columns:
//!
//! ```text
//! solver,n,flag,iter,err,true_err,seconds,matvecs,hermitian_matvecs,precond_applies,dots
//! ```
//!
//! `flag` is 0 (converged), 1 (iteration budget exhausted) or −1
//! (breakdown). Floats are written with 17 significant digits.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::precond::Preconditioner;
use crate::solvers::{
    bicgstab, make_shadow_matrix, ml_n_bicg, ml_n_bicgstabt, Flag, ShadowStrategy, Solution, SolverConfig,
};
use crate::sparse::{
    read_matrix_market, read_matrix_market_vector, Complex64, CsrMatrix, MatrixMarketMatrix, MatrixMarketVector,
    Scalar,
};

pub const SWEEP_HEADER: &str =
    "solver,n,flag,iter,err,true_err,seconds,matvecs,hermitian_matvecs,precond_applies,dots";
pub const SEQUENCE_HEADER: &str = "system,n,flag,iter,err,true_err,seconds";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    MlBicgstabt,
    MlBicg,
    Bicgstab,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::MlBicgstabt => "mlbicgstabt",
            SolverKind::MlBicg => "mlbicg",
            SolverKind::Bicgstab => "bicgstab",
        }
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mlbicgstabt" => Ok(SolverKind::MlBicgstabt),
            "mlbicg" => Ok(SolverKind::MlBicg),
            "bicgstab" => Ok(SolverKind::Bicgstab),
            other => Err(Error::InvalidConfig(format!("unknown solver {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecondKind {
    Ilu0,
    None,
}

impl FromStr for PrecondKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ilu0" => Ok(PrecondKind::Ilu0),
            "none" => Ok(PrecondKind::None),
            other => Err(Error::InvalidConfig(format!("unknown preconditioner {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhsSource {
    File(PathBuf),
    /// `b = A·[1, …, 1]^T`
    Ones,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub matrix_path: PathBuf,
    pub rhs: RhsSource,
    pub solver: SolverKind,
    pub n_list: Vec<usize>,
    /// Ignored by `mlbicg`, which has no preconditioned form.
    pub precond: PrecondKind,
    pub shadow: ShadowStrategy,
    /// `cfg.n` is overridden by each entry of `n_list`.
    pub cfg: SolverConfig,
    pub output_path: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(matrix_path: impl Into<PathBuf>) -> Self {
        ExperimentSpec {
            matrix_path: matrix_path.into(),
            rhs: RhsSource::Ones,
            solver: SolverKind::MlBicgstabt,
            n_list: vec![4],
            precond: PrecondKind::Ilu0,
            shadow: ShadowStrategy::ResidualGauss,
            cfg: SolverConfig::default(),
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::InvalidConfig("n list is empty".into()));
        }
        for &n in &self.n_list {
            self.cfg.with_n(n).validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub solver: SolverKind,
    pub n: usize,
    pub flag: Flag,
    pub iter: usize,
    pub err: f64,
    pub true_err: f64,
    pub seconds: f64,
    pub matvecs: usize,
    pub hermitian_matvecs: usize,
    pub precond_applies: usize,
    pub dots: usize,
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:.16e},{:.16e},{:.16e},{},{},{},{}",
            self.solver.name(),
            self.n,
            self.flag.code(),
            self.iter,
            self.err,
            self.true_err,
            self.seconds,
            self.matvecs,
            self.hermitian_matvecs,
            self.precond_applies,
            self.dots
        )
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

/// A system loaded from disk, over the field the files require.
#[derive(Debug, Clone)]
pub enum LoadedSystem {
    Real(CsrMatrix<f64>, Vec<f64>),
    Complex(CsrMatrix<Complex64>, Vec<Complex64>),
}

fn vector_as<S: Scalar>(v: MatrixMarketVector) -> Result<Vec<S>> {
    match v {
        MatrixMarketVector::Real(v) => Ok(v.into_iter().map(S::from_real).collect()),
        MatrixMarketVector::Complex(v) => v
            .into_iter()
            .map(|z| S::from_parts(z.re, z.im))
            .collect::<Option<Vec<S>>>()
            .ok_or_else(|| Error::InvalidConfig("complex right-hand side for a real system".into())),
    }
}

/// `A·1` for [`RhsSource::Ones`], otherwise the stored vector.
pub fn build_rhs<S: Scalar>(a: &CsrMatrix<S>, source: &RhsSource) -> Result<Vec<S>> {
    let b = match source {
        RhsSource::Ones => a.matvec(&vec![S::one(); a.ncols()])?,
        RhsSource::File(path) => vector_as(read_matrix_market_vector(path)?)?,
    };
    if b.len() != a.nrows() {
        return Err(Error::mismatch("right-hand side", a.nrows(), b.len()));
    }
    Ok(b)
}

/// Loads `A` and `b`, promoting to the complex field when the matrix, the
/// right-hand side or `force_complex` asks for it.
pub fn load_system(matrix: &Path, rhs: &RhsSource, force_complex: bool) -> Result<LoadedSystem> {
    let a = read_matrix_market(matrix)?;
    let rhs_vec = match rhs {
        RhsSource::File(path) => Some(read_matrix_market_vector(path)?),
        RhsSource::Ones => None,
    };
    let complex = force_complex
        || matches!(a, MatrixMarketMatrix::Complex(_))
        || matches!(rhs_vec, Some(MatrixMarketVector::Complex(_)));
    let check = |len: usize, n: usize| {
        if len != n {
            Err(Error::mismatch("right-hand side", n, len))
        } else {
            Ok(())
        }
    };
    if complex {
        let a = a.into_complex();
        let b = match rhs_vec {
            Some(v) => v.into_complex(),
            None => build_rhs(&a, &RhsSource::Ones)?,
        };
        check(b.len(), a.nrows())?;
        Ok(LoadedSystem::Complex(a, b))
    } else {
        let MatrixMarketMatrix::Real(a) = a else { unreachable!() };
        let b = match rhs_vec {
            Some(v) => vector_as(v)?,
            None => build_rhs(&a, &RhsSource::Ones)?,
        };
        check(b.len(), a.nrows())?;
        Ok(LoadedSystem::Real(a, b))
    }
}

fn build_preconditioner<S: Scalar>(a: &CsrMatrix<S>, spec: &ExperimentSpec) -> Result<Preconditioner<S>> {
    match (spec.precond, spec.solver) {
        (PrecondKind::Ilu0, SolverKind::MlBicgstabt | SolverKind::Bicgstab) => Preconditioner::ilu0(a),
        _ => Ok(Preconditioner::Identity),
    }
}

fn solve_one<S: Scalar>(
    a: &CsrMatrix<S>,
    m: &Preconditioner<S>,
    b: &[S],
    spec: &ExperimentSpec,
    n: usize,
) -> Result<Solution<S>> {
    let cfg = SolverConfig {
        seed: spec.cfg.seed ^ n as u64,
        ..spec.cfg.with_n(n)
    };
    let x0 = vec![S::zero(); b.len()];
    match spec.solver {
        SolverKind::MlBicgstabt => {
            let q = make_shadow_matrix(b, n, spec.shadow, cfg.seed)?;
            ml_n_bicgstabt(a, m, b, &x0, &q, &cfg)
        }
        SolverKind::MlBicg => {
            let q = make_shadow_matrix(b, n, spec.shadow, cfg.seed)?;
            ml_n_bicg(a, b, &x0, &q, &cfg)
        }
        SolverKind::Bicgstab => bicgstab(a, m, b, &x0, &cfg),
    }
}

fn row_from<S>(spec: &ExperimentSpec, n: usize, sol: &Solution<S>, seconds: f64) -> SweepRow {
    let r = &sol.report;
    SweepRow {
        solver: spec.solver,
        n,
        flag: r.flag,
        iter: r.iter,
        err: r.err,
        true_err: r.true_err,
        seconds,
        matvecs: r.counters.matvecs,
        hermitian_matvecs: r.counters.hermitian_matvecs,
        precond_applies: r.counters.precond_applies,
        dots: r.counters.dots,
    }
}

/// Runs every `n` of the spec on an in-memory system.
pub fn run_sweep_on<S: Scalar>(a: &CsrMatrix<S>, b: &[S], spec: &ExperimentSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let m = build_preconditioner(a, spec)?;
    let mut rows = Vec::with_capacity(spec.n_list.len());
    for &n in &spec.n_list {
        let sol = solve_one(a, &m, b, spec, n)?;
        rows.push(row_from(spec, n, &sol, sol.report.elapsed_seconds));
    }
    Ok(rows)
}

/// Loads the spec's system, runs the sweep and writes the CSV when an
/// output path is set.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let complex = spec.shadow == ShadowStrategy::ResidualGaussComplex;
    let rows = match load_system(&spec.matrix_path, &spec.rhs, complex)? {
        LoadedSystem::Real(a, b) => run_sweep_on(&a, &b, spec)?,
        LoadedSystem::Complex(a, b) => run_sweep_on(&a, &b, spec)?,
    };
    if let Some(path) = &spec.output_path {
        write_text(path, &sweep_csv(&rows))?;
    }
    Ok(rows)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Source of timestamps in seconds for the adaptive controller.
pub trait Clock {
    fn now(&mut self) -> f64;
}

pub struct MonotonicClock(Instant);

impl Default for MonotonicClock {
    fn default() -> Self {
        MonotonicClock(Instant::now())
    }
}

impl Clock for MonotonicClock {
    fn now(&mut self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// Calls come in start/stop pairs; the `k`-th pair is `durations[k]`
/// seconds apart.
pub struct ScriptedClock {
    t: f64,
    durations: VecDeque<f64>,
    running: bool,
}

impl ScriptedClock {
    pub fn new(durations: &[f64]) -> Self {
        ScriptedClock {
            t: 0.0,
            durations: durations.iter().copied().collect(),
            running: false,
        }
    }
}

impl Clock for ScriptedClock {
    fn now(&mut self) -> f64 {
        if self.running {
            self.t += self.durations.pop_front().expect("scripted clock ran out of durations");
        }
        self.running = !self.running;
        self.t
    }
}

/// Block-size controller for a sequence of systems: after each solve, if
/// the previous system took longer than this one, `n` grows by `step`,
/// otherwise it shrinks by `step`, clamped to `[n_min, n_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveState {
    pub n_current: usize,
    pub step: usize,
    pub t_prev: Option<f64>,
    pub n_min: usize,
    pub n_max: usize,
}

impl AdaptiveState {
    pub fn new(n0: usize, step: usize, n_min: usize, n_max: usize) -> Result<Self> {
        if step < 1 || n_min < 1 || n_min > n_max || !(n_min..=n_max).contains(&n0) {
            return Err(Error::InvalidConfig(format!(
                "adaptive n needs step >= 1 and 1 <= n_min <= n0 <= n_max (got n0={n0}, step={step}, n_min={n_min}, n_max={n_max})"
            )));
        }
        Ok(AdaptiveState {
            n_current: n0,
            step,
            t_prev: None,
            n_min,
            n_max,
        })
    }

    /// Records the time of the system just solved and returns `n` for the
    /// next one.
    pub fn observe(&mut self, t: f64) -> usize {
        if let Some(t1) = self.t_prev {
            self.n_current = if t1 > t {
                (self.n_current + self.step).min(self.n_max)
            } else {
                self.n_current.saturating_sub(self.step).max(self.n_min)
            };
        }
        self.t_prev = Some(t);
        self.n_current
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceRow {
    pub system: usize,
    pub n: usize,
    pub flag: Flag,
    pub iter: usize,
    pub err: f64,
    pub true_err: f64,
    pub seconds: f64,
}

pub fn sequence_csv(rows: &[SequenceRow]) -> String {
    let mut out = String::from(SEQUENCE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.16e},{:.16e},{:.16e}",
            r.system,
            r.n,
            r.flag.code(),
            r.iter,
            r.err,
            r.true_err,
            r.seconds
        );
    }
    out
}

/// Reads a sequence manifest: one system per line, `matrix.mtx [rhs.mtx]`,
/// paths relative to the manifest. Blank lines and `#` comments are
/// skipped; a missing rhs means `b = A·1`.
pub fn parse_manifest(path: &Path) -> Result<Vec<(PathBuf, RhsSource)>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| Error::MatrixMarket {
            path: path.to_path_buf(),
            line: lineno + 1,
            msg: msg.into(),
        };
        let (matrix, rhs) = match fields.as_slice() {
            [m] => (base.join(m), RhsSource::Ones),
            [m, r] => (base.join(m), RhsSource::File(base.join(r))),
            _ => return Err(bad("expected `matrix [rhs]`")),
        };
        out.push((matrix, rhs));
    }
    Ok(out)
}

fn solve_timed<S: Scalar>(
    a: &CsrMatrix<S>,
    b: &[S],
    spec: &ExperimentSpec,
    n: usize,
    clock: &mut dyn Clock,
) -> Result<(Solution<S>, f64)> {
    let m = build_preconditioner(a, spec)?;
    let t0 = clock.now();
    let sol = solve_one(a, &m, b, spec, n)?;
    let t1 = clock.now();
    Ok((sol, t1 - t0))
}

/// Solves `systems` in order, choosing `n` for each with `adaptive`. The
/// spec supplies the solver, preconditioner, shadow strategy and
/// configuration; its `n_list` is unused.
pub fn run_sequence(
    spec: &ExperimentSpec,
    systems: &[(PathBuf, RhsSource)],
    adaptive: &mut AdaptiveState,
    clock: &mut dyn Clock,
) -> Result<Vec<SequenceRow>> {
    if systems.len() < 2 {
        return Err(Error::InvalidConfig("a sequence needs at least two systems".into()));
    }
    let complex = spec.shadow == ShadowStrategy::ResidualGaussComplex;
    let mut rows = Vec::with_capacity(systems.len());
    for (idx, (matrix, rhs)) in systems.iter().enumerate() {
        let n = adaptive.n_current;
        spec.cfg.with_n(n).validate()?;
        let (report, seconds) = match load_system(matrix, rhs, complex)? {
            LoadedSystem::Real(a, b) => {
                let (s, t) = solve_timed(&a, &b, spec, n, clock)?;
                (s.report, t)
            }
            LoadedSystem::Complex(a, b) => {
                let (s, t) = solve_timed(&a, &b, spec, n, clock)?;
                (s.report, t)
            }
        };
        rows.push(SequenceRow {
            system: idx,
            n,
            flag: report.flag,
            iter: report.iter,
            err: report.err,
            true_err: report.true_err,
            seconds,
        });
        adaptive.observe(seconds);
    }
    if let Some(path) = &spec.output_path {
        write_text(path, &sequence_csv(&rows))?;
    }
    Ok(rows)
}

/// Process exit status for a finished run: 3 if any solve broke down,
/// else 2 if any ran out of iterations, else 0.
pub fn exit_code_for_flags(flags: impl IntoIterator<Item = Flag>) -> i32 {
    let mut code = 0;
    for f in flags {
        match f {
            Flag::Breakdown => return 3,
            Flag::MaxIter => code = 2,
            Flag::Converged => {}
        }
    }
    code
}

/// Process exit status for a failed run: 5 for ILU(0) failures, 4 for
/// anything else.
pub fn exit_code_for_error(e: &Error) -> i32 {
    match e {
        Error::ZeroPivot { .. } | Error::MissingDiagonal { .. } => 5,
        _ => 4,
    }
}

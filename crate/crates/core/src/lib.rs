//! Sparse Krylov solvers built around ML(n)BiCGStab with A-transpose.
//!
//! * [`solvers::ml_n_bicgstabt`]: preconditioned ML(n)BiCGStabt, the main
//!   solver; [`precond::Preconditioner::Identity`] gives the unpreconditioned
//!   method.
//! * [`solvers::ml_n_bicg`]: the ML(n)BiCG recurrence the stabilized method
//!   derives from. Kept as a reference path.
//! * [`solvers::bicgstab`]: baseline preconditioned BiCGStab.
//! * [`precond`]: ILU(0) on the pattern of `A`, with `M^{-1}` and `M^{-H}` solves.
//! * [`oracles`]: dense reference methods used for verification.
//! * [`harness`]: experiment sweeps and adaptive block-size selection.

pub mod error;
pub mod gallery;
pub mod harness;
pub mod index_map;
pub mod oracles;
pub mod precond;
pub mod solvers;
pub mod sparse;

pub use error::{Error, Result};

//! Global solvers for quadratic minimization over the unit ball and unit
//! sphere, built around projected-gradient iterations on a doubled-variable
//! reformulation whose second-order stationary points are all global.
//!
//! The crate provides:
//!
//! - [`operator`]: symmetric operators (dense or sparse), spectral-norm
//!   estimation, dense eigendecomposition, pseudoinverse application;
//! - [`problem`]: ball/sphere problem containers, KKT residuals, and the
//!   doubled-variable lifting;
//! - [`oracle`]: an independent eigendecomposition-based reference solver,
//!   case classifier and exhaustive KKT enumerator for small instances;
//! - [`ball`]: plain projected gradient, the lifted single-start solver with
//!   closed-form boundary recovery, and the double-start / two-stage
//!   baselines;
//! - [`sphere`]: the normalized-gradient iteration, its lifted variant, and
//!   the trace-shift ball reformulation with a larger admissible step;
//! - [`generate`]: seeded instance generators for every case, post-verified
//!   by the oracle;
//! - [`io`]: a lossless text format for problem files.

pub mod error;
mod linalg;

pub mod ball;
pub mod generate;
pub mod io;
pub mod operator;
pub mod oracle;
pub mod problem;
pub mod sample;
pub mod secular;
pub mod solution;
pub mod sphere;

pub use error::{Result, TrsError};

pub use ball::{
    project_ball, recover_boundary, run_double_start, run_lifted_pg, run_pg,
    run_two_stage_convex, DoubleStartSolution, EtaPolicy, PgConfig,
};
pub use generate::{generate, GenKind};
pub use io::{parse_problem, serialize_problem, AnyProblem};
pub use operator::{Spectrum, SymmetricOperator, DEFAULT_DENSE_LIMIT, DEFAULT_DROP_TOL};
pub use oracle::{
    check_global, classify_case, enumerate_kkt, solve_trs_reference, solve_trse_reference,
    CaseLabel, HardnessCase, OracleConfig,
};
pub use problem::{
    kkt_residuals, Constraint, KktPoint, LiftedProblem, QuadraticProblem, TrsProblem,
    TrseProblem,
};
pub use sample::{sample_uniform_ball, sample_uniform_sphere};
pub use secular::SecularFunction;
pub use solution::{SolveTrace, Termination, TraceRow, TrsSolution};
pub use sphere::{project_sphere, run_gpg, run_lifted_gpg, run_tau_shift, EtaPolicyE, TrseConfig};

//! Solver output types shared by the ball and sphere paths.

/// Why a solver run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Step norm fell below `step_tol`.
    StepTol,
    /// Iteration budget exhausted.
    MaxIters,
    /// The pre-projection vector vanished; the iterate is already stationary
    /// (sphere iterations only).
    StationaryStop,
}

/// One recorded iterate.
#[derive(Clone, Copy, Debug)]
pub struct TraceRow {
    pub iter: usize,
    pub objective: f64,
    /// Norm of the step into this iterate; zero for the initial row.
    pub step_norm: f64,
    /// Whether the iterate sits on the unit sphere within 1e-12.
    pub on_boundary: bool,
}

/// Per-iteration record of a solver run.
#[derive(Clone, Debug, Default)]
pub struct SolveTrace {
    pub rows: Vec<TraceRow>,
}

/// Result of a projected-gradient style run.
#[derive(Clone, Debug)]
pub struct TrsSolution {
    /// Final point in the original n variables.
    pub x: Vec<f64>,
    /// Converged lifted point (2n variables), lifted solvers only.
    pub z_tilde: Option<Vec<f64>>,
    /// Multiplier estimate: `-x'(Hx + c) / x'x` on the boundary, zero inside.
    pub lambda_hat: f64,
    /// Objective of `x` under the problem the caller posed.
    pub objective: f64,
    /// Objective of the lifted iterate at convergence, lifted solvers only.
    pub lifted_objective: Option<f64>,
    /// Step size the run actually used.
    pub eta: f64,
    pub iterations: usize,
    /// Number of H-applications performed.
    pub matvecs: usize,
    /// Whether the boundary recovery step produced `x`.
    pub recovered_via_theta: bool,
    pub termination: Termination,
    /// Largest violation of the per-step descent inequality, normalized by
    /// 1 + |f|. Tracked on every run regardless of tracing.
    pub max_decrease_violation: f64,
    /// Largest feasibility excess over the run: `max(||z|| - 1, 0)` on the
    /// ball, `max | ||z|| - 1 |` on the sphere.
    pub max_feasibility_excess: f64,
    pub trace: Option<SolveTrace>,
}

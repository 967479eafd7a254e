//! Method dispatch shared by the solve/trace/basin/bench subcommands.

use trs_core::oracle::{classify_case_with, solve_trs_reference_with, solve_trse_reference_with};
use trs_core::{
    run_double_start, run_gpg, run_lifted_gpg, run_lifted_pg, run_pg, run_tau_shift,
    run_two_stage_convex, sample_uniform_sphere, AnyProblem, EtaPolicy, EtaPolicyE, HardnessCase,
    OracleConfig, PgConfig, QuadraticProblem, Result, SolveTrace, Termination, TrsError,
    TrsSolution,
};

/// Solver selector. The string names are the CLI vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Pg,
    Alg1,
    Double,
    TwoStage,
    Gpg,
    Pge2,
    TauShift,
    Oracle,
}

impl Method {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "pg" => Method::Pg,
            "alg1" => Method::Alg1,
            "double" => Method::Double,
            "two-stage" => Method::TwoStage,
            "gpg" => Method::Gpg,
            "pge2" => Method::Pge2,
            "tau-shift" => Method::TauShift,
            "oracle" => Method::Oracle,
            other => {
                return Err(TrsError::InvalidConfig(format!(
                    "unknown method '{other}' (expected pg|alg1|double|two-stage|gpg|pge2|tau-shift|oracle)"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Pg => "pg",
            Method::Alg1 => "alg1",
            Method::Double => "double",
            Method::TwoStage => "two-stage",
            Method::Gpg => "gpg",
            Method::Pge2 => "pge2",
            Method::TauShift => "tau-shift",
            Method::Oracle => "oracle",
        }
    }

    pub fn wants_ball(self) -> bool {
        matches!(
            self,
            Method::Pg | Method::Alg1 | Method::Double | Method::TwoStage
        )
    }

    pub fn wants_sphere(self) -> bool {
        matches!(self, Method::Gpg | Method::Pge2 | Method::TauShift)
    }
}

/// Initial-point specification from the command line.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum StartSpec {
    /// Method-appropriate default: zero for pg, a seeded sample otherwise.
    #[default]
    Auto,
    Zero,
    Seed(u64),
    Explicit(Vec<f64>),
}

impl StartSpec {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "zero" {
            return Ok(StartSpec::Zero);
        }
        if s == "seed" {
            return Ok(StartSpec::Auto);
        }
        if let Some(rest) = s.strip_prefix("seed:") {
            let v = rest.parse().map_err(|_| {
                TrsError::InvalidConfig(format!("invalid seed in start spec '{s}'"))
            })?;
            return Ok(StartSpec::Seed(v));
        }
        let vals: std::result::Result<Vec<f64>, _> =
            s.split(',').map(|t| t.trim().parse::<f64>()).collect();
        match vals {
            Ok(v) if !v.is_empty() => Ok(StartSpec::Explicit(v)),
            _ => Err(TrsError::InvalidConfig(format!(
                "invalid start spec '{s}' (expected zero | seed | seed:<n> | v1,v2,...)"
            ))),
        }
    }
}

/// Options shared by every iterative method.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub eta: Option<f64>,
    pub eta_fraction: Option<f64>,
    pub seed: u64,
    pub max_iters: usize,
    pub step_tol: f64,
    pub record_trace: bool,
    pub start: StartSpec,
    pub oracle_tol: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            eta: None,
            eta_fraction: None,
            seed: 0,
            max_iters: 500_000,
            step_tol: 1e-12,
            record_trace: false,
            start: StartSpec::Auto,
            oracle_tol: 1e-10,
        }
    }
}

impl RunOptions {
    fn pg_config(&self, default_fraction: f64) -> PgConfig {
        let eta_policy = match (self.eta, self.eta_fraction) {
            (Some(e), _) => EtaPolicy::Explicit(e),
            (None, Some(f)) => EtaPolicy::FractionOfTwoOverL(f),
            (None, None) => EtaPolicy::FractionOfTwoOverL(default_fraction),
        };
        PgConfig {
            eta_policy,
            max_iters: self.max_iters,
            step_tol: self.step_tol,
            seed: self.seed,
            record_trace: self.record_trace,
            ..Default::default()
        }
    }

    fn trse_config(&self) -> trs_core::TrseConfig {
        let eta_policy = match self.eta {
            Some(e) => EtaPolicyE::Explicit(e),
            None => EtaPolicyE::OneOverL,
        };
        trs_core::TrseConfig {
            eta_policy,
            max_iters: self.max_iters,
            step_tol: self.step_tol,
            seed: self.seed,
            record_trace: self.record_trace,
            ..Default::default()
        }
    }
}

/// Uniform view over solver and oracle outputs.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub x: Vec<f64>,
    pub objective: f64,
    pub lambda: f64,
    pub iterations: usize,
    pub matvecs: usize,
    pub recovered_via_theta: bool,
    pub termination: &'static str,
    pub eta: Option<f64>,
    pub case_label: Option<String>,
    pub interior: Option<bool>,
    /// Zero-start and random-start objectives of the double-start baseline.
    pub sub_objectives: Option<(f64, f64)>,
    pub trace: Option<SolveTrace>,
    pub max_decrease_violation: f64,
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::StepTol => "step-tol",
        Termination::MaxIters => "max-iters",
        Termination::StationaryStop => "stationary-stop",
    }
}

fn case_name(c: HardnessCase) -> &'static str {
    match c {
        HardnessCase::Easy => "easy",
        HardnessCase::HardI => "hard-1",
        HardnessCase::HardII => "hard-2",
        HardnessCase::Ill => "ill",
    }
}

fn from_solution(sol: TrsSolution) -> RunOutcome {
    RunOutcome {
        x: sol.x,
        objective: sol.objective,
        lambda: sol.lambda_hat,
        iterations: sol.iterations,
        matvecs: sol.matvecs,
        recovered_via_theta: sol.recovered_via_theta,
        termination: termination_name(sol.termination),
        eta: Some(sol.eta),
        case_label: None,
        interior: None,
        sub_objectives: None,
        trace: sol.trace,
        max_decrease_violation: sol.max_decrease_violation,
    }
}

fn ball_start(n: usize, opts: &RunOptions) -> Result<Vec<f64>> {
    match &opts.start {
        StartSpec::Auto | StartSpec::Zero => Ok(vec![0.0; n]),
        StartSpec::Seed(s) => Ok(trs_core::sample_uniform_ball(n, *s)),
        StartSpec::Explicit(v) => {
            if v.len() != n {
                return Err(TrsError::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            Ok(v.clone())
        }
    }
}

fn lifted_start(n: usize, opts: &RunOptions) -> Result<Option<Vec<f64>>> {
    match &opts.start {
        StartSpec::Auto => Ok(None),
        StartSpec::Zero => Ok(Some(vec![0.0; 2 * n])),
        StartSpec::Seed(s) => Ok(Some(trs_core::sample_uniform_ball(2 * n, *s))),
        StartSpec::Explicit(v) => {
            if v.len() == n {
                let mut z = v.clone();
                z.extend(std::iter::repeat(0.0).take(n));
                Ok(Some(z))
            } else if v.len() == 2 * n {
                Ok(Some(v.clone()))
            } else {
                Err(TrsError::DimensionMismatch {
                    expected: 2 * n,
                    got: v.len(),
                })
            }
        }
    }
}

fn sphere_start(n: usize, opts: &RunOptions) -> Result<Vec<f64>> {
    match &opts.start {
        StartSpec::Auto => Ok(sample_uniform_sphere(n, opts.seed)),
        StartSpec::Zero => Err(TrsError::InvalidConfig(
            "the zero vector is not on the unit sphere".into(),
        )),
        StartSpec::Seed(s) => Ok(sample_uniform_sphere(n, *s)),
        StartSpec::Explicit(v) => {
            if v.len() != n {
                return Err(TrsError::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            Ok(v.clone())
        }
    }
}

fn lifted_sphere_start(n: usize, opts: &RunOptions) -> Result<Option<Vec<f64>>> {
    match &opts.start {
        StartSpec::Auto => Ok(None),
        StartSpec::Zero => Err(TrsError::InvalidConfig(
            "the zero vector is not on the unit sphere".into(),
        )),
        StartSpec::Seed(s) => Ok(Some(sample_uniform_sphere(2 * n, *s))),
        StartSpec::Explicit(v) => {
            if v.len() == n {
                let mut z = v.clone();
                z.extend(std::iter::repeat(0.0).take(n));
                Ok(Some(z))
            } else if v.len() == 2 * n {
                Ok(Some(v.clone()))
            } else {
                Err(TrsError::DimensionMismatch {
                    expected: 2 * n,
                    got: v.len(),
                })
            }
        }
    }
}

/// Runs a method on a parsed problem. The eigendecomposition is computed up
/// front whenever the dense limit allows it, so step-size validation sees the
/// exact spectral norm.
pub fn dispatch(
    problem: &AnyProblem,
    method: Method,
    opts: &RunOptions,
    oracle_cfg: &OracleConfig,
) -> Result<RunOutcome> {
    if method.wants_ball() && problem.as_ball().is_none() {
        return Err(TrsError::InvalidConfig(format!(
            "method '{}' needs a BALL problem",
            method.name()
        )));
    }
    if method.wants_sphere() && problem.as_sphere().is_none() {
        return Err(TrsError::InvalidConfig(format!(
            "method '{}' needs a SPHERE problem",
            method.name()
        )));
    }
    if problem.dim() <= oracle_cfg.dense_limit {
        let _ = problem.op().eigendecompose_with_limit(oracle_cfg.dense_limit);
    }

    match method {
        Method::Pg => {
            let p = problem.as_ball().unwrap();
            let x0 = ball_start(p.dim(), opts)?;
            run_pg(p, &x0, &opts.pg_config(0.5)).map(from_solution)
        }
        Method::Alg1 => {
            let p = problem.as_ball().unwrap();
            let z0 = lifted_start(p.dim(), opts)?;
            run_lifted_pg(p, z0.as_deref(), &opts.pg_config(0.5)).map(from_solution)
        }
        Method::Double => {
            let p = problem.as_ball().unwrap();
            let d = run_double_start(p, &opts.pg_config(0.5))?;
            let subs = (d.zero_run.objective, d.random_run.objective);
            let total_matvecs = d.zero_run.matvecs + d.random_run.matvecs;
            let total_iters = d.zero_run.iterations + d.random_run.iterations;
            let mut out = from_solution(d.best().clone());
            out.sub_objectives = Some(subs);
            out.matvecs = total_matvecs;
            out.iterations = total_iters;
            Ok(out)
        }
        Method::TwoStage => {
            let p = problem.as_ball().unwrap();
            run_two_stage_convex(p, &opts.pg_config(0.5)).map(from_solution)
        }
        Method::Gpg => {
            let p = problem.as_sphere().unwrap();
            let x0 = sphere_start(p.dim(), opts)?;
            run_gpg(p, &x0, &opts.trse_config()).map(from_solution)
        }
        Method::Pge2 => {
            let p = problem.as_sphere().unwrap();
            let z0 = lifted_sphere_start(p.dim(), opts)?;
            run_lifted_gpg(p, z0.as_deref(), &opts.trse_config()).map(from_solution)
        }
        Method::TauShift => {
            let p = problem.as_sphere().unwrap();
            run_tau_shift(p, &opts.pg_config(0.99)).map(from_solution)
        }
        Method::Oracle => match problem {
            AnyProblem::Ball(p) => {
                let (x, kkt, label) = solve_trs_reference_with(oracle_cfg, p, opts.oracle_tol)?;
                let objective = p.objective(&x);
                Ok(RunOutcome {
                    x,
                    objective,
                    lambda: kkt.lambda,
                    iterations: 0,
                    matvecs: 0,
                    recovered_via_theta: false,
                    termination: "oracle",
                    eta: None,
                    case_label: Some(case_name(label.case).to_string()),
                    interior: Some(label.interior),
                    sub_objectives: None,
                    trace: None,
                    max_decrease_violation: 0.0,
                })
            }
            AnyProblem::Sphere(p) => {
                let (x, kkt) = solve_trse_reference_with(oracle_cfg, p, opts.oracle_tol)?;
                let objective = p.objective(&x);
                Ok(RunOutcome {
                    x,
                    objective,
                    lambda: kkt.lambda,
                    iterations: 0,
                    matvecs: 0,
                    recovered_via_theta: false,
                    termination: "oracle",
                    eta: None,
                    case_label: None,
                    interior: None,
                    sub_objectives: None,
                    trace: None,
                    max_decrease_violation: 0.0,
                })
            }
        },
    }
}

/// Case label of a ball problem, as the CLI prints it.
pub fn classify_label(
    problem: &AnyProblem,
    tol: f64,
    oracle_cfg: &OracleConfig,
) -> Result<(String, bool)> {
    match problem {
        AnyProblem::Ball(p) => {
            let label = classify_case_with(oracle_cfg, p, tol)?;
            Ok((case_name(label.case).to_string(), label.interior))
        }
        AnyProblem::Sphere(_) => Err(TrsError::InvalidConfig(
            "case classification applies to BALL problems".into(),
        )),
    }
}

//! Ball-constrained projected-gradient solvers: plain PG, PG on the lifted
//! 2n-dimensional problem with closed-form boundary recovery, the double-start
//! baseline, and the two-stage convex-reformulation baseline.

use crate::error::{Result, TrsError};
use crate::linalg::{dot, norm, norm_sq};
use crate::problem::{QuadraticProblem, TrsProblem};
use crate::sample::sample_uniform_ball;
use crate::solution::{SolveTrace, Termination, TraceRow, TrsSolution};

/// Step-size selection for ball iterations; valid steps live in (0, 2/L).
#[derive(Clone, Copy, Debug)]
pub enum EtaPolicy {
    Explicit(f64),
    /// `fraction * (2/L)` with fraction in (0, 1).
    FractionOfTwoOverL(f64),
}

#[derive(Clone, Debug)]
pub struct PgConfig {
    pub eta_policy: EtaPolicy,
    pub max_iters: usize,
    /// Stop when the step norm falls to this value. The step norm bounds the
    /// gradient mapping, so this doubles as a KKT residual certificate.
    pub step_tol: f64,
    /// Recovery branch threshold on the converged artificial variable.
    pub y_zero_tol: f64,
    pub seed: u64,
    pub record_trace: bool,
}

impl Default for PgConfig {
    fn default() -> Self {
        Self {
            eta_policy: EtaPolicy::FractionOfTwoOverL(0.5),
            max_iters: 500_000,
            step_tol: 1e-12,
            y_zero_tol: 1e-7,
            seed: 0,
            record_trace: false,
        }
    }
}

impl PgConfig {
    fn validate(&self) -> Result<()> {
        if self.step_tol <= 0.0 || self.y_zero_tol <= 0.0 {
            return Err(TrsError::InvalidConfig("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// Resolves the step size against a Lipschitz bound. A zero bound (zero
    /// operator) admits any positive step; unit step is used then.
    pub fn resolve_eta(&self, l: f64) -> Result<f64> {
        match self.eta_policy {
            EtaPolicy::Explicit(e) => {
                if e <= 0.0 || (l > 0.0 && e >= 2.0 / l) {
                    return Err(TrsError::InvalidConfig(format!(
                        "explicit eta {e} outside (0, 2/L) with L = {l}"
                    )));
                }
                Ok(e)
            }
            EtaPolicy::FractionOfTwoOverL(fr) => {
                if !(fr > 0.0 && fr < 1.0) {
                    return Err(TrsError::InvalidConfig(format!(
                        "step fraction {fr} outside (0, 1)"
                    )));
                }
                if l == 0.0 {
                    Ok(1.0)
                } else {
                    Ok(fr * 2.0 / l)
                }
            }
        }
    }
}

/// Metric projection onto the unit ball.
pub fn project_ball(y: &[f64]) -> Vec<f64> {
    let n = norm(y);
    if n <= 1.0 {
        y.to_vec()
    } else {
        y.iter().map(|v| v / n).collect()
    }
}

fn step_dist_sq(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        s += d * d;
    }
    s
}

fn boundary_multiplier(x: &[f64], grad: &[f64]) -> f64 {
    let nx_sq = norm_sq(x);
    if nx_sq.sqrt() >= 1.0 - 1e-9 {
        -dot(x, grad) / nx_sq
    } else {
        0.0
    }
}

/// Plain projected gradient on the ball from a feasible start. The objective
/// is non-increasing and every iterate stays feasible; the run tracks the
/// worst violation of the per-step descent inequality.
pub fn run_pg(p: &TrsProblem, x0: &[f64], cfg: &PgConfig) -> Result<TrsSolution> {
    let n = p.dim();
    if x0.len() != n {
        return Err(TrsError::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if norm(x0) > 1.0 + 1e-12 {
        return Err(TrsError::InvalidInput("x0 lies outside the unit ball".into()));
    }
    cfg.validate()?;
    let l = p.op().lipschitz_bound();
    let eta = cfg.resolve_eta(l)?;
    let decrease_coeff = 1.0 / eta - l / 2.0;

    let op = p.op();
    let c = p.linear();
    let mut x = x0.to_vec();
    let mut hx = vec![0.0; n];
    op.apply_into(&x, &mut hx);
    let mut matvecs = 1usize;
    let mut f = 0.5 * dot(&x, &hx) + dot(c, &x);

    let mut trace = cfg.record_trace.then(SolveTrace::default);
    let mut max_viol = f64::NEG_INFINITY;
    let mut max_feas = (norm(&x) - 1.0).max(0.0);
    if let Some(t) = trace.as_mut() {
        t.rows.push(TraceRow {
            iter: 0,
            objective: f,
            step_norm: 0.0,
            on_boundary: (norm(&x) - 1.0).abs() <= 1e-12,
        });
    }

    let mut xb = vec![0.0; n];
    let mut termination = Termination::MaxIters;
    let mut iterations = 0usize;
    for k in 1..=cfg.max_iters {
        for i in 0..n {
            xb[i] = x[i] - eta * (hx[i] + c[i]);
        }
        let d_sq = norm_sq(&xb);
        let d = d_sq.sqrt();
        if d > 1.0 {
            for v in xb.iter_mut() {
                *v /= d;
            }
        }
        let step_sq = step_dist_sq(&xb, &x);
        let step = step_sq.sqrt();
        op.apply_into(&xb, &mut hx);
        matvecs += 1;
        let f_new = 0.5 * dot(&xb, &hx) + dot(c, &xb);
        let viol = (f_new - f + decrease_coeff * step_sq) / (1.0 + f.abs());
        if viol > max_viol {
            max_viol = viol;
        }
        std::mem::swap(&mut x, &mut xb);
        f = f_new;
        iterations = k;
        let nx = norm(&x);
        if nx - 1.0 > max_feas {
            max_feas = nx - 1.0;
        }
        if let Some(t) = trace.as_mut() {
            t.rows.push(TraceRow {
                iter: k,
                objective: f,
                step_norm: step,
                on_boundary: (nx - 1.0).abs() <= 1e-12,
            });
        }
        if step <= cfg.step_tol {
            termination = Termination::StepTol;
            break;
        }
    }

    let mut grad = hx;
    for i in 0..n {
        grad[i] += c[i];
    }
    let lambda_hat = boundary_multiplier(&x, &grad);
    Ok(TrsSolution {
        x,
        z_tilde: None,
        lambda_hat,
        objective: f,
        lifted_objective: None,
        eta,
        iterations,
        matvecs,
        recovered_via_theta: false,
        termination,
        max_decrease_violation: max_viol.max(0.0),
        max_feasibility_excess: max_feas,
        trace,
    })
}

/// Closed-form move onto the unit sphere along the artificial direction:
/// returns `x + theta*y` with `theta >= 0` and unit result norm. Requires
/// `||x|| <= 1` (up to roundoff) so the discriminant stays nonnegative; a
/// point already on the sphere gets `theta = 0` whenever y is orthogonal.
pub fn recover_boundary(x_t: &[f64], y_t: &[f64]) -> Result<Vec<f64>> {
    if x_t.len() != y_t.len() {
        return Err(TrsError::DimensionMismatch {
            expected: x_t.len(),
            got: y_t.len(),
        });
    }
    let yy = norm_sq(y_t);
    if yy == 0.0 {
        return Err(TrsError::InvalidInput(
            "recovery direction must be nonzero".into(),
        ));
    }
    if norm_sq(x_t) > 1.0 + 1e-10 {
        return Err(TrsError::InvalidInput(
            "x lies outside the unit ball".into(),
        ));
    }
    Ok(theta_completion(x_t, y_t))
}

/// x + theta*y with theta solving ||x + theta*y|| = 1, theta >= 0. The two
/// branches are algebraically equal; the split avoids subtractive
/// cancellation in either sign of x'y.
pub(crate) fn theta_completion(x: &[f64], y: &[f64]) -> Vec<f64> {
    let s = dot(x, y);
    let yy = norm_sq(y);
    let xx = norm_sq(x);
    let root = (s * s + yy * (1.0 - xx)).max(0.0).sqrt();
    let theta = if s <= 0.0 {
        (root - s) / yy
    } else {
        (1.0 - xx) / (root + s)
    };
    x.iter().zip(y).map(|(xi, yi)| xi + theta * yi).collect()
}

/// Projected gradient on the lifted problem over (x, y) in the unit 2n-ball,
/// followed by the boundary recovery: `x* = x~` when the artificial part
/// vanished, else `x* = x~ + theta*y~` placed exactly on the sphere.
/// Initialized with `y0 = 0` the x-iterates coincide bitwise with `run_pg`.
pub fn run_lifted_pg(p: &TrsProblem, z0: Option<&[f64]>, cfg: &PgConfig) -> Result<TrsSolution> {
    let n = p.dim();
    cfg.validate()?;
    let z0v = match z0 {
        Some(z) => {
            if z.len() != 2 * n {
                return Err(TrsError::DimensionMismatch {
                    expected: 2 * n,
                    got: z.len(),
                });
            }
            if norm(z) > 1.0 + 1e-12 {
                return Err(TrsError::InvalidInput(
                    "z0 lies outside the unit ball".into(),
                ));
            }
            z.to_vec()
        }
        None => sample_uniform_ball(2 * n, cfg.seed),
    };
    let l = p.op().lipschitz_bound();
    let eta = cfg.resolve_eta(l)?;
    let decrease_coeff = 1.0 / eta - l / 2.0;

    let op = p.op();
    let c = p.linear();
    let mut x = z0v[..n].to_vec();
    let mut y = z0v[n..].to_vec();
    let mut hx = vec![0.0; n];
    let mut hy = vec![0.0; n];
    op.apply_into(&x, &mut hx);
    op.apply_into(&y, &mut hy);
    let mut matvecs = 2usize;
    let mut f = 0.5 * (dot(&x, &hx) + dot(&y, &hy)) + dot(c, &x);

    let mut trace = cfg.record_trace.then(SolveTrace::default);
    let mut max_viol = f64::NEG_INFINITY;
    let z_norm = (norm_sq(&x) + norm_sq(&y)).sqrt();
    let mut max_feas = (z_norm - 1.0).max(0.0);
    if let Some(t) = trace.as_mut() {
        t.rows.push(TraceRow {
            iter: 0,
            objective: f,
            step_norm: 0.0,
            on_boundary: (z_norm - 1.0).abs() <= 1e-12,
        });
    }

    let mut xb = vec![0.0; n];
    let mut yb = vec![0.0; n];
    let mut termination = Termination::MaxIters;
    let mut iterations = 0usize;
    for k in 1..=cfg.max_iters {
        for i in 0..n {
            xb[i] = x[i] - eta * (hx[i] + c[i]);
        }
        for i in 0..n {
            yb[i] = y[i] - eta * hy[i];
        }
        let d_sq = norm_sq(&xb) + norm_sq(&yb);
        let d = d_sq.sqrt();
        if d > 1.0 {
            for v in xb.iter_mut() {
                *v /= d;
            }
            for v in yb.iter_mut() {
                *v /= d;
            }
        }
        let step_sq = step_dist_sq(&xb, &x) + step_dist_sq(&yb, &y);
        let step = step_sq.sqrt();
        op.apply_into(&xb, &mut hx);
        op.apply_into(&yb, &mut hy);
        matvecs += 2;
        let f_new = 0.5 * (dot(&xb, &hx) + dot(&yb, &hy)) + dot(c, &xb);
        let viol = (f_new - f + decrease_coeff * step_sq) / (1.0 + f.abs());
        if viol > max_viol {
            max_viol = viol;
        }
        std::mem::swap(&mut x, &mut xb);
        std::mem::swap(&mut y, &mut yb);
        f = f_new;
        iterations = k;
        let zn = (norm_sq(&x) + norm_sq(&y)).sqrt();
        if zn - 1.0 > max_feas {
            max_feas = zn - 1.0;
        }
        if let Some(t) = trace.as_mut() {
            t.rows.push(TraceRow {
                iter: k,
                objective: f,
                step_norm: step,
                on_boundary: (zn - 1.0).abs() <= 1e-12,
            });
        }
        if step <= cfg.step_tol {
            termination = Termination::StepTol;
            break;
        }
    }

    let ny = norm(&y);
    let slack = 1.0 - norm_sq(&x);
    let (x_star, recovered) = if ny <= cfg.y_zero_tol || slack <= cfg.y_zero_tol {
        (x.clone(), false)
    } else {
        (theta_completion(&x, &y), true)
    };

    let mut grad = p.op().apply(&x_star)?;
    matvecs += 1;
    let objective = 0.5 * dot(&x_star, &grad) + dot(c, &x_star);
    for i in 0..n {
        grad[i] += c[i];
    }
    let lambda_hat = boundary_multiplier(&x_star, &grad);
    let mut z = x;
    z.extend_from_slice(&y);
    Ok(TrsSolution {
        x: x_star,
        z_tilde: Some(z),
        lambda_hat,
        objective,
        lifted_objective: Some(f),
        eta,
        iterations,
        matvecs,
        recovered_via_theta: recovered,
        termination,
        max_decrease_violation: max_viol.max(0.0),
        max_feasibility_excess: max_feas,
        trace,
    })
}

/// Outcome of the double-start baseline: plain PG from zero and from one
/// uniform random start, keeping both runs for comparison.
#[derive(Clone, Debug)]
pub struct DoubleStartSolution {
    pub zero_run: TrsSolution,
    pub random_run: TrsSolution,
}

impl DoubleStartSolution {
    pub fn best(&self) -> &TrsSolution {
        if self.random_run.objective < self.zero_run.objective {
            &self.random_run
        } else {
            &self.zero_run
        }
    }

    pub fn best_is_random(&self) -> bool {
        self.random_run.objective < self.zero_run.objective
    }
}

pub fn run_double_start(p: &TrsProblem, cfg: &PgConfig) -> Result<DoubleStartSolution> {
    let n = p.dim();
    let zero_run = run_pg(p, &vec![0.0; n], cfg)?;
    let x0 = sample_uniform_ball(n, cfg.seed);
    let random_run = run_pg(p, &x0, cfg)?;
    Ok(DoubleStartSolution {
        zero_run,
        random_run,
    })
}

/// Two-stage baseline: shifts the Hessian by `min(l1, 0)` to make the
/// objective convex, runs plain PG from zero there (Lipschitz constant
/// `||H - min(l1,0) I||`), then lands on the sphere along the bottom
/// eigenvector when the shifted solution stayed inside. The reported
/// objective and trace rows of the inner run are those of the shifted
/// problem; the returned objective is the original one.
pub fn run_two_stage_convex(p: &TrsProblem, cfg: &PgConfig) -> Result<TrsSolution> {
    let spec = p.op().eigendecompose()?;
    let lam1 = spec.lambda_min();
    let n = p.dim();
    let shift = lam1.min(0.0);
    let u1 = spec.eigenvector(0).to_vec();

    let inner_problem = if shift < 0.0 {
        let sop = p.op().shifted(-shift);
        sop.set_spectrum(spec.shifted_copy(-shift));
        TrsProblem::new(sop, p.linear().to_vec())?
    } else {
        p.clone()
    };
    let inner = run_pg(&inner_problem, &vec![0.0; n], cfg)?;

    let mut x = inner.x;
    let mut recovered = false;
    if shift < 0.0 && 1.0 - norm_sq(&x) > cfg.y_zero_tol {
        x = theta_completion(&x, &u1);
        recovered = true;
    }

    let mut grad = p.op().apply(&x)?;
    let matvecs = inner.matvecs + 1;
    let objective = 0.5 * dot(&x, &grad) + dot(p.linear(), &x);
    for i in 0..n {
        grad[i] += p.linear()[i];
    }
    let lambda_hat = boundary_multiplier(&x, &grad);
    Ok(TrsSolution {
        x,
        z_tilde: None,
        lambda_hat,
        objective,
        lifted_objective: None,
        eta: inner.eta,
        iterations: inner.iterations,
        matvecs,
        recovered_via_theta: recovered,
        termination: inner.termination,
        max_decrease_violation: inner.max_decrease_violation,
        max_feasibility_excess: inner.max_feasibility_excess,
        trace: inner.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dist;
    use crate::operator::SymmetricOperator;

    fn example1() -> TrsProblem {
        let op = SymmetricOperator::from_diagonal(&[-13.0, 13.0]).unwrap();
        TrsProblem::new(op, vec![-250.0 / 169.0, 3456.0 / 169.0]).unwrap()
    }

    fn hard2() -> TrsProblem {
        let op = SymmetricOperator::from_diagonal(&[-2.0, 1.0]).unwrap();
        TrsProblem::new(op, vec![0.0, 0.5]).unwrap()
    }

    #[test]
    fn project_ball_cases() {
        assert_eq!(project_ball(&[0.3, 0.4]), vec![0.3, 0.4]);
        assert_eq!(project_ball(&[3.0, 4.0]), vec![0.6, 0.8]);
        assert_eq!(project_ball(&[0.0, 0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn pg_zero_start_reaches_example1_global() {
        let p = example1();
        let cfg = PgConfig {
            eta_policy: EtaPolicy::Explicit(1.0 / 13.0),
            ..Default::default()
        };
        let sol = run_pg(&p, &[0.0, 0.0], &cfg).unwrap();
        assert!(
            (sol.x[0] - 0.687).abs() < 1e-3 && (sol.x[1] + 0.726).abs() < 1e-3,
            "{:?}",
            sol.x
        );
        assert_eq!(sol.termination, Termination::StepTol);
        assert!(sol.max_decrease_violation <= 1e-12);
        assert!(sol.max_feasibility_excess <= 1e-14);
        assert_eq!(sol.matvecs, sol.iterations + 1);
    }

    #[test]
    fn pg_saddle_is_fixed_point() {
        let p = example1();
        let saddle = [-5.0 / 13.0, -12.0 / 13.0];
        let cfg = PgConfig {
            eta_policy: EtaPolicy::Explicit(1.0 / 13.0),
            ..Default::default()
        };
        let sol = run_pg(&p, &saddle, &cfg).unwrap();
        assert!(dist(&sol.x, &saddle) < 1e-12);
        assert!(sol.iterations <= 2);
    }

    #[test]
    fn pg_converges_to_interior_minimum() {
        let p = TrsProblem::new(SymmetricOperator::identity(2), vec![-0.2, 0.0]).unwrap();
        let sol = run_pg(&p, &[1.0, 0.0], &PgConfig::default()).unwrap();
        assert!(dist(&sol.x, &[0.2, 0.0]) < 1e-9, "{:?}", sol.x);
        assert_eq!(sol.lambda_hat, 0.0);
    }

    #[test]
    fn pg_rejects_infeasible_start() {
        let p = example1();
        assert!(matches!(
            run_pg(&p, &[1.0, 1.0], &PgConfig::default()),
            Err(TrsError::InvalidInput(_))
        ));
    }

    #[test]
    fn pg_rejects_bad_eta() {
        let p = example1();
        p.op().eigendecompose().unwrap();
        let cfg = PgConfig {
            eta_policy: EtaPolicy::Explicit(2.0 / 13.0),
            ..Default::default()
        };
        assert!(matches!(
            run_pg(&p, &[0.0, 0.0], &cfg),
            Err(TrsError::InvalidConfig(_))
        ));
    }

    #[test]
    fn lifted_with_zero_y_matches_pg_bitwise() {
        let p = example1();
        p.op().eigendecompose().unwrap();
        let cfg = PgConfig {
            eta_policy: EtaPolicy::Explicit(1.0 / 13.0),
            max_iters: 5000,
            ..Default::default()
        };
        let x0 = [0.3, -0.4];
        let pg = run_pg(&p, &x0, &cfg).unwrap();
        let z0 = [0.3, -0.4, 0.0, 0.0];
        let lifted = run_lifted_pg(&p, Some(&z0), &cfg).unwrap();
        assert_eq!(pg.iterations, lifted.iterations);
        for (a, b) in pg.x.iter().zip(&lifted.x) {
            assert_eq!(a.to_bits(), b.to_bits(), "iterates diverged");
        }
        let z = lifted.z_tilde.unwrap();
        assert_eq!(&z[2..], &[0.0, 0.0]);
        assert!(!lifted.recovered_via_theta);
    }

    #[test]
    fn lifted_recovers_hard_case_solution() {
        let p = hard2();
        let cfg = PgConfig {
            seed: 7,
            ..Default::default()
        };
        let sol = run_lifted_pg(&p, None, &cfg).unwrap();
        assert!(sol.recovered_via_theta);
        assert!((norm(&sol.x) - 1.0).abs() <= 1e-10);
        assert!((sol.objective + 25.0 / 24.0).abs() <= 1e-8, "{}", sol.objective);
        let f = sol.lifted_objective.unwrap();
        assert!((sol.objective - f).abs() <= 1e-9 * (1.0 + f.abs()));
        assert_eq!(sol.matvecs, 2 * sol.iterations + 3);
    }

    #[test]
    fn lifted_solves_example1_from_many_seeds() {
        let p = example1();
        for seed in 0..20 {
            let cfg = PgConfig {
                seed,
                ..Default::default()
            };
            let sol = run_lifted_pg(&p, None, &cfg).unwrap();
            assert!(
                (sol.objective + 15.511799421810743).abs() < 1e-8,
                "seed {seed}: {}",
                sol.objective
            );
        }
    }

    #[test]
    fn recover_boundary_examples() {
        let x = recover_boundary(&[0.0, -1.0 / 6.0], &[1.0 / 3.0, 0.0]).unwrap();
        assert!((x[0] - 35.0f64.sqrt() / 6.0).abs() < 1e-12);
        assert!((x[1] + 1.0 / 6.0).abs() < 1e-15);
        assert!((norm(&x) - 1.0).abs() <= 1e-12);

        let x = recover_boundary(&[0.0, 0.0], &[0.5, 0.0]).unwrap();
        assert_eq!(x, vec![1.0, 0.0]);

        // Already on the sphere with orthogonal direction: theta = 0.
        let x = recover_boundary(&[1.0, 0.0], &[0.0, 0.7]).unwrap();
        assert!(dist(&x, &[1.0, 0.0]) <= 1e-12);

        assert!(recover_boundary(&[0.5, 0.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn double_start_finds_example1_global() {
        let p = example1();
        let cfg = PgConfig {
            eta_policy: EtaPolicy::Explicit(1.0 / 13.0),
            seed: 3,
            ..Default::default()
        };
        let d = run_double_start(&p, &cfg).unwrap();
        assert!((d.best().objective + 15.511799421810743).abs() < 1e-8);
    }

    #[test]
    fn double_start_hard_case_needs_random_branch() {
        let p = hard2();
        let d = run_double_start(&p, &PgConfig::default()).unwrap();
        // Zero start stalls strictly inside; the random branch supplies the
        // boundary solution.
        assert!(d.best_is_random());
        assert!((norm(&d.best().x) - 1.0).abs() < 1e-9);
        assert!((d.best().objective + 25.0 / 24.0).abs() < 1e-8);
    }

    #[test]
    fn double_start_convex_branches_agree() {
        let p = TrsProblem::new(SymmetricOperator::identity(2), vec![-0.2, 0.0]).unwrap();
        let d = run_double_start(&p, &PgConfig::default()).unwrap();
        assert!((d.zero_run.objective - d.random_run.objective).abs() < 1e-8);
    }

    #[test]
    fn two_stage_solves_example1() {
        let p = example1();
        let sol = run_two_stage_convex(&p, &PgConfig::default()).unwrap();
        assert!(
            (sol.objective + 15.511799421810743).abs() < 1e-6,
            "{}",
            sol.objective
        );
    }

    #[test]
    fn two_stage_without_shift_matches_pg() {
        let p = TrsProblem::new(SymmetricOperator::from_diagonal(&[1.0, 3.0]).unwrap(), vec![
            -0.4, 2.0,
        ])
        .unwrap();
        p.op().eigendecompose().unwrap();
        let cfg = PgConfig::default();
        let two = run_two_stage_convex(&p, &cfg).unwrap();
        let pg = run_pg(&p, &[0.0, 0.0], &cfg).unwrap();
        for (a, b) in two.x.iter().zip(&pg.x) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert!(!two.recovered_via_theta);
    }

    #[test]
    fn two_stage_completes_hard_case_to_sphere() {
        let p = hard2();
        let sol = run_two_stage_convex(&p, &PgConfig::default()).unwrap();
        assert!(sol.recovered_via_theta);
        assert!((norm(&sol.x) - 1.0).abs() <= 1e-10);
        assert!((sol.objective + 25.0 / 24.0).abs() < 1e-8);
    }
}

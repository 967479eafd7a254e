//! Sphere-constrained solvers: the generalized projected gradient iteration,
//! its lifted 2n-dimensional variant with boundary recovery, and the
//! trace-shift reformulation that solves the sphere problem as a ball
//! problem with a larger admissible step.

use crate::ball::{run_lifted_pg, theta_completion, PgConfig};
use crate::error::{Result, TrsError};
use crate::linalg::{dot, norm, norm_sq};
use crate::problem::{QuadraticProblem, TrsProblem, TrseProblem};
use crate::sample::sample_uniform_sphere;
use crate::solution::{SolveTrace, Termination, TraceRow, TrsSolution};

/// Step-size selection for sphere iterations; valid steps live in (0, 1/L].
#[derive(Clone, Copy, Debug)]
pub enum EtaPolicyE {
    Explicit(f64),
    OneOverL,
}

#[derive(Clone, Debug)]
pub struct TrseConfig {
    pub eta_policy: EtaPolicyE,
    pub max_iters: usize,
    pub step_tol: f64,
    pub y_zero_tol: f64,
    pub seed: u64,
    pub record_trace: bool,
}

impl Default for TrseConfig {
    fn default() -> Self {
        Self {
            eta_policy: EtaPolicyE::OneOverL,
            max_iters: 500_000,
            step_tol: 1e-12,
            y_zero_tol: 1e-7,
            seed: 0,
            record_trace: false,
        }
    }
}

impl TrseConfig {
    fn validate(&self) -> Result<()> {
        if self.step_tol <= 0.0 || self.y_zero_tol <= 0.0 {
            return Err(TrsError::InvalidConfig("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// Steps beyond 1/L are rejected outright: none of the convergence
    /// guarantees survive there.
    pub fn resolve_eta(&self, l: f64) -> Result<f64> {
        match self.eta_policy {
            EtaPolicyE::Explicit(e) => {
                if e <= 0.0 || (l > 0.0 && e > 1.0 / l) {
                    return Err(TrsError::InvalidConfig(format!(
                        "explicit eta {e} outside (0, 1/L] with L = {l}"
                    )));
                }
                Ok(e)
            }
            EtaPolicyE::OneOverL => {
                if l == 0.0 {
                    Ok(1.0)
                } else {
                    Ok(1.0 / l)
                }
            }
        }
    }
}

/// Metric projection onto the unit sphere; `None` signals the
/// stationary-stop condition (zero input has no nearest point).
pub fn project_sphere(y: &[f64]) -> Option<Vec<f64>> {
    let n = norm(y);
    if n == 0.0 {
        None
    } else {
        Some(y.iter().map(|v| v / n).collect())
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

/// Generalized projected gradient on the sphere from a unit start. Stops on
/// step tolerance, iteration budget, or the stationary-stop signal (the
/// pre-projection vector vanished). The objective sequence is non-increasing
/// for steps in (0, 1/L].
pub fn run_gpg(p: &TrseProblem, x0: &[f64], cfg: &TrseConfig) -> Result<TrsSolution> {
    let n = p.dim();
    if x0.len() != n {
        return Err(TrsError::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if (norm(x0) - 1.0).abs() > 1e-12 {
        return Err(TrsError::InvalidInput("x0 must lie on the unit sphere".into()));
    }
    cfg.validate()?;
    let l = p.op().lipschitz_bound();
    let eta = cfg.resolve_eta(l)?;

    let op = p.op();
    let c = p.linear();
    let mut x = x0.to_vec();
    let mut hx = vec![0.0; n];
    op.apply_into(&x, &mut hx);
    let mut matvecs = 1usize;
    let mut f = 0.5 * dot(&x, &hx) + dot(c, &x);

    let mut trace = cfg.record_trace.then(SolveTrace::default);
    let mut max_viol = f64::NEG_INFINITY;
    let mut max_feas = (norm(&x) - 1.0).abs();
    if let Some(t) = trace.as_mut() {
        t.rows.push(TraceRow {
            iter: 0,
            objective: f,
            step_norm: 0.0,
            on_boundary: true,
        });
    }

    let mut s = vec![0.0; n];
    let mut termination = Termination::MaxIters;
    let mut iterations = 0usize;
    for k in 1..=cfg.max_iters {
        let mut grad_sq = 0.0;
        for i in 0..n {
            let g = hx[i] + c[i];
            grad_sq += g * g;
            s[i] = x[i] - eta * g;
        }
        let ns = norm(&s);
        if ns == 0.0 {
            termination = Termination::StationaryStop;
            break;
        }
        let xn: Vec<f64> = s.iter().map(|v| v / ns).collect();
        let step_sq = step_dist_sq(&xn, &x);
        let step = step_sq.sqrt();
        op.apply_into(&xn, &mut hx);
        matvecs += 1;
        let f_new = 0.5 * dot(&xn, &hx) + dot(c, &xn);
        // Projection decrease bound: (||x+ - s||^2 - ||x - s||^2) / (2 eta)
        // with ||x+ - s|| = |1 - ||s||| and ||x - s|| = eta ||grad||.
        let rhs = ((ns - 1.0) * (ns - 1.0) - eta * eta * grad_sq) / (2.0 * eta);
        let viol = (f_new - f - rhs) / (1.0 + f.abs());
        if viol > max_viol {
            max_viol = viol;
        }
        x = xn;
        f = f_new;
        iterations = k;
        let nx = norm(&x);
        if (nx - 1.0).abs() > max_feas {
            max_feas = (nx - 1.0).abs();
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
    let lambda_hat = -dot(&x, &grad) / norm_sq(&x);
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

/// Normalized gradient iteration on the lifted sphere problem over
/// z = (x, y), followed by the boundary recovery. Initialized with `y0 = 0`
/// the x-iterates coincide bitwise with `run_gpg`.
pub fn run_lifted_gpg(
    p: &TrseProblem,
    z0: Option<&[f64]>,
    cfg: &TrseConfig,
) -> Result<TrsSolution> {
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
            if (norm(z) - 1.0).abs() > 1e-12 {
                return Err(TrsError::InvalidInput(
                    "z0 must lie on the unit sphere".into(),
                ));
            }
            z.to_vec()
        }
        None => sample_uniform_sphere(2 * n, cfg.seed),
    };
    let l = p.op().lipschitz_bound();
    let eta = cfg.resolve_eta(l)?;

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
    let mut max_feas = ((norm_sq(&x) + norm_sq(&y)).sqrt() - 1.0).abs();
    if let Some(t) = trace.as_mut() {
        t.rows.push(TraceRow {
            iter: 0,
            objective: f,
            step_norm: 0.0,
            on_boundary: true,
        });
    }

    let mut sx = vec![0.0; n];
    let mut sy = vec![0.0; n];
    let mut termination = Termination::MaxIters;
    let mut iterations = 0usize;
    for k in 1..=cfg.max_iters {
        let mut grad_sq = 0.0;
        for i in 0..n {
            let g = hx[i] + c[i];
            grad_sq += g * g;
            sx[i] = x[i] - eta * g;
        }
        for i in 0..n {
            let g = hy[i];
            grad_sq += g * g;
            sy[i] = y[i] - eta * g;
        }
        let ns_sq = norm_sq(&sx) + norm_sq(&sy);
        let ns = ns_sq.sqrt();
        if ns == 0.0 {
            termination = Termination::StationaryStop;
            break;
        }
        let xn: Vec<f64> = sx.iter().map(|v| v / ns).collect();
        let yn: Vec<f64> = sy.iter().map(|v| v / ns).collect();
        let step_sq = step_dist_sq(&xn, &x) + step_dist_sq(&yn, &y);
        let step = step_sq.sqrt();
        op.apply_into(&xn, &mut hx);
        op.apply_into(&yn, &mut hy);
        matvecs += 2;
        let f_new = 0.5 * (dot(&xn, &hx) + dot(&yn, &hy)) + dot(c, &xn);
        let rhs = ((ns - 1.0) * (ns - 1.0) - eta * eta * grad_sq) / (2.0 * eta);
        let viol = (f_new - f - rhs) / (1.0 + f.abs());
        if viol > max_viol {
            max_viol = viol;
        }
        x = xn;
        y = yn;
        f = f_new;
        iterations = k;
        let zn = (norm_sq(&x) + norm_sq(&y)).sqrt();
        if (zn - 1.0).abs() > max_feas {
            max_feas = (zn - 1.0).abs();
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
    let lambda_hat = -dot(&x_star, &grad) / norm_sq(&x_star);
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

/// Solves the sphere problem by shifting the Hessian by tau = tr(H)/n and
/// solving the resulting ball problem with the lifted solver. The shifted
/// Hessian is never positive semidefinite for non-scalar H, so the ball
/// solution lands on the sphere; its admissible step 2/||H - tau I|| always
/// exceeds the sphere iteration cap 1/||H||. Scalar H short-circuits to the
/// closed-form minimizer -c/||c||.
pub fn run_tau_shift(p: &TrseProblem, cfg: &PgConfig) -> Result<TrsSolution> {
    let op = p.op();
    let n = p.dim();
    let c = p.linear();
    let tau = op.diagonal_mean();
    let shifted = op.shifted(-tau);
    if let Ok(spec) = op.eigendecompose() {
        shifted.set_spectrum(spec.shifted_copy(-tau));
    }
    let l_h = op.lipschitz_bound();
    let l_s = shifted.lipschitz_bound();

    if l_s <= 1e-12 * l_h {
        // Scalar matrix: one-step closed form.
        let cn = norm(c);
        let x: Vec<f64> = if cn == 0.0 {
            let mut e = vec![0.0; n];
            e[0] = 1.0;
            e
        } else {
            c.iter().map(|v| -v / cn).collect()
        };
        let mut grad = op.apply(&x)?;
        let objective = 0.5 * dot(&x, &grad) + dot(c, &x);
        for i in 0..n {
            grad[i] += c[i];
        }
        let lambda_hat = -dot(&x, &grad);
        return Ok(TrsSolution {
            x,
            z_tilde: None,
            lambda_hat,
            objective,
            lifted_objective: None,
            eta: 0.0,
            iterations: 0,
            matvecs: 1,
            recovered_via_theta: false,
            termination: Termination::StepTol,
            max_decrease_violation: 0.0,
            max_feasibility_excess: 0.0,
            trace: None,
        });
    }

    let ball = TrsProblem::new(shifted, c.to_vec())?;
    let mut sol = run_lifted_pg(&ball, None, cfg)?;

    let boundary_gap = (norm(&sol.x) - 1.0).abs();
    if boundary_gap > 1e-8 {
        return Err(TrsError::SolverAnomaly(format!(
            "trace-shift solution left the sphere by {boundary_gap:.3e}"
        )));
    }

    // Report the sphere objective; the tau term is constant on the sphere.
    let mut grad = op.apply(&sol.x)?;
    sol.matvecs += 1;
    sol.objective = 0.5 * dot(&sol.x, &grad) + dot(c, &sol.x);
    for i in 0..n {
        grad[i] += c[i];
    }
    sol.lambda_hat = -dot(&sol.x, &grad) / norm_sq(&sol.x);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dist;
    use crate::operator::SymmetricOperator;

    fn example3() -> TrseProblem {
        let op = SymmetricOperator::from_diagonal(&[27.0, 53.0]).unwrap();
        TrseProblem::new(op, vec![-4.0, 9.0]).unwrap()
    }

    #[test]
    fn project_sphere_cases() {
        assert_eq!(project_sphere(&[3.0, 4.0]).unwrap(), vec![0.6, 0.8]);
        assert_eq!(project_sphere(&[1.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        assert!(project_sphere(&[0.0, 0.0]).is_none());
    }

    #[test]
    fn gpg_converges_to_local_minimizer_from_nearby() {
        let p = example3();
        p.op().eigendecompose().unwrap();
        // Exact local non-global minimizer coordinates via its multiplier.
        let mu = -31.400159616850715;
        let x_loc = [4.0 / (27.0 + mu), -9.0 / (53.0 + mu)];
        let start = project_sphere(&[x_loc[0] + 5e-3, x_loc[1]]).unwrap();
        let sol = run_gpg(&p, &start, &TrseConfig::default()).unwrap();
        assert!(dist(&sol.x, &x_loc) < 1e-6, "{:?}", sol.x);
        assert!(sol.objective > 8.154188346182128 + 0.1);
        assert!(sol.max_decrease_violation <= 1e-12);
        assert!(sol.max_feasibility_excess <= 1e-14);
    }

    #[test]
    fn gpg_scalar_matrix_one_step() {
        let l = 4.0;
        let p = TrseProblem::new(SymmetricOperator::scaled_identity(3, l), vec![3.0, 0.0, 4.0])
            .unwrap();
        p.op().eigendecompose().unwrap();
        let cfg = TrseConfig {
            eta_policy: EtaPolicyE::Explicit(1.0 / l),
            record_trace: true,
            ..Default::default()
        };
        let sol = run_gpg(&p, &[0.0, 1.0, 0.0], &cfg).unwrap();
        assert!(dist(&sol.x, &[-0.6, 0.0, -0.8]) <= 1e-12);
        assert!(sol.iterations <= 2);
        let trace = sol.trace.unwrap();
        let f1 = trace.rows[1].objective;
        assert!((f1 - (l / 2.0 - 5.0)).abs() <= 1e-12);
    }

    #[test]
    fn gpg_stationary_stop_signal() {
        // H = diag(2, 1), c = 0, eta = 1/2: from e1 the pre-projection
        // vector is exactly zero.
        let p = TrseProblem::new(SymmetricOperator::from_diagonal(&[2.0, 1.0]).unwrap(), vec![
            0.0, 0.0,
        ])
        .unwrap();
        p.op().eigendecompose().unwrap();
        let cfg = TrseConfig {
            eta_policy: EtaPolicyE::Explicit(0.5),
            ..Default::default()
        };
        let sol = run_gpg(&p, &[1.0, 0.0], &cfg).unwrap();
        assert_eq!(sol.termination, Termination::StationaryStop);
        assert_eq!(sol.x, vec![1.0, 0.0]);
    }

    #[test]
    fn gpg_fixed_point_at_bottom_eigenvector() {
        let p = TrseProblem::new(
            SymmetricOperator::from_diagonal(&[-2.0, 1.0]).unwrap(),
            vec![0.0, 0.0],
        )
        .unwrap();
        let sol = run_gpg(&p, &[1.0, 0.0], &TrseConfig::default()).unwrap();
        assert!(dist(&sol.x, &[1.0, 0.0]) <= 1e-14);
        assert!(sol.iterations <= 2);
    }

    #[test]
    fn gpg_rejects_eta_above_one_over_l() {
        let p = example3();
        p.op().eigendecompose().unwrap();
        let cfg = TrseConfig {
            eta_policy: EtaPolicyE::Explicit(1.5 / 53.0),
            ..Default::default()
        };
        assert!(matches!(
            run_gpg(&p, &[1.0, 0.0], &cfg),
            Err(TrsError::InvalidConfig(_))
        ));
    }

    #[test]
    fn lifted_gpg_with_zero_y_matches_gpg_bitwise() {
        let p = example3();
        p.op().eigendecompose().unwrap();
        let cfg = TrseConfig {
            max_iters: 3000,
            ..Default::default()
        };
        let x0 = [0.6, 0.8];
        let gpg = run_gpg(&p, &x0, &cfg).unwrap();
        let z0 = [0.6, 0.8, 0.0, 0.0];
        let lifted = run_lifted_gpg(&p, Some(&z0), &cfg).unwrap();
        assert_eq!(gpg.iterations, lifted.iterations);
        for (a, b) in gpg.x.iter().zip(&lifted.x) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn lifted_gpg_matches_reference_on_example3() {
        let p = example3();
        for seed in 0..10 {
            let cfg = TrseConfig {
                seed,
                ..Default::default()
            };
            let sol = run_lifted_gpg(&p, None, &cfg).unwrap();
            assert!(
                (sol.objective - 8.154188346182128).abs() < 1e-8,
                "seed {seed}: {}",
                sol.objective
            );
            assert!((norm(&sol.x) - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn lifted_gpg_scalar_matrix_one_step() {
        let l = 4.0;
        let p = TrseProblem::new(SymmetricOperator::scaled_identity(2, l), vec![3.0, 4.0]).unwrap();
        p.op().eigendecompose().unwrap();
        let cfg = TrseConfig {
            eta_policy: EtaPolicyE::Explicit(1.0 / l),
            record_trace: true,
            ..Default::default()
        };
        let z0 = [0.0, 0.0, 1.0, 0.0];
        let sol = run_lifted_gpg(&p, Some(&z0), &cfg).unwrap();
        assert!(dist(&sol.x, &[-0.6, -0.8]) <= 1e-12);
        let trace = sol.trace.as_ref().unwrap();
        assert!((trace.rows[1].objective - (l / 2.0 - 5.0)).abs() <= 1e-12);
    }

    #[test]
    fn tau_shift_solves_example3() {
        let p = example3();
        assert_eq!(p.op().diagonal_mean(), 40.0);
        let cfg = PgConfig {
            eta_policy: crate::ball::EtaPolicy::FractionOfTwoOverL(0.99),
            seed: 5,
            ..Default::default()
        };
        let sol = run_tau_shift(&p, &cfg).unwrap();
        assert!((norm(&sol.x) - 1.0).abs() <= 1e-8);
        assert!(
            (sol.objective - 8.154188346182128).abs() < 1e-8,
            "{}",
            sol.objective
        );
        // Shifted Hessian diag(-13, 13): admissible step 2/13 beats 1/53.
        assert!((sol.eta - 0.99 * 2.0 / 13.0).abs() < 1e-12);
    }

    #[test]
    fn tau_shift_scalar_branch() {
        let p = TrseProblem::new(SymmetricOperator::scaled_identity(2, 5.0), vec![3.0, 4.0])
            .unwrap();
        let sol = run_tau_shift(&p, &PgConfig::default()).unwrap();
        assert!(dist(&sol.x, &[-0.6, -0.8]) <= 1e-15);
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn tau_shift_boundary_over_seeds() {
        let p = example3();
        for seed in 0..10 {
            let cfg = PgConfig {
                eta_policy: crate::ball::EtaPolicy::FractionOfTwoOverL(0.99),
                seed,
                ..Default::default()
            };
            let sol = run_tau_shift(&p, &cfg).unwrap();
            assert!((norm(&sol.x) - 1.0).abs() <= 1e-8, "seed {seed}");
        }
    }
}

//! Cross-cutting solver invariants: feasibility of every iterate, descent
//! inequalities, the gradient-mapping residual certificate at termination,
//! value preservation of the boundary recovery, and the empirical
//! global-convergence behavior of the lifted solvers on a mixed suite.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use trs_core::{
    generate, kkt_residuals, run_gpg, run_lifted_gpg, run_lifted_pg, run_pg, run_tau_shift,
    sample_uniform_sphere, solve_trs_reference, solve_trse_reference, EtaPolicy, GenKind,
    PgConfig, QuadraticProblem, SymmetricOperator, Termination, TrsProblem, TrseConfig,
};

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn example1() -> TrsProblem {
    let op = SymmetricOperator::from_diagonal(&[-13.0, 13.0]).unwrap();
    TrsProblem::new(op, vec![-250.0 / 169.0, 3456.0 / 169.0]).unwrap()
}

fn random_instance(n: usize, seed: u64) -> TrsProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = rng.gen_range(-2.0..2.0);
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    let op = SymmetricOperator::from_dense(n, &entries).unwrap();
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    TrsProblem::new(op, c).unwrap()
}

#[test]
fn traces_are_monotone_and_feasible() {
    let p = example1();
    let cfg = PgConfig {
        eta_policy: EtaPolicy::Explicit(1.0 / 13.0),
        record_trace: true,
        max_iters: 20_000,
        ..Default::default()
    };
    for seed in 0..5u64 {
        let sol = run_lifted_pg(&p, None, &PgConfig { seed, ..cfg.clone() }).unwrap();
        let trace = sol.trace.as_ref().unwrap();
        for w in trace.rows.windows(2) {
            assert!(
                w[1].objective <= w[0].objective + 1e-12 * (1.0 + w[0].objective.abs()),
                "objective increased at iter {}",
                w[1].iter
            );
        }
        assert!(sol.max_feasibility_excess <= 1e-14);
        assert!(sol.max_decrease_violation <= 1e-12);
    }
}

#[test]
fn pg_termination_satisfies_gradient_mapping_bound() {
    let instances = vec![
        example1(),
        random_instance(4, 5),
        TrsProblem::new(SymmetricOperator::identity(3), vec![-0.2, 0.1, 0.4]).unwrap(),
    ];
    for (k, p) in instances.iter().enumerate() {
        p.op().eigendecompose().unwrap();
        let cfg = PgConfig {
            step_tol: 1e-12,
            max_iters: 2_000_000,
            ..Default::default()
        };
        let sol = run_pg(p, &vec![0.0; p.dim()], &cfg).unwrap();
        assert_eq!(sol.termination, Termination::StepTol, "instance {k}");
        let kkt = kkt_residuals(p, &sol.x, sol.lambda_hat).unwrap();
        let bound = cfg.step_tol * (2.0 + p.op().lipschitz_bound()) / sol.eta;
        assert!(
            kkt.stationarity_residual <= bound,
            "instance {k}: residual {} vs bound {bound}",
            kkt.stationarity_residual
        );
        assert!(kkt.feasibility_residual <= 1e-12);
    }
}

#[test]
fn lifted_recovery_preserves_value() {
    // Hard-case instances exercise the theta step; the recovered objective
    // must match the lifted objective at convergence.
    for seed in 0..20u64 {
        let p = match generate(GenKind::Hard2, 4, seed).unwrap() {
            trs_core::AnyProblem::Ball(p) => p,
            _ => unreachable!(),
        };
        let sol = run_lifted_pg(&p, None, &PgConfig { seed, ..Default::default() }).unwrap();
        let f = sol.lifted_objective.unwrap();
        assert!(
            (sol.objective - f).abs() <= 1e-9 * (1.0 + f.abs()),
            "seed {seed}: q = {}, f = {f}",
            sol.objective
        );
        if sol.recovered_via_theta {
            assert!((norm(&sol.x) - 1.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn lifted_pg_matches_oracle_on_mixed_suite() {
    // Empirical form of the almost-sure global convergence: a mixed suite of
    // cases, several seeds each, every objective within 1e-6 of the oracle.
    let mut suite: Vec<TrsProblem> = vec![example1()];
    suite.push(match generate(GenKind::Hard2, 4, 3).unwrap() {
        trs_core::AnyProblem::Ball(p) => p,
        _ => unreachable!(),
    });
    suite.push(match generate(GenKind::Ill, 4, 9).unwrap() {
        trs_core::AnyProblem::Ball(p) => p,
        _ => unreachable!(),
    });
    for seed in 0..5u64 {
        suite.push(random_instance(3 + (seed as usize % 5), 100 + seed));
    }
    for (idx, p) in suite.iter().enumerate() {
        let (_, kkt, _) = solve_trs_reference(p, 1e-10).unwrap();
        let f_star = p.objective(&kkt.x);
        for seed in 0..10u64 {
            let sol = run_lifted_pg(p, None, &PgConfig { seed, ..Default::default() }).unwrap();
            assert!(
                sol.objective - f_star <= 1e-6 * (1.0 + f_star.abs())
                    && sol.objective - f_star >= -1e-6 * (1.0 + f_star.abs()),
                "instance {idx}, seed {seed}: {} vs {}",
                sol.objective,
                f_star
            );
        }
    }
}

#[test]
fn lifted_gpg_matches_oracle_on_random_spheres() {
    for seed in 0..20u64 {
        let n = 2 + (seed as usize % 5);
        let p = random_instance(n, 300 + seed).to_sphere();
        let (xr, _) = solve_trse_reference(&p, 1e-10).unwrap();
        let f_star = p.objective(&xr);
        for s in 0..3u64 {
            let sol = run_lifted_gpg(&p, None, &TrseConfig { seed: s, ..Default::default() })
                .unwrap();
            assert!(
                (sol.objective - f_star).abs() <= 1e-6 * (1.0 + f_star.abs()),
                "seed {seed}/{s}: {} vs {f_star}",
                sol.objective
            );
            assert!(sol.max_decrease_violation <= 1e-12);
            assert!(sol.max_feasibility_excess <= 1e-14);
        }
    }
}

#[test]
fn tau_shift_step_dominates_sphere_cap() {
    for seed in 0..20u64 {
        let n = 2 + (seed as usize % 6);
        let p = random_instance(n, 700 + seed).to_sphere();
        let spec = p.op().eigendecompose().unwrap();
        let l_h = spec.spectral_norm();
        let tau = p.op().diagonal_mean();
        let shifted = p.op().shifted(-tau);
        let l_s = shifted.eigendecompose().unwrap().spectral_norm();
        assert!(l_s < 2.0 * l_h, "seed {seed}: ||H - tau I|| = {l_s}, ||H|| = {l_h}");
        assert!(2.0 / l_s > 1.0 / l_h, "seed {seed}: no step-size gain");
        let lam_min_shifted = shifted.eigendecompose().unwrap().lambda_min();
        assert!(lam_min_shifted < 0.0, "seed {seed}: shifted Hessian is PSD");

        let sol = run_tau_shift(&p, &PgConfig { seed, ..Default::default() }).unwrap();
        assert!((norm(&sol.x) - 1.0).abs() <= 1e-8, "seed {seed}");
    }
}

#[test]
fn gpg_runs_stay_on_sphere_and_descend() {
    for seed in 0..10u64 {
        let p = random_instance(4, 900 + seed).to_sphere();
        let x0 = sample_uniform_sphere(4, seed);
        let cfg = TrseConfig {
            record_trace: true,
            max_iters: 50_000,
            ..Default::default()
        };
        let sol = run_gpg(&p, &x0, &cfg).unwrap();
        assert!(sol.max_feasibility_excess <= 1e-14, "seed {seed}");
        assert!(sol.max_decrease_violation <= 1e-12, "seed {seed}");
        let trace = sol.trace.as_ref().unwrap();
        for w in trace.rows.windows(2) {
            assert!(w[1].objective <= w[0].objective + 1e-12 * (1.0 + w[0].objective.abs()));
        }
    }
}

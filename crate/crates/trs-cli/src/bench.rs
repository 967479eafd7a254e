//! Small benchmarking harness: per-method iteration counts, wall time,
//! mat-vec accounting, and accuracy against the oracle.

use std::time::Instant;

use trs_core::{AnyProblem, OracleConfig, Result};

use crate::method::{dispatch, Method, RunOptions, StartSpec};

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub instance: String,
    pub method: String,
    pub reps: usize,
    pub mean_iterations: f64,
    pub mean_matvecs: f64,
    /// Mat-vecs per iteration, rounded to the nearest integer
    /// (2 for the lifted solvers, 1 for plain projected gradient).
    pub matvecs_per_iteration: f64,
    pub mean_millis: f64,
    pub max_abs_error_vs_oracle: f64,
}

pub fn run_bench(
    instances: &[(String, AnyProblem)],
    methods: &[Method],
    reps: usize,
    seed_base: u64,
    opts: &RunOptions,
    oracle_cfg: &OracleConfig,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for (name, problem) in instances {
        let oracle_out = dispatch(problem, Method::Oracle, opts, oracle_cfg)?;
        for &method in methods {
            let mut iter_sum = 0usize;
            let mut matvec_sum = 0usize;
            let mut time_sum = 0.0f64;
            let mut err_max = 0.0f64;
            for rep in 0..reps {
                let run_opts = RunOptions {
                    seed: seed_base + rep as u64,
                    start: StartSpec::Auto,
                    ..opts.clone()
                };
                let t0 = Instant::now();
                let out = dispatch(problem, method, &run_opts, oracle_cfg)?;
                time_sum += t0.elapsed().as_secs_f64() * 1e3;
                iter_sum += out.iterations;
                matvec_sum += out.matvecs;
                let err = (out.objective - oracle_out.objective).abs();
                if err > err_max {
                    err_max = err;
                }
            }
            let mean_iterations = iter_sum as f64 / reps as f64;
            let mean_matvecs = matvec_sum as f64 / reps as f64;
            let per_iter = if iter_sum > 0 {
                (matvec_sum as f64 / iter_sum as f64).round()
            } else {
                0.0
            };
            rows.push(BenchRow {
                instance: name.clone(),
                method: method.name().to_string(),
                reps,
                mean_iterations,
                mean_matvecs,
                matvecs_per_iteration: per_iter,
                mean_millis: time_sum / reps as f64,
                max_abs_error_vs_oracle: err_max,
            });
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "instance,method,reps,mean_iterations,mean_matvecs,matvecs_per_iteration,mean_millis,max_abs_error_vs_oracle\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.3},{:e}\n",
            r.instance,
            r.method,
            r.reps,
            r.mean_iterations,
            r.mean_matvecs,
            r.matvecs_per_iteration,
            r.mean_millis,
            r.max_abs_error_vs_oracle
        ));
    }
    out
}

/// Plain-text table for terminal output.
pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:<14} {:<10} {:>6} {:>12} {:>12} {:>8} {:>10} {:>14}\n",
        "instance", "method", "reps", "mean iters", "mean matvec", "mv/iter", "mean ms", "err vs oracle"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<14} {:<10} {:>6} {:>12.1} {:>12.1} {:>8} {:>10.3} {:>14.3e}\n",
            r.instance,
            r.method,
            r.reps,
            r.mean_iterations,
            r.mean_matvecs,
            r.matvecs_per_iteration,
            r.mean_millis,
            r.max_abs_error_vs_oracle
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use trs_core::{generate, GenKind};

    #[test]
    fn matvec_accounting_separates_lifted_from_plain() {
        let problem = generate(GenKind::Example1, 2, 0).unwrap();
        let instances = vec![("example1".to_string(), problem)];
        let methods = [Method::Pg, Method::Alg1, Method::Oracle];
        let opts = RunOptions {
            max_iters: 20_000,
            ..Default::default()
        };
        let rows = run_bench(
            &instances,
            &methods,
            2,
            0,
            &opts,
            &OracleConfig::default(),
        )
        .unwrap();
        let pg = rows.iter().find(|r| r.method == "pg").unwrap();
        let alg1 = rows.iter().find(|r| r.method == "alg1").unwrap();
        let oracle = rows.iter().find(|r| r.method == "oracle").unwrap();
        assert_eq!(pg.matvecs_per_iteration, 1.0);
        assert_eq!(alg1.matvecs_per_iteration, 2.0);
        assert_eq!(oracle.mean_iterations, 0.0);
    }
}

//! Basin-of-attraction experiments: many seeded runs of one method, each
//! limit assigned to a known KKT point of the instance.

use rayon::prelude::*;

use trs_core::oracle::enumerate_kkt_with;
use trs_core::{AnyProblem, KktPoint, OracleConfig, QuadraticProblem, Result};

use crate::method::{dispatch, Method, RunOptions, StartSpec};

/// Euclidean assignment radius for matching a run's limit to a KKT point.
pub const ASSIGN_TOL: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct BasinTrial {
    pub seed: u64,
    /// Index into the sorted KKT list, or None when unassigned.
    pub limit_index: Option<usize>,
    pub iterations: usize,
    pub final_objective: f64,
    /// Error text for trials whose solver run failed; recorded, not fatal.
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BasinReport {
    pub trials: Vec<BasinTrial>,
    /// Known KKT points sorted by objective (index 0 is the global one).
    pub kkt_points: Vec<KktPoint>,
    pub kkt_objectives: Vec<f64>,
    /// Per-point trial counts plus the unassigned tally at the end.
    pub counts: Vec<usize>,
    pub unassigned: usize,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Nearest enumerated KKT point within the assignment radius.
pub fn match_limit(x: &[f64], kkt: &[KktPoint]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, k) in kkt.iter().enumerate() {
        let d = dist(x, &k.x);
        if d <= ASSIGN_TOL && best.map_or(true, |(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

pub fn limit_label(index: Option<usize>) -> String {
    match index {
        Some(0) => "global".to_string(),
        Some(i) => format!("kkt{i}"),
        None => "unassigned".to_string(),
    }
}

/// Runs `trials` seeded trials of `method` and assigns every limit.
pub fn run_basin(
    problem: &AnyProblem,
    method: Method,
    trials: u64,
    seed_base: u64,
    opts: &RunOptions,
    oracle_cfg: &OracleConfig,
) -> Result<BasinReport> {
    let kkt_points = match problem {
        AnyProblem::Ball(p) => enumerate_kkt_with(oracle_cfg, p, 1e-9)?,
        AnyProblem::Sphere(p) => enumerate_kkt_with(oracle_cfg, p, 1e-9)?,
    };
    let kkt_objectives: Vec<f64> = kkt_points
        .iter()
        .map(|k| match problem {
            AnyProblem::Ball(p) => p.objective(&k.x),
            AnyProblem::Sphere(p) => p.objective(&k.x),
        })
        .collect();

    let mut trial_rows: Vec<BasinTrial> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = seed_base + t;
            let run_opts = RunOptions {
                seed,
                start: StartSpec::Seed(seed),
                ..opts.clone()
            };
            match dispatch(problem, method, &run_opts, oracle_cfg) {
                Ok(out) => BasinTrial {
                    seed,
                    limit_index: match_limit(&out.x, &kkt_points),
                    iterations: out.iterations,
                    final_objective: out.objective,
                    error: None,
                },
                Err(e) => BasinTrial {
                    seed,
                    limit_index: None,
                    iterations: 0,
                    final_objective: f64::NAN,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    trial_rows.sort_by_key(|t| t.seed);

    let mut counts = vec![0usize; kkt_points.len()];
    let mut unassigned = 0usize;
    for t in &trial_rows {
        match t.limit_index {
            Some(i) => counts[i] += 1,
            None => unassigned += 1,
        }
    }
    Ok(BasinReport {
        trials: trial_rows,
        kkt_points,
        kkt_objectives,
        counts,
        unassigned,
    })
}

/// CSV with the pinned header plus an aggregate block in comment lines.
pub fn basin_csv(report: &BasinReport) -> String {
    let mut out = String::from("seed,limit_index,limit_label,iterations,final_objective\n");
    for t in &report.trials {
        let idx = t.limit_index.map(|i| i as i64).unwrap_or(-1);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            t.seed,
            idx,
            limit_label(t.limit_index),
            t.iterations,
            t.final_objective
        ));
    }
    out.push_str(&format!("# trials,{}\n", report.trials.len()));
    for (i, (count, q)) in report
        .counts
        .iter()
        .zip(&report.kkt_objectives)
        .enumerate()
    {
        out.push_str(&format!(
            "# {},count={},objective={}\n",
            limit_label(Some(i)),
            count,
            q
        ));
    }
    out.push_str(&format!("# unassigned,count={}\n", report.unassigned));
    out
}

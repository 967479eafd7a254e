//! Demonstration of how a coarse objective comparison makes the double-start
//! baseline pick a local non-global minimizer once the optimality gap falls
//! inside the comparison window.

use trs_core::oracle::enumerate_kkt_with;
use trs_core::{
    generate, run_pg, sample_uniform_ball, AnyProblem, GenKind, OracleConfig, PgConfig,
    QuadraticProblem, Result, TrsError,
};

use crate::basin::match_limit;

#[derive(Clone, Debug)]
pub struct GapRow {
    pub tau: f64,
    pub global_value: f64,
    pub local_value: f64,
    pub gap: f64,
    /// Width of the coarse comparison window `tol * (1 + |q0|)`.
    pub window: f64,
    /// Whether the coarse comparison picked a non-global point.
    pub wrong_selection: bool,
    pub zero_start_value: f64,
    pub random_start_value: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct GapDemoReport {
    pub rows: Vec<GapRow>,
    pub gaps_strictly_decreasing: bool,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// For each tau: enumerate the KKT points of the parameterized family,
/// report the global and local non-global values, run the double-start
/// comparison with the coarse tolerance, and record whether it picked the
/// wrong point. A tie inside the window is resolved toward the random-start
/// branch, the selection an inaccurate comparison cannot rule out.
pub fn run_gap_demo(
    taus: &[f64],
    compare_tol: f64,
    oracle_cfg: &OracleConfig,
) -> Result<GapDemoReport> {
    if taus.is_empty() {
        return Err(TrsError::InvalidConfig("need at least one tau".into()));
    }
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        let problem = generate(GenKind::Example2 { tau }, 2, 0)?;
        let p = match &problem {
            AnyProblem::Ball(p) => p.clone(),
            AnyProblem::Sphere(_) => unreachable!(),
        };
        let points = enumerate_kkt_with(oracle_cfg, &p, 1e-9)?;
        if points.is_empty() {
            return Err(TrsError::SolverAnomaly(
                "no KKT points enumerated for the gap family".into(),
            ));
        }
        let global_value = p.objective(&points[0].x);
        // First KKT point at a different location: the local non-global
        // minimizer for tau > 0, the mirror global minimizer at tau = 0.
        let local = points
            .iter()
            .skip(1)
            .find(|k| dist(&k.x, &points[0].x) > 1e-6);
        let local_value = local.map(|k| p.objective(&k.x)).unwrap_or(global_value);
        let gap = local_value - global_value;

        // Double-start: zero start plus the first seeded start whose limit is
        // the non-global point.
        let cfg = PgConfig::default();
        let zero_run = run_pg(&p, &[0.0, 0.0], &cfg)?;
        let mut random_value = None;
        if let Some(local_pt) = local {
            for seed in 0..200u64 {
                let x0 = sample_uniform_ball(2, seed);
                let run = run_pg(&p, &x0, &cfg)?;
                if match_limit(&run.x, std::slice::from_ref(local_pt)) == Some(0) {
                    random_value = Some(run.objective);
                    break;
                }
            }
        }
        let window = compare_tol * (1.0 + zero_run.objective.abs());
        let wrong_selection = match random_value {
            Some(rv) => {
                let indistinguishable = (rv - zero_run.objective).abs() <= window;
                let selected = if indistinguishable { rv } else { rv.min(zero_run.objective) };
                selected > global_value + 1e-9 * (1.0 + global_value.abs())
            }
            None => false,
        };
        rows.push(GapRow {
            tau,
            global_value,
            local_value,
            gap,
            window,
            wrong_selection,
            zero_start_value: zero_run.objective,
            random_start_value: random_value,
        });
    }
    let gaps_strictly_decreasing = rows.windows(2).all(|w| w[1].gap < w[0].gap);
    Ok(GapDemoReport {
        rows,
        gaps_strictly_decreasing,
    })
}

pub fn gap_demo_csv(report: &GapDemoReport) -> String {
    let mut out = String::from(
        "tau,global_value,local_value,gap,window,wrong_selection,zero_start_value,random_start_value\n",
    );
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.tau,
            r.global_value,
            r.local_value,
            r.gap,
            r.window,
            r.wrong_selection,
            r.zero_start_value,
            r.random_start_value
                .map(|v| v.to_string())
                .unwrap_or_else(|| "nan".into())
        ));
    }
    out.push_str(&format!(
        "# gaps_strictly_decreasing,{}\n",
        report.gaps_strictly_decreasing
    ));
    out
}

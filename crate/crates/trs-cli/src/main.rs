use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use trs_cli::basin::{basin_csv, run_basin};
use trs_cli::bench::{bench_csv, bench_table, run_bench};
use trs_cli::gap_demo::{gap_demo_csv, run_gap_demo};
use trs_cli::method::{classify_label, dispatch, Method, RunOptions, StartSpec};
use trs_cli::rate::classify_rate_scaled;
use trs_cli::report::{gap_baseline, rate_comment_block, trace_csv, trace_gaps, SolveReport};
use trs_cli::{exit_code, oracle_config_from_env};
use trs_core::{generate, parse_problem, serialize_problem, AnyProblem, GenKind, TrsError};

#[derive(Parser)]
#[command(
    name = "trs",
    about = "Solvers and experiment harness for unit-ball and unit-sphere constrained quadratic minimization",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file with one method and print a report.
    Solve(SolveArgs),
    /// Classify a ball problem into easy/hard-1/hard-2/ill.
    Classify(ClassifyArgs),
    /// Generate an instance and write it as a problem file.
    Generate(GenerateArgs),
    /// Record a per-iteration trace and classify its convergence rate.
    Trace(TraceArgs),
    /// Run many seeded trials and assign each limit to a KKT point.
    Basin(BasinArgs),
    /// Compare methods on a suite: iterations, time, mat-vecs, accuracy.
    Bench(BenchArgs),
    /// Show how a coarse objective comparison mistakes a local minimizer
    /// for the global one as the gap shrinks.
    GapDemo(GapDemoArgs),
}

#[derive(Args, Clone)]
struct CommonRunArgs {
    /// Explicit step size (ball: in (0, 2/L); sphere: in (0, 1/L]).
    #[arg(long)]
    eta: Option<f64>,
    /// Step policy: `frac:<f>` for a fraction of 2/L, or `one-over-l`.
    #[arg(long, value_name = "POLICY")]
    eta_policy: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-12)]
    step_tol: f64,
}

impl CommonRunArgs {
    fn to_options(&self, start: StartSpec, record_trace: bool) -> Result<RunOptions, TrsError> {
        let mut eta_fraction = None;
        if let Some(policy) = &self.eta_policy {
            if let Some(rest) = policy.strip_prefix("frac:") {
                let f: f64 = rest.parse().map_err(|_| {
                    TrsError::InvalidConfig(format!("invalid fraction in eta policy '{policy}'"))
                })?;
                eta_fraction = Some(f);
            } else if policy == "one-over-l" {
                eta_fraction = Some(0.5);
            } else {
                return Err(TrsError::InvalidConfig(format!(
                    "unknown eta policy '{policy}' (expected frac:<f> | one-over-l)"
                )));
            }
        }
        Ok(RunOptions {
            eta: self.eta,
            eta_fraction,
            seed: self.seed,
            max_iters: self.max_iters,
            step_tol: self.step_tol,
            record_trace,
            start,
            ..Default::default()
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long)]
    method: String,
    /// Initial point: zero | seed | seed:<n> | v1,v2,...
    #[arg(long)]
    x0: Option<String>,
    #[command(flatten)]
    run: CommonRunArgs,
    /// Also write the per-iteration trace CSV here.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct ClassifyArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct GenerateArgs {
    /// example1 | example2 | example3 | easy | hard2 | ill | convex | scalar
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Parameter of the example2 family.
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    file: PathBuf,
    #[arg(long)]
    method: String,
    /// Initial point: zero | seed | seed:<n> | v1,v2,...
    #[arg(long)]
    x0: Option<String>,
    /// Gap reference: oracle | none | value:<f>
    #[arg(long, default_value = "oracle")]
    reference: String,
    #[arg(long, default_value_t = 0.5)]
    tail_fraction: f64,
    #[command(flatten)]
    run: CommonRunArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BasinArgs {
    file: PathBuf,
    #[arg(long)]
    method: String,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    #[command(flatten)]
    run: CommonRunArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Problem files to benchmark.
    files: Vec<PathBuf>,
    /// Generated instances, e.g. example1,easy:n=6:seed=2
    #[arg(long)]
    suite: Option<String>,
    /// Comma-separated method list.
    #[arg(long, default_value = "pg,alg1,double,oracle")]
    methods: String,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    #[command(flatten)]
    run: CommonRunArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "table")]
    format: String,
}

#[derive(Args)]
struct GapDemoArgs {
    /// Comma-separated tau list.
    #[arg(long, default_value = "1e-1,1e-2,1e-3")]
    taus: String,
    #[arg(long, default_value_t = 1e-3)]
    compare_tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_problem(path: &PathBuf) -> Result<AnyProblem, TrsError> {
    let text = fs::read_to_string(path)
        .map_err(|e| TrsError::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), TrsError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| TrsError::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn parse_kind(kind: &str, tau: f64) -> Result<GenKind, TrsError> {
    Ok(match kind {
        "example1" => GenKind::Example1,
        "example2" => GenKind::Example2 { tau },
        "example3" => GenKind::Example3,
        "easy" => GenKind::Easy,
        "hard2" => GenKind::Hard2,
        "ill" => GenKind::Ill,
        "convex" => GenKind::Convex,
        "scalar" => GenKind::Scalar,
        other => {
            return Err(TrsError::InvalidConfig(format!(
                "unknown kind '{other}' (expected example1|example2|example3|easy|hard2|ill|convex|scalar)"
            )))
        }
    })
}

fn run(cli: Cli) -> Result<(), TrsError> {
    let oracle_cfg = oracle_config_from_env();
    match cli.command {
        Command::Solve(args) => {
            let problem = read_problem(&args.file)?;
            let method = Method::parse(&args.method)?;
            let start = match &args.x0 {
                Some(s) => StartSpec::parse(s)?,
                None => StartSpec::Auto,
            };
            let opts = args.run.to_options(start, args.trace.is_some())?;
            let outcome = dispatch(&problem, method, &opts, &oracle_cfg)?;
            if let (Some(path), Some(trace)) = (&args.trace, &outcome.trace) {
                let baseline = gap_baseline(&problem, &outcome, None, &oracle_cfg);
                emit(&Some(path.clone()), &trace_csv(trace, baseline))?;
            }
            let report = SolveReport::build(&problem, method.name(), &outcome, opts.seed)?;
            let body = match args.format.as_str() {
                "json" => report.to_json() + "\n",
                "csv" => report.to_csv(),
                other => {
                    return Err(TrsError::InvalidConfig(format!(
                        "unknown format '{other}'"
                    )))
                }
            };
            emit(&args.out, &body)
        }
        Command::Classify(args) => {
            let problem = read_problem(&args.file)?;
            let (label, interior) = classify_label(&problem, args.tol, &oracle_cfg)?;
            let body = match args.format.as_str() {
                "json" => format!(
                    "{{\n  \"case_label\": \"{label}\",\n  \"interior\": {interior}\n}}\n"
                ),
                "csv" => format!("key,value\ncase_label,{label}\ninterior,{interior}\n"),
                other => {
                    return Err(TrsError::InvalidConfig(format!(
                        "unknown format '{other}'"
                    )))
                }
            };
            emit(&args.out, &body)
        }
        Command::Generate(args) => {
            let kind = parse_kind(&args.kind, args.tau)?;
            let problem = generate(kind, args.n, args.seed)?;
            emit(&args.out, &serialize_problem(&problem))
        }
        Command::Trace(args) => {
            let problem = read_problem(&args.file)?;
            let method = Method::parse(&args.method)?;
            if method == Method::Oracle {
                return Err(TrsError::InvalidConfig(
                    "the oracle has no iteration trace".into(),
                ));
            }
            let start = match &args.x0 {
                Some(s) => StartSpec::parse(s)?,
                None => StartSpec::Auto,
            };
            let opts = args.run.to_options(start, true)?;
            let outcome = dispatch(&problem, method, &opts, &oracle_cfg)?;
            let trace = outcome
                .trace
                .as_ref()
                .expect("trace recording was requested");
            let reference = match args.reference.as_str() {
                "none" => None,
                "oracle" => {
                    let oracle = dispatch(&problem, Method::Oracle, &opts, &oracle_cfg)?;
                    Some(oracle.objective)
                }
                other => match other.strip_prefix("value:") {
                    Some(v) => Some(v.parse::<f64>().map_err(|_| {
                        TrsError::InvalidConfig(format!("invalid reference '{other}'"))
                    })?),
                    None => {
                        return Err(TrsError::InvalidConfig(format!(
                            "unknown reference '{other}' (expected oracle | none | value:<f>)"
                        )))
                    }
                },
            };
            let baseline = gap_baseline(&problem, &outcome, reference, &oracle_cfg);
            let verdict =
                classify_rate_scaled(&trace_gaps(trace, baseline), args.tail_fraction, baseline);
            let mut body = trace_csv(trace, baseline);
            body.push_str(&rate_comment_block(&verdict));
            emit(&args.out, &body)
        }
        Command::Basin(args) => {
            let problem = read_problem(&args.file)?;
            let method = Method::parse(&args.method)?;
            let opts = args.run.to_options(StartSpec::Auto, false)?;
            let report = run_basin(
                &problem,
                method,
                args.trials,
                args.seed_base,
                &opts,
                &oracle_cfg,
            )?;
            emit(&args.out, &basin_csv(&report))
        }
        Command::Bench(args) => {
            let mut instances: Vec<(String, AnyProblem)> = Vec::new();
            for file in &args.files {
                instances.push((
                    file.file_name()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| file.display().to_string()),
                    read_problem(file)?,
                ));
            }
            if let Some(suite) = &args.suite {
                for item in suite.split(',').filter(|s| !s.is_empty()) {
                    let mut kind = item;
                    let mut n = 6usize;
                    let mut seed = 0u64;
                    let mut tau = 0.1;
                    if let Some((k, rest)) = item.split_once(':') {
                        kind = k;
                        for opt in rest.split(':') {
                            if let Some(v) = opt.strip_prefix("n=") {
                                n = v.parse().map_err(|_| {
                                    TrsError::InvalidConfig(format!("invalid n in '{item}'"))
                                })?;
                            } else if let Some(v) = opt.strip_prefix("seed=") {
                                seed = v.parse().map_err(|_| {
                                    TrsError::InvalidConfig(format!("invalid seed in '{item}'"))
                                })?;
                            } else if let Some(v) = opt.strip_prefix("tau=") {
                                tau = v.parse().map_err(|_| {
                                    TrsError::InvalidConfig(format!("invalid tau in '{item}'"))
                                })?;
                            }
                        }
                    }
                    instances.push((item.to_string(), generate(parse_kind(kind, tau)?, n, seed)?));
                }
            }
            if instances.is_empty() {
                instances.push(("example1".to_string(), generate(GenKind::Example1, 2, 0)?));
            }
            let methods: Vec<Method> = args
                .methods
                .split(',')
                .filter(|s| !s.is_empty())
                .map(Method::parse)
                .collect::<Result<_, _>>()?;
            let opts = args.run.to_options(StartSpec::Auto, false)?;
            let rows = run_bench(
                &instances,
                &methods,
                args.reps,
                args.seed_base,
                &opts,
                &oracle_cfg,
            )?;
            let body = match args.format.as_str() {
                "csv" => bench_csv(&rows),
                "table" => bench_table(&rows),
                other => {
                    return Err(TrsError::InvalidConfig(format!(
                        "unknown format '{other}'"
                    )))
                }
            };
            emit(&args.out, &body)
        }
        Command::GapDemo(args) => {
            let taus: Vec<f64> = args
                .taus
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| TrsError::InvalidConfig(format!("invalid tau '{s}'")))
                })
                .collect::<Result<_, _>>()?;
            let report = run_gap_demo(&taus, args.compare_tol, &oracle_cfg)?;
            emit(&args.out, &gap_demo_csv(&report))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}

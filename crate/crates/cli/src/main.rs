//! `relsub`: runs problem files and single queries, printing JSON reports.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relsub::estimator::Schedule;
use relsub_cli::engine::{assemble, oracle_compare, run_problem, run_query, Report};
use relsub_cli::{Kind, Op, Problem, Query, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "relsub", version, about = "Relative subdifferentials, calculus rules and optimality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Problem file (TOML).
    file: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for CSV dumps of sampled sets and traces.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Override the seed stored in the problem file.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    #[value(alias = "eps")]
    EpsRegular,
    Limiting,
    #[value(alias = "plain")]
    LimitingPlain,
}

#[derive(Args)]
struct Target {
    /// Function name from the problem file.
    #[arg(long = "fn")]
    func: String,
    /// Set name from the problem file.
    #[arg(long)]
    set: Option<String>,
    /// Reference point, comma-separated coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    point: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every query of a problem file.
    Run(Common),
    /// Compute one subdifferential.
    Subdiff {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value = "eps-regular")]
        kind: KindArg,
        #[arg(long)]
        eps: Option<f64>,
        /// Use the sampling estimator instead of the exact engine.
        #[arg(long)]
        estimate: bool,
        /// Estimator schedule as an inline TOML table, e.g. "seed = 3".
        #[arg(long)]
        schedule: Option<String>,
    },
    /// Fermat rule for one function, or the sum rule for two (`--fn2`); `--eta` asks for an
    /// approximate certificate instead.
    Optimality {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        fn2: Option<String>,
        /// Comma-separated ε values for the Fermat test.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Exact sum rule, or the fuzzy sum rule when `--eta` and `--xstar` are given.
    Sumrule {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        fn2: String,
        #[arg(long, allow_hyphen_values = true)]
        xstar: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Mean-value witness on the segment `[a, b]`.
    Meanvalue {
        #[command(flatten)]
        common: Common,
        #[arg(long = "fn")]
        func: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Vec<f64>,
    },
    /// Secant-inequality convexity test on `[a, b]`.
    Convexity {
        #[command(flatten)]
        common: Common,
        #[arg(long = "fn")]
        func: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Vec<f64>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Re-run every exact `subdiff` query through the sampling estimator and report gaps.
    OracleCompare(Common),
}

fn load(common: &Common) -> Result<(Problem, u64), ExitCode> {
    match Problem::load(&common.file) {
        Ok(p) => {
            let seed = common.seed.unwrap_or(p.file.seed);
            Ok((p, seed))
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(ExitCode::from(EXIT_INPUT as u8))
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), ExitCode> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            ExitCode::from(EXIT_INPUT as u8)
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_csv(report: &Report, dir: &Path) -> Result<(), ExitCode> {
    let fail = |e: std::io::Error| {
        eprintln!("error: cannot write CSV to {}: {e}", dir.display());
        ExitCode::from(EXIT_INPUT as u8)
    };
    std::fs::create_dir_all(dir).map_err(fail)?;
    for q in &report.queries {
        for (name, body) in &q.csv {
            std::fs::write(dir.join(format!("{}.{name}.csv", q.id)), body).map_err(fail)?;
        }
    }
    Ok(())
}

fn finish(report: Report, common: &Common) -> ExitCode {
    if let Some(dir) = &common.csv {
        if let Err(code) = write_csv(&report, dir) {
            return code;
        }
    }
    if let Err(code) = emit(&report.to_json(), common.out.as_deref()) {
        return code;
    }
    ExitCode::from(report.exit_code as u8)
}

fn single(common: &Common, query: Query) -> ExitCode {
    let (p, seed) = match load(common) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let report = assemble(p.file.version, seed, vec![run_query(&p, &query, 0, seed)]);
    finish(report, common)
}

fn target_query(op: Op, t: &Target) -> Query {
    Query {
        id: Some(format!("{}-{}", serde_json::to_value(op).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(), t.func)),
        op: Some(op),
        func: Some(t.func.clone()),
        set: t.set.clone(),
        point: t.point.clone(),
        ..Query::default()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(common) => {
            let (p, seed) = match load(&common) {
                Ok(x) => x,
                Err(code) => return code,
            };
            finish(run_problem(&p, seed), &common)
        }
        Command::Subdiff { common, target, kind, eps, estimate, schedule } => {
            let schedule = match schedule.map(|s| toml::from_str::<Schedule>(&s)).transpose() {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: --schedule: {e}");
                    return ExitCode::from(EXIT_INPUT as u8);
                }
            };
            let kind = match kind {
                KindArg::EpsRegular => Kind::EpsRegular,
                KindArg::Limiting => Kind::Limiting,
                KindArg::LimitingPlain => Kind::LimitingPlain,
            };
            let op = if estimate { Op::Estimate } else { Op::Subdiff };
            single(&common, Query { kind: Some(kind), eps, schedule, ..target_query(op, &target) })
        }
        Command::Optimality { common, target, fn2, eps, eta } => {
            let op = match (&fn2, eta) {
                (None, _) => Op::Fermat,
                (Some(_), None) => Op::SumOptimality,
                (Some(_), Some(_)) => Op::ApproxOptimality,
            };
            single(&common, Query { fn2, eps_list: eps, eta, ..target_query(op, &target) })
        }
        Command::Sumrule { common, target, fn2, xstar, eps, eta } => {
            let op = if eta.is_some() || xstar.is_some() { Op::FuzzySum } else { Op::SumRule };
            single(&common, Query { fn2: Some(fn2), xstar, eps, eta, ..target_query(op, &target) })
        }
        Command::Meanvalue { common, func, a, b } => {
            let t = Target { func, set: None, point: None };
            single(&common, Query { a: Some(a), b: Some(b), ..target_query(Op::MeanValue, &t) })
        }
        Command::Convexity { common, func, a, b, grid, tol } => {
            let t = Target { func, set: None, point: None };
            single(&common, Query { a: Some(a), b: Some(b), grid, tol, ..target_query(Op::Convexity, &t) })
        }
        Command::OracleCompare(common) => {
            let (p, seed) = match load(&common) {
                Ok(x) => x,
                Err(code) => return code,
            };
            match oracle_compare(&p, seed) {
                Ok(rows) => {
                    let worst = rows.iter().filter_map(|r| r.gap.as_f64()).fold(0.0f64, f64::max);
                    let ok = rows.iter().all(|r| r.within_tolerance);
                    let body = serde_json::json!({ "seed": seed, "rows": rows, "max_gap": worst, "all_within_tolerance": ok });
                    let mut text = serde_json::to_string_pretty(&body).expect("serializes");
                    text.push('\n');
                    if let Err(code) = emit(&text, common.out.as_deref()) {
                        return code;
                    }
                    ExitCode::from(if ok { 0 } else { 1 })
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_INPUT as u8)
                }
            }
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cgkit::harness::{self, parse_variants, BatchGrowth, CheckOptions, HarnessError, RunConfig};

#[derive(Parser)]
#[command(name = "cgkit", version, about = "Conditional gradient benchmarks and self-checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run variants on a preset; write a CSV trajectory and a JSON summary.
    Run(RunArgs),
    /// Run variants on a preset and print a summary table.
    Compare(RunArgs),
    /// Run the oracle, invariant and exact-arithmetic self-checks.
    Check(CheckArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// polyreg, matcomp, birkhoff, rational or simplex-projection.
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated list from fw, lfw, afw, lafw, bcg, sfw, pgd-reference.
    #[arg(long)]
    variants: Option<String>,
    #[arg(long, alias = "iterations")]
    max_iterations: Option<usize>,
    #[arg(long, alias = "epsilon")]
    eps: Option<f64>,
    /// adaptive, agnostic, short or line-search.
    #[arg(long)]
    step: Option<String>,
    /// Smoothness constant for short steps.
    #[arg(long)]
    lipschitz: Option<f64>,
    /// Vertex cache size, or "unbounded".
    #[arg(long)]
    cache_capacity: Option<String>,
    #[arg(long)]
    k_lazy: Option<f64>,
    #[arg(long)]
    gap_check_interval: Option<usize>,
    #[arg(long, env = "CGKIT_SEED")]
    seed: Option<u64>,
    /// Instance size (meaning depends on the preset).
    #[arg(long)]
    n: Option<usize>,
    /// constant or quadratic batch growth for sfw.
    #[arg(long)]
    batch_growth: Option<String>,
    #[arg(long)]
    batch_base: Option<usize>,
    #[arg(long)]
    batch_cap: Option<usize>,
    #[arg(long)]
    momentum: Option<f64>,
    /// CSV path (run defaults to <preset>.csv).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// JSON summary path (defaults to the CSV path with .json).
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Run variants one after another instead of in parallel.
    #[arg(long)]
    sequential: bool,
    #[arg(long, short, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, hide = true)]
    corrupt_oracle: Option<String>,
}

fn config_error(msg: String) -> HarnessError {
    HarnessError::Config(msg)
}

fn build_config(args: RunArgs) -> Result<RunConfig, HarnessError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match (&args.preset, &args.config) {
        (Some(p), _) => cfg.preset = p.parse()?,
        (None, None) => return Err(config_error("--preset or --config is required".into())),
        (None, Some(_)) => {}
    }
    if let Some(v) = &args.variants {
        cfg.variants = parse_variants(v)?;
        if cfg.variants.is_empty() {
            return Err(config_error("at least one variant is required".into()));
        }
    }
    if let Some(step) = &args.step {
        cfg.step = Some(step.parse()?);
    }
    if let Some(c) = &args.cache_capacity {
        cfg.cache_capacity = match c.as_str() {
            "unbounded" => None,
            s => Some(
                s.parse()
                    .map_err(|_| config_error(format!("invalid cache capacity '{s}'")))?,
            ),
        };
    }
    if let Some(g) = &args.batch_growth {
        cfg.batch.growth = match g.as_str() {
            "constant" => BatchGrowth::Constant,
            "quadratic" => BatchGrowth::Quadratic,
            other => return Err(config_error(format!("unknown batch growth '{other}'"))),
        };
    }
    cfg.max_iterations = args.max_iterations.or(cfg.max_iterations);
    cfg.epsilon = args.eps.unwrap_or(cfg.epsilon);
    cfg.lipschitz = args.lipschitz.or(cfg.lipschitz);
    cfg.k_lazy = args.k_lazy.unwrap_or(cfg.k_lazy);
    cfg.gap_check_interval = args.gap_check_interval.or(cfg.gap_check_interval);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.n = args.n.or(cfg.n);
    cfg.batch.base = args.batch_base.unwrap_or(cfg.batch.base);
    cfg.batch.cap = args.batch_cap.unwrap_or(cfg.batch.cap);
    cfg.momentum = args.momentum.unwrap_or(cfg.momentum);
    cfg.output = args.output.or(cfg.output);
    cfg.summary = args.summary.or(cfg.summary);
    cfg.parallel = cfg.parallel && !args.sequential;
    cfg.verbosity = cfg.verbosity.max(args.verbose);
    Ok(cfg)
}

fn dispatch(command: Command) -> Result<bool, HarnessError> {
    match command {
        Command::Run(args) => {
            let cfg = build_config(args)?;
            let (report, csv, summary) = harness::run(&cfg)?;
            print!("{}", report.table());
            for v in &report.variants {
                if let Some(exact) = &v.summary.exact {
                    println!(
                        "{} exact: primal {} gap {}",
                        v.summary.variant, exact.primal, exact.dual_gap
                    );
                }
            }
            println!("wrote {} and {}", csv.display(), summary.display());
            Ok(true)
        }
        Command::Compare(args) => {
            let cfg = build_config(args)?;
            let (_, table) = harness::compare(&cfg)?;
            print!("{table}");
            Ok(true)
        }
        Command::Check(args) => {
            let report = harness::check(&CheckOptions {
                corrupt_oracle: args.corrupt_oracle,
                seed: args.seed,
            });
            print!("{}", report.render());
            Ok(report.ok())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("cgkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sharpsa::bounds::{bound_constants, tail_bound, BoundPrimitives};
use sharpsa::problems::BENCHMARKS;
use sharpsa_harness::checks::{check_condition, parse_condition, CheckOptions};
use sharpsa_harness::runner::with_threads;
use sharpsa_harness::{run_experiment, ExperimentConfig, HarnessError, ProblemSpec};

/// Sharp stochastic approximation experiments.
#[derive(Debug, Parser)]
#[command(name = "sharpsa", version)]
struct Cli {
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of replications, overriding the config.
    #[arg(long, global = true)]
    reps: Option<usize>,
    /// Iterations per replication, overriding the config.
    #[arg(long, global = true)]
    iters: Option<usize>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; all cores by default.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run { config: PathBuf },
    /// Numerically check a condition on a benchmark.
    Check {
        problem: String,
        #[arg(long, default_value = "d1")]
        condition: String,
        /// Constant step size of the simulated PSGD steps.
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        batch: usize,
        /// Drift level, in units of alpha.
        #[arg(long, default_value_t = 10.0)]
        b: f64,
        /// Drift margin; half the estimated sharpness constant by default.
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Evaluate the tail-bound constant table.
    Constants {
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        f: f64,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        e: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        u: f64,
        /// Also print the tail bound at these gaps, at rate `a / u^gamma`.
        #[arg(long, value_delimiter = ',')]
        z: Vec<f64>,
    },
    /// List the benchmark names.
    BenchList,
}

fn main() -> ExitCode {
    // usage errors count as configuration errors
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    match with_threads(cli.threads, || dispatch(&cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<u8, HarnessError> {
    match &cli.command {
        Command::Run { config } => run(cli, config),
        Command::Check { problem, condition, alpha, batch, b, kappa } => {
            let cond = parse_condition(condition)
                .ok_or_else(|| HarnessError::Config(format!("unknown condition '{condition}'")))?;
            let p = ProblemSpec::named(problem).build()?;
            let opts = CheckOptions {
                alpha: *alpha,
                batch: *batch,
                b: *b,
                kappa: *kappa,
                seed: cli.seed.unwrap_or(0),
                ..Default::default()
            };
            let report = check_condition(p.as_ref(), cond, &opts)?;
            println!("{}: {report}", p.name());
            Ok(if report.passed { 0 } else { 2 })
        }
        Command::Constants { kappa, lambda, b, f, d, e, gamma, a, u, z } => {
            let prims =
                BoundPrimitives { kappa: *kappa, lambda: *lambda, b: *b, f: *f, d: *d, e: *e, gamma: *gamma, a: *a, u: *u };
            let bc = bound_constants(&prims)?;
            println!("G  = {:.6e}\nn  = {}\nQ  = {:.6e}\nH  = {:.6e}", bc.g, bc.n, bc.q, bc.h);
            println!("I  = {:.6e}\nJ  = {:.6e}\nK  = {:.6e}\nR  = {:.6e}", bc.i, bc.j, bc.k, bc.r);
            println!("T0 = {}\nT1 = {:.6e}\nT2 = {:.6e}", bc.t0, bc.t1, bc.t2);
            for &zv in z {
                println!("P(gap >= {zv}) <= {:.6e}", tail_bound(&bc, bc.alpha0(), zv));
            }
            Ok(0)
        }
        Command::BenchList => {
            for name in BENCHMARKS {
                let p = ProblemSpec::named(name).build()?;
                println!("{name}\t{}", p.dim());
            }
            Ok(0)
        }
    }
}

fn run(cli: &Cli, path: &std::path::Path) -> Result<u8, HarnessError> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = cli.seed {
        cfg.master_seed = s;
    }
    if let Some(r) = cli.reps {
        cfg.replications = r;
    }
    if let Some(i) = cli.iters {
        cfg.iters = Some(i);
    }
    cfg.validate()?;
    let dir = match (&cli.out, &cfg.output.dir) {
        (Some(d), _) | (None, Some(d)) => d.clone(),
        (None, None) => {
            let root = std::env::var_os("SHARPSA_OUT").map_or_else(|| PathBuf::from("out"), PathBuf::from);
            root.join(cfg.label())
        }
    };
    let outcome = run_experiment(&cfg, &dir)?;
    let r = &outcome.report;
    match &r.fit {
        Some(f) => println!(
            "{}: slope {:.4} r2 {:.4} over t in [{}, {}] ({} points)",
            r.name, f.slope, f.r2, f.t_range.0, f.t_range.1, f.n_points
        ),
        None => println!("{}: no fit ({})", r.name, r.fit_error.as_deref().unwrap_or("unknown")),
    }
    println!("{} of {} replications failed; wrote {}", r.failures, r.replications, dir.display());
    Ok(if outcome.failure_rate_exceeded() { 2 } else { 0 })
}

//! Command-line entry point: solve one instance, benchmark both
//! algorithms, render a tour as SVG, or run the exact oracle.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cetsp::baseline::run_simple;
use cetsp::domain::{brute_force_optimum, tour_cost, Instance, MetricMode};
use cetsp::engine::{run_chase_escape, TrialStats};
use cetsp::error::{Error, Result};
use cetsp::harness::{compare, run_benchmark, Algorithm, BenchConfig};
use cetsp::svg;
use cetsp::tsplib;

#[derive(Parser)]
#[command(name = "cetsp", about = "Chase-and-escape metaheuristic for the TSP", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trial of the selected algorithm on a TSPLIB instance
    Solve {
        /// TSPLIB .tsp file (EUC_2D)
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the best tour as a TSPLIB .tour file
        #[arg(long)]
        out_tour: Option<PathBuf>,
        /// Write the best tour as an SVG plot
        #[arg(long)]
        out_svg: Option<PathBuf>,
    },
    /// Benchmark both algorithms under a shared budget and compare
    Bench {
        /// TSPLIB .tsp file (EUC_2D)
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Independent trials per algorithm
        #[arg(long, default_value_t = 30)]
        trials: usize,
        /// Concurrent trials
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        /// Per-trial results CSV
        #[arg(long, default_value = "results.csv")]
        out_csv: PathBuf,
    },
    /// Render an instance and a .tour file as an SVG plot
    Render {
        instance: PathBuf,
        tour: PathBuf,
        out: PathBuf,
        #[arg(long, default_value = "real")]
        metric: String,
    },
    /// Exact optimum by enumeration (N <= 11)
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value = "real")]
        metric: String,
    },
}

#[derive(Args)]
struct SolverArgs {
    /// Algorithm: "ce" (chase-and-escape) or "simple"
    #[arg(long, default_value = "ce")]
    algo: String,
    /// Maximum number of cost evaluations
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Cities scrambled by the perturbation
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Edge metric: "real" or "rounded"
    #[arg(long, default_value = "real")]
    metric: String,
    /// Baseline rejection streak declaring a local minimum
    /// (default N*(N-1)/2)
    #[arg(long)]
    stuck_threshold: Option<u64>,
    /// Descent attempts for the perturbed state after a catch
    #[arg(long, default_value_t = 1)]
    post_catch_descent: u32,
    /// Let the chaser pick already-aligned cities
    #[arg(long, default_value_t = false)]
    chaser_noop_allowed: bool,
}

fn load_instance(path: &Path) -> Result<Instance> {
    let file = File::open(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    tsplib::parse_tsp(BufReader::new(file))
}

fn print_trial(t: &TrialStats) {
    println!(
        "algorithm={} instance={} seed={} budget={} R={} metric={} best_cost={:.6} evaluations={} catches={} wall_time_seconds={:.3}",
        t.algorithm, t.instance, t.seed, t.budget, t.r, t.metric, t.best_cost, t.evaluations,
        t.catches, t.wall_time_seconds
    );
}

fn cmd_solve(
    instance: &Path,
    solver: &SolverArgs,
    out_tour: Option<&Path>,
    out_svg: Option<&Path>,
) -> Result<()> {
    let inst = load_instance(instance)?;
    let algo: Algorithm = solver.algo.parse()?;
    let metric: MetricMode = solver.metric.parse()?;
    let bench = bench_config(solver, metric);
    let stats = match algo {
        Algorithm::ChaseEscape => run_chase_escape(&inst, &bench.run_config(solver.seed))?,
        Algorithm::Simple => run_simple(&inst, &bench.simple_config(solver.seed, inst.n()))?,
    };
    print_trial(&stats);
    if let Some(path) = out_tour {
        let mut w = BufWriter::new(File::create(path)?);
        tsplib::write_tour(&mut w, inst.name(), &stats.best_tour)?;
    }
    if let Some(path) = out_svg {
        std::fs::write(path, svg::render(&inst, &stats.best_tour, metric)?)?;
    }
    Ok(())
}

fn bench_config(solver: &SolverArgs, metric: MetricMode) -> BenchConfig {
    BenchConfig {
        budget: solver.budget,
        r: solver.r,
        seed_base: solver.seed,
        metric,
        post_catch_descent: solver.post_catch_descent,
        chaser_noop_allowed: solver.chaser_noop_allowed,
        stuck_threshold: solver.stuck_threshold,
    }
}

fn cmd_bench(
    instance: &Path,
    solver: &SolverArgs,
    trials: usize,
    parallelism: usize,
    out_csv: &Path,
) -> Result<()> {
    let inst = load_instance(instance)?;
    let metric: MetricMode = solver.metric.parse()?;
    let config = bench_config(solver, metric);

    let simple = run_benchmark(&inst, Algorithm::Simple, &config, trials, parallelism)?;
    let ce = run_benchmark(&inst, Algorithm::ChaseEscape, &config, trials, parallelism)?;

    let mut rows: Vec<TrialStats> = simple.per_trial.clone();
    rows.extend(ce.per_trial.clone());
    let mut w = BufWriter::new(File::create(out_csv)?);
    tsplib::write_results_csv(&rows, &mut w)?;
    w.flush()?;

    let report = compare(simple, ce)?;
    println!("{report}");
    println!("wrote {} trial rows to {}", rows.len(), out_csv.display());
    Ok(())
}

fn cmd_render(instance: &Path, tour: &Path, out: &Path, metric: &str) -> Result<()> {
    let inst = load_instance(instance)?;
    let metric: MetricMode = metric.parse()?;
    let file = File::open(tour)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", tour.display()))))?;
    let tour = tsplib::parse_opt_tour(BufReader::new(file), inst.n())?;
    std::fs::write(out, svg::render(&inst, &tour, metric)?)?;
    println!(
        "wrote {} (cost {:.3})",
        out.display(),
        tour_cost(&inst, &tour, metric)?
    );
    Ok(())
}

fn cmd_oracle(instance: &Path, metric: &str) -> Result<()> {
    let inst = load_instance(instance)?;
    let metric: MetricMode = metric.parse()?;
    let (tour, cost) = brute_force_optimum(&inst, metric)?;
    println!("optimal_cost={cost:.6}");
    println!(
        "optimal_tour={}",
        tour.order().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { instance, solver, out_tour, out_svg } => {
            cmd_solve(instance, solver, out_tour.as_deref(), out_svg.as_deref())
        }
        Command::Bench { instance, solver, trials, parallelism, out_csv } => {
            cmd_bench(instance, solver, *trials, *parallelism, out_csv)
        }
        Command::Render { instance, tour, out, metric } => cmd_render(instance, tour, out, metric),
        Command::Oracle { instance, metric } => cmd_oracle(instance, metric),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

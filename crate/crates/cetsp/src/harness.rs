//! Repeated-trial benchmarking: fixed seed schedule, mean and standard
//! deviation of best path length, and a two-algorithm comparison table.
//!
//! Trial `i` always runs with seed `seed_base + i`, so the aggregate is
//! identical at any parallelism level and any single trial can be
//! re-run standalone.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::baseline::{default_stuck_threshold, run_simple, SimpleConfig};
use crate::domain::{Instance, MetricMode};
use crate::engine::{run_chase_escape, RunConfig, TrialStats};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    ChaseEscape,
    Simple,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::ChaseEscape => "chase_escape",
            Algorithm::Simple => "simple",
        }
    }

    /// Table label, matching how the two are usually reported.
    pub fn display_name(self) -> &'static str {
        match self {
            Algorithm::ChaseEscape => "C and E",
            Algorithm::Simple => "Simple",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ce" | "chase_escape" => Ok(Algorithm::ChaseEscape),
            "simple" => Ok(Algorithm::Simple),
            other => Err(Error::Config(format!(
                "unknown algorithm {other:?}, expected \"ce\" or \"simple\""
            ))),
        }
    }
}

/// Shared tunables for a benchmark; per-trial configs are derived from
/// these plus the trial index.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub budget: u64,
    pub r: usize,
    pub seed_base: u64,
    pub metric: MetricMode,
    pub post_catch_descent: u32,
    pub chaser_noop_allowed: bool,
    /// Baseline local-minimum detector; `None` means N·(N−1)/2.
    pub stuck_threshold: Option<u64>,
}

impl BenchConfig {
    pub fn new(budget: u64, seed_base: u64) -> Self {
        BenchConfig {
            budget,
            r: 3,
            seed_base,
            metric: MetricMode::RealEuclidean,
            post_catch_descent: 1,
            chaser_noop_allowed: false,
            stuck_threshold: None,
        }
    }

    pub fn run_config(&self, seed: u64) -> RunConfig {
        RunConfig {
            budget: self.budget,
            r: self.r,
            seed,
            metric: self.metric,
            post_catch_descent: self.post_catch_descent,
            chaser_noop_allowed: self.chaser_noop_allowed,
        }
    }

    pub fn simple_config(&self, seed: u64, n: usize) -> SimpleConfig {
        SimpleConfig {
            budget: self.budget,
            r: self.r,
            seed,
            metric: self.metric,
            stuck_threshold: self.stuck_threshold.unwrap_or_else(|| default_stuck_threshold(n)),
        }
    }
}

/// Per-algorithm aggregate over repeated trials.
#[derive(Debug, Clone)]
pub struct BenchStats {
    pub algorithm: Algorithm,
    pub trials: usize,
    pub mean_best: f64,
    /// Population standard deviation (divisor = trials).
    pub sdv_best: f64,
    pub mean_time_seconds: f64,
    pub per_trial: Vec<TrialStats>,
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn population_sdv(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Run `trials` independent seeded runs, at most `parallelism` at a time.
pub fn run_benchmark(
    instance: &Instance,
    algorithm: Algorithm,
    config: &BenchConfig,
    trials: usize,
    parallelism: usize,
) -> Result<BenchStats> {
    if trials < 1 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if parallelism < 1 {
        return Err(Error::Config("parallelism must be at least 1".into()));
    }

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, TrialStats)>> = Mutex::new(Vec::with_capacity(trials));
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..parallelism.min(trials) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= trials || failure.lock().unwrap().is_some() {
                    break;
                }
                let seed = config.seed_base + i as u64;
                let outcome = match algorithm {
                    Algorithm::ChaseEscape => run_chase_escape(instance, &config.run_config(seed)),
                    Algorithm::Simple => {
                        run_simple(instance, &config.simple_config(seed, instance.n()))
                    }
                };
                match outcome {
                    Ok(stats) => results.lock().unwrap().push((i, stats)),
                    Err(e) => {
                        let mut slot = failure.lock().unwrap();
                        if slot.is_none() {
                            *slot = Some(e);
                        }
                        break;
                    }
                }
            });
        }
    });

    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut rows = results.into_inner().unwrap();
    rows.sort_by_key(|(i, _)| *i);
    let per_trial: Vec<TrialStats> = rows.into_iter().map(|(_, s)| s).collect();

    let costs: Vec<f64> = per_trial.iter().map(|t| t.best_cost).collect();
    let times: Vec<f64> = per_trial.iter().map(|t| t.wall_time_seconds).collect();
    Ok(BenchStats {
        algorithm,
        trials,
        mean_best: mean(&costs),
        sdv_best: population_sdv(&costs),
        mean_time_seconds: mean(&times),
        per_trial,
    })
}

/// Side-by-side report for two benchmark runs on the same instance and
/// budget. The Welch t statistic is descriptive only.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub instance: String,
    pub budget: u64,
    pub a: BenchStats,
    pub b: BenchStats,
    /// a.mean_best − b.mean_best.
    pub mean_difference: f64,
    pub welch_t: f64,
}

pub fn compare(a: BenchStats, b: BenchStats) -> Result<ComparisonReport> {
    let (ia, ib) = (&a.per_trial[0], &b.per_trial[0]);
    if ia.instance != ib.instance {
        return Err(Error::Config(format!(
            "cannot compare runs on different instances ({} vs {})",
            ia.instance, ib.instance
        )));
    }
    if ia.budget != ib.budget {
        return Err(Error::Config(format!(
            "cannot compare runs with different budgets ({} vs {})",
            ia.budget, ib.budget
        )));
    }
    let mean_difference = a.mean_best - b.mean_best;
    let welch_t = welch_t_statistic(
        a.mean_best,
        a.sdv_best,
        a.trials,
        b.mean_best,
        b.sdv_best,
        b.trials,
    );
    Ok(ComparisonReport {
        instance: ia.instance.clone(),
        budget: ia.budget,
        a,
        b,
        mean_difference,
        welch_t,
    })
}

fn welch_t_statistic(m1: f64, sd1: f64, n1: usize, m2: f64, sd2: f64, n2: usize) -> f64 {
    let se = (sd1 * sd1 / n1 as f64 + sd2 * sd2 / n2 as f64).sqrt();
    if se == 0.0 {
        0.0
    } else {
        (m1 - m2) / se
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "instance {} | budget {} | {} trials vs {} trials (population SDV)",
            self.instance, self.budget, self.a.trials, self.b.trials
        )?;
        writeln!(f, "{:<10} {:>12} {:>12} {:>10}", "", "Time(sec)", "Ave. Path", "SDV")?;
        for s in [&self.a, &self.b] {
            writeln!(
                f,
                "{:<10} {:>12.3} {:>12.3} {:>10.3}",
                s.algorithm.display_name(),
                s.mean_time_seconds,
                s.mean_best,
                s.sdv_best
            )?;
        }
        writeln!(
            f,
            "mean difference ({} - {}): {:.3}",
            self.a.algorithm.display_name(),
            self.b.algorithm.display_name(),
            self.mean_difference
        )?;
        write!(f, "Welch t (descriptive): {:.3}", self.welch_t)
    }
}

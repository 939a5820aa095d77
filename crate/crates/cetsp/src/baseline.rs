//! The comparator: first-improvement two-exchange descent with an R-city
//! scramble once a rejection streak marks the current state as a likely
//! local minimum. Shares the move operators and budget accounting with the
//! duel engine, so the only behavioral difference is the chase mechanism.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{random_tour, Evaluator, Instance, MetricMode};
use crate::engine::TrialStats;
use crate::error::{Error, Result};
use crate::moves::{evader_step, perturb_r};

#[derive(Debug, Clone)]
pub struct SimpleConfig {
    pub budget: u64,
    pub r: usize,
    pub seed: u64,
    pub metric: MetricMode,
    /// Consecutive rejected descent attempts that declare a local minimum.
    pub stuck_threshold: u64,
}

impl SimpleConfig {
    pub fn new(budget: u64, seed: u64, n: usize) -> Self {
        SimpleConfig {
            budget,
            r: 3,
            seed,
            metric: MetricMode::RealEuclidean,
            stuck_threshold: default_stuck_threshold(n),
        }
    }

    pub fn validate(&self, instance: &Instance) -> Result<()> {
        if self.budget < 1 {
            return Err(Error::Config("budget must be at least 1".into()));
        }
        if self.stuck_threshold < 1 {
            return Err(Error::Config("stuck_threshold must be at least 1".into()));
        }
        if self.r < 3 || self.r > instance.n() {
            return Err(Error::Config(format!(
                "r = {} outside [3, {}]",
                self.r,
                instance.n()
            )));
        }
        Ok(())
    }
}

/// Size of the 2-exchange neighborhood, N·(N−1)/2; a budgeted proxy for
/// "no improving neighbor likely exists".
pub fn default_stuck_threshold(n: usize) -> u64 {
    (n as u64) * (n as u64 - 1) / 2
}

/// One run of the baseline. The perturbed state is accepted
/// unconditionally (best-so-far is tracked separately), otherwise the
/// walker could never leave a basin.
pub fn run_simple(instance: &Instance, config: &SimpleConfig) -> Result<TrialStats> {
    let evaluator = Evaluator::new(instance, config.metric);
    run_simple_with(&evaluator, config)
}

/// Same as [`run_simple`] but against a caller-owned evaluator, for
/// auditing the evaluation count.
pub fn run_simple_with(evaluator: &Evaluator, config: &SimpleConfig) -> Result<TrialStats> {
    let instance = evaluator.instance();
    config.validate(instance)?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut current = random_tour(instance.n(), &mut rng)?;
    let mut cost = evaluator.eval(&current);
    let mut evaluations: u64 = 1;
    let mut best_tour = current.clone();
    let mut best_cost = cost;
    let mut rejected_streak: u64 = 0;
    let mut restarts: u64 = 0;

    while evaluations < config.budget {
        let out = evader_step(&evaluator, &current, cost, &mut rng);
        evaluations += out.evaluations_spent;
        if out.accepted {
            current = out.tour;
            cost = out.cost;
            rejected_streak = 0;
            if cost < best_cost {
                best_cost = cost;
                best_tour = current.clone();
            }
        } else {
            rejected_streak += 1;
        }

        if rejected_streak >= config.stuck_threshold && evaluations < config.budget {
            current = perturb_r(&current, config.r, &mut rng)?;
            cost = evaluator.eval(&current);
            evaluations += 1;
            rejected_streak = 0;
            restarts += 1;
            if cost < best_cost {
                best_cost = cost;
                best_tour = current.clone();
            }
        }
    }

    Ok(TrialStats {
        algorithm: "simple".into(),
        instance: instance.name().into(),
        best_cost,
        best_tour,
        evaluations,
        catches: restarts,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        seed: config.seed,
        budget: config.budget,
        r: config.r,
        metric: config.metric,
    })
}

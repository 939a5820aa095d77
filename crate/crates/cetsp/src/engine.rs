//! The chase-and-escape duel loop: alternating moves, role exchange,
//! catch detection, and repulsion, under an evaluation budget.
//!
//! Step order is fixed: evader move, chaser move, role resolution, catch
//! check. The evader label always sits on the lower-cost state; a role
//! swap is just a relabeling. A catch (identical permutations) is read as
//! a local minimum and broken up by an R-city scramble.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{random_tour, Evaluator, Instance, MetricMode, Tour};
use crate::error::{Error, Result};
use crate::moves::{chaser_step, evader_step, perturb_r};

const MAX_REPERTURB_ATTEMPTS: u32 = 100;

/// All tunables for one chase-and-escape run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Maximum number of cost evaluations.
    pub budget: u64,
    /// Cities scrambled by the post-catch repulsion.
    pub r: usize,
    pub seed: u64,
    pub metric: MetricMode,
    /// Descent attempts granted to the perturbed state before roles are
    /// reassigned after a catch.
    pub post_catch_descent: u32,
    /// Let the chaser pick already-aligned cities (wasting the move).
    pub chaser_noop_allowed: bool,
}

impl RunConfig {
    pub fn new(budget: u64, seed: u64) -> Self {
        RunConfig {
            budget,
            r: 3,
            seed,
            metric: MetricMode::RealEuclidean,
            post_catch_descent: 1,
            chaser_noop_allowed: false,
        }
    }

    pub fn validate(&self, instance: &Instance) -> Result<()> {
        if self.budget < 2 {
            return Err(Error::Config(format!(
                "budget must be at least 2 (initialization evaluates two tours), got {}",
                self.budget
            )));
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

/// The evader/chaser pair with cached costs and bookkeeping.
#[derive(Debug, Clone)]
pub struct DuelState {
    pub evader: Tour,
    pub chaser: Tour,
    pub evader_cost: f64,
    pub chaser_cost: f64,
    pub evaluations: u64,
    pub best_cost: f64,
    pub best_tour: Tour,
    pub catches: u64,
}

impl DuelState {
    fn note(&mut self, tour: &Tour, cost: f64) {
        if cost < self.best_cost {
            self.best_cost = cost;
            self.best_tour = tour.clone();
        }
    }
}

/// Result of a single run, for either algorithm.
#[derive(Debug, Clone)]
pub struct TrialStats {
    pub algorithm: String,
    pub instance: String,
    pub best_cost: f64,
    pub best_tour: Tour,
    pub evaluations: u64,
    /// Catches for chase-and-escape; perturbation restarts for the
    /// baseline.
    pub catches: u64,
    pub wall_time_seconds: f64,
    pub seed: u64,
    pub budget: u64,
    pub r: usize,
    pub metric: MetricMode,
}

/// Draw two independent random tours and label the cheaper one evader.
/// Spends exactly two evaluations. Equal costs keep the first draw as
/// evader.
pub fn init_duel(ev: &Evaluator, _config: &RunConfig, rng: &mut ChaCha8Rng) -> Result<DuelState> {
    let n = ev.instance().n();
    let first = random_tour(n, rng)?;
    let second = random_tour(n, rng)?;
    let first_cost = ev.eval(&first);
    let second_cost = ev.eval(&second);
    let (evader, evader_cost, chaser, chaser_cost) = if second_cost < first_cost {
        (second, second_cost, first, first_cost)
    } else {
        (first, first_cost, second, second_cost)
    };
    Ok(DuelState {
        best_tour: evader.clone(),
        best_cost: evader_cost,
        evader,
        chaser,
        evader_cost,
        chaser_cost,
        evaluations: 2,
        catches: 0,
    })
}

/// One duel iteration: evader move, chaser move, role resolution, catch
/// check. The chaser move is skipped when the budget ran out on the
/// evader's evaluation, so a step never spends more than it must.
pub fn duel_step(
    ev: &Evaluator,
    state: &mut DuelState,
    config: &RunConfig,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let out = evader_step(ev, &state.evader, state.evader_cost, rng);
    state.evaluations += out.evaluations_spent;
    if out.accepted {
        state.evader = out.tour;
        state.evader_cost = out.cost;
        let cost = state.evader_cost;
        let tour = state.evader.clone();
        state.note(&tour, cost);
    }

    if state.evaluations < config.budget && state.evader != state.chaser {
        let out = chaser_step(ev, &state.chaser, &state.evader, config.chaser_noop_allowed, rng)?;
        state.evaluations += out.evaluations_spent;
        state.chaser = out.tour;
        state.chaser_cost = out.cost;
        let (tour, cost) = (state.chaser.clone(), state.chaser_cost);
        state.note(&tour, cost);
    }

    if state.chaser_cost < state.evader_cost {
        std::mem::swap(&mut state.evader, &mut state.chaser);
        std::mem::swap(&mut state.evader_cost, &mut state.chaser_cost);
    }

    if state.evader == state.chaser {
        handle_catch(ev, state, config, rng)?;
    }
    Ok(())
}

/// Break up a caught pair: scramble R cities of the shared tour, give the
/// perturbed state its descent attempts, then hand the evader label to the
/// cheaper of anchor and perturbed state (strictly better perturbed state
/// takes it).
pub fn handle_catch(
    ev: &Evaluator,
    state: &mut DuelState,
    config: &RunConfig,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    if state.evader != state.chaser {
        return Err(Error::Contract("handle_catch called while tours differ".into()));
    }
    let anchor = state.evader.clone();
    let anchor_cost = state.evader_cost;

    let mut perturbed = None;
    for _ in 0..MAX_REPERTURB_ATTEMPTS {
        let mut p = perturb_r(&anchor, config.r, rng)?;
        let mut p_cost = ev.eval(&p);
        state.evaluations += 1;
        state.note(&p, p_cost);
        for _ in 0..config.post_catch_descent {
            if state.evaluations >= config.budget {
                break;
            }
            let out = evader_step(ev, &p, p_cost, rng);
            state.evaluations += out.evaluations_spent;
            if out.accepted {
                p = out.tour;
                p_cost = out.cost;
                state.note(&p, p_cost);
            }
        }
        // descent can undo the scramble; two identical states would jam
        // the duel, so separate again
        if p != anchor {
            perturbed = Some((p, p_cost));
            break;
        }
    }
    let (p, p_cost) = perturbed.ok_or_else(|| {
        Error::Contract(format!(
            "{MAX_REPERTURB_ATTEMPTS} perturbations all collapsed back onto the caught state"
        ))
    })?;

    if p_cost < anchor_cost {
        state.evader = p;
        state.evader_cost = p_cost;
        state.chaser = anchor;
        state.chaser_cost = anchor_cost;
    } else {
        state.evader = anchor;
        state.evader_cost = anchor_cost;
        state.chaser = p;
        state.chaser_cost = p_cost;
    }
    state.catches += 1;
    Ok(())
}

/// Full chase-and-escape run: init, then duel steps until the budget is
/// spent.
pub fn run_chase_escape(instance: &Instance, config: &RunConfig) -> Result<TrialStats> {
    let evaluator = Evaluator::new(instance, config.metric);
    run_chase_escape_with(&evaluator, config)
}

/// Same as [`run_chase_escape`] but against a caller-owned evaluator, so
/// the reported evaluation count can be audited against the evaluator's
/// own tally. The evaluator's metric is taken as-is; `config.metric` is
/// only recorded in the stats.
pub fn run_chase_escape_with(evaluator: &Evaluator, config: &RunConfig) -> Result<TrialStats> {
    let instance = evaluator.instance();
    config.validate(instance)?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = init_duel(evaluator, config, &mut rng)?;
    while state.evaluations < config.budget {
        duel_step(evaluator, &mut state, config, &mut rng)?;
    }
    Ok(TrialStats {
        algorithm: "chase_escape".into(),
        instance: instance.name().into(),
        best_cost: state.best_cost,
        best_tour: state.best_tour,
        evaluations: state.evaluations,
        catches: state.catches,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        seed: config.seed,
        budget: config.budget,
        r: config.r,
        metric: config.metric,
    })
}

//! The three state-change operators and the permutation distance the
//! chaser contracts.
//!
//! All operators take the randomness stream by parameter; identical seeds
//! replay identical move sequences.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::domain::{Evaluator, Tour};
use crate::error::{Error, Result};

/// Result of one operator application.
#[derive(Debug, Clone)]
pub struct MoveOutcome {
    pub tour: Tour,
    pub cost: f64,
    pub accepted: bool,
    pub evaluations_spent: u64,
}

/// Copy of `tour` with the cities at positions `i` and `j` swapped.
pub fn two_exchange(tour: &Tour, i: usize, j: usize) -> Result<Tour> {
    let n = tour.len();
    if i >= n || j >= n {
        return Err(Error::Domain(format!("positions ({i}, {j}) out of range for {n} cities")));
    }
    if i == j {
        return Err(Error::Domain(format!("positions must differ, both are {i}")));
    }
    let mut out = tour.clone();
    out.swap_positions(i, j);
    Ok(out)
}

/// Number of positions at which two tours disagree.
pub fn hamming(a: &Tour, b: &Tour) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!("length mismatch: {} vs {}", a.len(), b.len())));
    }
    Ok(a.order().iter().zip(b.order()).filter(|(x, y)| x != y).count())
}

/// One cost-descending attempt: swap two uniformly drawn positions and keep
/// the candidate only on strict improvement. Always spends one evaluation.
pub fn evader_step(ev: &Evaluator, tour: &Tour, cost: f64, rng: &mut impl Rng) -> MoveOutcome {
    let n = tour.len();
    let i = rng.gen_range(0..n);
    let j = {
        // draw j from the n-1 other positions
        let j = rng.gen_range(0..n - 1);
        if j >= i {
            j + 1
        } else {
            j
        }
    };
    let candidate = two_exchange(tour, i, j).expect("i != j in range");
    let candidate_cost = ev.eval(&candidate);
    if candidate_cost < cost {
        MoveOutcome { tour: candidate, cost: candidate_cost, accepted: true, evaluations_spent: 1 }
    } else {
        MoveOutcome { tour: tour.clone(), cost, accepted: false, evaluations_spent: 1 }
    }
}

/// One cost-blind alignment move: pick a city whose position differs from
/// the evader's permutation and swap it into that position. Accepted
/// unconditionally.
///
/// With `noop_allowed` the pick ranges over all cities, so an already
/// aligned city yields an unchanged tour (still one evaluation).
pub fn chaser_step(
    ev: &Evaluator,
    chaser: &Tour,
    evader: &Tour,
    noop_allowed: bool,
    rng: &mut impl Rng,
) -> Result<MoveOutcome> {
    if chaser.len() != evader.len() {
        return Err(Error::Domain("tour length mismatch".into()));
    }
    let pick_pos = if noop_allowed {
        rng.gen_range(0..chaser.len())
    } else {
        let misplaced: Vec<usize> = chaser
            .order()
            .iter()
            .zip(evader.order())
            .enumerate()
            .filter(|(_, (c, e))| c != e)
            .map(|(p, _)| p)
            .collect();
        if misplaced.is_empty() {
            return Err(Error::Contract(
                "chaser_step called with chaser == evader; catch handling applies".into(),
            ));
        }
        *misplaced.choose(rng).expect("non-empty")
    };
    let city = chaser.order()[pick_pos];
    let target = evader.position_of(city).expect("same city set");
    let tour = if pick_pos == target {
        chaser.clone()
    } else {
        two_exchange(chaser, pick_pos, target)?
    };
    let cost = ev.eval(&tour);
    Ok(MoveOutcome { tour, cost, accepted: true, evaluations_spent: 1 })
}

/// Scramble `r` randomly chosen positions with a uniformly random
/// non-identity permutation of the cities held there.
pub fn perturb_r(tour: &Tour, r: usize, rng: &mut impl Rng) -> Result<Tour> {
    let n = tour.len();
    if r < 3 || r > n {
        return Err(Error::Domain(format!("perturbation size {r} outside [3, {n}]")));
    }
    let positions = rand::seq::index::sample(rng, n, r).into_vec();
    let cities: Vec<usize> = positions.iter().map(|&p| tour.order()[p]).collect();
    let mut shuffled = cities.clone();
    // redraw until the arrangement actually moves something
    while shuffled == cities {
        shuffled.shuffle(rng);
    }
    let mut out = tour.clone();
    for (&p, &c) in positions.iter().zip(&shuffled) {
        out.set_position(p, c);
    }
    debug_assert!(Tour::new(out.order().to_vec()).is_ok());
    Ok(out)
}

//! Instances, tours, the cost function, and a brute-force oracle for
//! small instances.

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest N accepted by [`brute_force_optimum`]; 10! candidate cycles is
/// already a few seconds of work.
pub const BRUTE_FORCE_LIMIT: usize = 11;

/// A set of labeled cities on the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    coords: Vec<(f64, f64)>,
}

impl Instance {
    pub fn new(name: impl Into<String>, coords: Vec<(f64, f64)>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::Domain(format!(
                "an instance needs at least 3 cities, got {}",
                coords.len()
            )));
        }
        for (i, (x, y)) in coords.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::Domain(format!(
                    "city {i} has non-finite coordinates ({x}, {y})"
                )));
            }
        }
        Ok(Instance { name: name.into(), coords })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    /// Euclidean distance between cities `a` and `b`.
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        let (ax, ay) = self.coords[a];
        let (bx, by) = self.coords[b];
        ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt()
    }
}

/// Edge-length convention for the cost function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricMode {
    /// Exact Euclidean edge lengths.
    RealEuclidean,
    /// Each edge rounded to the nearest integer (TSPLIB EUC_2D convention).
    RoundedEuclidean,
}

impl MetricMode {
    fn edge(self, d: f64) -> f64 {
        match self {
            MetricMode::RealEuclidean => d,
            MetricMode::RoundedEuclidean => d.round(),
        }
    }
}

impl fmt::Display for MetricMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricMode::RealEuclidean => write!(f, "real"),
            MetricMode::RoundedEuclidean => write!(f, "rounded"),
        }
    }
}

impl FromStr for MetricMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(MetricMode::RealEuclidean),
            "rounded" => Ok(MetricMode::RoundedEuclidean),
            other => Err(Error::Config(format!(
                "unknown metric {other:?}, expected \"real\" or \"rounded\""
            ))),
        }
    }
}

/// A permutation of city indices; one candidate solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    order: Vec<usize>,
}

impl Tour {
    /// Validates that `order` is a permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &city in &order {
            if city >= n {
                return Err(Error::InvalidPermutation(format!(
                    "index {city} out of range for {n} cities"
                )));
            }
            if seen[city] {
                return Err(Error::InvalidPermutation(format!("index {city} appears twice")));
            }
            seen[city] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidPermutation(format!("index {missing} is missing")));
        }
        Ok(Tour { order })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Position of `city` in the permutation.
    pub fn position_of(&self, city: usize) -> Option<usize> {
        self.order.iter().position(|&c| c == city)
    }

    /// Swap the cities at two positions. Keeps the permutation invariant
    /// by construction, so no re-validation happens.
    pub(crate) fn swap_positions(&mut self, i: usize, j: usize) {
        self.order.swap(i, j);
    }

    /// Raw write; callers must restore the permutation invariant before
    /// the tour escapes.
    pub(crate) fn set_position(&mut self, p: usize, city: usize) {
        self.order[p] = city;
    }

    pub(crate) fn from_order_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Tour::new(order.clone()).is_ok());
        Tour { order }
    }
}

/// Closed-cycle length of `tour`: consecutive edges plus the edge from the
/// last city back to the first.
pub fn tour_cost(instance: &Instance, tour: &Tour, mode: MetricMode) -> Result<f64> {
    if tour.len() != instance.n() {
        return Err(Error::InvalidPermutation(format!(
            "tour has {} cities but instance has {}",
            tour.len(),
            instance.n()
        )));
    }
    Ok(cycle_cost(instance, tour.order(), mode))
}

fn cycle_cost(instance: &Instance, order: &[usize], mode: MetricMode) -> f64 {
    let n = order.len();
    let mut total = 0.0;
    for p in 0..n {
        let a = order[p];
        let b = order[(p + 1) % n];
        total += mode.edge(instance.dist(a, b));
    }
    total
}

/// Cost function wrapper that counts every evaluation it performs.
///
/// The search loops report how many evaluations they spent; the counter in
/// here is the independent tally those reports are audited against.
pub struct Evaluator<'a> {
    instance: &'a Instance,
    mode: MetricMode,
    count: Cell<u64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(instance: &'a Instance, mode: MetricMode) -> Self {
        Evaluator { instance, mode, count: Cell::new(0) }
    }

    pub fn instance(&self) -> &Instance {
        self.instance
    }

    pub fn mode(&self) -> MetricMode {
        self.mode
    }

    /// One cost evaluation. The tour must cover the instance's cities.
    pub fn eval(&self, tour: &Tour) -> f64 {
        debug_assert_eq!(tour.len(), self.instance.n());
        self.count.set(self.count.get() + 1);
        cycle_cost(self.instance, tour.order(), self.mode)
    }

    /// Number of evaluations performed so far.
    pub fn count(&self) -> u64 {
        self.count.get()
    }
}

/// Uniformly random permutation of `0..n` (unbiased shuffle).
pub fn random_tour(n: usize, rng: &mut impl Rng) -> Result<Tour> {
    if n < 3 {
        return Err(Error::Domain(format!("need n >= 3, got {n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Ok(Tour::from_order_unchecked(order))
}

/// Exact optimum by enumeration. City 0 is fixed first to skip cyclic
/// rotations; ties break toward the lexicographically smallest order.
pub fn brute_force_optimum(instance: &Instance, mode: MetricMode) -> Result<(Tour, f64)> {
    let n = instance.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    let mut best_order: Option<Vec<usize>> = None;
    let mut best_cost = f64::INFINITY;
    for tail in (1..n).permutations(n - 1) {
        let mut order = Vec::with_capacity(n);
        order.push(0);
        order.extend(tail);
        let cost = cycle_cost(instance, &order, mode);
        let better = cost < best_cost
            || (cost == best_cost && best_order.as_deref().is_some_and(|b| order.as_slice() < b));
        if better {
            best_cost = cost;
            best_order = Some(order);
        }
    }
    Ok((Tour::from_order_unchecked(best_order.expect("n >= 3")), best_cost))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn unit_square() -> Instance {
        Instance::new("square4", vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap()
    }

    fn tour(order: &[usize]) -> Tour {
        Tour::new(order.to_vec()).unwrap()
    }

    #[test]
    fn square_perimeter() {
        let sq = unit_square();
        let cost = tour_cost(&sq, &tour(&[0, 1, 2, 3]), MetricMode::RealEuclidean).unwrap();
        assert_eq!(cost, 4.0);
    }

    #[test]
    fn square_crossing_diagonals() {
        let sq = unit_square();
        let cost = tour_cost(&sq, &tour(&[0, 2, 1, 3]), MetricMode::RealEuclidean).unwrap();
        let expected = 2.0 + 2.0 * 2.0_f64.sqrt();
        assert!((cost - expected).abs() < 1e-12, "{cost} vs {expected}");
    }

    #[test]
    fn invalid_permutations_rejected() {
        let err = Tour::new(vec![0, 1, 1, 3]).unwrap_err();
        assert!(err.to_string().contains("1"), "{err}");
        let err = Tour::new(vec![0, 1, 2, 5]).unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
        let sq = unit_square();
        assert!(tour_cost(&sq, &tour(&[0, 1, 2]), MetricMode::RealEuclidean).is_err());
    }

    #[test]
    fn instance_validation() {
        assert!(Instance::new("tiny", vec![(0.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(Instance::new("nan", vec![(0.0, 0.0), (1.0, f64::NAN), (2.0, 0.0)]).is_err());
    }

    #[test]
    fn random_tour_small_n_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(random_tour(2, &mut rng).is_err());
    }

    #[test]
    fn random_tour_deterministic_under_seed() {
        let a = random_tour(5, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let b = random_tour(5, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_tour_first_position_chi_square() {
        // n=8, 60k draws, chi-square over first-position frequencies.
        // 7 degrees of freedom, significance 0.001 -> critical value 24.32.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 60_000;
        let n = 8;
        let mut freq = [0u64; 8];
        for _ in 0..draws {
            let t = random_tour(n, &mut rng).unwrap();
            freq[t.order()[0]] += 1;
        }
        let expected = draws as f64 / n as f64;
        let chi2: f64 = freq.iter().map(|&f| (f as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 24.32, "chi-square {chi2} exceeds the 0.001 critical value");
    }

    #[test]
    fn brute_force_square() {
        let sq = unit_square();
        let (t, cost) = brute_force_optimum(&sq, MetricMode::RealEuclidean).unwrap();
        assert_eq!(cost, 4.0);
        assert_eq!(t.order()[0], 0);
    }

    #[test]
    fn brute_force_pentagon() {
        let coords: Vec<(f64, f64)> = (0..5)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                (a.cos(), a.sin())
            })
            .collect();
        let pent = Instance::new("pentagon5", coords).unwrap();
        let (_, cost) = brute_force_optimum(&pent, MetricMode::RealEuclidean).unwrap();
        let expected = 10.0 * (std::f64::consts::PI / 5.0).sin();
        assert!((cost - expected).abs() < 1e-9, "{cost} vs {expected}");
    }

    #[test]
    fn brute_force_refuses_large_n() {
        let coords: Vec<(f64, f64)> = (0..12).map(|i| (i as f64, 0.0)).collect();
        let inst = Instance::new("line12", coords).unwrap();
        assert!(matches!(
            brute_force_optimum(&inst, MetricMode::RealEuclidean),
            Err(Error::TooLarge { n: 12, .. })
        ));
    }

    #[test]
    fn brute_force_matches_independent_full_enumeration() {
        // Second enumerator: scan all n! permutations without fixing city 0.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let coords: Vec<(f64, f64)> = (0..8).map(|_| (rng.gen::<f64>() * 100.0, rng.gen::<f64>() * 100.0)).collect();
        let inst = Instance::new("rand8", coords).unwrap();
        let (_, cost) = brute_force_optimum(&inst, MetricMode::RealEuclidean).unwrap();
        let full_min = (0..8usize)
            .permutations(8)
            .map(|order| cycle_cost(&inst, &order, MetricMode::RealEuclidean))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(cost, full_min);
    }

    #[test]
    fn evaluator_counts() {
        let sq = unit_square();
        let ev = Evaluator::new(&sq, MetricMode::RealEuclidean);
        let t = tour(&[0, 1, 2, 3]);
        ev.eval(&t);
        ev.eval(&t);
        assert_eq!(ev.count(), 2);
    }

    proptest! {
        #[test]
        fn cost_invariant_under_rotation_and_reversal(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 3 + (seed as usize % 8);
            let coords: Vec<(f64, f64)> =
                (0..n).map(|_| (rng.gen::<f64>() * 50.0, rng.gen::<f64>() * 50.0)).collect();
            let inst = Instance::new("p", coords).unwrap();
            let t = random_tour(n, &mut rng).unwrap();
            for mode in [MetricMode::RealEuclidean, MetricMode::RoundedEuclidean] {
                let base = tour_cost(&inst, &t, mode).unwrap();
                let mut rotated = t.order().to_vec();
                rotated.rotate_left(1 + seed as usize % n);
                let rot = tour_cost(&inst, &Tour::new(rotated).unwrap(), mode).unwrap();
                let mut reversed = t.order().to_vec();
                reversed.reverse();
                let rev = tour_cost(&inst, &Tour::new(reversed).unwrap(), mode).unwrap();
                prop_assert!((base - rot).abs() < 1e-9);
                prop_assert!((base - rev).abs() < 1e-9);
                prop_assert!(base >= 0.0);
            }
        }

        #[test]
        fn random_tour_is_valid_permutation(seed in 0u64..200, n in 3usize..30) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_tour(n, &mut rng).unwrap();
            prop_assert!(Tour::new(t.order().to_vec()).is_ok());
        }
    }
}

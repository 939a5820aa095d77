//! Chase-and-escape metaheuristic for the Traveling Salesman Problem.
//!
//! Two search states walk the cost landscape at once: an *evader* that only
//! accepts cost-improving two-city exchanges, and a *chaser* that ignores
//! cost and aligns one city per step with the evader's permutation. The
//! lower-cost state always carries the evader label; when the chaser lands
//! on the evader's exact permutation (a "catch", read as a local minimum)
//! the shared state is repelled by scrambling R randomly chosen cities.
//!
//! The crate also ships the comparator the method is judged against
//! (first-improvement descent with the same R-perturbation restarts), a
//! TSPLIB EUC_2D reader, a repeated-trial benchmark harness, and SVG tour
//! rendering. Everything is deterministic under a fixed seed.

pub mod baseline;
pub mod domain;
pub mod engine;
pub mod error;
pub mod harness;
pub mod moves;
pub mod svg;
pub mod tsplib;

pub use domain::{brute_force_optimum, random_tour, tour_cost, Evaluator, Instance, MetricMode, Tour};
pub use engine::{run_chase_escape, DuelState, RunConfig, TrialStats};
pub use error::Error;

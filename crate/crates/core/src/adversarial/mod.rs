//! Lower-bound constructions: a fixed-instance generator and three adaptive
//! adversaries that pick each round's cost after seeing the previous move.
//!
//! Every game returns a [`GameTranscript`] holding the instance that was
//! actually played, so costs can be replayed through [`Instance::evaluate`].

use alloc::vec::Vec;

use crate::algorithms::OnlineAlgorithm;
use crate::error::Result;
use crate::model::{competitive_ratio, DecisionSpace, Instance};

mod bregman;
mod memoryless;
mod prop5;
mod thm5;

pub use bregman::{play_bregman_game, quadratic_path_optimum, BregmanOutcome};
pub use memoryless::{play_memoryless_game, MemorylessConstants, MEMORYLESS_PENALTY};
pub use prop5::{gen_prop5_instance, Prop5Instance, StepSource};
pub use thm5::{play_thm5_game, Thm5Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// Exact or grid-DP hindsight optimum.
    Optimum,
    /// The cheaper of the trajectories described by the construction
    /// (follow the minimizers, follow the predictions). An upper bound on
    /// the optimum, so the measured ratio is a lower bound on the true one.
    ConstructionReference,
}

#[derive(Debug, Clone)]
pub struct GameTranscript<S: DecisionSpace> {
    pub instance: Instance<S>,
    pub predictions: Vec<S::Point>,
    pub decisions: Vec<S::Point>,
    /// Branch taken in each round (games without branching record 1).
    pub branches: Vec<u8>,
    pub alg_cost: f64,
    pub comparison_cost: f64,
    pub comparison: Comparison,
    pub measured_cr: f64,
    /// Game-specific diagnostics, e.g. penalty slack or grid error bounds.
    pub notes: Vec<(&'static str, f64)>,
}

impl<S: DecisionSpace> GameTranscript<S> {
    pub(crate) fn new(
        instance: Instance<S>,
        predictions: Vec<S::Point>,
        decisions: Vec<S::Point>,
        branches: Vec<u8>,
        comparison_cost: f64,
        comparison: Comparison,
    ) -> Result<Self> {
        let alg_cost = instance.evaluate(decisions.clone())?.total();
        Ok(GameTranscript {
            instance,
            predictions,
            decisions,
            branches,
            alg_cost,
            comparison_cost,
            comparison,
            measured_cr: competitive_ratio(alg_cost, comparison_cost),
            notes: Vec::new(),
        })
    }

    /// Total cost of the recorded decisions, recomputed from the instance.
    pub fn replay(&self) -> Result<f64> {
        Ok(self.instance.evaluate(self.decisions.clone())?.total())
    }

    pub fn note(&self, key: &str) -> Option<f64> {
        self.notes.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }
}

/// Adapts a single-round rule `(x_{t−1}, x̃_t, f_t) ↦ x_t` to
/// [`OnlineAlgorithm`], so user rules can face the adaptive adversaries.
pub struct Memoryless<P, F> {
    prev: P,
    rule: F,
}

impl<P, F> Memoryless<P, F> {
    pub fn new(x0: P, rule: F) -> Self {
        Memoryless { prev: x0, rule }
    }
}

impl<S, F> OnlineAlgorithm<S> for Memoryless<S::Point, F>
where
    S: DecisionSpace,
    F: FnMut(&S, &S::Point, &S::Point, &S::Cost) -> Result<S::Point>,
{
    fn decide(&mut self, space: &S, cost: &S::Cost, prediction: &S::Point) -> Result<S::Point> {
        let x = (self.rule)(space, &self.prev, prediction, cost)?;
        self.prev = x.clone();
        Ok(x)
    }
}

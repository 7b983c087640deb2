use super::{run_online, OnlineAlgorithm};
use crate::error::Result;
use crate::model::{DecisionSpace, HittingCost, Instance, Trajectory};

/// Follows the minimizers `v_t`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Greedy;

impl<S: DecisionSpace> OnlineAlgorithm<S> for Greedy {
    fn decide(&mut self, _: &S, cost: &S::Cost, _: &S::Point) -> Result<S::Point> {
        Ok(cost.minimizer())
    }
}

/// Outputs the prediction verbatim.
#[derive(Debug, Clone, Copy, Default)]
pub struct Blind;

impl<S: DecisionSpace> OnlineAlgorithm<S> for Blind {
    fn decide(&mut self, _: &S, _: &S::Cost, prediction: &S::Point) -> Result<S::Point> {
        Ok(prediction.clone())
    }
}

pub fn run_greedy<S: DecisionSpace>(inst: &Instance<S>) -> Result<Trajectory<S::Point>> {
    inst.evaluate(inst.minimizers())
}

pub fn run_blind<S: DecisionSpace>(inst: &Instance<S>, preds: &[S::Point]) -> Result<Trajectory<S::Point>> {
    run_online(inst, preds, Blind)
}

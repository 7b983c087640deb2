//! Online algorithms. Each one is a stateful [`OnlineAlgorithm`] that sees
//! a single round at a time, so the same objects drive both fixed instances
//! ([`run_online`]) and the adaptive adversaries in [`crate::adversarial`].

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{DecisionSpace, Instance, Trajectory};

mod aobd;
mod aos;
mod baselines;
mod ftp;

pub use aobd::{run_aobd, Aobd, AobdParams, AobdRun};
pub use aos::{run_aos, Aos, AosMode, AosRound, AosRun};
pub use baselines::{run_blind, run_greedy, Blind, Greedy};
pub use ftp::{run_ftp, FollowThePrediction};

pub trait OnlineAlgorithm<S: DecisionSpace> {
    /// Decision for the current round, given its hitting cost and prediction.
    fn decide(&mut self, space: &S, cost: &S::Cost, prediction: &S::Point) -> Result<S::Point>;
}

impl<S: DecisionSpace, A: OnlineAlgorithm<S> + ?Sized> OnlineAlgorithm<S> for &mut A {
    fn decide(&mut self, space: &S, cost: &S::Cost, prediction: &S::Point) -> Result<S::Point> {
        (**self).decide(space, cost, prediction)
    }
}

/// Feeds an instance round by round to `alg` and evaluates its decisions.
pub fn run_online<S, A>(
    inst: &Instance<S>,
    preds: &[S::Point],
    mut alg: A,
) -> Result<Trajectory<S::Point>>
where
    S: DecisionSpace,
    A: OnlineAlgorithm<S>,
{
    inst.check_predictions(preds)?;
    let mut decisions = Vec::with_capacity(inst.horizon());
    for (t, (f, pred)) in inst.costs.iter().zip(preds).enumerate() {
        let x = alg.decide(&inst.space, f, pred).map_err(|e| at_round(e, t + 1))?;
        if !inst.space.contains(&x) {
            return Err(Error::InvalidDecision { round: t + 1 });
        }
        decisions.push(x);
    }
    inst.evaluate(decisions)
}

/// Attaches the round number to oracle failures.
pub(crate) fn at_round(e: Error, round: usize) -> Error {
    match e {
        Error::InfeasibleRound { .. } => Error::InfeasibleRound { round },
        Error::InvalidDecision { .. } => Error::InvalidDecision { round },
        other => other,
    }
}

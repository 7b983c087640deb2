//! Two-round game on the real line against algorithms that trust a
//! prediction at `1` while the first cost pulls only weakly toward it.

use alloc::vec;

use super::{Comparison, GameTranscript};
use crate::algorithms::OnlineAlgorithm;
use crate::error::{Error, Result};
use crate::model::{Convex1d, Instance, PiecewiseLinear, RealLine};
use crate::offline::{opt_dp_grid, GridSpec};

#[derive(Debug, Clone)]
pub struct Thm5Outcome {
    /// Branch the adversary plays against the first decision (1 or 2).
    pub branch: u8,
    /// Transcripts of both continuations, index 0 for branch 1. The branch
    /// not played is a counterfactual replay of the same algorithm.
    pub transcripts: [GameTranscript<RealLine>; 2],
    /// Whether branch 2 stays within `(1 + δ)·OPT + grid error`.
    pub branch2_consistent: bool,
}

impl Thm5Outcome {
    pub fn played(&self) -> &GameTranscript<RealLine> {
        &self.transcripts[self.branch as usize - 1]
    }
}

fn branch_instance(delta: f64, branch: u8) -> Result<(Instance<RealLine>, [f64; 2])> {
    let f1 = PiecewiseLinear::abs(1.0, 2.0 * delta, 0.0)?;
    let (f2, pred2) = match branch {
        1 => (PiecewiseLinear::abs(0.0, 1.0, 0.0)?, 0.0),
        _ => (PiecewiseLinear::abs(1.0, 1.0, 0.0)?, 1.0),
    };
    let inst = Instance::new(RealLine::FULL, 0.0, vec![Convex1d::from(f1), Convex1d::from(f2)])?;
    Ok((inst, [1.0, pred2]))
}

fn play_branch<A: OnlineAlgorithm<RealLine>>(mut alg: A, delta: f64, branch: u8) -> Result<GameTranscript<RealLine>> {
    let (inst, preds) = branch_instance(delta, branch)?;
    let mut decisions = vec![];
    for (t, (f, p)) in inst.costs.iter().zip(preds).enumerate() {
        let x = alg
            .decide(&inst.space, f, &p)
            .map_err(|e| crate::algorithms::at_round(e, t + 1))?;
        if !x.is_finite() {
            return Err(Error::InvalidDecision { round: t + 1 });
        }
        decisions.push(x);
    }
    let opt = opt_dp_grid(&inst, &GridSpec::default())?;
    let first = decisions[0];
    let mut tr = GameTranscript::new(
        inst,
        preds.to_vec(),
        decisions,
        vec![branch; 2],
        opt.total(),
        Comparison::Optimum,
    )?;
    tr.notes.push(("opt_error_bound", opt.error_bound));
    tr.notes.push(("first_decision", first));
    Ok(tr)
}

/// Plays the game for `0 < δ < 1/2`. `make` must build the same
/// deterministic algorithm each time; it is called once per branch.
pub fn play_thm5_game<A, F>(mut make: F, delta: f64) -> Result<Thm5Outcome>
where
    A: OnlineAlgorithm<RealLine>,
    F: FnMut() -> A,
{
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::param("delta", "needs 0 < delta < 1/2"));
    }
    let b1 = play_branch(make(), delta, 1)?;
    let b2 = play_branch(make(), delta, 2)?;
    if b1.decisions[0] != b2.decisions[0] {
        return Err(Error::ModelViolation(
            "algorithm is not deterministic: first decisions differ between replays".into(),
        ));
    }
    let branch = if b1.decisions[0] >= 0.5 { 1 } else { 2 };
    let err = b2.note("opt_error_bound").unwrap_or(0.0);
    let branch2_consistent = b2.alg_cost <= (1.0 + delta) * b2.comparison_cost + err + 1e-9;
    Ok(Thm5Outcome {
        branch,
        transcripts: [b1, b2],
        branch2_consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{Aobd, AobdParams, Blind, Greedy};

    #[test]
    fn blind_is_punished_on_branch_one() {
        for d in [0.1, 0.25, 0.4] {
            let o = play_thm5_game(|| Blind, d).unwrap();
            assert_eq!(o.branch, 1);
            let tr = o.played();
            assert_eq!(tr.alg_cost, 2.0);
            assert!((tr.comparison_cost - 2.0 * d).abs() < 1e-12);
            assert!(tr.measured_cr >= 1.0 / (2.0 * d) - 1e-6);
            assert!(o.branch2_consistent);
        }
    }

    #[test]
    fn greedy_engages_branch_one() {
        let o = play_thm5_game(|| Greedy, 0.25).unwrap();
        assert_eq!(o.played().decisions[0], 1.0);
        assert_eq!(o.branch, 1);
    }

    #[test]
    fn aobd_is_consistent_on_branch_two() {
        for d in [0.1, 0.25, 0.4] {
            let p = AobdParams::from_delta(d).unwrap();
            let o = play_thm5_game(|| Aobd::new(0.0, p), d).unwrap();
            assert!(o.branch2_consistent, "delta {d}: {}", o.transcripts[1].alg_cost);
        }
        // x₁ = 2/3 at δ = 1/4, so branch 1 costs 2δ/3 + 2/3 + 2/3
        let p = AobdParams::from_delta(0.25).unwrap();
        let o = play_thm5_game(|| Aobd::new(0.0, p), 0.25).unwrap();
        assert!((o.played().decisions[0] - 2.0 / 3.0).abs() < 1e-9);
        assert!((o.transcripts[0].alg_cost - 1.5).abs() < 1e-9);
    }

    #[test]
    fn rejects_out_of_range_delta() {
        assert!(play_thm5_game(|| Blind, 0.5).is_err());
        assert!(play_thm5_game(|| Blind, 0.0).is_err());
    }
}

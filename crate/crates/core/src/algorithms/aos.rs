//! Adaptive Online Switching.
//!
//! The algorithm runs the filtered-prediction stream `p_t` (FtP) and the
//! minimizer stream `v_t` side by side and switches between them in stages.
//! Stage `k` starts at round `T_k` following `p`; once the accumulated
//! prediction cost gets too large relative to the robust alternative it
//! switches to `v` at round `M_k`, and returns to `p` at `T_{k+1}` once the
//! minimizers have been expensive enough.
//!
//! Both stage transitions follow the algorithm listing literally: the round
//! that triggers a switch is itself served by the new stream, and the
//! condition of the new mode is first tested on the following round.

use alloc::vec::Vec;

use super::{run_online, FollowThePrediction, OnlineAlgorithm};
use crate::error::{Error, Result};
use crate::model::{DecisionSpace, HittingCost, Instance, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AosMode {
    /// Outputting `p_t`.
    FollowAdv,
    /// Outputting `v_t`.
    FollowRob,
}

/// One round of the AOS log.
#[derive(Debug, Clone, PartialEq)]
pub struct AosRound<P> {
    pub t: usize,
    /// Stream the decision was taken from.
    pub mode: AosMode,
    /// Stage index `k` (1-based).
    pub stage: usize,
    pub p: P,
    pub v: P,
    pub adv: f64,
    pub rob: f64,
    /// `f_t(x_t) + d(x_t, x_{t-1})`.
    pub alg: f64,
    /// `d(v_t, p_t)`.
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct Aos<P> {
    delta: f64,
    ftp: FollowThePrediction<P>,
    prev_v: P,
    prev_x: P,
    mode: AosMode,
    stage: usize,
    /// `Σ_{i=T_k}^{t-1} Adv(i)`.
    stage_adv: f64,
    /// `Σ_{i=M_k+1}^{t-1} Rob(i)` and `Adv(i)`.
    since_m_rob: f64,
    since_m_adv: f64,
    /// `d(v_{M_k}, p_{M_k})`.
    gap_at_m: f64,
    log: Vec<AosRound<P>>,
}

impl<P: Clone> Aos<P> {
    pub fn new(x0: P, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::param("delta", "must be a positive finite number"));
        }
        Ok(Aos {
            delta,
            ftp: FollowThePrediction::new(x0.clone()),
            prev_v: x0.clone(),
            prev_x: x0,
            mode: AosMode::FollowAdv,
            stage: 1,
            stage_adv: 0.0,
            since_m_rob: 0.0,
            since_m_adv: 0.0,
            gap_at_m: 0.0,
            log: Vec::new(),
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn mode(&self) -> AosMode {
        self.mode
    }

    pub fn log(&self) -> &[AosRound<P>] {
        &self.log
    }

    pub fn into_log(self) -> Vec<AosRound<P>> {
        self.log
    }
}

impl<S: DecisionSpace> OnlineAlgorithm<S> for Aos<S::Point> {
    fn decide(&mut self, space: &S, cost: &S::Cost, prediction: &S::Point) -> Result<S::Point> {
        let prev_p = self.ftp.previous().clone();
        let p = OnlineAlgorithm::<S>::decide(&mut self.ftp, space, cost, prediction)?;
        let v = cost.minimizer();
        let adv = cost.eval(&p) + space.distance(&p, &prev_p);
        let rob = cost.eval(&v) + space.distance(&v, &self.prev_v);
        let gap = space.distance(&v, &p);
        let d = self.delta;

        let mode = match self.mode {
            AosMode::FollowAdv => {
                let lhs = self.stage_adv + rob + space.distance(&prev_p, &self.prev_v) + gap;
                if lhs >= (1.0 + d) * (self.stage_adv + adv) {
                    AosMode::FollowAdv
                } else {
                    self.mode = AosMode::FollowRob;
                    self.since_m_rob = 0.0;
                    self.since_m_adv = 0.0;
                    self.gap_at_m = gap;
                    AosMode::FollowRob
                }
            }
            AosMode::FollowRob => {
                self.since_m_rob += rob;
                self.since_m_adv += adv;
                let lhs = self.since_m_rob + gap - self.gap_at_m;
                let rhs = (1.0 + d) * self.since_m_adv + d * (self.stage_adv + adv);
                if lhs <= rhs {
                    AosMode::FollowRob
                } else {
                    self.mode = AosMode::FollowAdv;
                    self.stage += 1;
                    self.stage_adv = 0.0;
                    AosMode::FollowAdv
                }
            }
        };
        self.stage_adv += adv;

        let x = match mode {
            AosMode::FollowAdv => p.clone(),
            AosMode::FollowRob => v.clone(),
        };
        let alg = cost.eval(&x) + space.distance(&x, &self.prev_x);
        self.log.push(AosRound {
            t: self.log.len() + 1,
            mode,
            stage: self.stage,
            p,
            v: v.clone(),
            adv,
            rob,
            alg,
            gap,
        });
        self.prev_v = v;
        self.prev_x = x.clone();
        Ok(x)
    }
}

/// Result of an AOS run together with its per-round log.
#[derive(Debug, Clone)]
pub struct AosRun<P> {
    pub trajectory: Trajectory<P>,
    pub rounds: Vec<AosRound<P>>,
    pub delta: f64,
}

impl<P> AosRun<P> {
    /// `Σ Adv(t)`, the FtP cost.
    pub fn adv_total(&self) -> f64 {
        self.rounds.iter().map(|r| r.adv).sum()
    }

    /// `Σ Rob(t)`, the greedy cost.
    pub fn rob_total(&self) -> f64 {
        self.rounds.iter().map(|r| r.rob).sum()
    }

    /// First round of every stage (`T_1, T_2, …`).
    pub fn stage_starts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut last = 0;
        for r in &self.rounds {
            if r.stage != last {
                out.push(r.t);
                last = r.stage;
            }
        }
        out
    }

    /// Rounds `M_k` at which the algorithm switched to the minimizers.
    pub fn switch_rounds(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut prev = AosMode::FollowAdv;
        for r in &self.rounds {
            if r.mode == AosMode::FollowRob && prev == AosMode::FollowAdv {
                out.push(r.t);
            }
            prev = r.mode;
        }
        out
    }

    /// Smallest slack of the per-stage inequality
    /// `Σ_{T_k}^t Alg − d(v_{T_k−1}, p_{T_k−1}) ≤ (1+2δ) Σ_{T_k}^t Adv − d(x_t, p_t)`
    /// over all rounds. Non-negative (up to rounding) on every run.
    ///
    /// `d(x_t, p_t)` is 0 on `p`-rounds and `d(v_t, p_t)` on `v`-rounds.
    pub fn stage_slack(&self) -> f64 {
        let mut worst = f64::INFINITY;
        let mut alg = 0.0;
        let mut adv = 0.0;
        let mut offset = 0.0;
        for (i, r) in self.rounds.iter().enumerate() {
            if i == 0 || r.stage != self.rounds[i - 1].stage {
                alg = 0.0;
                adv = 0.0;
                offset = if i == 0 { 0.0 } else { self.rounds[i - 1].gap };
            }
            alg += r.alg;
            adv += r.adv;
            let dx = match r.mode {
                AosMode::FollowAdv => 0.0,
                AosMode::FollowRob => r.gap,
            };
            let slack = (1.0 + 2.0 * self.delta) * adv - dx - (alg - offset);
            worst = worst.min(slack);
        }
        worst
    }
}

pub fn run_aos<S: DecisionSpace>(
    inst: &Instance<S>,
    preds: &[S::Point],
    delta: f64,
) -> Result<AosRun<S::Point>> {
    inst.require_metric("AOS")?;
    let mut aos = Aos::new(inst.x0.clone(), delta)?;
    let trajectory = run_online(inst, preds, &mut aos)?;
    Ok(AosRun {
        trajectory,
        rounds: aos.into_log(),
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{run_ftp, run_greedy};
    use crate::model::{FiniteSpace, TableCost};
    use alloc::vec;

    fn line_instance() -> Instance<FiniteSpace> {
        let space = FiniteSpace::from_coords(vec![0.0, 1.0, 2.0, 5.0]).unwrap();
        let costs = vec![
            TableCost::new(vec![1.0, 0.0, 2.0, 4.0]).unwrap(),
            TableCost::new(vec![2.0, 0.5, 0.0, 3.0]).unwrap(),
            TableCost::new(vec![3.0, 2.0, 1.0, 0.0]).unwrap(),
            TableCost::new(vec![0.0, 1.0, 2.0, 5.0]).unwrap(),
            TableCost::new(vec![2.0, 0.0, 1.0, 3.0]).unwrap(),
        ];
        Instance::new(space, 0, costs).unwrap()
    }

    #[test]
    fn rejects_non_positive_delta() {
        let inst = line_instance();
        let preds = inst.minimizers();
        assert!(matches!(
            run_aos(&inst, &preds, 0.0),
            Err(Error::InvalidParameter { name: "delta", .. })
        ));
        assert!(run_aos(&inst, &preds, -1.0).is_err());
    }

    #[test]
    fn perfect_minimizer_predictions_cost_the_same_as_ftp() {
        let inst = line_instance();
        let preds = inst.minimizers();
        let run = run_aos(&inst, &preds, 0.3).unwrap();
        // with x̃ = v the filtered stream is the minimizer stream
        assert!(run.rounds.iter().all(|r| r.p == r.v && r.adv == r.rob));
        // switching to v costs exactly as much as staying, so the first
        // round with positive cost moves to FollowRob, which never exits
        assert_eq!(run.switch_rounds(), vec![1]);
        assert_eq!(run.stage_starts(), vec![1]);
        let ftp = run_ftp(&inst, &preds).unwrap();
        assert_eq!(run.trajectory.total(), ftp.total());
    }

    #[test]
    fn streams_match_standalone_runs() {
        let inst = line_instance();
        let preds = [3, 3, 0, 3, 0];
        let run = run_aos(&inst, &preds, 0.5).unwrap();
        let ftp = run_ftp(&inst, &preds).unwrap();
        let greedy = run_greedy(&inst).unwrap();
        assert!((run.adv_total() - ftp.total()).abs() < 1e-12);
        assert!((run.rob_total() - greedy.total()).abs() < 1e-12);
        let ps: Vec<usize> = run.rounds.iter().map(|r| r.p).collect();
        assert_eq!(ps.as_slice(), ftp.decisions());
        assert!(run.trajectory.total() <= 2.0 * ftp.total() + 1e-9);
        assert!(run.stage_slack() >= -1e-9);
    }

    #[test]
    fn bad_predictions_trigger_switch() {
        // predictions sit on an expensive point every round
        let space = FiniteSpace::from_coords(vec![0.0, 1.0]).unwrap();
        let f = TableCost::new(vec![0.0, 10.0]).unwrap();
        let inst = Instance::new(space, 0, vec![f; 6]).unwrap();
        let preds = [1usize; 6];
        let run = run_aos(&inst, &preds, 0.1).unwrap();
        // FtP itself filters to 0 here, so AOS stays with it
        assert!(run.rounds.iter().all(|r| r.p == 0));
        assert_eq!(run.trajectory.total(), 0.0);
    }
}

use super::{run_online, OnlineAlgorithm};
use crate::error::Result;
use crate::model::{DecisionSpace, Instance, Trajectory};

/// Follow the Prediction: `p_t = argmin_p f_t(p) + d(p, p_{t-1}) + d(p, x̃_t)`
/// with `p_0 = x_0`.
#[derive(Debug, Clone)]
pub struct FollowThePrediction<P> {
    prev: P,
}

impl<P: Clone> FollowThePrediction<P> {
    pub fn new(x0: P) -> Self {
        FollowThePrediction { prev: x0 }
    }

    /// The last filtered point `p_{t-1}`.
    pub fn previous(&self) -> &P {
        &self.prev
    }
}

impl<S: DecisionSpace> OnlineAlgorithm<S> for FollowThePrediction<S::Point> {
    fn decide(&mut self, space: &S, cost: &S::Cost, prediction: &S::Point) -> Result<S::Point> {
        let p = space.argmin(cost, &[(self.prev.clone(), 1.0), (prediction.clone(), 1.0)])?;
        self.prev = p.clone();
        Ok(p)
    }
}

pub fn run_ftp<S: DecisionSpace>(inst: &Instance<S>, preds: &[S::Point]) -> Result<Trajectory<S::Point>> {
    inst.require_metric("FtP")?;
    run_online(inst, preds, FollowThePrediction::new(inst.x0.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FiniteSpace, HittingCost, MetricSpace, TableCost};
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn stays_put_when_predictions_are_free_minimizers() {
        let space = FiniteSpace::from_coords(vec![0.0, 1.0, 3.0]).unwrap();
        let f = TableCost::new(vec![0.0, 1.0, 3.0]).unwrap();
        let inst = Instance::new(space, 0, vec![f; 4]).unwrap();
        let traj = run_ftp(&inst, &[0, 0, 0, 0]).unwrap();
        assert_eq!(traj.decisions(), &[0, 0, 0, 0]);
        assert_eq!(traj.total(), 0.0);
    }

    /// Replays the greedy recursion by enumerating all 5³ sequences and
    /// keeping those consistent with the per-round argmin (first index on ties).
    #[test]
    fn matches_enumerated_recursion() {
        let coords = vec![0.0, 1.5, 2.0, 4.0, 7.0];
        let space = FiniteSpace::from_coords(coords.clone()).unwrap();
        let costs = vec![
            TableCost::new(vec![3.0, 0.5, 2.0, 4.0, 1.0]).unwrap(),
            TableCost::new(vec![1.0, 2.0, 0.0, 6.0, 2.5]).unwrap(),
            TableCost::new(vec![5.0, 4.0, 2.0, 1.0, 0.0]).unwrap(),
        ];
        let preds = [4usize, 0, 3];
        let inst = Instance::new(space.clone(), 0, costs.clone()).unwrap();
        let ftp = run_ftp(&inst, &preds).unwrap();

        let d = |a: usize, b: usize| (coords[a] - coords[b]).abs();
        let obj = |t: usize, p: usize, prev: usize| costs[t].eval(&p) + d(p, prev) + d(p, preds[t]);
        let mut matching: Vec<[usize; 3]> = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    let seq = [a, b, c];
                    let ok = (0..3).all(|t| {
                        let prev = if t == 0 { 0 } else { seq[t - 1] };
                        let best = (0..5).map(|p| obj(t, p, prev)).fold(f64::INFINITY, f64::min);
                        let first = (0..5).find(|&p| obj(t, p, prev) == best).unwrap();
                        seq[t] == first
                    });
                    if ok {
                        matching.push(seq);
                    }
                }
            }
        }
        assert_eq!(matching.len(), 1);
        assert_eq!(ftp.decisions(), &matching[0]);
        assert!(space.distance(&0, &4) > 0.0);
    }
}

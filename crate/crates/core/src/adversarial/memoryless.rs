//! Adaptive adversary in the Euclidean plane against memoryless algorithms.
//!
//! Each round is a rotated and scaled copy of one template: in frame
//! coordinates the previous decision sits at `(0, r₂)`, the cost is
//! `α|x + c| + L|y|` (minimizer `(−c, 0)`) and the prediction is
//! `(√(1 − r₂²), 0)`, with `r₁ = α`, `r₂ = √(2α)` and `c = (r₂² − r₁²)/(2r₁)`.
//! If the decision lands beyond `r₁` along the axis the next frame pivots
//! on the minimizer (branch 1), otherwise on the prediction (branch 2).

use alloc::vec::Vec;

use super::{Comparison, GameTranscript};
use crate::algorithms::OnlineAlgorithm;
use crate::error::{Error, Result};
use crate::model::{Instance, MetricSpace, Plane, Polyhedral2d};

/// Off-axis penalty standing in for an infinitely steep wall.
pub const MEMORYLESS_PENALTY: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemorylessConstants {
    pub r1: f64,
    pub r2: f64,
    /// Distance from the origin to the minimizer along the axis.
    pub c: f64,
    /// Distance from the template start `(0, r₂)` to the minimizer.
    pub r0: f64,
    /// Prediction coordinate `√(1 − r₂²)`.
    pub pred: f64,
}

impl MemorylessConstants {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 0.25) {
            return Err(Error::param("alpha", "needs 0 < alpha < 1/4"));
        }
        let r1 = alpha;
        let r2 = libm::sqrt(2.0 * alpha);
        Ok(MemorylessConstants {
            r1,
            r2,
            c: (r2 * r2 - r1 * r1) / (2.0 * r1),
            r0: (r1 * r1 + r2 * r2) / (2.0 * r1),
            pred: libm::sqrt(1.0 - r2 * r2),
        })
    }
}

/// Orthonormal frame with a scale: world = origin + scale·(a·axis + b·axis⊥).
#[derive(Debug, Clone, Copy)]
struct Frame {
    origin: [f64; 2],
    axis: [f64; 2],
    scale: f64,
}

impl Frame {
    fn perp(&self) -> [f64; 2] {
        [-self.axis[1], self.axis[0]]
    }

    fn world(&self, a: f64, b: f64) -> [f64; 2] {
        let n = self.perp();
        [
            self.origin[0] + self.scale * (a * self.axis[0] + b * n[0]),
            self.origin[1] + self.scale * (a * self.axis[1] + b * n[1]),
        ]
    }

    fn local(&self, x: [f64; 2]) -> [f64; 2] {
        let d = [x[0] - self.origin[0], x[1] - self.origin[1]];
        let n = self.perp();
        [
            (d[0] * self.axis[0] + d[1] * self.axis[1]) / self.scale,
            (d[0] * n[0] + d[1] * n[1]) / self.scale,
        ]
    }

    /// The frame in which `pivot` has local coordinates `(pa, 0)` and `x`
    /// has `(0, r₂)`.
    fn pivot(pivot: [f64; 2], pa: f64, x: [f64; 2], r2: f64) -> Result<Frame> {
        let w = [x[0] - pivot[0], x[1] - pivot[1]];
        let len = libm::hypot(w[0], w[1]);
        let unit = libm::hypot(pa, r2);
        if !(len > 0.0 && len.is_finite()) {
            return Err(Error::ModelViolation("adversary frame degenerated".into()));
        }
        let scale = len / unit;
        // w/scale = −pa·axis + r₂·axis⊥; rotate w back by the template angle
        let (cs, sn) = (-pa / unit, r2 / unit);
        let wn = [w[0] / len, w[1] / len];
        let axis = [cs * wn[0] + sn * wn[1], -sn * wn[0] + cs * wn[1]];
        let norm = libm::hypot(axis[0], axis[1]);
        let axis = [axis[0] / norm, axis[1] / norm];
        let origin = [
            pivot[0] - scale * pa * axis[0],
            pivot[1] - scale * pa * axis[1],
        ];
        Ok(Frame { origin, axis, scale })
    }
}

/// Plays `rounds` rounds against `alg`, starting from `(0, r₂)`.
///
/// The comparison is the cheaper of following the minimizers and following
/// the predictions, recorded as [`Comparison::ConstructionReference`].
/// Notes: `penalty_paid` (total off-axis cost of the algorithm), `final_scale`.
pub fn play_memoryless_game<A: OnlineAlgorithm<Plane>>(
    mut alg: A,
    alpha: f64,
    rounds: usize,
) -> Result<GameTranscript<Plane>> {
    let k = MemorylessConstants::new(alpha)?;
    if rounds == 0 {
        return Err(Error::param("rounds", "must be at least 1"));
    }
    let x0 = [0.0, k.r2];
    let mut frame = Frame {
        origin: [0.0, 0.0],
        axis: [1.0, 0.0],
        scale: 1.0,
    };
    let mut costs = Vec::with_capacity(rounds);
    let mut preds = Vec::with_capacity(rounds);
    let mut decisions = Vec::with_capacity(rounds);
    let mut branches = Vec::with_capacity(rounds);
    let mut penalty_paid = 0.0;
    // the pivot of the previous frame is carried over exactly, not recomputed
    let (mut keep_v, mut keep_pred) = (None, None);
    for t in 1..=rounds {
        let v = keep_v.unwrap_or_else(|| frame.world(-k.c, 0.0));
        let pred = keep_pred.unwrap_or_else(|| frame.world(k.pred, 0.0));
        let f = Polyhedral2d::new(v, frame.axis, alpha, MEMORYLESS_PENALTY)?;
        let x = alg
            .decide(&Plane, &f, &pred)
            .map_err(|e| crate::algorithms::at_round(e, t))?;
        if !Plane.contains(&x) {
            return Err(Error::InvalidDecision { round: t });
        }
        let local = frame.local(x);
        penalty_paid += MEMORYLESS_PENALTY * frame.scale * libm::fabs(local[1]);
        let (branch, next) = if local[0] > k.r1 {
            (keep_v, keep_pred) = (Some(v), None);
            (1, Frame::pivot(v, -k.c, x, k.r2)?)
        } else {
            (keep_v, keep_pred) = (None, Some(pred));
            (2, Frame::pivot(pred, k.pred, x, k.r2)?)
        };
        costs.push(f);
        preds.push(pred);
        decisions.push(x);
        branches.push(branch);
        frame = next;
    }
    let instance = Instance::new(Plane, x0, costs)?;
    let minimizers = instance.minimizers();
    let follow_min = instance.evaluate(minimizers)?.total();
    let follow_pred = instance.evaluate(preds.clone())?.total();
    let mut tr = GameTranscript::new(
        instance,
        preds,
        decisions,
        branches,
        follow_min.min(follow_pred),
        Comparison::ConstructionReference,
    )?;
    tr.notes.push(("penalty_paid", penalty_paid));
    tr.notes.push(("final_scale", frame.scale));
    tr.notes.push(("follow_minimizers_cost", follow_min));
    tr.notes.push(("follow_predictions_cost", follow_pred));
    Ok(tr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversarial::Memoryless;
    use crate::algorithms::{Blind, Greedy};
    use crate::model::HittingCost;

    #[test]
    fn frame_round_trip() {
        let k = MemorylessConstants::new(0.01).unwrap();
        let f = Frame::pivot([1.0, 2.0], -k.c, [3.0, -1.0], k.r2).unwrap();
        let p = f.local([1.0, 2.0]);
        assert!((p[0] + k.c).abs() < 1e-12 && p[1].abs() < 1e-12);
        let q = f.local([3.0, -1.0]);
        assert!(q[0].abs() < 1e-12 && (q[1] - k.r2).abs() < 1e-12);
    }

    #[test]
    fn template_distances() {
        let k = MemorylessConstants::new(0.01).unwrap();
        // start-to-minimizer equals the along-axis reach r₁ + c, and start-to-prediction is 1
        assert!((libm::hypot(k.c, k.r2) - k.r0).abs() < 1e-12);
        assert!((k.r1 + k.c - k.r0).abs() < 1e-12);
        assert!((libm::hypot(k.pred, k.r2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blind_pivots_on_the_minimizer_and_diverges() {
        let short = play_memoryless_game(Blind, 0.01, 20).unwrap();
        let long = play_memoryless_game(Blind, 0.01, 200).unwrap();
        assert!(long.branches.iter().all(|&b| b == 1));
        assert!(long.measured_cr > 10.0 * short.measured_cr);
        assert!((long.replay().unwrap() - long.alg_cost).abs() <= 1e-9 * long.alg_cost);
        // the minimizer never moves, so the reference pays the one-time move r₀
        let k = MemorylessConstants::new(0.01).unwrap();
        assert!((long.note("follow_minimizers_cost").unwrap() - k.r0).abs() < 1e-9);
    }

    #[test]
    fn greedy_pivots_on_the_prediction() {
        let tr = play_memoryless_game(Greedy, 0.01, 200).unwrap();
        assert!(tr.branches.iter().all(|&b| b == 2));
        assert!(tr.note("penalty_paid").unwrap() < 1e-6 * tr.alg_cost);
        // limit of the per-round ratio: r₀ / (α(c + √(1 − r₂²)))
        let k = MemorylessConstants::new(0.01).unwrap();
        let limit = k.r0 / (0.01 * (k.c + k.pred));
        assert!((tr.measured_cr - limit).abs() < 0.01 * limit, "{}", tr.measured_cr);
    }

    #[test]
    fn user_rule_and_determinism() {
        // move a third of the way to the minimizer
        let rule = |_: &Plane, prev: &[f64; 2], _: &[f64; 2], f: &Polyhedral2d| {
            let v = f.minimizer();
            Ok([prev[0] + (v[0] - prev[0]) / 3.0, prev[1] + (v[1] - prev[1]) / 3.0])
        };
        let k = MemorylessConstants::new(0.05).unwrap();
        let a = play_memoryless_game(Memoryless::new([0.0, k.r2], rule), 0.05, 30).unwrap();
        let b = play_memoryless_game(Memoryless::new([0.0, k.r2], rule), 0.05, 30).unwrap();
        assert_eq!(a.decisions, b.decisions);
        assert_eq!(a.alg_cost, b.alg_cost);
        assert!(a.note("penalty_paid").unwrap() > 0.0);
    }

    #[test]
    fn rejects_non_finite_decisions() {
        let rule = |_: &Plane, _: &[f64; 2], _: &[f64; 2], _: &Polyhedral2d| Ok([f64::NAN, 0.0]);
        let r = play_memoryless_game(Memoryless::new([0.0, 0.0], rule), 0.01, 3);
        assert_eq!(r.err(), Some(Error::InvalidDecision { round: 1 }));
    }
}

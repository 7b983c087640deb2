//! Adaptive Online Balanced Descent on the real line.

use alloc::vec::Vec;

use super::{run_online, FollowThePrediction, OnlineAlgorithm};
use crate::error::{Error, Result};
use crate::model::{Convex1d, HittingCost, Instance, RealLine, Trajectory};

/// Confidence band `β̲ ≤ β̄`. A wider band trusts the predictions more.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AobdParams {
    pub beta_lo: f64,
    pub beta_hi: f64,
}

impl AobdParams {
    pub fn new(beta_lo: f64, beta_hi: f64) -> Result<Self> {
        if !(beta_lo > 0.0 && beta_lo.is_finite()) {
            return Err(Error::param("beta_lo", "must be a positive finite number"));
        }
        if !(beta_hi >= beta_lo && beta_hi.is_finite()) {
            return Err(Error::param("beta_hi", "must be finite and at least beta_lo"));
        }
        Ok(AobdParams { beta_lo, beta_hi })
    }

    /// The band `β̄ = 1/δ`, `β̲ = δ/(2+δ)`.
    pub fn from_delta(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::param("delta", "must be a positive finite number"));
        }
        Self::new(delta / (2.0 + delta), 1.0 / delta)
    }

    /// `2β̲β̄ + β̲ ≥ 1`; outside this region the competitive bounds do not apply.
    pub fn bounds_apply(&self) -> bool {
        2.0 * self.beta_lo * self.beta_hi + self.beta_lo >= 1.0 - 1e-12
    }

    /// `1 + (2 + 1/β̲)·β̄`, the ratio against any comparison trajectory.
    pub fn robustness(&self) -> f64 {
        1.0 + (2.0 + 1.0 / self.beta_lo) * self.beta_hi
    }

    /// `1 + (2 + 1/β̄)·β̲`, the ratio against the filtered predictions.
    pub fn consistency(&self) -> f64 {
        1.0 + (2.0 + 1.0 / self.beta_hi) * self.beta_lo
    }
}

#[derive(Debug, Clone)]
pub struct Aobd {
    params: AobdParams,
    ftp: FollowThePrediction<f64>,
    prev: f64,
}

impl Aobd {
    pub fn new(x0: f64, params: AobdParams) -> Self {
        Aobd {
            params,
            ftp: FollowThePrediction::new(x0),
            prev: x0,
        }
    }
}

impl OnlineAlgorithm<RealLine> for Aobd {
    fn decide(&mut self, space: &RealLine, cost: &Convex1d, prediction: &f64) -> Result<f64> {
        let p = OnlineAlgorithm::<RealLine>::decide(&mut self.ftp, space, cost, prediction)?;
        let from = self.prev;
        let to = space.clamp(cost.minimizer());
        let x = if from == to {
            from
        } else {
            let lam_lo = cost.balance_point(from, to, self.params.beta_lo);
            let lam_hi = cost.balance_point(from, to, self.params.beta_hi).max(lam_lo);
            let lam_p = (p - from) / (to - from);
            let lam = lam_p.clamp(lam_lo, lam_hi);
            from + lam * (to - from)
        };
        self.prev = x;
        Ok(x)
    }
}

#[derive(Debug, Clone)]
pub struct AobdRun {
    pub trajectory: Trajectory<f64>,
    pub params: AobdParams,
    /// False when `2β̲β̄ + β̲ < 1`.
    pub bounds_apply: bool,
}

/// Number of extra sample points per round for the midpoint convexity test.
const CONVEXITY_SAMPLES: usize = 9;

pub fn run_aobd(inst: &Instance<RealLine>, preds: &[f64], params: AobdParams) -> Result<AobdRun> {
    inst.require_metric("AOBD")?;
    for (t, f) in inst.costs.iter().enumerate() {
        let v = f.minimizer();
        let mut samples: Vec<f64> = f.breakpoints().to_vec();
        let spread = 1.0 + libm::fabs(v - inst.x0) + libm::fabs(preds.get(t).copied().unwrap_or(v) - v);
        samples.extend((0..CONVEXITY_SAMPLES).map(|i| {
            v + spread * ((i as f64) / (CONVEXITY_SAMPLES - 1) as f64 * 4.0 - 2.0)
        }));
        if !f.midpoint_convex_on(&samples) {
            return Err(Error::ModelViolation(alloc::format!(
                "hitting cost of round {} failed the midpoint convexity test",
                t + 1
            )));
        }
    }
    let trajectory = run_online(inst, preds, Aobd::new(inst.x0, params))?;
    Ok(AobdRun {
        trajectory,
        params,
        bounds_apply: params.bounds_apply(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PiecewiseLinear;
    use alloc::vec;

    fn abs(c: f64, s: f64) -> Convex1d {
        PiecewiseLinear::abs(c, s, 0.0).unwrap().into()
    }

    #[test]
    fn degenerate_segment_stays_put() {
        let inst = Instance::new(RealLine::FULL, 1.0, vec![abs(1.0, 1.0)]).unwrap();
        let run = run_aobd(&inst, &[5.0], AobdParams::new(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(run.trajectory.decisions(), &[1.0]);
    }

    #[test]
    fn unit_band_lands_on_balance_point() {
        let inst = Instance::new(RealLine::FULL, 0.0, vec![abs(1.0, 1.0)]).unwrap();
        let run = run_aobd(&inst, &[0.0], AobdParams::new(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(run.trajectory.decisions(), &[0.5]);
    }

    #[test]
    fn follows_prediction_inside_band() {
        // band [0.2, 2/3] for β ∈ [0.25, 2]; FtP to x̃ = 1 lands at 1, clamp to 2/3
        let inst = Instance::new(RealLine::FULL, 0.0, vec![abs(1.0, 1.0)]).unwrap();
        let run = run_aobd(&inst, &[1.0], AobdParams::new(0.25, 2.0).unwrap()).unwrap();
        assert!((run.trajectory.decisions()[0] - 2.0 / 3.0).abs() < 1e-12);
        // x̃ = 0 keeps FtP at 0, clamp to the lower end
        let run = run_aobd(&inst, &[0.0], AobdParams::new(0.25, 2.0).unwrap()).unwrap();
        assert!((run.trajectory.decisions()[0] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn band_condition_is_reported() {
        assert!(AobdParams::from_delta(1.0).unwrap().bounds_apply());
        assert!(AobdParams::new(0.2, 5.0).unwrap().bounds_apply());
        let weak = AobdParams::new(0.1, 0.2).unwrap();
        assert!(!weak.bounds_apply());
        let inst = Instance::new(RealLine::FULL, 0.0, vec![abs(1.0, 1.0)]).unwrap();
        assert!(!run_aobd(&inst, &[0.0], weak).unwrap().bounds_apply);
        assert!(AobdParams::new(0.5, 0.4).is_err());
    }
}

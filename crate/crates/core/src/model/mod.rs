//! Decision spaces, hitting costs, instances and cost accounting.
//!
//! A [`DecisionSpace`] couples a metric with the hitting-cost family it
//! supports and an exact argmin oracle for objectives of the form
//! `f(p) + Σ w_i · d(p, a_i)`. Every online algorithm in this crate is
//! expressed in terms of that oracle, so the same code runs on finite
//! metric spaces, the real line and the plane.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

mod finite;
mod line;
mod plane;

pub use finite::{polyhedral_constant, FiniteMetric, FiniteSpace, TableCost};
pub use line::{Convex1d, PiecewiseLinear, Quadratic, RealLine};
pub use plane::{Plane, Polyhedral2d};

/// Absolute tolerance used for cost comparisons.
pub const COST_TOL: f64 = 1e-9;

pub trait MetricSpace {
    type Point: Clone + PartialEq + fmt::Debug;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    fn contains(&self, p: &Self::Point) -> bool;
}

/// A per-round hitting cost. Values are in `[0, ∞]`; `f64::INFINITY`
/// marks forbidden points and propagates through sums.
pub trait HittingCost<P> {
    fn eval(&self, x: &P) -> f64;

    /// The unique minimizer `v_t` (smallest point on ties).
    fn minimizer(&self) -> P;
}

/// A metric space together with the hitting costs it supports and an exact
/// argmin oracle.
pub trait DecisionSpace: MetricSpace {
    type Cost: HittingCost<Self::Point> + Clone + fmt::Debug;

    /// `argmin_p f(p) + Σ w_i · d(p, a_i)` over the whole space.
    ///
    /// Ties resolve to the smallest point. Returns
    /// [`Error::InfeasibleRound`] (with round 0) when every point has infinite
    /// objective.
    fn argmin(&self, f: &Self::Cost, anchors: &[(Self::Point, f64)]) -> Result<Self::Point>;
}

/// Switching cost between consecutive decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Switching {
    /// `d(x, y)`.
    #[default]
    Metric,
    /// `½ · d(x, y)²`; only used by the Bregman lower-bound game.
    HalfSquared,
}

impl Switching {
    #[inline]
    pub fn apply(self, distance: f64) -> f64 {
        match self {
            Switching::Metric => distance,
            Switching::HalfSquared => 0.5 * distance * distance,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance<S: DecisionSpace> {
    pub space: S,
    pub x0: S::Point,
    pub costs: Vec<S::Cost>,
    pub switching: Switching,
}

impl<S: DecisionSpace> Instance<S> {
    pub fn new(space: S, x0: S::Point, costs: Vec<S::Cost>) -> Result<Self> {
        Self::with_switching(space, x0, costs, Switching::Metric)
    }

    pub fn with_switching(
        space: S,
        x0: S::Point,
        costs: Vec<S::Cost>,
        switching: Switching,
    ) -> Result<Self> {
        if costs.is_empty() {
            return Err(Error::Config("instance horizon must be at least 1".into()));
        }
        if !space.contains(&x0) {
            return Err(Error::Config("start point x0 lies outside the space".into()));
        }
        Ok(Instance {
            space,
            x0,
            costs,
            switching,
        })
    }

    pub fn horizon(&self) -> usize {
        self.costs.len()
    }

    #[inline]
    pub fn switch_cost(&self, a: &S::Point, b: &S::Point) -> f64 {
        self.switching.apply(self.space.distance(a, b))
    }

    /// Minimizers `v_1..v_T`.
    pub fn minimizers(&self) -> Vec<S::Point> {
        self.costs.iter().map(|f| f.minimizer()).collect()
    }

    /// Cost ledger of a decision sequence.
    pub fn evaluate(&self, decisions: Vec<S::Point>) -> Result<Trajectory<S::Point>> {
        if decisions.len() != self.horizon() {
            return Err(Error::Config(alloc::format!(
                "trajectory has {} decisions, instance horizon is {}",
                decisions.len(),
                self.horizon()
            )));
        }
        let mut ledger = Vec::with_capacity(decisions.len());
        let mut prev = &self.x0;
        for (t, (x, f)) in decisions.iter().zip(&self.costs).enumerate() {
            if !self.space.contains(x) {
                return Err(Error::InvalidDecision { round: t + 1 });
            }
            ledger.push(RoundCost {
                hit: f.eval(x),
                switch: self.switch_cost(x, prev),
            });
            prev = x;
        }
        Ok(Trajectory::from_parts(decisions, ledger))
    }

    /// The instance restricted to rounds `k+1..=T`, started from `start`.
    pub fn tail(&self, k: usize, start: S::Point) -> Result<Self>
    where
        S: Clone,
    {
        Instance::with_switching(
            self.space.clone(),
            start,
            self.costs[k..].to_vec(),
            self.switching,
        )
    }

    pub(crate) fn require_metric(&self, what: &str) -> Result<()> {
        if self.switching != Switching::Metric {
            return Err(Error::ModelViolation(alloc::format!(
                "{what} requires metric switching costs"
            )));
        }
        Ok(())
    }

    pub(crate) fn check_predictions(&self, preds: &[S::Point]) -> Result<()> {
        if preds.len() != self.horizon() {
            return Err(Error::Config(alloc::format!(
                "{} predictions for an instance of horizon {}",
                preds.len(),
                self.horizon()
            )));
        }
        for (t, p) in preds.iter().enumerate() {
            if !self.space.contains(p) {
                return Err(Error::InvalidDecision { round: t + 1 });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundCost {
    pub hit: f64,
    pub switch: f64,
}

impl RoundCost {
    #[inline]
    pub fn total(&self) -> f64 {
        self.hit + self.switch
    }
}

/// Decisions `x_1..x_T` with their per-round cost ledger.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<P> {
    decisions: Vec<P>,
    ledger: Vec<RoundCost>,
    total: f64,
}

impl<P> Trajectory<P> {
    fn from_parts(decisions: Vec<P>, ledger: Vec<RoundCost>) -> Self {
        let total = ledger.iter().map(RoundCost::total).sum();
        Trajectory {
            decisions,
            ledger,
            total,
        }
    }

    pub fn decisions(&self) -> &[P] {
        &self.decisions
    }

    pub fn ledger(&self) -> &[RoundCost] {
        &self.ledger
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Per-round totals `f_t(x_t) + d(x_t, x_{t-1})`.
    pub fn round_costs(&self) -> Vec<f64> {
        self.ledger.iter().map(RoundCost::total).collect()
    }

    pub fn into_decisions(self) -> Vec<P> {
        self.decisions
    }
}

/// Prediction accuracy as defined by η-accuracy against an optimal trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub eta: f64,
    /// Set when the optimum costs nothing but the predictions deviate from it.
    pub degenerate: bool,
}

/// Smallest η with `Σ d(o_t, x̃_t) ≤ η · Σ Opt(t)`.
pub fn eta_accuracy<S: DecisionSpace>(
    inst: &Instance<S>,
    preds: &[S::Point],
    opt: &Trajectory<S::Point>,
) -> Result<Accuracy> {
    inst.check_predictions(preds)?;
    if opt.decisions().len() != preds.len() {
        return Err(Error::Config("optimum and predictions differ in length".into()));
    }
    let dist: f64 = opt
        .decisions()
        .iter()
        .zip(preds)
        .map(|(o, p)| inst.space.distance(o, p))
        .sum();
    let opt_cost = opt.total();
    if opt_cost > 0.0 {
        Ok(Accuracy {
            eta: dist / opt_cost,
            degenerate: false,
        })
    } else if dist == 0.0 {
        Ok(Accuracy {
            eta: 0.0,
            degenerate: false,
        })
    } else {
        Ok(Accuracy {
            eta: f64::INFINITY,
            degenerate: true,
        })
    }
}

/// Outcome of an α-polyhedral check.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralCheck<P> {
    pub pass: bool,
    /// `min_x f(x) − f(v) − α·d(x, v)` over the checked points.
    pub worst_residual: f64,
    pub worst_point: Option<P>,
    pub checked: usize,
}

/// Checks `f(x) ≥ f(v) + α·d(x, v)` at every supplied point.
///
/// Pass all points of a finite space for an exhaustive check, or a seeded
/// sample otherwise (see [`crate::random::sample_line`] and friends).
pub fn check_polyhedral<S, I>(space: &S, f: &S::Cost, alpha: f64, points: I) -> PolyhedralCheck<S::Point>
where
    S: DecisionSpace,
    I: IntoIterator<Item = S::Point>,
{
    let v = f.minimizer();
    let fv = f.eval(&v);
    let mut worst = f64::INFINITY;
    let mut worst_point = None;
    let mut checked = 0;
    for x in points {
        checked += 1;
        let fx = f.eval(&x);
        let residual = if fx.is_infinite() {
            f64::INFINITY
        } else {
            fx - fv - alpha * space.distance(&x, &v)
        };
        if residual < worst {
            worst = residual;
            worst_point = Some(x);
        }
    }
    PolyhedralCheck {
        pass: worst >= -COST_TOL,
        worst_residual: worst,
        worst_point,
        checked,
    }
}

/// Measured competitive ratio `alg / opt`, with `0/0 := 1` and `x/0 := ∞`.
pub fn competitive_ratio(alg: f64, opt: f64) -> f64 {
    if opt > 0.0 {
        alg / opt
    } else if alg <= 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// Costs of one episode of the four reference trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeReport {
    pub alg_cost: f64,
    pub opt_cost: f64,
    /// Cost of the FtP (filtered prediction) trajectory.
    pub adv_cost: f64,
    /// Cost of the minimizer-following trajectory.
    pub rob_cost: f64,
    pub eta: f64,
    pub measured_cr: f64,
}

impl EpisodeReport {
    pub fn new(alg_cost: f64, opt_cost: f64, adv_cost: f64, rob_cost: f64, eta: f64) -> Self {
        EpisodeReport {
            alg_cost,
            opt_cost,
            adv_cost,
            rob_cost,
            eta,
            measured_cr: competitive_ratio(alg_cost, opt_cost),
        }
    }
}

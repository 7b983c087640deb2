//! Game on the real line with half-squared switching costs: predictions
//! are the hindsight path toward a late target at `δ`, and any early move
//! is punished with a final cost centred at the origin.

use alloc::vec;
use alloc::vec::Vec;

use super::{Comparison, GameTranscript};
use crate::algorithms::OnlineAlgorithm;
use crate::error::{Error, Result};
use crate::model::{Convex1d, Instance, Quadratic, RealLine, Switching};
use crate::offline::{opt_dp_grid, GridSpec};

/// Exact minimizer of `Σ_t a_t/2 (x_t − c_t)² + Σ_t ½(x_t − x_{t−1})²`
/// from a fixed `x₀`: solves the tridiagonal stationarity system.
pub fn quadratic_path_optimum(x0: f64, curvature: &[f64], center: &[f64]) -> Vec<f64> {
    let n = curvature.len();
    assert_eq!(n, center.len());
    if n == 0 {
        return Vec::new();
    }
    let diag: Vec<f64> = (0..n)
        .map(|t| curvature[t] + if t + 1 < n { 2.0 } else { 1.0 })
        .collect();
    let mut rhs: Vec<f64> = (0..n).map(|t| curvature[t] * center[t]).collect();
    rhs[0] += x0;
    // Thomas algorithm, off-diagonals −1
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = -1.0 / diag[0];
    d[0] = rhs[0] / diag[0];
    for t in 1..n {
        let m = diag[t] + c[t - 1];
        c[t] = -1.0 / m;
        d[t] = (rhs[t] + d[t - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for t in (0..n - 1).rev() {
        x[t] = d[t] - c[t] * x[t + 1];
    }
    x
}

#[derive(Debug, Clone)]
pub struct BregmanOutcome {
    pub transcript: GameTranscript<RealLine>,
    /// 1 if the algorithm moved before the last round, else 2.
    pub branch: u8,
    /// Cost of the algorithm in the last round.
    pub final_round_cost: f64,
    /// `δ²/(2(1 + β⁻¹))`, the least possible last-round cost on branch 2.
    pub final_round_floor: f64,
    /// `δ²(−α + √(α² + 4α))/4`, the large-horizon optimum on branch 2.
    pub asymptotic_opt: f64,
    /// Exact optimum of the branch-2 instance at this horizon.
    pub branch2_opt: f64,
    /// Grid-DP optimum of the branch-2 instance and its error bound.
    pub branch2_grid_opt: f64,
    pub branch2_grid_error: f64,
}

fn quad(curvature: f64, center: f64) -> Result<Convex1d> {
    Ok(Convex1d::from(Quadratic::new(curvature, center, 0.0)?))
}

/// Plays `T ≥ 10` rounds with strong convexity `α`, final smoothness `β`
/// and target `δ > 0`.
pub fn play_bregman_game<A: OnlineAlgorithm<RealLine>>(
    mut alg: A,
    alpha: f64,
    beta: f64,
    delta: f64,
    horizon: usize,
) -> Result<BregmanOutcome> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("delta", delta)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::param(name, "must be a positive finite number"));
        }
    }
    if horizon < 10 {
        return Err(Error::param("T", "needs T >= 10"));
    }
    let mut curv = vec![alpha; horizon];
    let mut centers = vec![0.0; horizon];
    curv[horizon - 1] = beta;
    centers[horizon - 1] = delta;
    let preds = quadratic_path_optimum(0.0, &curv, &centers);
    let space = RealLine::FULL;
    let early = quad(alpha, 0.0)?;
    let mut decisions = Vec::with_capacity(horizon);
    let mut moved = false;
    for (t, p) in preds.iter().enumerate().take(horizon - 1) {
        let x = alg
            .decide(&space, &early, p)
            .map_err(|e| crate::algorithms::at_round(e, t + 1))?;
        if !x.is_finite() {
            return Err(Error::InvalidDecision { round: t + 1 });
        }
        moved |= x != 0.0;
        decisions.push(x);
    }
    let branch = if moved { 1 } else { 2 };
    let last = if moved { quad(beta, 0.0)? } else { quad(beta, delta)? };
    let x = alg
        .decide(&space, &last, &preds[horizon - 1])
        .map_err(|e| crate::algorithms::at_round(e, horizon))?;
    if !x.is_finite() {
        return Err(Error::InvalidDecision { round: horizon });
    }
    decisions.push(x);

    let mut costs = vec![early; horizon - 1];
    costs.push(last);
    let instance = Instance::with_switching(space, 0.0, costs.clone(), Switching::HalfSquared)?;

    let mut b2_costs = costs;
    b2_costs[horizon - 1] = quad(beta, delta)?;
    let b2 = Instance::with_switching(space, 0.0, b2_costs, Switching::HalfSquared)?;
    let branch2_opt = b2.evaluate(preds.clone())?.total();
    let grid = opt_dp_grid(&b2, &GridSpec::default())?;

    let comparison = if moved { 0.0 } else { branch2_opt };
    let transcript = GameTranscript::new(
        instance,
        preds,
        decisions,
        vec![branch; horizon],
        comparison,
        Comparison::Optimum,
    )?;
    let final_round_cost = transcript
        .instance
        .evaluate(transcript.decisions.clone())?
        .ledger()[horizon - 1]
        .total();
    Ok(BregmanOutcome {
        transcript,
        branch,
        final_round_cost,
        final_round_floor: delta * delta / (2.0 * (1.0 + 1.0 / beta)),
        asymptotic_opt: delta * delta * (-alpha + libm::sqrt(alpha * alpha + 4.0 * alpha)) / 4.0,
        branch2_opt,
        branch2_grid_opt: grid.total(),
        branch2_grid_error: grid.error_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversarial::Memoryless;
    use crate::algorithms::{Blind, Greedy};

    #[test]
    fn tridiagonal_solution_is_stationary() {
        let a = [1.0, 0.5, 2.0, 1.0];
        let c = [0.0, 1.0, -1.0, 3.0];
        let x = quadratic_path_optimum(0.5, &a, &c);
        let mut prev = 0.5;
        for t in 0..4 {
            let next = if t < 3 { x[t + 1] } else { x[t] };
            let g = a[t] * (x[t] - c[t]) + (x[t] - prev) - (next - x[t]);
            assert!(g.abs() < 1e-12, "{t}: {g}");
            prev = x[t];
        }
    }

    #[test]
    fn greedy_stays_home_and_pays_the_floor() {
        let o = play_bregman_game(Greedy, 1.0, 1.0, 1.0, 50).unwrap();
        assert_eq!(o.branch, 2);
        assert!(o.final_round_cost >= o.final_round_floor - 1e-12);
        // greedy jumps to δ: ½δ² switching, no hitting cost
        assert!((o.final_round_cost - 0.5).abs() < 1e-12);
        assert!(o.transcript.measured_cr.is_finite());
    }

    #[test]
    fn blind_moves_early_and_is_unbounded() {
        let o = play_bregman_game(Blind, 1.0, 1.0, 1.0, 10).unwrap();
        assert_eq!(o.branch, 1);
        assert_eq!(o.transcript.comparison_cost, 0.0);
        assert!(o.transcript.measured_cr.is_infinite());
    }

    #[test]
    fn first_move_to_delta_is_branch_one() {
        let rule = |_: &RealLine, prev: &f64, _: &f64, _: &Convex1d| Ok(if *prev == 0.0 { 1.0 } else { *prev });
        let o = play_bregman_game(Memoryless::new(0.0, rule), 1.0, 1.0, 1.0, 10).unwrap();
        assert_eq!(o.branch, 1);
        assert!(o.transcript.measured_cr.is_infinite());
    }

    #[test]
    fn finite_horizon_optimum_decreases_toward_the_limit() {
        let mut last = f64::INFINITY;
        for t in [10, 50, 200] {
            let o = play_bregman_game(Greedy, 1.0, 1.0, 1.0, t).unwrap();
            let eps = o.branch2_opt - o.asymptotic_opt;
            assert!(o.branch2_opt <= last);
            assert!(eps < 0.2, "{t}: {eps}");
            assert!((o.branch2_grid_opt - o.branch2_opt).abs() <= o.branch2_grid_error + 1e-9);
            last = o.branch2_opt;
        }
    }
}

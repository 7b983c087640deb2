//! Hindsight optima by dynamic programming.
//!
//! Finite spaces are solved exactly. On the real line the optimum is taken
//! over a uniform grid anchored at `x0`; the grid result is an upper bound on
//! the continuous optimum and comes with an additive error bound.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{
    Convex1d, FiniteSpace, HittingCost, Instance, RealLine, Switching, Trajectory,
};

/// Largest finite space accepted by [`opt_dp_finite`].
pub const MAX_FINITE_POINTS: usize = 10_000;

/// Largest grid accepted by [`opt_dp_grid`].
pub const MAX_GRID_NODES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult<P> {
    pub trajectory: Trajectory<P>,
    /// Upper bound on `total − true optimum`; zero for exact methods.
    pub error_bound: f64,
}

impl<P> OptResult<P> {
    pub fn total(&self) -> f64 {
        self.trajectory.total()
    }

    /// Per-round `Opt(t)`.
    pub fn per_round(&self) -> Vec<f64> {
        self.trajectory.round_costs()
    }
}

/// Core layered DP over `n` states.
///
/// `hit(t, x)` is the hitting cost of state `x` in round `t` (0-based) and
/// `switch(a, b)` the transition cost. The cost-to-go is computed backwards
/// and the trajectory reconstructed forwards, taking the smallest index on
/// ties, so every tail of the returned trajectory is the tie-broken optimum
/// of the corresponding tail problem.
pub(crate) fn layered_dp(
    n: usize,
    start: usize,
    horizon: usize,
    hit: impl Fn(usize, usize) -> f64,
    switch: impl Fn(usize, usize) -> f64,
) -> Result<Vec<usize>> {
    // stage[t][x] = hit(t, x) + min cost of rounds t+1.. given x_t = x
    let mut stage = vec![vec![0.0; n]; horizon];
    let mut next: Vec<f64> = vec![0.0; n];
    for t in (0..horizon).rev() {
        let row = &mut stage[t];
        for x in 0..n {
            row[x] = hit(t, x) + next[x];
        }
        if t > 0 {
            for (prev, slot) in next.iter_mut().enumerate() {
                *slot = (0..n).fold(f64::INFINITY, |m, x| m.min(switch(prev, x) + row[x]));
            }
        }
    }
    forward(n, start, &stage, switch)
}

fn forward(
    n: usize,
    start: usize,
    stage: &[Vec<f64>],
    switch: impl Fn(usize, usize) -> f64,
) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(stage.len());
    let mut prev = start;
    for (t, row) in stage.iter().enumerate() {
        let mut best = (usize::MAX, f64::INFINITY);
        for (x, &h) in row.iter().enumerate().take(n) {
            let val = switch(prev, x) + h;
            if val < best.1 {
                best = (x, val);
            }
        }
        if best.0 == usize::MAX {
            return Err(Error::InfeasibleRound { round: t + 1 });
        }
        out.push(best.0);
        prev = best.0;
    }
    Ok(out)
}

/// Exact hindsight optimum on a finite space, `O(T·n²)`.
pub fn opt_dp_finite(inst: &Instance<FiniteSpace>) -> Result<OptResult<usize>> {
    let n = inst.space.len();
    if n > MAX_FINITE_POINTS {
        return Err(Error::SpaceTooLarge {
            size: n,
            limit: MAX_FINITE_POINTS,
        });
    }
    let tables: Vec<&[f64]> = inst.costs.iter().map(|f| f.values()).collect();
    for (t, tab) in tables.iter().enumerate() {
        if tab.len() != n {
            return Err(Error::Config(alloc::format!(
                "round {} cost table has {} entries for a space of {n} points",
                t + 1,
                tab.len()
            )));
        }
    }
    let decisions = layered_dp(
        n,
        inst.x0,
        inst.horizon(),
        |t, x| tables[t][x],
        |a, b| inst.switch_cost(&a, &b),
    )?;
    Ok(OptResult {
        trajectory: inst.evaluate(decisions)?,
        error_bound: 0.0,
    })
}

/// Uniform grid `x0 + k·h` for [`opt_dp_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub h: f64,
    /// Extra width added on both sides of the hull of `x0` and the minimizers.
    /// For convex costs the optimum lies inside that hull, so zero suffices.
    pub margin: f64,
    /// Explicit covered range; replaces the hull when set.
    pub range: Option<(f64, f64)>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            h: 1.0 / 32.0,
            margin: 0.0,
            range: None,
        }
    }
}

impl GridSpec {
    pub fn with_h(h: f64) -> Self {
        GridSpec {
            h,
            ..GridSpec::default()
        }
    }
}

/// Grid nodes for an instance, clipped to the space.
pub fn grid_nodes(inst: &Instance<RealLine>, spec: &GridSpec) -> Result<Vec<f64>> {
    if !(spec.h > 0.0 && spec.h.is_finite()) {
        return Err(Error::Config("grid step h must be positive and finite".into()));
    }
    if !(spec.margin >= 0.0 && spec.margin.is_finite()) {
        return Err(Error::Config("grid margin must be finite and non-negative".into()));
    }
    let x0 = inst.x0;
    let (lo, hi) = match spec.range {
        Some((lo, hi)) => {
            if !(lo <= x0 && x0 <= hi) {
                return Err(Error::Config(alloc::format!(
                    "grid range [{lo}, {hi}] excludes the start point {x0}"
                )));
            }
            (lo, hi)
        }
        None => {
            let (lo, hi) = inst.costs.iter().fold((x0, x0), |(lo, hi), f| {
                let v = inst.space.clamp(f.minimizer());
                (lo.min(v), hi.max(v))
            });
            (lo - spec.margin, hi + spec.margin)
        }
    };
    let lo = lo.max(inst.space.lo);
    let hi = hi.min(inst.space.hi);
    let k_lo = -libm::floor((x0 - lo) / spec.h + 1e-9) as i64;
    let k_hi = libm::floor((hi - x0) / spec.h + 1e-9) as i64;
    let count = (k_hi - k_lo + 1) as usize;
    if count > MAX_GRID_NODES {
        return Err(Error::SpaceTooLarge {
            size: count,
            limit: MAX_GRID_NODES,
        });
    }
    Ok((k_lo..=k_hi).map(|k| x0 + k as f64 * spec.h).collect())
}

/// Hindsight optimum over the grid of `spec`.
///
/// Metric switching uses a two-sweep distance transform (`O(T·n)`);
/// half-squared switching is `O(T·n²)`. The error bound is
/// `T·h·(1 + Lip)` for metric and `T·h·(Lip + W + h)` for half-squared
/// switching, where `Lip` bounds the cost slopes on the grid and `W` is the
/// grid width.
pub fn opt_dp_grid(inst: &Instance<RealLine>, spec: &GridSpec) -> Result<OptResult<f64>> {
    let nodes = grid_nodes(inst, spec)?;
    let n = nodes.len();
    let start = nodes
        .iter()
        .position(|&x| x == inst.x0)
        .ok_or_else(|| Error::Config("grid does not contain the start point".into()))?;
    let (lo, hi) = (nodes[0], nodes[n - 1]);
    let h = spec.h;

    let hit = |t: usize, i: usize| inst.costs[t].eval(&nodes[i]);
    let decisions = match inst.switching {
        Switching::Metric => {
            let mut stage = vec![vec![0.0; n]; inst.horizon()];
            let mut next = vec![0.0; n];
            for t in (0..inst.horizon()).rev() {
                for i in 0..n {
                    stage[t][i] = hit(t, i) + next[i];
                }
                // next[i] = min_j |x_i − x_j| + stage[t][j]
                next.copy_from_slice(&stage[t]);
                for i in 1..n {
                    next[i] = next[i].min(next[i - 1] + (nodes[i] - nodes[i - 1]));
                }
                for i in (0..n - 1).rev() {
                    next[i] = next[i].min(next[i + 1] + (nodes[i + 1] - nodes[i]));
                }
            }
            forward(n, start, &stage, |a, b| libm::fabs(nodes[a] - nodes[b]))?
        }
        Switching::HalfSquared => layered_dp(n, start, inst.horizon(), hit, |a, b| {
            let d = nodes[a] - nodes[b];
            0.5 * d * d
        })?,
    };
    let lip = inst
        .costs
        .iter()
        .map(|f| f.lipschitz_on(lo, hi))
        .fold(0.0, f64::max);
    let t = inst.horizon() as f64;
    let error_bound = match inst.switching {
        Switching::Metric => t * h * (1.0 + lip),
        Switching::HalfSquared => t * h * (lip + (hi - lo) + h),
    };
    let decisions = decisions.into_iter().map(|i| nodes[i]).collect();
    Ok(OptResult {
        trajectory: inst.evaluate(decisions)?,
        error_bound,
    })
}

/// Grid DP at `h = 2⁻⁵, 2⁻⁶, …, 2⁻¹²`, stopping early when the grid would
/// exceed `max_nodes`. Returns one result per level; nested grids make the
/// totals non-increasing.
pub fn opt_dp_grid_refined(inst: &Instance<RealLine>, max_nodes: usize) -> Result<Vec<OptResult<f64>>> {
    let mut out = Vec::new();
    for level in 5..=12 {
        let spec = GridSpec::with_h(libm::ldexp(1.0, -level));
        let count = grid_nodes(inst, &spec)?.len();
        if count > max_nodes && !out.is_empty() {
            break;
        }
        out.push(opt_dp_grid(inst, &spec)?);
    }
    Ok(out)
}

/// Optimum of a 1-D convex instance on a grid that contains every knot of
/// every piecewise-linear cost, as well as `x0`. Exact when all costs are
/// piecewise linear, since an optimal trajectory then exists on the knots.
pub fn opt_knots(inst: &Instance<RealLine>) -> Result<OptResult<f64>> {
    let mut pts: Vec<f64> = vec![inst.x0];
    for f in &inst.costs {
        match f {
            Convex1d::Piecewise(p) => pts.extend(p.knots().iter().map(|&k| inst.space.clamp(k))),
            Convex1d::Quadratic(_) => {
                return Err(Error::ModelViolation(
                    "knot optimum needs piecewise-linear costs".into(),
                ))
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() > MAX_FINITE_POINTS {
        return Err(Error::SpaceTooLarge {
            size: pts.len(),
            limit: MAX_FINITE_POINTS,
        });
    }
    let start = pts.iter().position(|&x| x == inst.x0).unwrap_or(0);
    let decisions = layered_dp(
        pts.len(),
        start,
        inst.horizon(),
        |t, i| inst.costs[t].eval(&pts[i]),
        |a, b| inst.switch_cost(&pts[a], &pts[b]),
    )?;
    Ok(OptResult {
        trajectory: inst.evaluate(decisions.into_iter().map(|i| pts[i]).collect())?,
        error_bound: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PiecewiseLinear, TableCost};

    /// Exhaustive minimum over all `n^T` trajectories.
    fn brute(inst: &Instance<FiniteSpace>) -> f64 {
        let n = inst.space.len();
        let t = inst.horizon();
        let mut best = f64::INFINITY;
        for code in 0..n.pow(t as u32) {
            let mut c = code;
            let seq: Vec<usize> = (0..t)
                .map(|_| {
                    let x = c % n;
                    c /= n;
                    x
                })
                .collect();
            best = best.min(inst.evaluate(seq).unwrap().total());
        }
        best
    }

    #[test]
    fn single_round_is_one_step_argmin() {
        let space = FiniteSpace::from_coords(vec![0.0, 2.0, 3.0]).unwrap();
        let f = TableCost::new(vec![5.0, 1.0, 0.0]).unwrap();
        let inst = Instance::new(space, 0, vec![f]).unwrap();
        let opt = opt_dp_finite(&inst).unwrap();
        // 5 + 0, 1 + 2, 0 + 3 → index 1 wins the tie with index 2
        assert_eq!(opt.trajectory.decisions(), &[1]);
        assert_eq!(opt.total(), 3.0);
    }

    #[test]
    fn four_points_three_rounds_match_enumeration() {
        let space = FiniteSpace::from_coords(vec![0.0, 1.0, 2.5, 4.0]).unwrap();
        let costs = vec![
            TableCost::new(vec![3.0, 1.0, 0.0, 2.0]).unwrap(),
            TableCost::new(vec![0.0, 2.0, 3.0, 5.0]).unwrap(),
            TableCost::new(vec![4.0, 3.0, 1.0, 0.0]).unwrap(),
        ];
        let inst = Instance::new(space, 1, costs).unwrap();
        let opt = opt_dp_finite(&inst).unwrap();
        assert_eq!(opt.total(), brute(&inst));
        let resum: f64 = opt.per_round().iter().sum();
        assert!((resum - opt.total()).abs() < 1e-12);
    }

    #[test]
    fn half_squared_switching_matches_enumeration() {
        let space = FiniteSpace::from_coords(vec![0.0, 1.0, 3.0]).unwrap();
        let costs = vec![
            TableCost::new(vec![2.0, 0.5, 0.0]).unwrap(),
            TableCost::new(vec![0.0, 1.0, 4.0]).unwrap(),
            TableCost::new(vec![1.0, 0.0, 0.25]).unwrap(),
        ];
        let inst = Instance::with_switching(space, 0, costs, Switching::HalfSquared).unwrap();
        assert_eq!(opt_dp_finite(&inst).unwrap().total(), brute(&inst));
    }

    #[test]
    fn grid_refinement_never_increases() {
        let f1 = PiecewiseLinear::abs(0.3, 0.7, 0.0).unwrap();
        let f2 = PiecewiseLinear::new(vec![-0.45, 0.9], vec![-2.0, 0.1, 1.3], 0.2).unwrap();
        let inst = Instance::new(RealLine::FULL, 0.0, vec![f1.into(), f2.into()]).unwrap();
        let levels = opt_dp_grid_refined(&inst, 1 << 16).unwrap();
        assert_eq!(levels.len(), 8);
        for w in levels.windows(2) {
            assert!(w[1].total() <= w[0].total() + 1e-12);
        }
        // knot optimum is the continuous optimum, so every grid level is above it
        let exact = opt_knots(&inst).unwrap().total();
        for l in &levels {
            assert!(l.total() >= exact - 1e-12);
            assert!(l.total() - exact <= l.error_bound);
        }
    }

    #[test]
    fn grid_dp_on_dyadic_knots_matches_exhaustive_grid_search() {
        let f1 = PiecewiseLinear::abs(0.5, 1.0, 0.0).unwrap();
        let f2 = PiecewiseLinear::new(vec![-0.25, 0.75], vec![-1.0, 0.25, 2.0], 0.5).unwrap();
        let f3 = PiecewiseLinear::abs(-0.25, 0.5, 0.125).unwrap();
        let inst = Instance::new(RealLine::FULL, 0.0, vec![f1.into(), f2.into(), f3.into()]).unwrap();
        let spec = GridSpec::with_h(0.125);
        let nodes = grid_nodes(&inst, &spec).unwrap();
        let dp = opt_dp_grid(&inst, &spec).unwrap();
        let n = nodes.len();
        let mut best = f64::INFINITY;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let tot = inst.evaluate(vec![nodes[a], nodes[b], nodes[c]]).unwrap().total();
                    best = best.min(tot);
                }
            }
        }
        assert_eq!(dp.total(), best);
        assert_eq!(dp.total(), opt_knots(&inst).unwrap().total());
    }

    #[test]
    fn grid_range_must_contain_start() {
        let f = PiecewiseLinear::abs(1.0, 1.0, 0.0).unwrap();
        let inst = Instance::new(RealLine::FULL, 0.0, vec![f.into()]).unwrap();
        let spec = GridSpec {
            range: Some((0.5, 2.0)),
            ..GridSpec::default()
        };
        assert!(matches!(opt_dp_grid(&inst, &spec), Err(Error::Config(_))));
    }
}

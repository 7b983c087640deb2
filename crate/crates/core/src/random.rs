//! Seeded instance generators.
//!
//! Every generator takes an explicit RNG so a single seed reproduces a whole
//! experiment. [`seeded`] builds the ChaCha8 stream used throughout.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::model::{
    Convex1d, FiniteSpace, Instance, MetricSpace, PiecewiseLinear, RealLine, TableCost,
};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` uniform points of `[lo, hi]`, plus both endpoints.
pub fn sample_line<R: Rng>(rng: &mut R, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    pts.push(lo);
    pts.push(hi);
    pts
}

/// `n` uniform points of the disc of radius `r` around `c`.
pub fn sample_plane<R: Rng>(rng: &mut R, c: [f64; 2], r: f64, n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| {
            let rho = r * libm::sqrt(rng.random::<f64>());
            let th = rng.random_range(0.0..core::f64::consts::TAU);
            [c[0] + rho * libm::cos(th), c[1] + rho * libm::sin(th)]
        })
        .collect()
}

/// Euclidean distances among `n` uniform points of `[0, 10]²`.
pub fn euclidean_space<R: Rng>(rng: &mut R, n: usize) -> Result<FiniteSpace> {
    let pts = sample_plane(rng, [5.0, 5.0], 5.0, n);
    let mut dist = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = libm::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
                // coincident samples are vanishingly rare; keep the metric positive
                dist[i * n + j] = d.max(1e-6);
            }
        }
    }
    FiniteSpace::from_matrix(n, dist)
}

/// A table cost with minimizer `v` that is α-polyhedral around it:
/// `f(x) = f(v) + α·d(x, v)·(1 + U) + E`, with a few forbidden points.
pub fn polyhedral_table<R: Rng>(rng: &mut R, space: &FiniteSpace, v: usize, alpha: f64) -> Result<TableCost> {
    let base = if rng.random_bool(0.3) { 0.0 } else { rng.random_range(0.0..2.0) };
    let values = space
        .points()
        .map(|x| {
            if x == v {
                base
            } else if rng.random_bool(0.05) {
                f64::INFINITY
            } else {
                let d = space.distance(&x, &v);
                base + alpha * d * (1.0 + rng.random_range(0.0..2.0)) + rng.random_range(0.0..1.0)
            }
        })
        .collect();
    TableCost::new(values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteInstanceSpec {
    pub min_points: usize,
    pub max_points: usize,
    pub max_horizon: usize,
    pub alpha: f64,
}

impl Default for FiniteInstanceSpec {
    fn default() -> Self {
        FiniteInstanceSpec {
            min_points: 4,
            max_points: 64,
            max_horizon: 50,
            alpha: 0.5,
        }
    }
}

/// Random α-polyhedral instance on a random Euclidean point set. Minimizers
/// drift: each round keeps the previous minimizer with probability 1/2.
pub fn finite_instance<R: Rng>(rng: &mut R, spec: &FiniteInstanceSpec) -> Result<Instance<FiniteSpace>> {
    let n = rng.random_range(spec.min_points..=spec.max_points);
    let t = rng.random_range(1..=spec.max_horizon);
    let space = euclidean_space(rng, n)?;
    let x0 = rng.random_range(0..n);
    let mut v = rng.random_range(0..n);
    let mut costs = Vec::with_capacity(t);
    for _ in 0..t {
        if rng.random_bool(0.5) {
            v = rng.random_range(0..n);
        }
        costs.push(polyhedral_table(rng, &space, v, spec.alpha)?);
    }
    Instance::new(space, x0, costs)
}

/// Predictions that copy `reference[t]` with probability `quality` and are
/// uniform otherwise.
pub fn finite_predictions<R: Rng>(rng: &mut R, n: usize, reference: &[usize], quality: f64) -> Vec<usize> {
    reference
        .iter()
        .map(|&r| if rng.random_bool(quality) { r } else { rng.random_range(0..n) })
        .collect()
}

/// Convex piecewise-linear cost with 1 to `max_knots` knots in `[lo, hi]`
/// and no flat piece, so its minimizer is unique.
pub fn convex_pl<R: Rng>(rng: &mut R, lo: f64, hi: f64, max_knots: usize) -> Result<PiecewiseLinear> {
    let k = rng.random_range(1..=max_knots.max(1));
    let mut knots: Vec<f64> = (0..k).map(|_| rng.random_range(lo..hi)).collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let k = knots.len();
    let neg = rng.random_range(1..=k);
    let mut left: Vec<f64> = (0..neg).map(|_| -rng.random_range(0.1..3.0)).collect();
    let mut right: Vec<f64> = (neg..=k).map(|_| rng.random_range(0.1..3.0)).collect();
    left.sort_by(f64::total_cmp);
    right.sort_by(f64::total_cmp);
    left.append(&mut right);
    let slopes = left;
    // value at knot `neg − 1` (the minimizer) relative to the first knot
    let drop: f64 = (1..neg).map(|j| slopes[j] * (knots[j] - knots[j - 1])).sum();
    let offset = rng.random_range(0.0..1.0) - drop;
    PiecewiseLinear::new(knots, slopes, offset)
}

/// Random 1-D convex piecewise-linear instance on `[lo, hi]`.
pub fn convex_line_instance<R: Rng>(rng: &mut R, lo: f64, hi: f64, horizon: usize, max_knots: usize) -> Result<Instance<RealLine>> {
    let costs = (0..horizon)
        .map(|_| convex_pl(rng, lo, hi, max_knots).map(Convex1d::from))
        .collect::<Result<Vec<_>>>()?;
    let x0 = rng.random_range(lo..=hi);
    Instance::new(RealLine::new(lo, hi)?, x0, costs)
}

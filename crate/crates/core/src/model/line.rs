use alloc::format;
use alloc::vec::Vec;

use super::{DecisionSpace, HittingCost, MetricSpace};
use crate::error::{Error, Result};

/// A closed interval of the real line (bounds may be infinite) with `|x − y|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealLine {
    pub lo: f64,
    pub hi: f64,
}

impl RealLine {
    pub const FULL: RealLine = RealLine {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Config(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(RealLine { lo, hi })
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

impl MetricSpace for RealLine {
    type Point = f64;

    #[inline]
    fn distance(&self, a: &f64, b: &f64) -> f64 {
        libm::fabs(a - b)
    }

    fn contains(&self, p: &f64) -> bool {
        p.is_finite() && *p >= self.lo && *p <= self.hi
    }
}

/// Convex piecewise-linear function given by its knots, the slope on each
/// of the `knots.len() + 1` pieces, and its value at the first knot.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    knots: Vec<f64>,
    slopes: Vec<f64>,
    values: Vec<f64>,
    minimizer: f64,
}

impl PiecewiseLinear {
    /// Slopes must be non-decreasing (convexity), the outermost slopes must
    /// be strictly negative and strictly positive (a minimizer exists), and
    /// the minimum value must be non-negative.
    pub fn new(knots: Vec<f64>, slopes: Vec<f64>, value_at_first_knot: f64) -> Result<Self> {
        if knots.is_empty() || slopes.len() != knots.len() + 1 {
            return Err(Error::Config(
                "piecewise-linear cost needs k ≥ 1 knots and k + 1 slopes".into(),
            ));
        }
        if knots.iter().chain(&slopes).any(|v| !v.is_finite()) || !value_at_first_knot.is_finite() {
            return Err(Error::Config("piecewise-linear data must be finite".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("knots must be strictly increasing".into()));
        }
        if slopes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::ModelViolation(
                "piecewise-linear cost is not convex (slopes decrease)".into(),
            ));
        }
        if !(slopes[0] < 0.0 && slopes[slopes.len() - 1] > 0.0) {
            return Err(Error::ModelViolation(
                "piecewise-linear cost has no minimizer (outer slopes must be < 0 and > 0)".into(),
            ));
        }
        let mut values = Vec::with_capacity(knots.len());
        values.push(value_at_first_knot);
        for j in 1..knots.len() {
            let v = values[j - 1] + slopes[j] * (knots[j] - knots[j - 1]);
            values.push(v);
        }
        // leftmost knot whose right-hand slope is non-negative
        let j = (0..knots.len()).find(|&j| slopes[j + 1] >= 0.0).unwrap_or(0);
        if values[j] < 0.0 {
            return Err(Error::ModelViolation(format!(
                "hitting cost takes negative value {}",
                values[j]
            )));
        }
        Ok(PiecewiseLinear {
            minimizer: knots[j],
            knots,
            slopes,
            values,
        })
    }

    /// `scale · |x − center| + offset`.
    pub fn abs(center: f64, scale: f64, offset: f64) -> Result<Self> {
        if scale.is_nan() || scale <= 0.0 {
            return Err(Error::param("scale", "must be positive"));
        }
        Self::new(alloc::vec![center], alloc::vec![-scale, scale], offset)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn value_at_first_knot(&self) -> f64 {
        self.values[0]
    }

    /// Leftmost point of minimum value.
    pub fn minimizer(&self) -> f64 {
        self.minimizer
    }

    pub fn lipschitz(&self) -> f64 {
        self.slopes.iter().fold(0.0, |m, s| m.max(libm::fabs(*s)))
    }

    pub fn eval(&self, x: f64) -> f64 {
        // index of the last knot ≤ x
        let j = self.knots.partition_point(|&k| k <= x);
        if j == 0 {
            self.values[0] + self.slopes[0] * (x - self.knots[0])
        } else {
            self.values[j - 1] + self.slopes[j] * (x - self.knots[j - 1])
        }
    }
}

/// `curvature/2 · (x − center)² + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub curvature: f64,
    pub center: f64,
    pub offset: f64,
}

impl Quadratic {
    pub fn new(curvature: f64, center: f64, offset: f64) -> Result<Self> {
        if !(curvature > 0.0 && curvature.is_finite()) {
            return Err(Error::ModelViolation(
                "quadratic cost needs positive finite curvature".into(),
            ));
        }
        if !(center.is_finite() && offset.is_finite() && offset >= 0.0) {
            return Err(Error::Config("quadratic center/offset must be finite, offset ≥ 0".into()));
        }
        Ok(Quadratic {
            curvature,
            center,
            offset,
        })
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let d = x - self.center;
        0.5 * self.curvature * d * d + self.offset
    }
}

/// Convex hitting costs on the real line.
#[derive(Debug, Clone, PartialEq)]
pub enum Convex1d {
    Piecewise(PiecewiseLinear),
    Quadratic(Quadratic),
}

impl Convex1d {
    /// Lipschitz constant on `[lo, hi]`.
    pub fn lipschitz_on(&self, lo: f64, hi: f64) -> f64 {
        match self {
            Convex1d::Piecewise(p) => p.lipschitz(),
            Convex1d::Quadratic(q) => {
                q.curvature * libm::fabs(lo - q.center).max(libm::fabs(hi - q.center))
            }
        }
    }

    /// Points where the function's slope may change.
    pub fn breakpoints(&self) -> &[f64] {
        match self {
            Convex1d::Piecewise(p) => p.knots(),
            Convex1d::Quadratic(_) => &[],
        }
    }

    /// Midpoint convexity test `f((a+b)/2) ≤ (f(a)+f(b))/2` on all pairs.
    pub fn midpoint_convex_on(&self, samples: &[f64]) -> bool {
        samples.iter().all(|&a| {
            samples.iter().all(|&b| {
                let fa = self.eval(&a);
                let fb = self.eval(&b);
                let fm = self.eval(&(0.5 * (a + b)));
                fm <= 0.5 * (fa + fb) + 1e-12 * (1.0 + libm::fabs(fa) + libm::fabs(fb))
            })
        })
    }

    /// Parameter `λ ∈ [0, 1]` on the segment `x(λ) = (1−λ)·from + λ·to`
    /// solving `|x(λ) − from| = β · f(x(λ))`, or `1` when no solution exists.
    ///
    /// `to` must be the minimizer, so `g(λ) = λ·|to − from| − β·f(x(λ))` is
    /// strictly increasing. Exact on piecewise-linear costs; bisection to an
    /// x-tolerance of 1e-12 otherwise.
    pub fn balance_point(&self, from: f64, to: f64, beta: f64) -> f64 {
        let span = libm::fabs(to - from);
        if span == 0.0 {
            return 0.0;
        }
        let at = |lam: f64| from + lam * (to - from);
        let g = |lam: f64| lam * span - beta * self.eval(&at(lam));
        if g(1.0) < 0.0 {
            return 1.0;
        }
        let g0 = g(0.0);
        if g0 >= 0.0 {
            return 0.0;
        }
        match self {
            Convex1d::Piecewise(p) => {
                let mut lams: Vec<f64> = p
                    .knots()
                    .iter()
                    .map(|k| (k - from) / (to - from))
                    .filter(|l| *l > 0.0 && *l < 1.0)
                    .collect();
                lams.sort_by(f64::total_cmp);
                let mut lo = 0.0;
                let mut g_lo = g0;
                for hi in lams.into_iter().chain(core::iter::once(1.0)) {
                    let g_hi = g(hi);
                    if g_hi >= 0.0 {
                        // g is affine on [lo, hi]
                        return lo + (hi - lo) * (-g_lo) / (g_hi - g_lo);
                    }
                    lo = hi;
                    g_lo = g_hi;
                }
                1.0
            }
            Convex1d::Quadratic(_) => {
                let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
                for _ in 0..200 {
                    if (hi - lo) * span <= 1e-12 {
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    if g(mid) < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }
}

impl From<PiecewiseLinear> for Convex1d {
    fn from(p: PiecewiseLinear) -> Self {
        Convex1d::Piecewise(p)
    }
}

impl From<Quadratic> for Convex1d {
    fn from(q: Quadratic) -> Self {
        Convex1d::Quadratic(q)
    }
}

impl HittingCost<f64> for Convex1d {
    fn eval(&self, x: &f64) -> f64 {
        match self {
            Convex1d::Piecewise(p) => p.eval(*x),
            Convex1d::Quadratic(q) => q.eval(*x),
        }
    }

    fn minimizer(&self) -> f64 {
        match self {
            Convex1d::Piecewise(p) => p.minimizer,
            Convex1d::Quadratic(q) => q.center,
        }
    }
}

/// Golden-section search for the minimizer of a convex function on `[lo, hi]`.
pub(crate) fn golden_section(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let tol = 1e-13 * (1.0 + libm::fabs(lo).max(libm::fabs(hi)));
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..300 {
        if hi - lo <= tol {
            break;
        }
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        }
    }
    let mid = 0.5 * (lo + hi);
    // the bracket ends can beat the interior point when the optimum sits on one
    [lo, mid, hi]
        .into_iter()
        .fold((mid, f(mid)), |(bx, bf), x| {
            let fx = f(x);
            if fx < bf {
                (x, fx)
            } else {
                (bx, bf)
            }
        })
        .0
}

impl DecisionSpace for RealLine {
    type Cost = Convex1d;

    fn argmin(&self, f: &Convex1d, anchors: &[(f64, f64)]) -> Result<f64> {
        let objective =
            |p: f64| anchors.iter().fold(f.eval(&p), |acc, (a, w)| acc + w * libm::fabs(p - a));
        let v = self.clamp(f.minimizer());
        // the optimum lies in the hull of the minimizer and the anchors
        let (lo, hi) = anchors.iter().fold((v, v), |(lo, hi), (a, _)| {
            let a = self.clamp(*a);
            (lo.min(a), hi.max(a))
        });
        match f {
            Convex1d::Piecewise(_) => {
                // objective is piecewise linear: optimum at a breakpoint or bound
                let mut cands: Vec<f64> = f
                    .breakpoints()
                    .iter()
                    .copied()
                    .chain(anchors.iter().map(|(a, _)| *a))
                    .chain([lo, hi])
                    .filter(|x| *x >= lo && *x <= hi)
                    .collect();
                cands.sort_by(f64::total_cmp);
                let mut best = (cands[0], objective(cands[0]));
                for &c in &cands[1..] {
                    let val = objective(c);
                    if val < best.1 {
                        best = (c, val);
                    }
                }
                Ok(best.0)
            }
            Convex1d::Quadratic(q) => Ok(self.clamp(quadratic_argmin(q, anchors))),
        }
    }
}

/// Exact minimizer of `q(x) + Σ w_i·|x − a_i|` on the whole line.
///
/// Between consecutive anchors the derivative is affine and increasing, so
/// walking the intervals left to right finds the first one whose stationary
/// point is not beyond its right end.
fn quadratic_argmin(q: &Quadratic, anchors: &[(f64, f64)]) -> f64 {
    let mut pts: Vec<(f64, f64)> = anchors.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pts.iter().map(|(_, w)| w).sum();
    let mut left = 0.0;
    let mut lower = f64::NEG_INFINITY;
    for j in 0..=pts.len() {
        let upper = pts.get(j).map_or(f64::INFINITY, |p| p.0);
        let stationary = q.center - (left - (total - left)) / q.curvature;
        if stationary <= upper {
            return stationary.max(lower);
        }
        if let Some(&(a, w)) = pts.get(j) {
            left += w;
            lower = a;
        }
    }
    lower
}

use super::line::golden_section;
use super::{DecisionSpace, HittingCost, MetricSpace};
use crate::error::{Error, Result};

/// The Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Plane;

#[inline]
pub(crate) fn norm(v: [f64; 2]) -> f64 {
    libm::hypot(v[0], v[1])
}

#[inline]
pub(crate) fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub(crate) fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

impl MetricSpace for Plane {
    type Point = [f64; 2];

    fn distance(&self, a: &[f64; 2], b: &[f64; 2]) -> f64 {
        norm(sub(*a, *b))
    }

    fn contains(&self, p: &[f64; 2]) -> bool {
        p[0].is_finite() && p[1].is_finite()
    }
}

/// `α·|⟨u, x − c⟩| + L·|⟨u⊥, x − c⟩|` for a unit axis `u`: linear growth at
/// rate α along the axis through `c`, and a steep penalty `L` off it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polyhedral2d {
    center: [f64; 2],
    axis: [f64; 2],
    alpha: f64,
    penalty: f64,
}

impl Polyhedral2d {
    pub fn new(center: [f64; 2], axis: [f64; 2], alpha: f64, penalty: f64) -> Result<Self> {
        let n = norm(axis);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Config("axis must be a non-zero finite vector".into()));
        }
        if !(alpha > 0.0 && penalty >= alpha && penalty.is_finite()) {
            return Err(Error::param("alpha/penalty", "need 0 < alpha ≤ penalty < ∞"));
        }
        Ok(Polyhedral2d {
            center,
            axis: [axis[0] / n, axis[1] / n],
            alpha,
            penalty,
        })
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    pub fn axis(&self) -> [f64; 2] {
        self.axis
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    /// Coordinates of `x` relative to the centre: (along axis, across axis).
    pub fn local(&self, x: &[f64; 2]) -> [f64; 2] {
        let d = sub(*x, self.center);
        let perp = [-self.axis[1], self.axis[0]];
        [dot(d, self.axis), dot(d, perp)]
    }
}

impl HittingCost<[f64; 2]> for Polyhedral2d {
    fn eval(&self, x: &[f64; 2]) -> f64 {
        let [a, b] = self.local(x);
        self.alpha * libm::fabs(a) + self.penalty * libm::fabs(b)
    }

    fn minimizer(&self) -> [f64; 2] {
        self.center
    }
}

impl DecisionSpace for Plane {
    type Cost = Polyhedral2d;

    /// Exact only when the off-axis penalty dominates the total anchor weight:
    /// then moving toward the axis always pays, so the optimum lies on it and
    /// the search is one-dimensional.
    fn argmin(&self, f: &Polyhedral2d, anchors: &[([f64; 2], f64)]) -> Result<[f64; 2]> {
        let weight: f64 = anchors.iter().map(|(_, w)| w).sum();
        if f.penalty <= weight {
            return Err(Error::ModelViolation(alloc::format!(
                "plane oracle needs off-axis penalty > {weight}, got {}",
                f.penalty
            )));
        }
        let at = |s: f64| [f.center[0] + s * f.axis[0], f.center[1] + s * f.axis[1]];
        let objective = |s: f64| {
            anchors
                .iter()
                .fold(f.alpha * libm::fabs(s), |acc, (a, w)| acc + w * norm(sub(at(s), *a)))
        };
        let (lo, hi) = anchors.iter().fold((0.0_f64, 0.0_f64), |(lo, hi), (a, _)| {
            let s = dot(sub(*a, f.center), f.axis);
            (lo.min(s), hi.max(s))
        });
        Ok(at(golden_section(lo, hi, objective)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polyhedral_growth_along_and_across() {
        let f = Polyhedral2d::new([1.0, 0.0], [0.0, 2.0], 0.5, 100.0).unwrap();
        assert_eq!(f.eval(&[1.0, 3.0]), 1.5);
        assert_eq!(f.eval(&[2.0, 0.0]), 100.0);
        assert_eq!(f.minimizer(), [1.0, 0.0]);
    }

    #[test]
    fn argmin_stays_on_axis() {
        let f = Polyhedral2d::new([0.0, 0.0], [1.0, 0.0], 0.1, 1e6).unwrap();
        let p = Plane.argmin(&f, &[([0.0, 1.0], 1.0), ([3.0, 0.0], 1.0)]).unwrap();
        assert_eq!(p[1], 0.0);
        // restricted to the axis the objective is 0.1|s| + √(s² + 1) + |3 − s|
        let obj = |s: f64| 0.1 * s.abs() + (s * s + 1.0).sqrt() + (3.0 - s).abs();
        let brute = (0..=30000)
            .map(|i| i as f64 * 1e-4)
            .fold(f64::INFINITY, |m, s| m.min(obj(s)));
        assert!(obj(p[0]) <= brute + 1e-9);
    }
}

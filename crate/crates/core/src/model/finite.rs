use alloc::format;
use alloc::vec::Vec;

use super::{DecisionSpace, HittingCost, MetricSpace};
use crate::error::{Error, Result};

/// Triangle-inequality checks are exhaustive up to this many points.
const TRIANGLE_CHECK_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum FiniteMetric {
    /// Explicit row-major `n × n` distance matrix.
    Matrix { n: usize, dist: Vec<f64> },
    /// Points on the real line with `|x − y|`.
    Line { coords: Vec<f64> },
    /// `{0,1}^bits` with `scale · ‖u − u'‖₁`; point `i` has bit `j` set iff
    /// coordinate `j` is 1.
    Cube { bits: u32, scale: f64 },
}

/// A finite metric space. Points are indices `0..len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    metric: FiniteMetric,
}

impl FiniteSpace {
    pub fn from_matrix(n: usize, dist: Vec<f64>) -> Result<Self> {
        if n == 0 || dist.len() != n * n {
            return Err(Error::Config(format!(
                "distance matrix must be {n}×{n} and non-empty"
            )));
        }
        let space = FiniteSpace {
            metric: FiniteMetric::Matrix { n, dist },
        };
        space.validate()?;
        Ok(space)
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Config("point set must be non-empty".into()));
        }
        let space = FiniteSpace {
            metric: FiniteMetric::Line { coords },
        };
        space.validate()?;
        Ok(space)
    }

    pub fn cube(bits: u32, scale: f64) -> Result<Self> {
        if bits == 0 || bits > 20 {
            return Err(Error::param("bits", "binary cube needs 1..=20 coordinates"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::param("scale", "must be positive and finite"));
        }
        Ok(FiniteSpace {
            metric: FiniteMetric::Cube { bits, scale },
        })
    }

    pub fn metric(&self) -> &FiniteMetric {
        &self.metric
    }

    pub fn len(&self) -> usize {
        match &self.metric {
            FiniteMetric::Matrix { n, .. } => *n,
            FiniteMetric::Line { coords } => coords.len(),
            FiniteMetric::Cube { bits, .. } => 1usize << bits,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> core::ops::Range<usize> {
        0..self.len()
    }

    /// Coordinate of a point of a [`FiniteMetric::Line`] space.
    pub fn coord(&self, i: usize) -> Option<f64> {
        match &self.metric {
            FiniteMetric::Line { coords } => coords.get(i).copied(),
            _ => None,
        }
    }

    /// Index of the point with coordinate exactly `x` on a line space.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        match &self.metric {
            FiniteMetric::Line { coords } => coords.iter().position(|&c| c == x),
            _ => None,
        }
    }

    /// Multiplies every distance by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        let metric = match &self.metric {
            FiniteMetric::Matrix { n, dist } => FiniteMetric::Matrix {
                n: *n,
                dist: dist.iter().map(|d| d * factor).collect(),
            },
            FiniteMetric::Line { coords } => FiniteMetric::Line {
                coords: coords.iter().map(|c| c * factor).collect(),
            },
            FiniteMetric::Cube { bits, scale } => FiniteMetric::Cube {
                bits: *bits,
                scale: scale * factor,
            },
        };
        FiniteSpace { metric }
    }

    /// First violated metric axiom, checked over all pairs and triples.
    pub fn check_metric_axioms(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if self.distance(&i, &i) != 0.0 {
                return Err(Error::ModelViolation(format!("d({i},{i}) != 0")));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let dij = self.distance(&i, &j);
                if !(dij > 0.0 && dij.is_finite()) {
                    return Err(Error::ModelViolation(format!(
                        "d({i},{j}) = {dij} is not positive and finite"
                    )));
                }
                if dij != self.distance(&j, &i) {
                    return Err(Error::ModelViolation(format!("d({i},{j}) != d({j},{i})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let dij = self.distance(&i, &j);
                for k in 0..n {
                    let lhs = self.distance(&i, &k);
                    if lhs > dij + self.distance(&j, &k) + 1e-12 * lhs.max(1.0) {
                        return Err(Error::ModelViolation(format!(
                            "triangle inequality fails for ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if let FiniteMetric::Line { coords } = &self.metric {
            for (i, a) in coords.iter().enumerate() {
                if !a.is_finite() {
                    return Err(Error::Config(format!("coordinate {i} is not finite")));
                }
                if coords[..i].contains(a) {
                    return Err(Error::Config(format!("duplicate coordinate {a}")));
                }
            }
            return Ok(());
        }
        if self.len() <= TRIANGLE_CHECK_LIMIT {
            self.check_metric_axioms()
        } else {
            Ok(())
        }
    }
}

impl MetricSpace for FiniteSpace {
    type Point = usize;

    #[inline]
    fn distance(&self, a: &usize, b: &usize) -> f64 {
        match &self.metric {
            FiniteMetric::Matrix { n, dist } => dist[a * n + b],
            FiniteMetric::Line { coords } => libm::fabs(coords[*a] - coords[*b]),
            FiniteMetric::Cube { scale, .. } => scale * f64::from((a ^ b).count_ones()),
        }
    }

    fn contains(&self, p: &usize) -> bool {
        *p < self.len()
    }
}

/// Hitting cost given by a value table over the points of a finite space.
#[derive(Debug, Clone, PartialEq)]
pub struct TableCost {
    values: Vec<f64>,
    minimizer: usize,
}

impl TableCost {
    /// Values must be non-negative (∞ allowed) with at least one finite entry.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let mut minimizer = None;
        for (i, &v) in values.iter().enumerate() {
            if v.is_nan() || v < 0.0 {
                return Err(Error::Config(format!("hitting cost value {v} at point {i}")));
            }
            match minimizer {
                Some(m) if values[m] <= v => {}
                _ if v.is_finite() => minimizer = Some(i),
                _ => {}
            }
        }
        let minimizer =
            minimizer.ok_or_else(|| Error::Config("hitting cost is infinite everywhere".into()))?;
        Ok(TableCost { values, minimizer })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Whether the minimum is attained at exactly one point.
    pub fn has_unique_minimizer(&self) -> bool {
        let m = self.values[self.minimizer];
        self.values.iter().filter(|&&v| v == m).count() == 1
    }
}

/// Largest `α` for which `f` is α-polyhedral on `space`:
/// `min_{u ≠ v} (f(u) − f(v)) / d(u, v)` with `v` the minimizer. Zero when the
/// minimizer is not unique; `∞` on a one-point space.
pub fn polyhedral_constant(space: &FiniteSpace, f: &TableCost) -> f64 {
    let v = f.minimizer;
    let fv = f.values[v];
    space
        .points()
        .filter(|&u| u != v)
        .map(|u| (f.values[u] - fv) / space.distance(&u, &v))
        .fold(f64::INFINITY, f64::min)
}

impl HittingCost<usize> for TableCost {
    #[inline]
    fn eval(&self, x: &usize) -> f64 {
        self.values[*x]
    }

    fn minimizer(&self) -> usize {
        self.minimizer
    }
}

impl DecisionSpace for FiniteSpace {
    type Cost = TableCost;

    fn argmin(&self, f: &TableCost, anchors: &[(usize, f64)]) -> Result<usize> {
        if f.values.len() != self.len() {
            return Err(Error::Config(format!(
                "cost table has {} entries, space has {} points",
                f.values.len(),
                self.len()
            )));
        }
        let mut best = f64::INFINITY;
        let mut arg = None;
        for p in self.points() {
            let fp = f.values[p];
            if fp.is_infinite() {
                continue;
            }
            let obj = anchors
                .iter()
                .fold(fp, |acc, (a, w)| acc + w * self.distance(&p, a));
            if obj < best {
                best = obj;
                arg = Some(p);
            }
        }
        arg.ok_or(Error::InfeasibleRound { round: 0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cube_distance_is_scaled_hamming() {
        let s = FiniteSpace::cube(6, 8.0).unwrap();
        assert_eq!(s.len(), 64);
        assert_eq!(s.distance(&0b000000, &0b000011), 16.0);
        assert_eq!(s.distance(&0b101010, &0b010101), 48.0);
        s.check_metric_axioms().unwrap();
    }

    #[test]
    fn rejects_non_metric_matrix() {
        // d(0,2) = 5 > d(0,1) + d(1,2) = 2
        let d = vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0];
        assert!(matches!(
            FiniteSpace::from_matrix(3, d),
            Err(Error::ModelViolation(_))
        ));
    }

    #[test]
    fn table_minimizer_breaks_ties_by_first_index() {
        let f = TableCost::new(vec![3.0, 1.0, f64::INFINITY, 1.0]).unwrap();
        assert_eq!(f.minimizer(), 1);
        assert!(!f.has_unique_minimizer());
        assert!(TableCost::new(vec![f64::INFINITY; 3]).is_err());
        assert!(TableCost::new(vec![-1.0, 0.0]).is_err());
    }

    #[test]
    fn argmin_skips_infinite_points() {
        let s = FiniteSpace::from_coords(vec![0.0, 1.0, 2.0]).unwrap();
        let f = TableCost::new(vec![f64::INFINITY, 5.0, 0.0]).unwrap();
        // f + d(., 0): point 1 -> 6, point 2 -> 2
        assert_eq!(s.argmin(&f, &[(0, 1.0)]).unwrap(), 2);
        let g = TableCost::new(vec![f64::INFINITY, 0.0, f64::INFINITY]).unwrap();
        assert_eq!(s.argmin(&g, &[(0, 1.0), (2, 1.0)]).unwrap(), 1);
    }

    #[test]
    fn polyhedral_constant_is_the_tightest_slope() {
        let s = FiniteSpace::from_coords(vec![0.0, 1.0, 3.0]).unwrap();
        let f = TableCost::new(vec![1.0, 0.0, 5.0]).unwrap();
        // slopes 1/1 and 5/2 from the minimizer at 1.0
        assert_eq!(polyhedral_constant(&s, &f), 1.0);
        let flat = TableCost::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(polyhedral_constant(&s, &flat), 0.0);
    }
}

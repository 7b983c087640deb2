//! Small dense linear programs: two-phase tableau simplex with Bland's rule.
//!
//! Intended for the certificate LPs (tens of variables). Solutions are plain
//! `f64`; callers re-check feasibility with their own residual evaluators.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, LpStatus, Result};

const EPS: f64 = 1e-10;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `maximize c·x` subject to linear rows and `x ≥ 0`.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    objective: Vec<f64>,
    minimise: bool,
    rows: Vec<(Vec<f64>, Relation, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
}

impl LinearProgram {
    pub fn maximize(objective: Vec<f64>) -> Self {
        LinearProgram {
            objective,
            minimise: false,
            rows: Vec::new(),
        }
    }

    pub fn minimize(objective: Vec<f64>) -> Self {
        let mut lp = Self::maximize(objective.into_iter().map(|c| -c).collect());
        lp.minimise = true;
        lp
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constraint(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.objective.len(), "row width must match the objective");
        self.rows.push((coeffs, rel, rhs));
        self
    }

    /// Optimal solution; `value` is the objective as posed (so for a
    /// [`minimize`](Self::minimize) problem it is the minimum).
    pub fn solve(&self) -> Result<LpSolution> {
        let mut sol = Tableau::build(self).run(&self.objective)?;
        if self.minimise {
            sol.value = -sol.value;
        }
        Ok(sol)
    }
}

struct Tableau {
    n: usize,
    /// Columns: originals, then slacks/surpluses, then artificials.
    cols: usize,
    first_artificial: usize,
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.objective.len();
        let m = lp.rows.len();
        // normalise to non-negative right-hand sides
        let norm: Vec<(Vec<f64>, Relation, f64)> = lp
            .rows
            .iter()
            .map(|(a, rel, b)| {
                if *b < 0.0 {
                    let flipped = match rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (a.iter().map(|v| -v).collect(), flipped, -b)
                } else {
                    (a.clone(), *rel, *b)
                }
            })
            .collect();
        let slacks = norm.iter().filter(|r| r.1 != Relation::Eq).count();
        let artificials = norm.iter().filter(|r| r.1 != Relation::Le).count();
        let cols = n + slacks + artificials;
        let first_artificial = n + slacks;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut art) = (n, first_artificial);
        for (a, rel, b) in norm {
            let mut row = vec![0.0; cols + 1];
            row[..n].copy_from_slice(&a);
            row[cols] = b;
            match rel {
                Relation::Le => {
                    row[s] = 1.0;
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -1.0;
                    s += 1;
                    row[art] = 1.0;
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = 1.0;
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            n,
            cols,
            first_artificial,
            rows,
            basis,
        }
    }

    /// Reduced-cost row for maximising `c` over the current basis.
    fn objective_row(&self, c: &[f64]) -> Vec<f64> {
        let mut obj = vec![0.0; self.cols + 1];
        obj[..c.len()].copy_from_slice(c);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = if b < c.len() { c[b] } else { 0.0 };
            if cb != 0.0 {
                for (o, r) in obj.iter_mut().zip(row) {
                    *o -= cb * r;
                }
            }
        }
        obj
    }

    fn pivot(&mut self, obj: &mut [f64], r: usize, e: usize) {
        let p = self.rows[r][e];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && row[e] != 0.0 {
                let f = row[e];
                for (v, pr) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
            }
        }
        let f = obj[e];
        if f != 0.0 {
            for (v, pr) in obj.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
        }
        self.basis[r] = e;
    }

    /// Bland's rule simplex on columns `< limit`.
    fn optimise(&mut self, obj: &mut [f64], limit: usize) -> Result<()> {
        for _ in 0..MAX_PIVOTS {
            let Some(e) = (0..limit).find(|&j| obj[j] > EPS) else {
                return Ok(());
            };
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[e] > EPS {
                    let ratio = row[self.cols] / row[e];
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - EPS || (ratio <= br + EPS && self.basis[i] < self.basis[bi]) {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                Some((r, _)) => self.pivot(obj, r, e),
                None => return Err(Error::Lp(LpStatus::Unbounded)),
            }
        }
        Err(Error::Lp(LpStatus::Unbounded))
    }

    fn run(mut self, c: &[f64]) -> Result<LpSolution> {
        let rhs = self.cols;
        if self.first_artificial < self.cols {
            let mut phase1 = vec![0.0; self.cols];
            for v in &mut phase1[self.first_artificial..] {
                *v = -1.0;
            }
            let mut obj = self.objective_row(&phase1);
            self.optimise(&mut obj, self.cols)?;
            let scale = 1.0 + self.rows.iter().map(|r| libm::fabs(r[rhs])).fold(0.0, f64::max);
            // obj[rhs] holds the remaining artificial mass
            if obj[rhs] > 1e-9 * scale {
                return Err(Error::Lp(LpStatus::Infeasible));
            }
            // drive remaining artificials out of the basis
            for r in 0..self.rows.len() {
                if self.basis[r] >= self.first_artificial {
                    if let Some(e) = (0..self.first_artificial).find(|&j| libm::fabs(self.rows[r][j]) > 1e-9) {
                        self.pivot(&mut obj, r, e);
                    }
                }
            }
        }
        let mut obj = self.objective_row(c);
        self.optimise(&mut obj, self.first_artificial)?;
        let mut x = vec![0.0; self.n];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.n {
                x[b] = row[rhs].max(0.0);
            }
        }
        let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
        Ok(LpSolution { x, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximisation() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let mut lp = LinearProgram::maximize(vec![3.0, 5.0]);
        lp.constraint(vec![1.0, 0.0], Relation::Le, 4.0)
            .constraint(vec![0.0, 2.0], Relation::Le, 12.0)
            .constraint(vec![3.0, 2.0], Relation::Le, 18.0);
        let sol = lp.solve().unwrap();
        assert!((sol.value - 36.0).abs() < 1e-9);
        assert!((sol.x[0] - 2.0).abs() < 1e-9 && (sol.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn minimisation_with_cover_rows() {
        // min x + y, x + 2y ≥ 4, 3x + y ≥ 6 → (8/5, 6/5), 14/5
        let mut lp = LinearProgram::minimize(vec![1.0, 1.0]);
        lp.constraint(vec![1.0, 2.0], Relation::Ge, 4.0)
            .constraint(vec![3.0, 1.0], Relation::Ge, 6.0);
        let sol = lp.solve().unwrap();
        assert!((sol.value - 2.8).abs() < 1e-9);
        assert!((sol.x[0] - 1.6).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::maximize(vec![1.0]);
        lp.constraint(vec![1.0], Relation::Le, 1.0)
            .constraint(vec![1.0], Relation::Ge, 2.0);
        assert_eq!(lp.solve(), Err(Error::Lp(LpStatus::Infeasible)));
        let mut lp = LinearProgram::maximize(vec![1.0, 0.0]);
        lp.constraint(vec![-1.0, 1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve(), Err(Error::Lp(LpStatus::Unbounded)));
    }

    #[test]
    fn equality_rows_and_negative_rhs() {
        // max x − y, x + y = 2, x − y ≤ −1 → best x − y = −1
        let mut lp = LinearProgram::maximize(vec![1.0, -1.0]);
        lp.constraint(vec![1.0, 1.0], Relation::Eq, 2.0)
            .constraint(vec![1.0, -1.0], Relation::Le, -1.0);
        let sol = lp.solve().unwrap();
        assert!((sol.value + 1.0).abs() < 1e-9);
        assert!((sol.x[0] + sol.x[1] - 2.0).abs() < 1e-9);
    }
}

//! Fixed instance forcing any (1+δ)-consistent algorithm to follow a path
//! of predictions that walks away from a static minimizer.

use alloc::vec::Vec;

use crate::bounds::{closed_form_steps, integral_lower_bound_params, solve_l};
use crate::error::Result;
use crate::model::{FiniteSpace, Instance, TableCost};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepSource {
    /// Optimal step sizes from the primal LP.
    Lp,
    /// The explicit feasible step sizes.
    ClosedForm,
}

#[derive(Debug, Clone)]
pub struct Prop5Instance {
    /// Points of a line: index 0 is the start `0`, index 1 the minimizer `−1`.
    pub instance: Instance<FiniteSpace>,
    pub predictions: Vec<usize>,
    /// Adjusted `α'` with integral horizon.
    pub alpha: f64,
    pub delta: f64,
    pub t: usize,
    pub steps: Vec<f64>,
    /// Path of predictions `p_s = Σ_{i≤s} Δ_i`.
    pub path: Vec<f64>,
    /// Optimal value of the primal LP at `(α', δ, t)`.
    pub lp_value: f64,
}

/// Builds the instance for `δ` and the nearest `α'` with integral horizon.
///
/// `f_s(x) = α'|x + 1|` on `{−1, p_s}` and `∞` elsewhere; the minimizer
/// never moves, so the minimizer-following cost is exactly `1`.
pub fn gen_prop5_instance(alpha: f64, delta: f64, source: StepSource) -> Result<Prop5Instance> {
    let (alpha, t) = integral_lower_bound_params(alpha, delta)?;
    let lp = solve_l(t, alpha, delta)?;
    let steps = match source {
        StepSource::Lp => lp.steps,
        StepSource::ClosedForm => closed_form_steps(alpha, delta)?,
    };
    let mut path = Vec::with_capacity(t);
    let mut acc = 0.0;
    for d in &steps {
        acc += d;
        path.push(acc);
    }
    let mut coords = alloc::vec![0.0, -1.0];
    for &p in &path {
        if !coords.contains(&p) {
            coords.push(p);
        }
    }
    let space = FiniteSpace::from_coords(coords.clone())?;
    let index = |x: f64| coords.iter().position(|&c| c == x).unwrap_or(0);
    let predictions: Vec<usize> = path.iter().map(|&p| index(p)).collect();
    let costs = predictions
        .iter()
        .map(|&ps| {
            let values = coords
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    if i == 1 || i == ps {
                        alpha * libm::fabs(c + 1.0)
                    } else {
                        f64::INFINITY
                    }
                })
                .collect();
            TableCost::new(values)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prop5Instance {
        instance: Instance::new(space, 0, costs)?,
        predictions,
        alpha,
        delta,
        t,
        steps,
        path,
        lp_value: lp.objective,
    })
}

//! Certificates and closed forms for the competitive-ratio bounds.
//!
//! * The robustness of AOS rests on the value `U(t)` of a small dual LP in
//!   variables `(U, y_1..y_t)` and on a closed-form upper bound `Ũ` for it.
//! * The lower bound rests on the value `L(t)` of a primal LP over step
//!   sizes `Δ_1..Δ_t ≥ 0`, with a closed-form feasible point.
//!
//! Residual evaluators recompute every constraint from its nested-sum form,
//! independently of the LP matrices handed to the solver.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};

/// Largest `t` accepted by the LP solvers.
pub const MAX_LP_HORIZON: usize = 64;

/// Feasibility tolerance for certificates.
pub const FEAS_TOL: f64 = 1e-7;

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, "must be a positive finite number"))
    }
}

fn check_horizon(t: usize) -> Result<()> {
    if (1..=MAX_LP_HORIZON).contains(&t) {
        Ok(())
    } else {
        Err(Error::param("t", alloc::format!("must lie in 1..={MAX_LP_HORIZON}")))
    }
}

/// Growth factor `2 / (α + δ(1 + α))` of all exponential constructions.
pub fn growth_factor(alpha: f64, delta: f64) -> f64 {
    2.0 / (alpha + delta * (1.0 + alpha))
}

/// `2/(αδ)` when it is a positive integer (relative tolerance 1e-9).
pub fn integral_exponent(alpha: f64, delta: f64) -> Result<u32> {
    check_positive("alpha", alpha)?;
    check_positive("delta", delta)?;
    let e = 2.0 / (alpha * delta);
    let r = libm::round(e);
    if r >= 1.0 && r < u32::MAX as f64 && libm::fabs(e - r) <= 1e-9 * e {
        Ok(r as u32)
    } else {
        Err(Error::param("alpha*delta", alloc::format!("2/(alpha*delta) = {e} is not a positive integer")))
    }
}

/// Largest admissible `α' ≤ α` with `2/(α'δ) ∈ ℕ`, i.e. `α' = 2/(δ⌈2/(αδ)⌉)`.
/// An instance that is α-polyhedral is α'-polyhedral as well.
pub fn admissible_alpha(alpha: f64, delta: f64) -> Result<f64> {
    check_positive("alpha", alpha)?;
    check_positive("delta", delta)?;
    let e = 2.0 / (alpha * delta);
    let k = libm::ceil(e - 1e-9 * e).max(1.0);
    Ok(2.0 / (delta * k))
}

/// Closed-form `Ũ(α, δ)` bounding `sup_t U(t)`.
pub fn tilde_u(alpha: f64, delta: f64) -> Result<f64> {
    let e = integral_exponent(alpha, delta)?;
    let denom = 2.0 - alpha - delta * (1.0 + alpha);
    if denom < 1e-12 {
        return Err(Error::param(
            "alpha/delta",
            "needs 2 - alpha - delta(1 + alpha) > 0 for the closed form",
        ));
    }
    let head = alpha * libm::pow(growth_factor(alpha, delta), e as f64);
    Ok(head + 2.0 / (denom * denom) * (head - (2.0 - alpha) / delta + 1.0))
}

/// `(4U + 4)/δ + 2U + 5`, the factor on the greedy cost in the AOS robustness bound.
pub fn robustness_multiplier(u: f64, delta: f64) -> f64 {
    (4.0 * u + 4.0) / delta + 2.0 * u + 5.0
}

/// AOS cost bound relative to the minimizer-following cost, `multiplier(Ũ)`.
pub fn aos_vs_greedy_bound(alpha: f64, delta: f64) -> Result<f64> {
    Ok(robustness_multiplier(tilde_u(alpha, delta)?, delta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub t: usize,
    pub alpha: f64,
    pub delta: f64,
    pub y: Vec<f64>,
    pub u: f64,
    /// Slack of each cover row `Σ A_si y_i − (1 + α(t−s+1))`.
    pub cover_residuals: Vec<f64>,
    /// Slack of each cap row `U − (2y_s + δΣ_{i≥s} y_i − 1)`.
    pub cap_residuals: Vec<f64>,
    pub feasible: bool,
}

impl DualCertificate {
    pub fn min_residual(&self) -> f64 {
        self.cover_residuals
            .iter()
            .chain(&self.cap_residuals)
            .chain(&self.y)
            .fold(f64::INFINITY, |m, &r| m.min(r))
    }
}

/// Residuals of the dual program at `(y, U)`, from the nested-sum form.
pub fn dual_residuals(alpha: f64, delta: f64, y: &[f64], u: f64) -> (Vec<f64>, Vec<f64>) {
    let t = y.len();
    let yy = |i: usize| y[i - 1];
    let mut cover = Vec::with_capacity(t);
    let mut cap = Vec::with_capacity(t);
    for s in 1..=t {
        let a: f64 = (s..=t).map(|i| (1.0 + alpha * (i - s + 1) as f64) * yy(i)).sum();
        let b: f64 = (s..t).map(yy).sum();
        let c: f64 = (s + 1..=t).map(yy).sum();
        cover.push(delta * a + alpha * b - 2.0 * c - (1.0 + alpha * (t - s + 1) as f64));
        let tail: f64 = (s..=t).map(yy).sum();
        cap.push(u - (2.0 * yy(s) + delta * tail - 1.0));
    }
    (cover, cap)
}

fn dual_certificate(t: usize, alpha: f64, delta: f64, y: Vec<f64>, u: f64) -> DualCertificate {
    let (cover, cap) = dual_residuals(alpha, delta, &y, u);
    let mut cert = DualCertificate {
        t,
        alpha,
        delta,
        y,
        u,
        cover_residuals: cover,
        cap_residuals: cap,
        feasible: false,
    };
    cert.feasible = cert.min_residual() >= -FEAS_TOL;
    cert
}

/// Solves the dual program for `U(t)`.
pub fn solve_u(t: usize, alpha: f64, delta: f64) -> Result<DualCertificate> {
    check_positive("alpha", alpha)?;
    check_positive("delta", delta)?;
    check_horizon(t)?;
    // variables y_1..y_t, then w = U + 1 ≥ 0
    let n = t + 1;
    let mut objective = vec![0.0; n];
    objective[t] = 1.0;
    let mut lp = LinearProgram::minimize(objective);
    for s in 1..=t {
        let mut row = vec![0.0; n];
        for i in s..=t {
            let mut a = delta * (1.0 + alpha * (i - s + 1) as f64);
            if i < t {
                a += alpha;
            }
            if i > s {
                a -= 2.0;
            }
            row[i - 1] = a;
        }
        lp.constraint(row, Relation::Ge, 1.0 + alpha * (t - s + 1) as f64);
        let mut row = vec![0.0; n];
        row[t] = 1.0;
        row[s - 1] -= 2.0;
        for i in s..=t {
            row[i - 1] -= delta;
        }
        lp.constraint(row, Relation::Ge, 0.0);
    }
    let sol = lp.solve()?;
    let u = sol.x[t] - 1.0;
    let y = sol.x[..t].to_vec();
    Ok(dual_certificate(t, alpha, delta, y, u))
}

/// The explicit dual point `y_{t−s} = q^s · ((2 − (s−1)⁺αδ)/(2δ))⁺`,
/// `s = 0..t−1`, where `q` is the growth factor.
pub fn closed_form_dual(t: usize, alpha: f64, delta: f64) -> Vec<f64> {
    let q = growth_factor(alpha, delta);
    let mut y = vec![0.0; t];
    for s in 0..t {
        let back = s.saturating_sub(1) as f64;
        let w = ((2.0 - back * alpha * delta) / (2.0 * delta)).max(0.0);
        y[t - 1 - s] = libm::pow(q, s as f64) * w;
    }
    y
}

/// The explicit dual point paired with `U = Ũ(α, δ)`.
pub fn closed_form_dual_certificate(t: usize, alpha: f64, delta: f64) -> Result<DualCertificate> {
    check_horizon(t)?;
    let u = tilde_u(alpha, delta)?;
    Ok(dual_certificate(t, alpha, delta, closed_form_dual(t, alpha, delta), u))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimalCertificate {
    pub t: usize,
    pub alpha: f64,
    pub delta: f64,
    /// Step sizes `Δ_1..Δ_t` of the prediction path away from the minimizer.
    pub steps: Vec<f64>,
    pub objective: f64,
    /// Slack of each row `2(1 + Σ_{i<s}Δ_i) − [δ Σ_{i≤s} Adv_i + α(1 + Σ_{i≤s}Δ_i)]`.
    pub residuals: Vec<f64>,
    pub feasible: bool,
}

impl PrimalCertificate {
    pub fn min_residual(&self) -> f64 {
        self.residuals
            .iter()
            .chain(&self.steps)
            .fold(f64::INFINITY, |m, &r| m.min(r))
    }
}

/// Per-round cost `Δ_i + α(1 + Σ_{j≤i}Δ_j)` of following the predictions.
fn adv_costs(alpha: f64, steps: &[f64]) -> Vec<f64> {
    let mut cum = 0.0;
    steps
        .iter()
        .map(|d| {
            cum += d;
            d + alpha * (1.0 + cum)
        })
        .collect()
}

/// `Σ_i Δ_i + α(1 + Σ_{j≤i}Δ_j)`.
pub fn primal_objective(alpha: f64, steps: &[f64]) -> f64 {
    adv_costs(alpha, steps).iter().sum()
}

pub fn primal_residuals(alpha: f64, delta: f64, steps: &[f64]) -> Vec<f64> {
    let adv = adv_costs(alpha, steps);
    (1..=steps.len())
        .map(|s| {
            let before: f64 = steps[..s - 1].iter().sum();
            let upto: f64 = steps[..s].iter().sum();
            let adv_sum: f64 = adv[..s].iter().sum();
            2.0 * (1.0 + before) - (delta * adv_sum + alpha * (1.0 + upto))
        })
        .collect()
}

fn primal_certificate(t: usize, alpha: f64, delta: f64, steps: Vec<f64>) -> PrimalCertificate {
    let residuals = primal_residuals(alpha, delta, &steps);
    let mut cert = PrimalCertificate {
        t,
        alpha,
        delta,
        objective: primal_objective(alpha, &steps),
        steps,
        residuals,
        feasible: false,
    };
    cert.feasible = cert.min_residual() >= -FEAS_TOL;
    cert
}

/// Solves the primal program for `L(t)`. Beyond the feasible horizon the
/// program has no solution and [`crate::LpStatus::Infeasible`] is returned.
pub fn solve_l(t: usize, alpha: f64, delta: f64) -> Result<PrimalCertificate> {
    check_positive("alpha", alpha)?;
    check_positive("delta", delta)?;
    check_horizon(t)?;
    let objective = (1..=t).map(|j| 1.0 + alpha * (t - j + 1) as f64).collect();
    let mut lp = LinearProgram::maximize(objective);
    for s in 1..=t {
        let mut row = vec![0.0; t];
        for j in 1..=s {
            let mut a = delta * (1.0 + alpha * (s - j + 1) as f64) + alpha;
            if j < s {
                a -= 2.0;
            }
            row[j - 1] = a;
        }
        lp.constraint(row, Relation::Le, 2.0 - alpha - delta * alpha * s as f64);
    }
    let sol = lp.solve()?;
    Ok(primal_certificate(t, alpha, delta, sol.x))
}

/// `τ = (2 − α(1 − δ²)) / (αδ(1 + δ))`, the horizon of the explicit construction.
pub fn lower_bound_horizon(alpha: f64, delta: f64) -> f64 {
    (2.0 - alpha * (1.0 - delta * delta)) / (alpha * delta * (1.0 + delta))
}

/// `τ` when it is a positive integer (relative tolerance 1e-9).
pub fn integral_lower_bound_horizon(alpha: f64, delta: f64) -> Result<usize> {
    check_positive("alpha", alpha)?;
    check_positive("delta", delta)?;
    let tau = lower_bound_horizon(alpha, delta);
    let r = libm::round(tau);
    if r >= 1.0 && libm::fabs(tau - r) <= 1e-9 * tau {
        Ok(r as usize)
    } else {
        Err(Error::param("alpha/delta", alloc::format!("horizon {tau} is not a positive integer")))
    }
}

/// Nearby pair with integral horizon: keeps `δ`, rounds `τ(α, δ)` to
/// `t ≥ 1` and returns `(α', t)` with `α' = 2/((1+δ)(1+δ(t−1)))`.
pub fn integral_lower_bound_params(alpha: f64, delta: f64) -> Result<(f64, usize)> {
    check_positive("alpha", alpha)?;
    check_positive("delta", delta)?;
    let t = libm::round(lower_bound_horizon(alpha, delta)).max(1.0);
    if t > MAX_LP_HORIZON as f64 {
        return Err(Error::param(
            "alpha/delta",
            alloc::format!("nearest integral horizon {t} exceeds {MAX_LP_HORIZON}"),
        ));
    }
    let t = t as usize;
    let a = 2.0 / ((1.0 + delta) * (1.0 + delta * (t as f64 - 1.0)));
    Ok((a, t))
}

/// `Δ_s = ((2 − α(1−δ²) − sαδ(1+δ))/2) · q^s` for `s = 1..τ`.
pub fn closed_form_steps(alpha: f64, delta: f64) -> Result<Vec<f64>> {
    let t = integral_lower_bound_horizon(alpha, delta)?;
    let q = growth_factor(alpha, delta);
    let a = 2.0 - alpha * (1.0 - delta * delta);
    let b = alpha * delta * (1.0 + delta);
    Ok((1..=t)
        .map(|s| (a - s as f64 * b) / 2.0 * libm::pow(q, s as f64))
        .collect())
}

pub fn closed_form_primal_certificate(alpha: f64, delta: f64) -> Result<PrimalCertificate> {
    let steps = closed_form_steps(alpha, delta)?;
    Ok(primal_certificate(steps.len(), alpha, delta, steps))
}

/// Objective at the explicit step sizes in closed form:
///
/// `c₁·q^{τ−1} + c₀` with `D = 2 − α − δ(1+α)`,
/// `c₁ = 2αδ(1+δ)(2 + 3α − δ(1+α))/D³` and
/// `c₀ = [2α²(1+δ)(2 − 4δ + δ² − α(1+δ)) + 2α(2−δ)(2−δ²)]/D³ − 2(2−δ)²(2+δ)/((1+δ)D³)`.
pub fn closed_form_lower_objective(alpha: f64, delta: f64) -> Result<f64> {
    let t = integral_lower_bound_horizon(alpha, delta)?;
    let d = 2.0 - alpha - delta * (1.0 + alpha);
    if d < 1e-12 {
        return Err(Error::param("alpha/delta", "needs 2 - alpha - delta(1 + alpha) > 0"));
    }
    let d3 = d * d * d;
    let q = growth_factor(alpha, delta);
    let c1 = 2.0 * alpha * delta * (1.0 + delta) * (2.0 + 3.0 * alpha - delta * (1.0 + alpha)) / d3;
    let c0 = (2.0 * alpha * alpha * (1.0 + delta) * (2.0 - 4.0 * delta + delta * delta - alpha * (1.0 + delta))
        + 2.0 * alpha * (2.0 - delta) * (2.0 - delta * delta))
        / d3
        - 2.0 * (2.0 - delta) * (2.0 - delta) * (2.0 + delta) / ((1.0 + delta) * d3);
    Ok(c1 * libm::pow(q, (t - 1) as f64) + c0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// AOS with accurate predictions: `(1+2δ)(1+2η)`.
    AosConsistency,
    /// AOS against any predictions: `multiplier(Ũ)·max{1, 2/α}`.
    AosRobustness,
    /// Any `(1+δ)`-consistent algorithm: at least `(αδ/4)·q^τ − O(1)`.
    LowerBound,
    /// Memoryless algorithms: at least `1/√(8α) − o(1/√α)`.
    Memoryless,
    /// AOBD: `min{(1+(2+1/β̄)β̲)(1+2η), 1+(2+1/β̲)β̄}`.
    Aobd,
    /// AOBD with `β̄ = 1/δ`, `β̲ = δ/(2+δ)`: `min{(1+δ)(1+2η), 1+3/δ+2/δ²}`.
    AobdSpecialized,
    /// One-dimensional convex lower bound: `1/(2δ)`.
    OneDimLowerBound,
}

impl Theorem {
    pub const ALL: [Theorem; 7] = [
        Theorem::AosConsistency,
        Theorem::AosRobustness,
        Theorem::LowerBound,
        Theorem::Memoryless,
        Theorem::Aobd,
        Theorem::AobdSpecialized,
        Theorem::OneDimLowerBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::AosConsistency => "aos_consistency",
            Theorem::AosRobustness => "aos_robustness",
            Theorem::LowerBound => "lower_bound",
            Theorem::Memoryless => "memoryless",
            Theorem::Aobd => "aobd",
            Theorem::AobdSpecialized => "aobd_specialized",
            Theorem::OneDimLowerBound => "one_dim_lower_bound",
        }
    }
}

/// Parameters for [`theorem_bounds`]; unset values skip the theorems that need them.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundInputs {
    pub alpha: Option<f64>,
    pub delta: Option<f64>,
    pub eta: Option<f64>,
    pub beta_lo: Option<f64>,
    pub beta_hi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub value: f64,
    pub note: Option<&'static str>,
}

fn need(v: Option<f64>, name: &'static str) -> Result<f64> {
    v.ok_or_else(|| Error::param(name, "required by this bound"))
}

pub fn aos_consistency(delta: f64, eta: f64) -> Result<f64> {
    check_positive("delta", delta)?;
    if eta.is_nan() || eta < 0.0 {
        return Err(Error::param("eta", "must be non-negative"));
    }
    Ok((1.0 + 2.0 * delta) * (1.0 + 2.0 * eta))
}

pub fn aos_robustness(alpha: f64, delta: f64) -> Result<f64> {
    Ok(aos_vs_greedy_bound(alpha, delta)? * (2.0 / alpha).max(1.0))
}

/// Leading term `(αδ/4)·q^τ`.
pub fn lower_bound_leading(alpha: f64, delta: f64) -> Result<f64> {
    let t = integral_lower_bound_horizon(alpha, delta)?;
    Ok(alpha * delta / 4.0 * libm::pow(growth_factor(alpha, delta), t as f64))
}

/// Leading term `1/√(8α)`, for `0 < α < 1/4`.
pub fn memoryless_leading(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.25) {
        return Err(Error::param("alpha", "needs 0 < alpha < 1/4"));
    }
    Ok(1.0 / libm::sqrt(8.0 * alpha))
}

pub fn aobd_bound(beta_lo: f64, beta_hi: f64, eta: f64) -> Result<f64> {
    let p = crate::algorithms::AobdParams::new(beta_lo, beta_hi)?;
    if !p.bounds_apply() {
        return Err(Error::param("beta_lo/beta_hi", "needs 2*beta_lo*beta_hi + beta_lo >= 1"));
    }
    if eta.is_nan() || eta < 0.0 {
        return Err(Error::param("eta", "must be non-negative"));
    }
    Ok((p.consistency() * (1.0 + 2.0 * eta)).min(p.robustness()))
}

pub fn aobd_specialized(delta: f64, eta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 2.0) {
        return Err(Error::param("delta", "needs 0 < delta <= 2"));
    }
    if eta.is_nan() || eta < 0.0 {
        return Err(Error::param("eta", "must be non-negative"));
    }
    Ok(((1.0 + delta) * (1.0 + 2.0 * eta)).min(1.0 + 3.0 / delta + 2.0 / (delta * delta)))
}

pub fn one_dim_lower_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::param("delta", "needs 0 < delta < 1/2"));
    }
    Ok(1.0 / (2.0 * delta))
}

/// Evaluates every theorem whose inputs are present.
pub fn theorem_bounds(inp: &BoundInputs) -> Vec<(Theorem, Result<BoundReport>)> {
    let eta = inp.eta.unwrap_or(0.0);
    Theorem::ALL
        .iter()
        .map(|&th| {
            let value = match th {
                Theorem::AosConsistency => need(inp.delta, "delta").and_then(|d| aos_consistency(d, eta)),
                Theorem::AosRobustness => need(inp.alpha, "alpha")
                    .and_then(|a| need(inp.delta, "delta").and_then(|d| aos_robustness(a, d))),
                Theorem::LowerBound => need(inp.alpha, "alpha")
                    .and_then(|a| need(inp.delta, "delta").and_then(|d| lower_bound_leading(a, d))),
                Theorem::Memoryless => need(inp.alpha, "alpha").and_then(memoryless_leading),
                Theorem::Aobd => need(inp.beta_lo, "beta_lo")
                    .and_then(|lo| need(inp.beta_hi, "beta_hi").and_then(|hi| aobd_bound(lo, hi, eta))),
                Theorem::AobdSpecialized => need(inp.delta, "delta").and_then(|d| aobd_specialized(d, eta)),
                Theorem::OneDimLowerBound => need(inp.delta, "delta").and_then(one_dim_lower_bound),
            };
            let note = match th {
                Theorem::LowerBound => Some("leading term only; the O(1) correction is dropped"),
                Theorem::Memoryless => Some("leading term only; the o(1/sqrt(alpha)) correction is dropped"),
                _ => None,
            };
            (th, value.map(|value| BoundReport { theorem: th, value, note }))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Values below were produced by an independent float evaluation of the
    // formulas and an off-the-shelf LP solver, then frozen.

    #[test]
    fn one_round_dual_is_two_over_delta() {
        for &(a, d) in &[(0.5, 0.5), (0.25, 1.0), (1.0, 0.1)] {
            let c = solve_u(1, a, d).unwrap();
            assert!(c.feasible);
            assert!((c.u - 2.0 / d).abs() < 1e-9, "{a} {d}: {}", c.u);
        }
    }

    #[test]
    fn dual_values_match_reference() {
        let expected = [4.0, 8.0, 12.8, 17.92, 22.528, 25.3952, 25.3952, 25.3952];
        for (t, &e) in (1..=8).zip(&expected) {
            let c = solve_u(t, 0.5, 0.5).unwrap();
            assert!(c.feasible);
            assert!((c.u - e).abs() < 1e-7, "t={t}: {} vs {e}", c.u);
        }
        let c = solve_u(16, 0.1, 1.0).unwrap();
        assert!((c.u - 1449.119552).abs() < 1e-5);
    }

    #[test]
    fn tilde_u_reference_and_guards() {
        let u = tilde_u(0.5, 0.5).unwrap();
        let direct = 0.5 * 1.6f64.powi(8) + (2.0 / 0.5625) * (0.5 * 1.6f64.powi(8) - 3.0 + 1.0);
        assert!((u - direct).abs() < 1e-9);
        assert!((u - 90.71869952).abs() < 1e-7);
        assert!((tilde_u(0.25, 1.0).unwrap() - 16.474622770919055).abs() < 1e-9);
        assert!(tilde_u(1.0, 1.0).is_err());
        assert!(tilde_u(0.5, 1.0).is_err());
        assert!(tilde_u(0.3, 0.5).is_err());
    }

    #[test]
    fn closed_form_dual_is_feasible() {
        for t in 1..=12 {
            let c = closed_form_dual_certificate(t, 0.5, 0.5).unwrap();
            assert!(c.feasible, "t={t} residual {}", c.min_residual());
        }
    }

    #[test]
    fn one_round_primal_by_hand() {
        // max Δ + α(1+Δ) s.t. (δ(1+α) + α)Δ ≤ 2 − α − δα
        let (a, d) = (0.5, 0.5);
        let step = (2.0 - a - d * a) / (d * (1.0 + a) + a);
        let c = solve_l(1, a, d).unwrap();
        assert!((c.steps[0] - step).abs() < 1e-12);
        assert!((c.objective - (step + a * (1.0 + step))).abs() < 1e-12);
    }

    #[test]
    fn primal_values_match_reference() {
        let (a, t) = integral_lower_bound_params(0.5, 0.5).unwrap();
        assert_eq!(t, 4);
        assert!((a - 0.5333333333333333).abs() < 1e-15);
        let lp = solve_l(4, a, 0.5).unwrap();
        assert!(lp.feasible);
        assert!((lp.objective - 10.765139893345026).abs() < 1e-7);
        let cf = closed_form_primal_certificate(a, 0.5).unwrap();
        assert!(cf.feasible);
        assert!((cf.objective - 8.992262175694131).abs() < 1e-9);
        assert!(cf.objective <= lp.objective + 1e-9);
    }

    #[test]
    fn primal_infeasible_far_beyond_horizon() {
        assert!(matches!(
            solve_l(40, 0.5, 1.0),
            Err(Error::Lp(crate::LpStatus::Infeasible))
        ));
    }

    #[test]
    fn closed_form_objective_matches_direct_sum() {
        for &(d, t) in &[(0.5, 4usize), (1.0, 4), (0.5, 8), (0.25, 10)] {
            let a = 2.0 / ((1.0 + d) * (1.0 + d * (t as f64 - 1.0)));
            let steps = closed_form_steps(a, d).unwrap();
            assert_eq!(steps.len(), t);
            let direct = primal_objective(a, &steps);
            let closed = closed_form_lower_objective(a, d).unwrap();
            assert!((direct - closed).abs() <= 1e-6 * direct, "{d} {t}: {direct} {closed}");
        }
    }

    #[test]
    fn theorem_values() {
        assert!((aos_consistency(0.1, 0.0).unwrap() - 1.2).abs() < 1e-15);
        assert_eq!(aobd_specialized(1.0, 0.0).unwrap(), 2.0);
        assert_eq!(aobd_specialized(1.0, 5.0).unwrap(), 6.0);
        assert_eq!(one_dim_lower_bound(0.25).unwrap(), 2.0);
        assert!(one_dim_lower_bound(0.5).is_err());
        assert!(memoryless_leading(0.3).is_err());
        assert!((memoryless_leading(0.01).unwrap() - 3.5355339059327373).abs() < 1e-12);
        let band = crate::algorithms::AobdParams::from_delta(0.7).unwrap();
        let general = aobd_bound(band.beta_lo, band.beta_hi, 0.3).unwrap();
        assert!((general - aobd_specialized(0.7, 0.3).unwrap()).abs() < 1e-12);
        let all = theorem_bounds(&BoundInputs {
            alpha: Some(0.5),
            delta: Some(0.5),
            eta: Some(0.0),
            ..Default::default()
        });
        assert_eq!(all.len(), 7);
        assert!(all.iter().filter(|(_, r)| r.is_ok()).all(|(_, r)| r.as_ref().unwrap().value >= 1.0));
        // α = 0.5 is outside the memoryless range, β's are missing
        assert!(all[3].1.is_err() && all[4].1.is_err());
    }
}

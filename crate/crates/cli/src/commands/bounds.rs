use advice_soco_core::bounds::{
    closed_form_dual_certificate, closed_form_lower_objective, closed_form_primal_certificate, growth_factor,
    integral_lower_bound_params, solve_l, solve_u, theorem_bounds, tilde_u, BoundInputs, DualCertificate,
    PrimalCertificate, MAX_LP_HORIZON,
};
use serde_json::{json, Value};

use super::Output;
use crate::cli::BoundsArgs;
use crate::error::{CliError, CliResult};
use crate::format::num;
use crate::settings::ConfigFile;

fn nums(xs: &[f64]) -> Vec<Value> {
    xs.iter().map(|&x| num(x)).collect()
}

fn dual_json(c: &DualCertificate) -> Value {
    json!({
        "t": c.t,
        "u": num(c.u),
        "y": nums(&c.y),
        "cover_residuals": nums(&c.cover_residuals),
        "cap_residuals": nums(&c.cap_residuals),
        "min_residual": num(c.min_residual()),
        "feasible": c.feasible,
    })
}

fn primal_json(c: &PrimalCertificate) -> Value {
    json!({
        "t": c.t,
        "alpha": num(c.alpha),
        "objective": num(c.objective),
        "steps": nums(&c.steps),
        "residuals": nums(&c.residuals),
        "min_residual": num(c.min_residual()),
        "feasible": c.feasible,
    })
}

fn either<T>(r: advice_soco_core::Result<T>, f: impl FnOnce(T) -> Value) -> Value {
    match r {
        Ok(v) => f(v),
        Err(e) => json!({"unavailable": e.to_string()}),
    }
}

pub fn cmd_bounds(args: &BoundsArgs, cfg: &ConfigFile) -> CliResult<Output> {
    let alpha = cfg.get("alpha", args.alpha, 0.5)?;
    let delta = cfg.get("delta", args.delta, 0.5)?;
    let t_min = cfg.get("t_min", args.t_min, 1usize)?;
    let t_max = cfg.get("t_max", args.t_max, 8usize)?;
    cfg.finish()?;
    for (name, v) in [("alpha", alpha), ("delta", delta)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::config(format!("invalid parameter `{name}`: must be positive, got {v}")));
        }
    }
    if !(1 <= t_min && t_min <= t_max && t_max <= MAX_LP_HORIZON) {
        return Err(CliError::config(format!(
            "need 1 <= t_min <= t_max <= {MAX_LP_HORIZON}, got {t_min}..{t_max}"
        )));
    }
    let u_tilde = tilde_u(alpha, delta);
    let mut dual = Vec::new();
    for t in t_min..=t_max {
        let lp = solve_u(t, alpha, delta)?;
        let mut entry = dual_json(&lp);
        entry["closed_form"] = either(closed_form_dual_certificate(t, alpha, delta), |c| dual_json(&c));
        if let Ok(u) = &u_tilde {
            entry["u_le_tilde_u"] = json!(lp.u <= *u);
        }
        dual.push(entry);
    }
    let primal = either(integral_lower_bound_params(alpha, delta), |(a2, t)| {
        json!({
            "alpha_adjusted": num(a2),
            "t": t,
            "lp": either(solve_l(t, a2, delta), |c| primal_json(&c)),
            "closed_form": either(closed_form_primal_certificate(a2, delta), |c| primal_json(&c)),
            "closed_form_objective": either(closed_form_lower_objective(a2, delta), num),
        })
    });
    let theorems: Vec<Value> = theorem_bounds(&BoundInputs {
        alpha: Some(alpha),
        delta: Some(delta),
        ..BoundInputs::default()
    })
    .into_iter()
    .map(|(th, r)| match r {
        Ok(b) => json!({"theorem": th.name(), "value": num(b.value), "note": b.note}),
        Err(e) => json!({"theorem": th.name(), "value": null, "unavailable": e.to_string()}),
    })
    .collect();
    let doc = json!({
        "alpha": alpha,
        "delta": delta,
        "growth_factor": num(growth_factor(alpha, delta)),
        "tilde_u": either(u_tilde, num),
        "dual": dual,
        "primal": primal,
        "theorems": theorems,
    });
    Ok(Output {
        text: serde_json::to_string_pretty(&doc).expect("bounds serialize") + "\n",
        failure: None,
    })
}

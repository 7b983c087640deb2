use advice_soco_core::algorithms::{run_aobd, run_blind, run_ftp, run_greedy, run_online, AobdParams};
use advice_soco_core::bounds::{admissible_alpha, aos_vs_greedy_bound, theorem_bounds, BoundInputs};
use advice_soco_core::microgrid::{build_instance, forecast_seed, gen_netload, mpc_predictor, MicrogridParams, Perturbation};
use advice_soco_core::model::{
    check_polyhedral, eta_accuracy, polyhedral_constant, Convex1d, FiniteSpace, Instance, Plane,
    RealLine,
};
use advice_soco_core::offline::{opt_dp_finite, opt_dp_grid, opt_knots, GridSpec};
use advice_soco_core::random::{convex_line_instance, finite_instance, finite_predictions, seeded, FiniteInstanceSpec};
use advice_soco_core::Error as CoreError;
use rand::Rng;
use serde_json::{json, Value};

use super::algos::{LineAlgo, Online};
use super::Output;
use crate::cli::{Algo, Generator, RunArgs};
use crate::error::{CliError, CliResult};
use crate::format::num;
use crate::schema::{InstanceFile, Loaded};
use crate::settings::ConfigFile;

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
struct Params {
    algo: Algo,
    delta: f64,
    band: Option<AobdParams>,
    alpha: Option<f64>,
    grid_h: f64,
    trajectory: bool,
}

/// Costs of one episode, ready for the report.
#[derive(Debug, Default)]
struct Costs {
    alg: f64,
    ftp: f64,
    greedy: f64,
    blind: f64,
    opt: Option<f64>,
    opt_error: f64,
    eta: Option<f64>,
    eta_degenerate: bool,
    alpha: Option<f64>,
    bounds_apply: Option<bool>,
}

#[derive(Debug)]
struct Check {
    name: &'static str,
    lhs: f64,
    rhs: f64,
}

impl Check {
    fn holds(&self) -> bool {
        self.lhs <= self.rhs + TOL
    }

    fn json(&self) -> Value {
        json!({"name": self.name, "lhs": num(self.lhs), "rhs": num(self.rhs), "holds": self.holds()})
    }
}

pub fn cmd_run(args: &RunArgs, cfg: &ConfigFile, seed: u64) -> CliResult<Output> {
    let instance = cfg.opt("instance", args.instance.clone())?;
    let generate = cfg.opt::<Generator>("generate", args.generate)?;
    let algo = cfg.get("algo", args.algo, Algo::Aos)?;
    let delta = cfg.get("delta", args.delta, 0.5)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(CliError::config(format!("invalid parameter `delta`: must be positive, got {delta}")));
    }
    let beta_lo = cfg.opt::<f64>("beta_lo", args.beta_lo)?;
    let beta_hi = cfg.opt::<f64>("beta_hi", args.beta_hi)?;
    let band = match (beta_lo, beta_hi) {
        (Some(lo), Some(hi)) => Some(AobdParams::new(lo, hi)?),
        (None, None) => None,
        _ => return Err(CliError::config("give both --beta-lo and --beta-hi, or neither")),
    };
    let alpha = cfg.opt::<f64>("alpha", args.alpha)?;
    if let Some(a) = alpha {
        if !(a > 0.0 && a.is_finite()) {
            return Err(CliError::config(format!("invalid parameter `alpha`: must be positive, got {a}")));
        }
    }
    let params = Params {
        algo,
        delta,
        band,
        alpha,
        grid_h: cfg.get("grid_h", args.grid_h, GridSpec::default().h)?,
        trajectory: args.trajectory || cfg.get("trajectory", None, false)?,
    };
    let horizon = cfg.opt::<usize>("horizon", args.horizon)?;
    let points = cfg.opt::<usize>("points", args.points)?;
    let quality = cfg.get("quality", args.quality, 0.7)?;
    if !(0.0..=1.0).contains(&quality) {
        return Err(CliError::config("invalid parameter `quality`: must lie in [0, 1]"));
    }
    let sigma = cfg.get("sigma", args.sigma, 0.0)?;
    let window = cfg.get("window", args.window, 10usize)?;
    cfg.finish()?;

    let (source, loaded) = match (instance, generate) {
        (Some(path), None) => (json!(path.display().to_string()), InstanceFile::read(&path)?.load()?),
        (None, Some(g)) => (
            json!({"generator": format!("{g:?}").to_lowercase(), "seed": seed}),
            generate_instance(g, seed, horizon, points, quality, sigma, window)?,
        ),
        (Some(_), Some(_)) => return Err(CliError::config("--instance and --generate are mutually exclusive")),
        (None, None) => return Err(CliError::config("give an instance with --instance FILE or --generate KIND")),
    };
    let (space, horizon, costs, decisions) = match loaded {
        Loaded::Finite(inst, preds) => {
            let preds = preds.ok_or_else(|| CliError::config("the instance has no predictions"))?;
            let (c, d) = finite_episode(&inst, &preds, &params)?;
            ("finite", inst.horizon(), c, d)
        }
        Loaded::Line(inst, preds) => {
            let preds = preds.ok_or_else(|| CliError::config("the instance has no predictions"))?;
            let (c, d) = line_episode(&inst, &preds, &params)?;
            ("line", inst.horizon(), c, d)
        }
        Loaded::Plane(inst, preds) => {
            let preds = preds.ok_or_else(|| CliError::config("the instance has no predictions"))?;
            let (c, d) = plane_episode(&inst, &preds, &params)?;
            ("plane", inst.horizon(), c, d)
        }
    };
    report(source, space, horizon, &params, &costs, decisions)
}

fn generate_instance(
    g: Generator,
    seed: u64,
    horizon: Option<usize>,
    points: Option<usize>,
    quality: f64,
    sigma: f64,
    window: usize,
) -> CliResult<Loaded> {
    let mut rng = seeded(seed);
    Ok(match g {
        Generator::Finite => {
            let defaults = FiniteInstanceSpec::default();
            let spec = FiniteInstanceSpec {
                max_points: points.unwrap_or(defaults.max_points).max(defaults.min_points),
                max_horizon: horizon.unwrap_or(defaults.max_horizon).max(1),
                ..defaults
            };
            let inst = finite_instance(&mut rng, &spec)?;
            let opt = opt_dp_finite(&inst)?;
            let preds = finite_predictions(&mut rng, inst.space.len(), opt.trajectory.decisions(), quality);
            Loaded::Finite(inst, Some(preds))
        }
        Generator::Line => {
            let inst = convex_line_instance(&mut rng, -10.0, 10.0, horizon.unwrap_or(50).max(1), 6)?;
            let opt = opt_knots(&inst)?;
            let preds = opt
                .trajectory
                .decisions()
                .iter()
                .map(|&o| if rng.random_bool(quality) { o } else { rng.random_range(-10.0..=10.0) })
                .collect();
            Loaded::Line(inst, Some(preds))
        }
        Generator::Microgrid => {
            let params = MicrogridParams::default();
            let mg = build_instance(&gen_netload(seed, horizon.unwrap_or(96))?, &params)?;
            let preds = mpc_predictor(
                &mg,
                &params,
                window,
                Perturbation::Gaussian { sigma },
                &mut seeded(forecast_seed(seed)),
            )?;
            Loaded::Finite(mg.instance, Some(preds))
        }
    })
}

fn finite_episode(inst: &Instance<FiniteSpace>, preds: &[usize], p: &Params) -> CliResult<(Costs, Vec<Value>)> {
    let alpha = match p.alpha {
        Some(a) => {
            for (t, f) in inst.costs.iter().enumerate() {
                let c = check_polyhedral(&inst.space, f, a, inst.space.points());
                if !c.pass {
                    return Err(CoreError::ModelViolation(format!(
                        "round {} cost is not {a}-polyhedral (residual {} at point {:?})",
                        t + 1,
                        c.worst_residual,
                        c.worst_point
                    ))
                    .into());
                }
            }
            Some(a)
        }
        None => {
            let a = inst
                .costs
                .iter()
                .map(|f| polyhedral_constant(&inst.space, f))
                .fold(f64::INFINITY, f64::min);
            (a > 0.0 && a.is_finite()).then_some(a)
        }
    };
    let traj = run_online(inst, preds, Online::new(p.algo, inst.x0, p.delta)?)?;
    let opt = opt_dp_finite(inst)?;
    let acc = eta_accuracy(inst, preds, &opt.trajectory)?;
    let costs = Costs {
        alg: traj.total(),
        ftp: run_ftp(inst, preds)?.total(),
        greedy: run_greedy(inst)?.total(),
        blind: run_blind(inst, preds)?.total(),
        opt: Some(opt.total()),
        opt_error: 0.0,
        eta: Some(acc.eta),
        eta_degenerate: acc.degenerate,
        alpha,
        bounds_apply: None,
    };
    let decisions = traj.decisions().iter().map(|&x| json!(x)).collect();
    Ok((costs, decisions))
}

fn line_alpha(inst: &Instance<RealLine>) -> Option<f64> {
    let mut alpha = f64::INFINITY;
    for f in &inst.costs {
        let Convex1d::Piecewise(pl) = f else { return None };
        let v = pl.minimizer();
        if v < inst.space.lo || v > inst.space.hi {
            return None;
        }
        let j = pl.knots().iter().position(|&k| k == v)?;
        alpha = alpha.min(-pl.slopes()[j]).min(pl.slopes()[j + 1]);
    }
    (alpha > 0.0 && alpha.is_finite()).then_some(alpha)
}

fn line_episode(inst: &Instance<RealLine>, preds: &[f64], p: &Params) -> CliResult<(Costs, Vec<Value>)> {
    let (traj, bounds_apply) = match (p.algo, p.band) {
        (Algo::Aobd, band) => {
            let params = match band {
                Some(b) => b,
                None => AobdParams::from_delta(p.delta)?,
            };
            let run = run_aobd(inst, preds, params)?;
            (run.trajectory, Some(run.bounds_apply))
        }
        (algo, _) => (run_online(inst, preds, LineAlgo::new(algo, inst.x0, p.delta, None)?)?, None),
    };
    let grid = opt_dp_grid(inst, &GridSpec::with_h(p.grid_h))?;
    // the knot optimum is exact on piecewise-linear instances
    let exact = opt_knots(inst).ok();
    let reference = exact.as_ref().unwrap_or(&grid);
    let acc = eta_accuracy(inst, preds, &reference.trajectory)?;
    let costs = Costs {
        alg: traj.total(),
        ftp: run_ftp(inst, preds)?.total(),
        greedy: run_greedy(inst)?.total(),
        blind: run_blind(inst, preds)?.total(),
        opt: Some(grid.total()),
        opt_error: grid.error_bound,
        eta: Some(acc.eta),
        eta_degenerate: acc.degenerate,
        alpha: p.alpha.or_else(|| line_alpha(inst)),
        bounds_apply,
    };
    let decisions = traj.decisions().iter().map(|&x| num(x)).collect();
    Ok((costs, decisions))
}

fn plane_episode(inst: &Instance<Plane>, preds: &[[f64; 2]], p: &Params) -> CliResult<(Costs, Vec<Value>)> {
    let traj = run_online(inst, preds, Online::new(p.algo, inst.x0, p.delta)?)?;
    let alpha = p
        .alpha
        .or_else(|| Some(inst.costs.iter().map(|f| f.alpha()).fold(f64::INFINITY, f64::min)));
    let costs = Costs {
        alg: traj.total(),
        ftp: run_ftp(inst, preds)?.total(),
        greedy: run_greedy(inst)?.total(),
        blind: run_blind(inst, preds)?.total(),
        alpha,
        ..Costs::default()
    };
    let decisions = traj
        .decisions()
        .iter()
        .map(|x| json!([num(x[0]), num(x[1])]))
        .collect();
    Ok((costs, decisions))
}

fn checks(p: &Params, c: &Costs) -> (Vec<Check>, Vec<String>) {
    let mut out = vec![Check {
        name: "ftp_le_blind",
        lhs: c.ftp,
        rhs: c.blind,
    }];
    let mut notes = Vec::new();
    if let (Some(opt), Some(eta)) = (c.opt, c.eta) {
        // holds against any comparison trajectory, so a grid optimum needs no correction
        if !c.eta_degenerate {
            out.push(Check {
                name: "ftp_le_eta_opt",
                lhs: c.ftp,
                rhs: (1.0 + 2.0 * eta) * opt,
            });
        }
    }
    match p.algo {
        Algo::Aos => {
            out.push(Check {
                name: "aos_le_consistency",
                lhs: c.alg,
                rhs: (1.0 + 2.0 * p.delta) * c.ftp,
            });
            match c.alpha.map(|a| admissible_alpha(a, p.delta).and_then(|a2| aos_vs_greedy_bound(a2, p.delta))) {
                Some(Ok(mult)) => out.push(Check {
                    name: "aos_le_robustness",
                    lhs: c.alg,
                    rhs: mult * c.greedy,
                }),
                Some(Err(e)) => notes.push(format!("robustness check skipped: {e}")),
                None => notes.push("robustness check skipped: no polyhedral constant".into()),
            }
        }
        Algo::Aobd => {
            let band = p.band.unwrap_or_else(|| AobdParams::from_delta(p.delta).expect("delta validated"));
            if c.bounds_apply == Some(false) {
                notes.push("band violates 2*beta_lo*beta_hi + beta_lo >= 1; the bounds do not apply".into());
            } else {
                if let Some(opt) = c.opt {
                    out.push(Check {
                        name: "aobd_le_robustness",
                        lhs: c.alg,
                        rhs: band.robustness() * (opt + c.opt_error),
                    });
                }
                out.push(Check {
                    name: "aobd_le_consistency",
                    lhs: c.alg,
                    rhs: band.consistency() * c.ftp,
                });
            }
        }
        _ => {}
    }
    (out, notes)
}

fn report(
    source: Value,
    space: &str,
    horizon: usize,
    p: &Params,
    c: &Costs,
    decisions: Vec<Value>,
) -> CliResult<Output> {
    let (checks, mut notes) = checks(p, c);
    let band = match p.algo {
        Algo::Aobd => Some(p.band.unwrap_or_else(|| AobdParams::from_delta(p.delta).expect("delta validated"))),
        _ => p.band,
    };
    let bounds: Vec<Value> = theorem_bounds(&BoundInputs {
        alpha: c.alpha,
        delta: Some(p.delta),
        eta: c.eta.filter(|e| e.is_finite()),
        beta_lo: band.map(|b| b.beta_lo),
        beta_hi: band.map(|b| b.beta_hi),
    })
    .into_iter()
    .map(|(th, r)| match r {
        Ok(b) => json!({"theorem": th.name(), "value": num(b.value), "note": b.note}),
        Err(e) => json!({"theorem": th.name(), "value": null, "unavailable": e.to_string()}),
    })
    .collect();
    if c.eta_degenerate {
        notes.push("optimum costs 0 while predictions deviate: eta is infinite".into());
    }
    if c.opt.is_none() {
        notes.push("no exact optimum on the plane; ratio and eta are not reported".into());
    }
    let measured_cr = c.opt.map(|o| advice_soco_core::model::competitive_ratio(c.alg, o));
    let mut doc = json!({
        "instance": source,
        "space": space,
        "T": horizon,
        "algo": p.algo.name(),
        "delta": p.delta,
        "beta_lo": band.map(|b| b.beta_lo),
        "beta_hi": band.map(|b| b.beta_hi),
        "alpha": c.alpha.map(num),
        "alg_cost": num(c.alg),
        "opt_cost": c.opt.map(num),
        "opt_error_bound": c.opt.map(|_| num(c.opt_error)),
        "adv_cost": num(c.ftp),
        "rob_cost": num(c.greedy),
        "blind_cost": num(c.blind),
        "eta": c.eta.map(num),
        "measured_cr": measured_cr.map(num),
        "checks": checks.iter().map(Check::json).collect::<Vec<_>>(),
        "bounds": bounds,
        "notes": notes,
    });
    if p.trajectory {
        doc["decisions"] = Value::Array(decisions);
    }
    let text = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
    let failed: Vec<&str> = checks.iter().filter(|c| !c.holds()).map(|c| c.name).collect();
    let failure = (!failed.is_empty()).then(|| CliError::Invariant(format!("checks failed: {}", failed.join(", "))));
    Ok(Output { text, failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use advice_soco_core::model::PiecewiseLinear;

    #[test]
    fn line_alpha_takes_the_flatter_side() {
        let f = PiecewiseLinear::new(vec![-1.0, 0.0, 2.0], vec![-3.0, -0.5, 2.0, 4.0], 1.0).unwrap();
        let inst = Instance::new(RealLine::new(-5.0, 5.0).unwrap(), 0.0, vec![f.into()]).unwrap();
        assert_eq!(line_alpha(&inst), Some(0.5));
        let q = advice_soco_core::model::Quadratic::new(1.0, 0.0, 0.0).unwrap();
        let inst = Instance::new(RealLine::FULL, 0.0, vec![q.into()]).unwrap();
        assert_eq!(line_alpha(&inst), None);
    }

    #[test]
    fn checks_cover_the_chosen_algorithm() {
        let p = Params {
            algo: Algo::Aos,
            delta: 0.5,
            band: None,
            alpha: None,
            grid_h: 1.0 / 32.0,
            trajectory: false,
        };
        let c = Costs {
            alg: 3.0,
            ftp: 2.0,
            greedy: 2.5,
            blind: 2.0,
            opt: Some(1.0),
            eta: Some(0.5),
            alpha: Some(0.5),
            ..Costs::default()
        };
        let (checks, notes) = checks(&p, &c);
        let names: Vec<_> = checks.iter().map(|c| c.name).collect();
        assert_eq!(names, ["ftp_le_blind", "ftp_le_eta_opt", "aos_le_consistency", "aos_le_robustness"]);
        assert!(checks.iter().all(Check::holds));
        assert!(notes.is_empty());
    }
}

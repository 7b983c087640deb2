use advice_soco_core::adversarial::{
    gen_prop5_instance, play_bregman_game, play_memoryless_game, play_thm5_game, Comparison, GameTranscript,
    MemorylessConstants, StepSource,
};
use advice_soco_core::algorithms::{run_online, AobdParams};
use advice_soco_core::model::{competitive_ratio, DecisionSpace};
use advice_soco_core::offline::opt_dp_finite;
use serde_json::{json, Map, Value};

use super::algos::{LineAlgo, Online};
use super::Output;
use crate::cli::{AdversarialArgs, Algo, Game, Steps};
use crate::error::{CliError, CliResult};
use crate::format::num;
use crate::settings::ConfigFile;

fn line(v: Value) -> String {
    serde_json::to_string(&v).expect("transcript serializes")
}

fn round_lines<S: DecisionSpace>(
    game: &str,
    tr: &GameTranscript<S>,
    point: impl Fn(&S::Point) -> Value,
) -> CliResult<Vec<String>> {
    let ledger = tr.instance.evaluate(tr.decisions.clone())?;
    let minimizers = tr.instance.minimizers();
    Ok(tr
        .decisions
        .iter()
        .enumerate()
        .map(|(t, x)| {
            line(json!({
                "game": game,
                "round": t + 1,
                "branch": tr.branches[t],
                "prediction": point(&tr.predictions[t]),
                "minimizer": point(&minimizers[t]),
                "decision": point(x),
                "hit": num(ledger.ledger()[t].hit),
                "switch": num(ledger.ledger()[t].switch),
            }))
        })
        .collect())
}

fn summary<S: DecisionSpace>(game: &str, algo: Algo, tr: &GameTranscript<S>, extra: Map<String, Value>) -> String {
    let notes: Map<String, Value> = tr.notes.iter().map(|(k, v)| (k.to_string(), num(*v))).collect();
    let mut doc = json!({
        "game": game,
        "summary": true,
        "algo": algo.name(),
        "rounds": tr.decisions.len(),
        "alg_cost": num(tr.alg_cost),
        "comparison_cost": num(tr.comparison_cost),
        "comparison": match tr.comparison {
            Comparison::Optimum => "optimum",
            Comparison::ConstructionReference => "construction_reference",
        },
        "measured_cr": num(tr.measured_cr),
        "notes": notes,
    });
    doc.as_object_mut().expect("object").extend(extra);
    line(doc)
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(format!("invalid parameter `{name}`: must be positive, got {v}")))
    }
}

pub fn cmd_adversarial(args: &AdversarialArgs, cfg: &ConfigFile) -> CliResult<Output> {
    let algo = cfg.get("algo", args.algo, Algo::Blind)?;
    let (default_delta, default_alpha) = match args.game {
        Game::Thm5 => (0.25, 0.5),
        Game::Memoryless => (1.0, 0.01),
        Game::Prop5 => (0.5, 0.5),
        Game::Bregman => (1.0, 1.0),
    };
    let delta = positive("delta", cfg.get("delta", args.delta, default_delta)?)?;
    let alpha = positive("alpha", cfg.get("alpha", args.alpha, default_alpha)?)?;
    let beta = positive("beta", cfg.get("beta", args.beta, 1.0)?)?;
    let beta_lo = cfg.opt::<f64>("beta_lo", args.beta_lo)?;
    let beta_hi = cfg.opt::<f64>("beta_hi", args.beta_hi)?;
    let rounds = cfg.get(
        "rounds",
        args.rounds,
        if args.game == Game::Bregman { 50 } else { 200 },
    )?;
    let steps = cfg.get("steps", args.steps, Steps::Lp)?;
    cfg.finish()?;
    let band = match (beta_lo, beta_hi) {
        (Some(lo), Some(hi)) => Some(AobdParams::new(lo, hi)?),
        (None, None) => None,
        _ => return Err(CliError::config("give both --beta-lo and --beta-hi, or neither")),
    };
    let mut out = Vec::new();
    match args.game {
        Game::Thm5 => {
            LineAlgo::new(algo, 0.0, delta, band)?;
            let o = play_thm5_game(|| LineAlgo::new(algo, 0.0, delta, band).expect("validated above"), delta)?;
            let tr = o.played();
            out.extend(round_lines("thm5", tr, |&x| num(x))?);
            let counterfactual = &o.transcripts[2 - o.branch as usize];
            let mut extra = Map::new();
            extra.insert("branch".into(), json!(o.branch));
            extra.insert("delta".into(), json!(delta));
            extra.insert("robustness_floor".into(), num(1.0 / (2.0 * delta)));
            extra.insert("branch2_consistent".into(), json!(o.branch2_consistent));
            extra.insert("counterfactual_alg_cost".into(), num(counterfactual.alg_cost));
            extra.insert("counterfactual_comparison_cost".into(), num(counterfactual.comparison_cost));
            out.push(summary("thm5", algo, tr, extra));
        }
        Game::Memoryless => {
            let k = MemorylessConstants::new(alpha)?;
            let tr = play_memoryless_game(Online::new(algo, [0.0, k.r2], delta)?, alpha, rounds)?;
            out.extend(round_lines("memoryless", &tr, |x| json!([num(x[0]), num(x[1])]))?);
            let mut extra = Map::new();
            extra.insert("alpha".into(), json!(alpha));
            extra.insert("leading_ratio".into(), num(1.0 / (8.0 * alpha).sqrt()));
            out.push(summary("memoryless", algo, &tr, extra));
        }
        Game::Bregman => {
            let o = play_bregman_game(LineAlgo::new(algo, 0.0, delta, band)?, alpha, beta, delta, rounds)?;
            out.extend(round_lines("bregman", &o.transcript, |&x| num(x))?);
            let mut extra = Map::new();
            extra.insert("branch".into(), json!(o.branch));
            extra.insert("final_round_cost".into(), num(o.final_round_cost));
            extra.insert("final_round_floor".into(), num(o.final_round_floor));
            extra.insert("asymptotic_opt".into(), num(o.asymptotic_opt));
            extra.insert("branch2_opt".into(), num(o.branch2_opt));
            extra.insert("branch2_grid_opt".into(), num(o.branch2_grid_opt));
            extra.insert("branch2_grid_error".into(), num(o.branch2_grid_error));
            out.push(summary("bregman", algo, &o.transcript, extra));
        }
        Game::Prop5 => {
            let source = match steps {
                Steps::Lp => StepSource::Lp,
                Steps::ClosedForm => StepSource::ClosedForm,
            };
            let g = gen_prop5_instance(alpha, delta, source)?;
            let space = &g.instance.space;
            let coord = |i: &usize| num(space.coord(*i).unwrap_or(f64::NAN));
            let traj = run_online(&g.instance, &g.predictions, Online::new(algo, g.instance.x0, delta)?)?;
            let opt = opt_dp_finite(&g.instance)?;
            let minimizers = g.instance.minimizers();
            for (t, x) in traj.decisions().iter().enumerate() {
                out.push(line(json!({
                    "game": "prop5",
                    "round": t + 1,
                    "branch": 1,
                    "prediction": coord(&g.predictions[t]),
                    "minimizer": coord(&minimizers[t]),
                    "decision": coord(x),
                    "hit": num(traj.ledger()[t].hit),
                    "switch": num(traj.ledger()[t].switch),
                })));
            }
            out.push(line(json!({
                "game": "prop5",
                "summary": true,
                "algo": algo.name(),
                "rounds": g.t,
                "alpha_adjusted": num(g.alpha),
                "delta": delta,
                "steps": g.steps.iter().map(|&s| num(s)).collect::<Vec<_>>(),
                "alg_cost": num(traj.total()),
                "comparison_cost": num(opt.total()),
                "comparison": "optimum",
                "measured_cr": num(competitive_ratio(traj.total(), opt.total())),
                "lp_value": num(g.lp_value),
            })));
        }
    }
    let mut text = out.join("\n");
    text.push('\n');
    Ok(Output { text, failure: None })
}

use advice_soco_core::adversarial::{play_memoryless_game, play_thm5_game};
use advice_soco_core::algorithms::{run_aobd, run_aos, run_blind, run_ftp, run_greedy, Aobd, AobdParams, Blind};
use advice_soco_core::bounds::{aos_robustness, tilde_u, solve_u};
use advice_soco_core::model::eta_accuracy;
use advice_soco_core::offline::opt_dp_finite;
use advice_soco_core::random::{convex_line_instance, finite_instance, finite_predictions, seeded, FiniteInstanceSpec};
use rand::Rng;

use super::Output;
use crate::cli::SelftestArgs;
use crate::error::{CliError, CliResult};
use crate::settings::ConfigFile;

const TOL: f64 = 1e-9;

struct Check {
    name: &'static str,
    failures: usize,
    runs: usize,
    first: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            failures: 0,
            runs: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.runs += 1;
        if !ok {
            self.failures += 1;
            self.first.get_or_insert_with(what);
        }
    }

    fn line(&self) -> String {
        let tag = if self.failures == 0 { "PASS" } else { "FAIL" };
        let mut s = format!("[{tag}] {} ({}/{} ok)", self.name, self.runs - self.failures, self.runs);
        if let Some(w) = &self.first {
            s.push_str(&format!(": {w}"));
        }
        s
    }
}

fn le(a: f64, b: f64) -> bool {
    a <= b + TOL * b.abs().max(1.0)
}

pub fn cmd_selftest(args: &SelftestArgs, cfg: &ConfigFile, seed: u64) -> CliResult<Output> {
    let n = cfg.get("instances", args.instances, 200usize)?;
    cfg.finish()?;
    if n == 0 {
        return Err(CliError::config("instances must be at least 1"));
    }
    let spec = FiniteInstanceSpec {
        min_points: 2,
        max_points: 24,
        max_horizon: 25,
        alpha: 0.5,
    };
    let mut ftp_chk = Check::new("ftp <= blind and ftp <= (1+2eta) opt");
    let mut cons = Check::new("aos <= (1+2delta) ftp");
    let mut rob = Check::new("aos <= robustness * opt");
    let mut aobd = Check::new("aobd <= consistency * ftp on the line");
    let mut opt_min = Check::new("opt <= every online cost");
    let mut rng = seeded(seed);
    for i in 0..n {
        let inst = finite_instance(&mut rng, &spec)?;
        let opt = opt_dp_finite(&inst)?;
        let quality = rng.random_range(0.0..1.0);
        let preds = finite_predictions(&mut rng, inst.space.len(), opt.trajectory.decisions(), quality);
        let eta = eta_accuracy(&inst, &preds, &opt.trajectory)?.eta;
        let ftp = run_ftp(&inst, &preds)?.total();
        let blind = run_blind(&inst, &preds)?.total();
        let greedy = run_greedy(&inst)?.total();
        let o = opt.total();
        ftp_chk.record(le(ftp, blind) && le(ftp, (1.0 + 2.0 * eta) * o), || {
            format!("instance {i}: ftp {ftp}, blind {blind}, opt {o}, eta {eta}")
        });
        for delta in [0.1, 0.5] {
            let aos = run_aos(&inst, &preds, delta)?.trajectory.total();
            cons.record(le(aos, (1.0 + 2.0 * delta) * ftp), || {
                format!("instance {i}, delta {delta}: aos {aos}, ftp {ftp}")
            });
            let r = aos_robustness(spec.alpha, delta)?;
            rob.record(le(aos, r * o), || format!("instance {i}, delta {delta}: aos {aos}, opt {o}"));
            opt_min.record(le(o, aos), || format!("instance {i}: opt {o} > aos {aos}"));
        }
        opt_min.record(le(o, ftp) && le(o, greedy), || format!("instance {i}: opt {o} above ftp or greedy"));

        let horizon = rng.random_range(1..=15);
        let line = convex_line_instance(&mut rng, -5.0, 5.0, horizon, 4)?;
        let lp: Vec<f64> = (0..horizon).map(|_| rng.random_range(-5.0..=5.0)).collect();
        let p = AobdParams::from_delta(0.25)?;
        let run = run_aobd(&line, &lp, p)?;
        let lftp = run_ftp(&line, &lp)?.total();
        let a = run.trajectory.total();
        aobd.record(run.bounds_apply && le(a, p.consistency() * lftp), || {
            format!("line instance {i}: aobd {a}, ftp {lftp}")
        });
    }

    let mut games = Check::new("lower-bound games are deterministic");
    let delta = 0.25;
    let g1 = play_thm5_game(|| Aobd::new(0.0, AobdParams::from_delta(delta).expect("valid band")), delta)?;
    let g2 = play_thm5_game(|| Aobd::new(0.0, AobdParams::from_delta(delta).expect("valid band")), delta)?;
    games.record(g1.branch == g2.branch && g1.played().decisions == g2.played().decisions, || {
        "thm5 replay diverged".into()
    });
    let m1 = play_memoryless_game(Blind, 0.01, 50)?;
    let m2 = play_memoryless_game(Blind, 0.01, 50)?;
    games.record(m1.alg_cost.to_bits() == m2.alg_cost.to_bits(), || "memoryless replay diverged".into());

    let mut dual = Check::new("LP value U(t) stays below its closed-form cap");
    let cap = tilde_u(0.5, 0.5)?;
    for t in 1..=8 {
        let u = solve_u(t, 0.5, 0.5)?.u;
        dual.record(le(u, cap), || format!("t {t}: U {u} > cap {cap}"));
    }

    let checks = [ftp_chk, cons, rob, aobd, opt_min, games, dual];
    let mut text: String = checks.iter().map(|c| c.line() + "\n").collect();
    let failed = checks.iter().filter(|c| c.failures > 0).count();
    text.push_str(&format!("{} of {} checks passed\n", checks.len() - failed, checks.len()));
    let failure = (failed > 0).then(|| CliError::Invariant(format!("{failed} selftest checks failed")));
    Ok(Output { text, failure })
}

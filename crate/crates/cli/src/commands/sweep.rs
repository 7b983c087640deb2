use advice_soco_core::algorithms::{run_aos, run_blind, run_ftp, run_greedy, AosMode};
use advice_soco_core::microgrid::{
    build_instance, forecast_seed, gen_netload, mpc_predictor, run_cell, MicrogridParams, Perturbation, SweepCell,
    SweepRow, GENERATORS,
};
use advice_soco_core::offline::opt_dp_finite;
use advice_soco_core::random::seeded;
use rayon::prelude::*;

use super::Output;
use crate::cli::{MicrogridArgs, SweepArgs};
use crate::error::{CliError, CliResult};
use crate::format::cell;
use crate::settings::ConfigFile;

pub const SWEEP_HEADER: [&str; 15] = [
    "seed",
    "T",
    "delta",
    "sigma",
    "mu",
    "cost_blind",
    "cost_ftp",
    "cost_greedy",
    "cost_aos",
    "cost_opt",
    "eta",
    "alpha_emp",
    "bound_consistency",
    "bound_robustness",
    "error",
];

/// `ADVICE_SOCO_JOBS`, used when neither the flag nor the config sets `jobs`.
pub fn env_jobs() -> CliResult<Option<usize>> {
    match std::env::var("ADVICE_SOCO_JOBS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::config(format!("ADVICE_SOCO_JOBS must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn check_delta(deltas: &[f64]) -> CliResult<()> {
    match deltas.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        Some(d) => Err(CliError::config(format!("invalid parameter `delta`: must be positive, got {d}"))),
        None => Ok(()),
    }
}

fn row_record(cell_: &SweepCell, row: Result<SweepRow, String>) -> Vec<String> {
    let mut rec = vec![
        cell_.seed.to_string(),
        cell_.horizon.to_string(),
        cell(cell_.delta),
        cell(cell_.perturbation.sigma()),
        cell(cell_.perturbation.mu()),
    ];
    match row {
        Ok(r) => {
            rec.extend(
                [
                    r.cost_blind,
                    r.cost_ftp,
                    r.cost_greedy,
                    r.cost_aos,
                    r.cost_opt,
                    r.eta,
                    r.alpha_emp,
                    r.bound_consistency,
                    r.bound_robustness,
                ]
                .map(cell),
            );
            rec.push(String::new());
        }
        Err(e) => {
            rec.extend(std::iter::repeat_n(String::new(), 9));
            rec.push(e);
        }
    }
    rec
}

fn to_csv(header: &[&str], records: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for r in records {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn cmd_sweep(args: &SweepArgs, cfg: &ConfigFile, seed: u64) -> CliResult<Output> {
    let seeds = cfg.get("seeds", args.seeds, 5u64)?;
    let deltas = cfg.get("deltas", args.deltas.clone(), vec![0.01, 0.1])?;
    let sigmas = cfg.opt::<Vec<f64>>("sigmas", args.sigmas.clone())?;
    let mus = cfg.opt::<Vec<f64>>("mus", args.mus.clone())?;
    let horizon = cfg.get("horizon", args.horizon, 96usize)?;
    let window = cfg.get("window", args.window, 10usize)?;
    let jobs = match cfg.opt::<usize>("jobs", args.jobs)? {
        Some(j) => Some(j),
        None => env_jobs()?,
    };
    cfg.finish()?;
    check_delta(&deltas)?;
    if horizon == 0 || window == 0 {
        return Err(CliError::config("horizon and window must be at least 1"));
    }
    let mut perturbations: Vec<Perturbation> = Vec::new();
    if sigmas.is_none() && mus.is_none() {
        perturbations.extend([0.0, 0.5, 2.0].map(|sigma| Perturbation::Gaussian { sigma }));
    }
    for &sigma in sigmas.iter().flatten() {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(CliError::config(format!("invalid parameter `sigma`: got {sigma}")));
        }
        perturbations.push(Perturbation::Gaussian { sigma });
    }
    for &mu in mus.iter().flatten() {
        if !mu.is_finite() {
            return Err(CliError::config(format!("invalid parameter `mu`: got {mu}")));
        }
        perturbations.push(Perturbation::Bias { mu });
    }
    let mut cells = Vec::new();
    for s in seed..seed.saturating_add(seeds) {
        for &perturbation in &perturbations {
            for &delta in &deltas {
                cells.push(SweepCell {
                    seed: s,
                    horizon,
                    delta,
                    perturbation,
                    window,
                });
            }
        }
    }
    let params = MicrogridParams::default();
    let work = || -> Vec<Vec<String>> {
        cells
            .par_iter()
            .map(|c| row_record(c, run_cell(c, &params).map_err(|e| e.to_string())))
            .collect()
    };
    let records = match jobs {
        Some(0) => return Err(CliError::config("jobs must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::config(e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(Output {
        text: to_csv(&SWEEP_HEADER, &records)?,
        failure: None,
    })
}

fn bits(u: usize) -> String {
    (0..GENERATORS).map(|i| if u >> i & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn cmd_microgrid(args: &MicrogridArgs, cfg: &ConfigFile, seed: u64) -> CliResult<Output> {
    let horizon = cfg.get("horizon", args.horizon, 96usize)?;
    let delta = cfg.get("delta", args.delta, 0.01)?;
    let sigma = cfg.opt::<f64>("sigma", args.sigma)?;
    let mu = cfg.opt::<f64>("mu", args.mu)?;
    let window = cfg.get("window", args.window, 10usize)?;
    cfg.finish()?;
    check_delta(&[delta])?;
    let perturbation = match (sigma, mu) {
        (Some(_), Some(_)) => return Err(CliError::config("sigma and mu are mutually exclusive")),
        (_, Some(mu)) => Perturbation::Bias { mu },
        (sigma, None) => Perturbation::Gaussian {
            sigma: sigma.unwrap_or(0.0),
        },
    };
    let params = MicrogridParams::default();
    let mg = build_instance(&gen_netload(seed, horizon)?, &params)?;
    let preds = mpc_predictor(&mg, &params, window, perturbation, &mut seeded(forecast_seed(seed)))?;
    let inst = &mg.instance;
    let blind = run_blind(inst, &preds)?;
    let ftp = run_ftp(inst, &preds)?;
    let greedy = run_greedy(inst)?;
    let aos = run_aos(inst, &preds, delta)?;
    let opt = opt_dp_finite(inst)?;
    let header = [
        "t", "load", "alpha_t", "x_pred", "x_ftp", "x_aos", "x_greedy", "x_opt", "aos_mode", "cost_pred",
        "cost_ftp", "cost_aos", "cost_greedy", "cost_opt",
    ];
    let trajs = [&blind, &ftp, &aos.trajectory, &greedy, &opt.trajectory];
    let records: Vec<Vec<String>> = (0..inst.horizon())
        .map(|t| {
            let mut rec = vec![(t + 1).to_string(), cell(mg.loads[t]), cell(mg.alpha_per_round[t])];
            rec.extend(trajs.iter().map(|tr| bits(tr.decisions()[t])));
            rec.push(
                match aos.rounds[t].mode {
                    AosMode::FollowAdv => "adv",
                    AosMode::FollowRob => "rob",
                }
                .into(),
            );
            rec.extend(trajs.iter().map(|tr| cell(tr.ledger()[t].total())));
            rec
        })
        .collect();
    Ok(Output {
        text: to_csv(&header, &records)?,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch_bits_list_generators_in_order() {
        assert_eq!(bits(0b000011), "110000");
        assert_eq!(bits(0), "000000");
    }

    #[test]
    fn failed_cells_keep_their_key_columns() {
        let c = SweepCell {
            seed: 3,
            horizon: 96,
            delta: 0.1,
            perturbation: Perturbation::Bias { mu: 2.0 },
            window: 10,
        };
        let rec = row_record(&c, Err("boom".into()));
        assert_eq!(rec.len(), SWEEP_HEADER.len());
        assert_eq!(&rec[..5], ["3", "96", "0.1", "0", "2"]);
        assert_eq!(rec[14], "boom");
    }
}

//! One module per subcommand. Each returns its rendered output; a failed
//! check is carried alongside the text so the report is still written.

mod adversarial;
pub mod algos;
mod bounds;
mod run;
mod selftest;
pub mod sweep;

use crate::cli::{Cli, Command};
use crate::error::{CliError, CliResult};
use crate::settings::ConfigFile;

#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub failure: Option<CliError>,
}

pub fn execute(cli: &Cli, cfg: &ConfigFile) -> CliResult<Output> {
    let seed = cfg.get("seed", cli.seed, 0u64)?;
    match &cli.command {
        Command::Run(a) => run::cmd_run(a, cfg, seed),
        Command::Sweep(a) => sweep::cmd_sweep(a, cfg, seed),
        Command::Bounds(a) => bounds::cmd_bounds(a, cfg),
        Command::Adversarial(a) => adversarial::cmd_adversarial(a, cfg),
        Command::Microgrid(a) => sweep::cmd_microgrid(a, cfg, seed),
        Command::Selftest(a) => selftest::cmd_selftest(a, cfg, seed),
    }
}

mod commands;
mod error;
mod output;
mod sweep;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::Context;
use error::{CliError, CliResult};
use std::path::PathBuf;
use std::process::ExitCode;
use sweep::SweepSpec;

/// Nonlinear nanomechanical interferometer: moments, precision and
/// reference checks.
#[derive(Debug, Parser)]
#[command(name = "kerrmetro", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Parameter file (`key = value` lines). Defaults to the built-in
    /// reference device at n = 1e7, t = 1 ms, gamma = 1e-4.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one config key, e.g. `--set Gamma_a=0`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// VAR:MIN:MAX:COUNT:{lin|log} with VAR one of n, gamma, Gamma, t.
    #[arg(long, global = true)]
    sweep: Option<String>,
    /// x+, x-, y+, y- or all.
    #[arg(long, global = true)]
    quad: Option<String>,
    #[arg(long, value_enum, global = true)]
    regime: Option<RegimeArg>,
    /// Append power-law fits of delta against n.
    #[arg(long, global = true)]
    fit: bool,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Reserved; every computation is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Auto,
    General,
    NoDamping,
    StrongDamping,
    ShortTime,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derived model parameters and regime checks.
    Params,
    /// Output quadrature means and variances.
    Moments,
    /// Precision of estimating gamma t.
    Precision,
    /// Closed-form moments against the Fock-space reference on a fixed grid.
    OracleCheck {
        /// Force this Fock cutoff instead of choosing one per point.
        #[arg(long)]
        cutoff: Option<usize>,
        /// Directory for per-point density-matrix diagonal dumps.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Data behind figures 2 to 5.
    Figdata {
        /// 2: means, 3: variances, 4: precision vs gamma, 5: precision vs n.
        figure: String,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    let c = cli.common;
    if let Some(threads) = c.threads {
        if threads == 0 {
            return Err(CliError::usage("--threads must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::usage(e.to_string()))?;
    }
    let sweep = c.sweep.as_deref().map(str::parse::<SweepSpec>).transpose()?;
    let ctx = Context::new(
        c.config.as_deref(),
        &c.set,
        c.out,
        sweep,
        c.quad.as_deref(),
        c.regime,
        c.fit,
    )?;
    match cli.command {
        Command::Params => commands::params(&ctx),
        Command::Moments => commands::moments(&ctx),
        Command::Precision => commands::precision(&ctx),
        Command::OracleCheck { cutoff, dump } => commands::oracle_check(&ctx, cutoff, dump.as_deref()),
        Command::Figdata { figure } => commands::figdata(&ctx, &figure),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code.clamp(1, 255) as u8)
        }
    }
}

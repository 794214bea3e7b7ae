//! `olg`: command-line front end for the OLG bubble library.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod report;
mod svg;

use config::{parse_grid, parse_number, RunConfig};

/// Bad input: configuration, domain or premise failure. Exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A numerical check did not pass. Exit code 3.
#[derive(Debug)]
pub struct CheckFailure(pub String);

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailure {}

#[derive(Parser)]
#[command(
    name = "olg",
    version,
    about = "OLG economies with capital and a dividend-paying asset"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(Args)]
struct GlobalOpts {
    /// Flat `key = value` file; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, env = "OLG_OUT_DIR", value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    horizon: Option<usize>,
    /// Worker threads for grids.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Technology scale.
    #[arg(long = "A", global = true, value_parser = parse_number, allow_negative_numbers = true)]
    scale: Option<f64>,
    #[arg(long, global = true, value_parser = parse_number, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, global = true, value_parser = parse_number, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Weight of the perturbation `k ln(1 + 1/k)`; 0 is plain Cobb-Douglas.
    #[arg(long, global = true, value_parser = parse_number, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Population growth factor.
    #[arg(long = "G", global = true, value_parser = parse_number, allow_negative_numbers = true)]
    growth: Option<f64>,
    /// Dividend growth factor.
    #[arg(long = "Gd", global = true, value_parser = parse_number, allow_negative_numbers = true)]
    gd: Option<f64>,
    /// Initial dividend.
    #[arg(long = "D0", alias = "d0", global = true, value_parser = parse_number, allow_negative_numbers = true)]
    d0: Option<f64>,
    /// Initial capital.
    #[arg(long, global = true, value_parser = parse_number, allow_negative_numbers = true)]
    k0: Option<f64>,
    /// Level of the x-sequence of the counterexample.
    #[arg(long = "C", global = true, value_parser = parse_number, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Growth of the x-sequence of the counterexample.
    #[arg(long, global = true, value_parser = parse_number, allow_negative_numbers = true)]
    sigma: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the perturbed technology on [0, 2].
    Figure1,
    /// Build the bubbleless equilibrium with exploding interest rates.
    Counterexample,
    /// Shoot for the equilibrium converging to the bubbly steady state.
    Shoot {
        /// Also probe a k0 × D0 grid, e.g. 20x20.
        #[arg(long, value_name = "NKxND", num_args = 0..=1, default_missing_value = "20x20", value_parser = parse_grid)]
        omega_grid: Option<(usize, usize)>,
    },
    /// Steady states of the dividend-free economy.
    Steady,
    /// Linearization at the bubbly steady state.
    Stability,
    /// Check residuals and feasibility of a path CSV.
    VerifyPath { input: PathBuf },
}

fn resolve(opts: &GlobalOpts, command: &Command) -> Result<RunConfig> {
    let mut cfg = match &opts.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let floats = [
        (opts.scale, &mut cfg.scale),
        (opts.alpha, &mut cfg.alpha),
        (opts.beta, &mut cfg.beta),
        (opts.theta, &mut cfg.theta),
        (opts.growth, &mut cfg.growth),
        (opts.gd, &mut cfg.gd),
        (opts.d0, &mut cfg.d0),
        (opts.c, &mut cfg.c),
        (opts.sigma, &mut cfg.sigma),
    ];
    for (flag, slot) in floats {
        if let Some(v) = flag {
            *slot = v;
        }
    }
    if opts.k0.is_some() {
        cfg.k0 = opts.k0;
    }
    if opts.horizon.is_some() {
        cfg.horizon = opts.horizon;
    }
    if let Some(j) = opts.jobs {
        cfg.jobs = j;
    }
    if opts.out.is_some() {
        cfg.out = opts.out.clone();
    }
    if let Command::Shoot {
        omega_grid: Some(grid),
    } = command
    {
        cfg.omega_grid = Some(*grid);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = resolve(&cli.opts, &cli.command)?;
    match &cli.command {
        Command::Figure1 => commands::figure1::run(&cfg),
        Command::Counterexample => commands::counterexample::run(&cfg),
        Command::Shoot { .. } => commands::shoot::run(&cfg),
        Command::Steady => commands::steady::run(&cfg),
        Command::Stability => commands::stability::run(&cfg),
        Command::VerifyPath { input } => commands::verify::run(&cfg, input),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use olg_bubbles::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        if cause.is::<CheckFailure>() {
            return 3;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Bracket { .. }
                | E::NoRoot { .. }
                | E::Inconclusive { .. }
                | E::TailNotSummable { .. }
                | E::FitDomain { .. }
                | E::T0NotFound { .. } => 3,
                E::Domain { .. }
                | E::InvalidParameter(_)
                | E::InvalidSpec(_)
                | E::NoBubblySteadyState => 2,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<csv::Error>() {
            return 4;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nls_cascade::runner::{exit_code, run, Command, ExperimentConfig, Overrides};

/// Frequency cascades of forced NLS stationary states.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// TOML experiment file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: OverrideArgs,
}

#[derive(Subcommand)]
enum Cmd {
    /// Profile spectrum, series oracle and slope fit.
    Spectrum,
    /// ε-sweep of the stationary fixed-point solver.
    Stationary,
    /// Time evolution of a perturbed stationary state.
    Evolve,
    /// Slope fits over a list of δ.
    Sweep,
    /// Power-law fit of a two-column CSV.
    Fit {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Args)]
struct OverrideArgs {
    #[arg(long, global = true)]
    delta: Option<f64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true)]
    sigma: Option<u32>,
    /// 0 for static forcing, 1 for the rotating Cardano forcing.
    #[arg(long, global = true)]
    p: Option<u8>,
    #[arg(long, global = true)]
    n_points: Option<usize>,
    #[arg(long, global = true)]
    half_length: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write log-log SVG plots.
    #[arg(long, global = true)]
    svg: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    let (command, input) = match cli.command {
        Cmd::Spectrum => (Command::Spectrum, None),
        Cmd::Stationary => (Command::Stationary, None),
        Cmd::Evolve => (Command::Evolve, None),
        Cmd::Sweep => (Command::Sweep, None),
        Cmd::Fit { input } => (Command::Fit, input),
    };
    let o = cli.overrides;
    let overrides = Overrides {
        delta: o.delta,
        epsilon: o.epsilon,
        sigma: o.sigma,
        p: o.p,
        n_points: o.n_points,
        half_length: o.half_length,
        out: o.out,
        seed: o.seed,
        svg: o.svg,
        input,
    };

    let result = cli
        .config
        .as_deref()
        .map_or_else(
            || Ok(ExperimentConfig::default()),
            ExperimentConfig::from_file,
        )
        .and_then(|mut config| {
            config.apply(&overrides);
            run(command, &config)
        });
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

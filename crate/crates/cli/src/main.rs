use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rdlab_cli::{load_config, Overrides};

#[derive(Parser)]
#[command(name = "rdlab", version, about = "Reaction-diffusion laboratory")]
struct Cli {
    /// Run configuration (TOML, schema_version = 1).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Grid points per axis.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    #[arg(long, global = true)]
    t_end: Option<f64>,
    /// Built-in network name or path to a network file.
    #[arg(long, global = true)]
    network: Option<String>,
    /// Scale of the initial data.
    #[arg(long, global = true)]
    amplitude: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sampled structural checks of the network.
    Check,
    /// Run the solver and write diagnostics.
    Simulate,
    /// Simulate, then evaluate the entropy/duality margins.
    VerifyProof {
        /// Multiplier applied to the drift constant K.
        #[arg(long)]
        k_scale: Option<f64>,
    },
    /// Empirical interpolation and smoothing constants.
    VerifyLemma2,
    /// Parallel parameter sweep.
    Sweep {
        /// Comma-separated amplitudes, replacing those in the config.
        #[arg(long, value_delimiter = ',')]
        amplitudes: Option<Vec<f64>>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut ov = Overrides {
        seed: cli.seed,
        out: cli.out,
        resolution: cli.resolution,
        t_end: cli.t_end,
        network: cli.network,
        amplitude: cli.amplitude,
        ..Overrides::default()
    };
    match &cli.command {
        Command::VerifyProof { k_scale } => ov.k_scale = *k_scale,
        Command::Sweep { amplitudes } => ov.amplitudes = amplitudes.clone(),
        _ => {}
    }
    let result = load_config(cli.config.as_deref(), &ov).and_then(|cfg| match cli.command {
        Command::Check => rdlab_cli::run_check(&cfg),
        Command::Simulate => rdlab_cli::run_simulate(&cfg),
        Command::VerifyProof { .. } => rdlab_cli::run_verify_proof(&cfg),
        Command::VerifyLemma2 => rdlab_cli::run_verify_lemma2(&cfg, cli.resolution),
        Command::Sweep { .. } => rdlab_cli::run_sweep(&cfg),
    });
    let code = match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.exit_code()
        }
    };
    ExitCode::from(code as u8)
}


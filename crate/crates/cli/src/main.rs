mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::FileConfig;

#[derive(Parser, Debug)]
#[command(
    name = "diamondq",
    version,
    about = "Diamond-gate simulation, verification and training"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for parameter initialization.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for CSV and JSON artifacts.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat JSON document with defaults for any long flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for loss evaluation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the identity and decomposition suites.
    Verify {
        /// all, diamond, decomp or qft-identities.
        #[arg(long)]
        scope: Option<String>,
    },
    /// Build and simulate a diamond-native QFT.
    Qft(QftArgs),
    /// Fit a one-dimensional function with quantum circuit learning.
    Qcl(TrainArgs),
    /// Train a binary classifier on a reconstructed 2-D data set.
    Classify(TrainArgs),
}

#[derive(Args, Debug, Clone)]
pub struct QftArgs {
    /// double-string, cns-chain or diamond-string.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Number of input qubits.
    #[arg(long)]
    pub n: Option<usize>,
    /// Input basis state as a bit string, most significant bit first.
    #[arg(long)]
    pub input: Option<String>,
    /// Drop controlled rotations R_k with k above this value.
    #[arg(long)]
    pub approx_threshold: Option<u32>,
    /// Write the circuit in text form to the output directory.
    #[arg(long)]
    pub dump_circuit: bool,
    /// Report gate counts.
    #[arg(long)]
    pub counts: bool,
}

#[derive(Args, Debug, Clone)]
pub struct TrainArgs {
    /// Regression target: x2, exp, sin, abs, sincos, sinexp.
    #[arg(long)]
    pub target: Option<String>,
    /// Data set shape: 1a .. 3c.
    #[arg(long)]
    pub shape: Option<String>,
    /// Diamond layers in the circuit.
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Adam step size.
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Central finite-difference step.
    #[arg(long)]
    pub fd_step: Option<f64>,
    /// Training samples (regression) or points (classification).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed for the training data.
    #[arg(long)]
    pub data_seed: Option<u64>,
    /// Decision-grid resolution per axis.
    #[arg(long)]
    pub resolution: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let start = Instant::now();
    let file = match &cli.common.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mut report = match &cli.command {
        Command::Verify { scope } => commands::verify(&file, scope.clone())?,
        Command::Qft(a) => commands::qft(&cli.common, &file, a)?,
        Command::Qcl(a) => commands::qcl(&cli.common, &file, a)?,
        Command::Classify(a) => commands::classify(&cli.common, &file, a)?,
    };
    report.wall_time = start.elapsed().as_secs_f64();
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(p) = &cli.common.out {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(p, format!("{json}\n"))?;
    }
    if cli.common.json {
        println!("{json}");
    } else {
        print!("{}", report.to_text());
    }
    Ok(if report.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

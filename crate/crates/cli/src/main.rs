//! `pointscat <command> --config <path> [--out <dir>] [--threads <n>]`
//!
//! Exit codes: 0 all verdicts pass, 1 a physics verdict failed, 2 usage or
//! config error.

// `!(x > 0.0)` guards are load-bearing: they send NaN into the error path,
// which `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ConfigFile;

#[derive(Parser)]
#[command(name = "pointscat", version, about = "Multipoint-scattering experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scattering amplitudes f, f+ over outgoing directions
    Amplitude(RunArgs),
    /// Discretized scattering operator: singular spectrum of S - 1
    Soperator(RunArgs),
    /// Kernel basis of S - 1 (the transmission eigenspace)
    Kernel(RunArgs),
    /// Reflectionless 1D potentials: transparency energies
    Soliton(RunArgs),
    /// Narrow-well convergence to the 1D point scatterer
    #[command(name = "delta-limit")]
    DeltaLimit(RunArgs),
    /// Interior transmission eigenvalue witnesses
    Ite(RunArgs),
    /// Dirichlet-box multiplicity lower bound
    #[command(name = "box-bound")]
    BoxBound(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the TOML experiment config
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: $POINTSCAT_OUT, then the current dir)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Thread count for energy sweeps
    #[arg(long)]
    threads: Option<usize>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Amplitude(_) => "amplitude",
            Command::Soperator(_) => "soperator",
            Command::Kernel(_) => "kernel",
            Command::Soliton(_) => "soliton",
            Command::DeltaLimit(_) => "delta-limit",
            Command::Ite(_) => "ite",
            Command::BoxBound(_) => "box-bound",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Amplitude(a)
            | Command::Soperator(a)
            | Command::Kernel(a)
            | Command::Soliton(a)
            | Command::DeltaLimit(a)
            | Command::Ite(a)
            | Command::BoxBound(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    let args = cli.command.args();
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| format!("--threads: {e}"))?;
    }
    let raw = std::fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read config {}: {e}", args.config.display()))?;
    let cfg = ConfigFile::parse(&raw).map_err(|e| e.to_string())?;
    let name = cli.command.name();
    if cfg.command != name {
        return Err(format!(
            "config field `command` is \"{}\" but the subcommand is `{name}`",
            cfg.command
        ));
    }
    let out_dir = args
        .out
        .clone()
        .or_else(|| std::env::var_os("POINTSCAT_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| format!("cannot create output dir {}: {e}", out_dir.display()))?;

    let report = match &cli.command {
        Command::Amplitude(_) => commands::run_amplitude(&cfg),
        Command::Soperator(_) => commands::run_soperator(&cfg),
        Command::Kernel(_) => commands::run_kernel(&cfg),
        Command::Soliton(_) => commands::run_soliton(&cfg),
        Command::DeltaLimit(_) => commands::run_delta_limit(&cfg),
        Command::Ite(_) => commands::run_ite(&cfg),
        Command::BoxBound(_) => commands::run_box_bound(&cfg),
    }
    .map_err(|e| e.to_string())?;

    let prefix = cfg
        .output
        .prefix
        .clone()
        .unwrap_or_else(|| name.replace('-', "_"));
    let csv_path = out_dir.join(format!("{prefix}.csv"));
    report::write_csv(&csv_path, &report)
        .map_err(|e| format!("cannot write {}: {e}", csv_path.display()))?;
    let manifest_path = out_dir.join(format!("{prefix}_manifest.toml"));
    report::write_manifest(&manifest_path, name, &report::config_sha256(&raw), &report)
        .map_err(|e| format!("cannot write {}: {e}", manifest_path.display()))?;

    for v in &report.verdicts {
        let detail = if v.detail.is_empty() {
            String::new()
        } else {
            format!(" ({})", v.detail)
        };
        println!(
            "verdict {}: {}{detail}",
            v.name,
            if v.pass { "PASS" } else { "FAIL" }
        );
    }
    println!("wrote {} and {}", csv_path.display(), manifest_path.display());
    Ok(report.all_pass())
}

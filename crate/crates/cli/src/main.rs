use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use skdvb_core::harness::{preset, preset_names, report, run, ExperimentConfig, ExperimentKind};

/// Spectral lab for a stochastic KdV-Burgers equation on the torus.
#[derive(Parser)]
#[command(name = "skdvb", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunFlags {
    /// Experiment config (TOML). Mutually exclusive with --preset.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Named preset configuration.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Override the ensemble seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (defaults under $SKDVB_OUT or ./runs).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, value_name = "K")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate trajectories / run the energy-balance ensemble.
    Simulate(RunFlags),
    /// White-noise invariance tests (OU, KdV, split, or full flow).
    Invariance(RunFlags),
    /// Bilinear-estimate ratio sweeps.
    Bilinear(RunFlags),
    /// Picard solver, stopping times, and contraction factors.
    Mild(RunFlags),
    /// Numeric checks of the supporting inequalities.
    LemmaCheck(RunFlags),
    /// Running-supremum moment audit.
    MomentAudit(RunFlags),
    /// Aggregate a completed run directory into a report.
    Report {
        /// Run directory containing manifest.json.
        #[arg(value_name = "DIR")]
        dir: PathBuf,
    },
    /// List available presets.
    Presets,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let (kind, flags) = match cli.command {
        Command::Simulate(f) => (ExperimentKind::Simulate, f),
        Command::Invariance(f) => (ExperimentKind::Invariance, f),
        Command::Bilinear(f) => (ExperimentKind::Bilinear, f),
        Command::Mild(f) => (ExperimentKind::Mild, f),
        Command::LemmaCheck(f) => (ExperimentKind::LemmaCheck, f),
        Command::MomentAudit(f) => (ExperimentKind::MomentAudit, f),
        Command::Report { dir } => {
            let doc = report(&dir)?;
            print!("{doc}");
            return Ok(ExitCode::SUCCESS);
        }
        Command::Presets => {
            for name in preset_names() {
                let cfg = preset(name).unwrap();
                println!("{name:24} ({})", cfg.kind.as_str());
            }
            return Ok(ExitCode::SUCCESS);
        }
    };
    if let Some(threads) = flags.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    let mut cfg = load_config(&flags)?;
    if cfg.kind != kind {
        return Err(format!(
            "config kind `{}` does not match subcommand `{}`",
            cfg.kind.as_str(),
            kind.as_str()
        )
        .into());
    }
    if let Some(seed) = flags.seed {
        cfg.ensemble.seed = seed;
    }
    if let Some(out) = flags.out {
        cfg.output.dir = Some(out);
    }
    let artifacts = run(&cfg)?;
    println!("run directory: {}", artifacts.dir.display());
    for file in &artifacts.manifest.files {
        println!("  {file}");
    }
    match artifacts.passed {
        Some(true) => {
            println!("verdict: PASS");
            Ok(ExitCode::SUCCESS)
        }
        Some(false) => {
            println!("verdict: FAIL");
            Ok(ExitCode::FAILURE)
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

fn load_config(flags: &RunFlags) -> Result<ExperimentConfig, Box<dyn std::error::Error>> {
    match (&flags.config, &flags.preset) {
        (Some(_), Some(_)) => Err("--config and --preset are mutually exclusive".into()),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            Ok(ExperimentConfig::from_toml(&text)?)
        }
        (None, Some(name)) => {
            preset(name).ok_or_else(|| format!("unknown preset `{name}`; see `skdvb presets`").into())
        }
        (None, None) => Err("one of --config or --preset is required".into()),
    }
}

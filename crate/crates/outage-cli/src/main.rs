//! mimo-outage: outage probability of Kronecker-correlated Rayleigh MIMO
//! channels via exact, asymptotic, and Monte Carlo engines.
//!
//! Exit codes: 0 success, 2 usage/config error, 3 numerical failure.

mod commands;
mod config;
mod plot;

use clap::{Args, Parser, Subcommand};
use config::{parse_reals, parse_run_config, preset_fig1, preset_fig2_pairs, preset_fig3, RunConfig};
use outage_core::asymptotic::RateObjective;
use std::path::PathBuf;

/// A subcommand failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config files, or input data (exit 2).
    Usage(String),
    /// An engine failed to converge or rejected the evaluation (exit 3).
    Numerical(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "mimo-outage", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SourceArgs {
    /// Flat key=value run configuration file.
    #[arg(long, conflicts_with = "figure")]
    config: Option<PathBuf>,
    /// Figure preset: fig1 or fig3 (sweeps), fig2 (gain).
    #[arg(long)]
    figure: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// SNR sweep comparing the exact, asymptotic, and Monte Carlo engines.
    Sweep {
        #[command(flatten)]
        source: SourceArgs,
        /// Monte Carlo trials per grid point.
        #[arg(long)]
        trials: Option<u64>,
        /// Monte Carlo seed.
        #[arg(long)]
        seed: Option<u64>,
        /// CSV output path (stdout when omitted; required for fig3).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Majorization report between two spectra.
    Majorize {
        /// First spectrum, comma-separated descending reals.
        a: String,
        /// Second spectrum, comma-separated descending reals.
        b: String,
    },
    /// Coding and modulation gain C(R) versus rate.
    Gain {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        nt: Option<usize>,
        #[arg(long)]
        nr: Option<usize>,
        /// Comma-separated increasing rate grid (default 0.25..8).
        #[arg(long)]
        rates: Option<String>,
        /// CSV output path (stdout when omitted; required for fig2).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a sweep or gain CSV as a static SVG.
    Plot {
        /// Input CSV produced by sweep or gain.
        csv: PathBuf,
        /// SVG output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Select a transmission rate through the asymptotic engine.
    RateOpt {
        #[command(flatten)]
        source: SourceArgs,
        /// Operating SNR in dB.
        #[arg(long)]
        snr_db: f64,
        /// Solve asymptotic_outage(R) = target.
        #[arg(long, conflicts_with = "max_throughput")]
        target_outage: Option<f64>,
        /// Maximize R(1 - outage) instead.
        #[arg(long)]
        max_throughput: bool,
    },
}

fn sweep_runs(source: &SourceArgs) -> Result<Vec<RunConfig>, CliError> {
    match (&source.config, source.figure.as_deref()) {
        (Some(path), None) => Ok(vec![parse_run_config(path)?]),
        (None, Some("fig1")) => Ok(vec![preset_fig1()?]),
        (None, Some("fig3")) => preset_fig3(),
        (None, Some(other)) => Err(CliError::Usage(format!("unknown sweep figure '{other}'"))),
        (None, None) => Err(CliError::Usage("give --config or --figure".into())),
        _ => unreachable!("clap conflicts_with"),
    }
}

fn run_config_for(source: &SourceArgs) -> Result<RunConfig, CliError> {
    let mut runs = sweep_runs(source)?;
    if runs.len() != 1 {
        return Err(CliError::Usage("this subcommand needs a single-config source".into()));
    }
    Ok(runs.remove(0))
}

fn with_suffix(path: &PathBuf, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| e.to_string_lossy().into_owned());
    let name = match ext {
        Some(e) => format!("{stem}{suffix}.{e}"),
        None => format!("{stem}{suffix}"),
    };
    path.with_file_name(name)
}

fn cmd_sweep(
    source: &SourceArgs,
    trials: Option<u64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut runs = sweep_runs(source)?;
    for run in &mut runs {
        if let Some(n) = trials {
            run.plan = outage_core::montecarlo::TrialPlan::new(n, run.plan.seed, run.plan.shards)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        if let Some(s) = seed {
            run.plan.seed = s;
        }
        if let Some(p) = &out {
            run.output_path = Some(p.clone());
        }
    }
    let multi = runs.len() > 1;
    if multi && runs.iter().any(|r| r.output_path.is_none()) {
        return Err(CliError::Usage("multi-curve figures need --out".into()));
    }
    for (i, run) in runs.iter().enumerate() {
        let rows = commands::run_sweep(run)?;
        for note in commands::sweep_notes(run, &rows) {
            eprintln!("{note}");
        }
        let csv = commands::sweep_csv(&rows);
        let path = run.output_path.as_ref().map(|p| {
            if multi {
                with_suffix(p, &format!("_t{}", i + 1))
            } else {
                p.clone()
            }
        });
        commands::write_output(path.as_deref(), &csv)?;
    }
    Ok(())
}

fn cmd_gain(
    source: &SourceArgs,
    nt: Option<usize>,
    nr: Option<usize>,
    rates: Option<String>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let grid = match rates {
        Some(text) => parse_reals(&text)?,
        None => config::default_rate_grid(),
    };
    let pairs: Vec<(usize, usize)> = match (source.figure.as_deref(), nt, nr) {
        (Some("fig2"), None, None) => preset_fig2_pairs(),
        (Some(other), _, _) => {
            return Err(CliError::Usage(format!("gain supports only --figure fig2 (got '{other}')")))
        }
        (None, Some(nt), Some(nr)) => vec![(nt, nr)],
        _ => return Err(CliError::Usage("give --nt and --nr, or --figure fig2".into())),
    };
    let multi = pairs.len() > 1;
    if multi && out.is_none() {
        return Err(CliError::Usage("--figure fig2 needs --out".into()));
    }
    for &(nt, nr) in &pairs {
        let csv = commands::gain_csv(nt, nr, &grid)?;
        let path = out.as_ref().map(|p| {
            if multi {
                with_suffix(p, &format!("_{nt}x{nr}"))
            } else {
                p.clone()
            }
        });
        commands::write_output(path.as_deref(), &csv)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep { source, trials, seed, out } => cmd_sweep(&source, trials, seed, out),
        Command::Majorize { a, b } => {
            let a = parse_reals(&a)?;
            let b = parse_reals(&b)?;
            let report = commands::majorize_report(&a, &b)?;
            print!("{report}");
            Ok(())
        }
        Command::Gain { source, nt, nr, rates, out } => cmd_gain(&source, nt, nr, rates, out),
        Command::Plot { csv, out } => plot::render_csv(&csv, &out),
        Command::RateOpt { source, snr_db, target_outage, max_throughput } => {
            let run = run_config_for(&source)?;
            let objective = match (target_outage, max_throughput) {
                (Some(p), false) => RateObjective::TargetOutage(p),
                (None, true) => RateObjective::MaxThroughput,
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --target-outage and --max-throughput".into(),
                    ))
                }
            };
            let report = commands::rate_opt_report(&run, snr_db, objective)?;
            print!("{report}");
            Ok(())
        }
    }
}

fn main() {
    // Worker-count override; Monte Carlo results are bit-identical across
    // worker counts by construction, so this only affects speed.
    if let Ok(text) = std::env::var("MIMO_OUTAGE_WORKERS") {
        match text.parse::<usize>() {
            Ok(n) if n > 0 => {
                rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
            }
            _ => {
                eprintln!("error: MIMO_OUTAGE_WORKERS must be a positive integer (got '{text}')");
                std::process::exit(2);
            }
        }
    }
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.code());
    }
}

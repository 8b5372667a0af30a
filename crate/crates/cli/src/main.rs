//! `mixer`: runs the mixer-chain experiments and writes CSV or JSON reports.
//!
//! Exit status is 0 when every hard check passes, 1 when one fails and 2 on
//! usage, configuration or I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mixer_core::distance::BfsLimits;
use mixer_core::experiments::{
    emit_report, estimate_exponent, verify_claim, verify_conditional_law, verify_domination,
    verify_mirror, verify_sandwich, verify_words, ExperimentConfig, OutputFormat, Report,
    Tolerances,
};
use mixer_core::sim::DEFAULT_RETURN_CAP;
use mixer_core::Site;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "mixer",
    version,
    about = "Mixer chain on Z: escape-rate experiments and distance checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit the growth exponents of E[X_t] and its distance bounds.
    Exponent(Common),
    /// Compare the distance bounds with exact BFS distances on a ball.
    Sandwich(Common),
    /// Check synthesized words against their targets and length bounds.
    Words(Common),
    /// Offset of a tile at its first return to the mixer.
    Claim(Common),
    /// Tail domination of simple-walk local times by visit counts.
    Domination(Common),
    /// Law of a tile's offset given its visit count.
    Conditional(Common),
    /// Reflection symmetry of positions and tile offsets.
    Mirror(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Base seed; every trajectory seed is derived from it.
    #[arg(long, default_value_t = ExperimentConfig::default().seed)]
    seed: u64,
    /// Independent trajectories (for `claim`, return samples; for `words`,
    /// random permutations).
    #[arg(long)]
    trials: Option<usize>,
    /// Largest observation time; the grid becomes the powers of two from 2^8
    /// up to it.
    #[arg(long, conflicts_with = "grid")]
    t_max: Option<u64>,
    /// Comma-separated observation times, strictly increasing.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<u64>>,
    /// Comma-separated probed tiles.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    probe: Option<Vec<Site>>,
    /// Ball radius for `sandwich`, support half-width for `words`.
    #[arg(long)]
    radius: Option<u32>,
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads. Results do not depend on it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Tolerance override such as `alpha=0.01`; repeatable.
    #[arg(long = "tol", value_name = "KEY=VALUE")]
    tolerances: Vec<String>,
}

enum Failure {
    Usage(String),
    Checks,
}

fn geometric_grid(t_max: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = (8..64)
        .map(|k| 1u64 << k)
        .take_while(|&t| t <= t_max)
        .collect();
    if grid.last() != Some(&t_max) {
        grid.push(t_max);
    }
    grid
}

fn tolerances(overrides: &[String]) -> Result<Tolerances, String> {
    let mut value = serde_json::to_value(Tolerances::default()).expect("tolerances serialise");
    let fields = value.as_object_mut().expect("tolerances are a struct");
    for item in overrides {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| format!("--tol expects KEY=VALUE, got `{item}`"))?;
        let slot = fields
            .get_mut(key.trim())
            .ok_or_else(|| format!("unknown tolerance `{key}`"))?;
        *slot = serde_json::from_str(raw.trim()).map_err(|e| format!("--tol {key}: {e}"))?;
    }
    serde_json::from_value(value).map_err(|e| format!("invalid tolerance override: {e}"))
}

fn config(args: &Common) -> Result<ExperimentConfig, String> {
    let defaults = ExperimentConfig::default();
    let cfg = ExperimentConfig {
        seed: args.seed,
        trials: args.trials.unwrap_or(defaults.trials),
        t_grid: match (&args.grid, args.t_max) {
            (Some(grid), _) => grid.clone(),
            (None, Some(t)) if t > 0 => geometric_grid(t),
            (None, Some(_)) => return Err("--t-max must be positive".into()),
            (None, None) => defaults.t_grid,
        },
        probe_sites: args.probe.clone().unwrap_or(defaults.probe_sites),
        workers: args.workers as usize,
        output_format: args.format,
        output_path: args.out.clone(),
        tolerances: tolerances(&args.tolerances)?,
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn run(command: Command) -> Result<(), Failure> {
    let (Command::Exponent(args)
    | Command::Sandwich(args)
    | Command::Words(args)
    | Command::Claim(args)
    | Command::Domination(args)
    | Command::Conditional(args)
    | Command::Mirror(args)) = &command;
    let cfg = config(args).map_err(Failure::Usage)?;
    let usage = |e: mixer_core::MixerError| Failure::Usage(e.to_string());

    let report: Report = match &command {
        Command::Exponent(_) => estimate_exponent(&cfg).map_err(usage)?.to_report(&cfg),
        Command::Sandwich(_) => {
            let radius = args.radius.unwrap_or(8);
            let limits = BfsLimits::from_env().map_err(usage)?;
            verify_sandwich(radius, &limits)
                .map_err(usage)?
                .to_report(json!({
                    "radius": radius,
                    "node_budget": limits.node_budget,
                }))
        }
        Command::Words(_) => {
            let n = args.trials.unwrap_or(10_000);
            let radius = args.radius.unwrap_or(10);
            if radius == 0 {
                return Err(Failure::Usage("--radius must be positive".into()));
            }
            verify_words(n, Site::from(radius), cfg.seed)
                .map_err(usage)?
                .to_report(json!({
                    "seed": cfg.seed,
                    "n_random": n,
                    "max_support": radius,
                }))
        }
        Command::Claim(_) => {
            let n = args.trials.unwrap_or(100_000);
            let tol = &cfg.tolerances;
            verify_claim(n, cfg.seed, DEFAULT_RETURN_CAP, tol)
                .map_err(usage)?
                .to_report(
                    json!({
                        "seed": cfg.seed,
                        "n_samples": n,
                        "return_cap": DEFAULT_RETURN_CAP,
                        "tolerances": serde_json::to_value(tol).unwrap_or(Value::Null),
                    }),
                    tol,
                )
        }
        Command::Domination(_) => verify_domination(&cfg).map_err(usage)?.to_report(&cfg),
        Command::Conditional(_) => verify_conditional_law(&cfg).map_err(usage)?.to_report(&cfg),
        Command::Mirror(_) => verify_mirror(&cfg).map_err(usage)?.to_report(&cfg),
    };

    emit_report(&report, cfg.output_format, cfg.output_path.as_deref())
        .map_err(|e| Failure::Usage(e.to_string()))?;
    for check in report.failures() {
        eprintln!(
            "FAIL {}: {}{}",
            check.name,
            check.detail,
            check
                .replay
                .as_ref()
                .map_or(String::new(), |r| format!(" [{r}]"))
        );
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("mixer: {msg}");
            ExitCode::from(2)
        }
    }
}

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use monofk::commands;
use monofk::config::{ConvergenceConfig, FkRunConfig, GeometryConfig, SpectralConfig};
use monofk::report::Report;

#[derive(Parser)]
#[command(name = "monofk", version, about = "Feynman-Kac verifier for a charged particle in a monopole field")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Holonomy, connection bound, gauge relation and divergence checks.
    Geometry(Common),
    /// Transform, harmonic and semigroup identities.
    Spectral(Common),
    /// Monte Carlo against the spectral semigroup at one point.
    Fk(Common),
    /// Scaling studies in the number of paths and the step size.
    Convergence(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write convergence tables as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_paths: Option<usize>,
    #[arg(long)]
    n_steps: Option<usize>,
    #[arg(long)]
    t: Option<f64>,
    /// Start point as "x1,x2,x3".
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    charge: Option<i32>,
    #[arg(long)]
    delta: Option<f64>,
}

fn load<C: DeserializeOwned + Default>(path: &Option<PathBuf>) -> Result<C> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
        None => Ok(C::default()),
    }
}

fn parse_point(s: &str) -> Result<[f64; 3]> {
    let parts: Vec<f64> = s.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [a, b, c] => Ok([*a, *b, *c]),
        _ => bail!("--x needs three comma-separated numbers, got {s:?}"),
    }
}

/// Flags that do not apply to the chosen command are an error rather than ignored.
fn reject(name: &str, present: bool, command: &str) -> Result<()> {
    if present {
        bail!("--{name} does not apply to the {command} command");
    }
    Ok(())
}

fn threads() -> Result<Option<usize>> {
    match std::env::var("MONOFK_THREADS") {
        Ok(v) => Ok(Some(v.parse().with_context(|| format!("MONOFK_THREADS={v:?}"))?)),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(Report, Common)> {
    let threads = threads()?;
    let report = match &cli.command {
        Command::Geometry(c) => {
            let mut cfg: GeometryConfig = load(&c.config)?;
            for (name, present) in [("n-paths", c.n_paths.is_some()), ("n-steps", c.n_steps.is_some()), ("t", c.t.is_some()), ("x", c.x.is_some())] {
                reject(name, present, "geometry")?;
            }
            cfg.seed = c.seed.unwrap_or(cfg.seed);
            cfg.atlas.charge = c.charge.unwrap_or(cfg.atlas.charge);
            cfg.atlas.delta = c.delta.unwrap_or(cfg.atlas.delta);
            commands::geometry::run(&cfg)?
        }
        Command::Spectral(c) => {
            let mut cfg: SpectralConfig = load(&c.config)?;
            for (name, present) in [
                ("n-paths", c.n_paths.is_some()),
                ("n-steps", c.n_steps.is_some()),
                ("t", c.t.is_some()),
                ("x", c.x.is_some()),
                ("charge", c.charge.is_some()),
            ] {
                reject(name, present, "spectral")?;
            }
            cfg.seed = c.seed.unwrap_or(cfg.seed);
            cfg.atlas.delta = c.delta.unwrap_or(cfg.atlas.delta);
            commands::spectral::run(&cfg)?
        }
        Command::Fk(c) => {
            let mut cfg: FkRunConfig = load(&c.config)?;
            reject("charge", c.charge.is_some(), "fk")?;
            cfg.seed = c.seed.unwrap_or(cfg.seed);
            cfg.n_paths = c.n_paths.unwrap_or(cfg.n_paths);
            cfg.n_steps = c.n_steps.unwrap_or(cfg.n_steps);
            cfg.t = c.t.unwrap_or(cfg.t);
            cfg.atlas.delta = c.delta.unwrap_or(cfg.atlas.delta);
            if let Some(x) = &c.x {
                cfg.x = parse_point(x)?;
            }
            commands::fk::run(&cfg, threads)?
        }
        Command::Convergence(c) => {
            let mut cfg: ConvergenceConfig = load(&c.config)?;
            for (name, present) in [("n-paths", c.n_paths.is_some()), ("n-steps", c.n_steps.is_some()), ("charge", c.charge.is_some())] {
                reject(name, present, "convergence")?;
            }
            cfg.seed = c.seed.unwrap_or(cfg.seed);
            cfg.t = c.t.unwrap_or(cfg.t);
            cfg.atlas.delta = c.delta.unwrap_or(cfg.atlas.delta);
            if let Some(x) = &c.x {
                cfg.x = parse_point(x)?;
            }
            commands::convergence::run(&cfg, threads)?
        }
    };
    let common = match cli.command {
        Command::Geometry(c) | Command::Spectral(c) | Command::Fk(c) | Command::Convergence(c) => c,
    };
    Ok((report, common))
}

fn main() -> std::process::ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let started = Instant::now();
    let outcome = run(Cli::parse()).and_then(|(mut report, common)| {
        report.duration_seconds = started.elapsed().as_secs_f64();
        let json = serde_json::to_string_pretty(&report)?;
        match &common.output {
            Some(p) => std::fs::write(p, json + "\n").with_context(|| format!("writing {}", p.display()))?,
            None => println!("{json}"),
        }
        if let Some(p) = &common.csv {
            report.write_csv(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)?;
        }
        for c in report.checks.iter().filter(|c| !c.passed) {
            log::warn!("check {} failed: value {} tolerance {}", c.name, c.value, c.tolerance);
        }
        Ok(report.passed)
    });
    match outcome {
        Ok(true) => std::process::ExitCode::SUCCESS,
        Ok(false) => std::process::ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::from(2)
        }
    }
}

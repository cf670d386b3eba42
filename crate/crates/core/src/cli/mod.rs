//! Scenario runner: config parsing, dispatch and artifact output.

pub mod config;
pub mod output;
pub mod scenarios;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use config::{parse_config, NamedScenario, OutputFormat};
use output::{render_csv, render_json, write_file, Metadata};
pub use scenarios::{run_scenario, RunOptions};

/// Golden configs shipped with the crate, in run order.
pub const GOLDEN_CONFIGS: &[&str] =
    &["fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig8", "threshold", "impurity", "stokes1d", "crosscheck"];

#[derive(Debug, Parser)]
#[command(name = "underbarrier", version, about = "Semiclassical underbarrier tunneling solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every scenario in a config file.
    Run {
        config: PathBuf,
        /// Output directory (defaults to the config's directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Newton tolerance for saddle seeds.
        #[arg(long)]
        seed_tolerance: Option<f64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Regenerate the bundled golden outputs.
    Goldens {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

pub fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("goldens")
}

fn metadata(named: &NamedScenario, run: &RunOptions) -> Result<Metadata> {
    let tol = run.seed_tolerance.map_or("default".to_string(), output::fmt_num);
    let lines = vec![
        ("solver".to_string(), format!("underbarrier {}", crate::VERSION)),
        ("scenario".to_string(), named.name.clone()),
        ("kind".to_string(), format!("{:?}", named.scenario.kind)),
        (
            "conventions".to_string(),
            "principal sqrt sheet (branch cut on negative real axis); psi ~ exp(i B sigma); log_psi_mag = -B Im sigma; exponents natural-log, B-normalized where marked".to_string(),
        ),
        ("tolerances".to_string(), format!("newton {tol}; quadrature rel 1e-11; trajectory 1e-10")),
    ];
    Ok(Metadata { lines, config: named.to_toml()? })
}

/// Renders one scenario to its artifact contents.
pub fn render_scenario(named: &NamedScenario, run: &RunOptions) -> Result<String> {
    let sweep = named.sweep();
    let table = run_scenario(&named.scenario, sweep.as_ref().map(|s| (s.param.as_str(), s.values.as_slice())), run)?;
    let meta = metadata(named, run)?;
    match named.format() {
        OutputFormat::Csv => Ok(render_csv(&meta, &table)),
        OutputFormat::Json => render_json(&meta, &table),
    }
}

/// Runs a config file, writing one artifact per scenario. Returns the written paths.
pub fn run_config(config: &Path, out: Option<&Path>, run: &RunOptions) -> Result<Vec<PathBuf>> {
    let src = std::fs::read_to_string(config).map_err(|e| Error::Io(format!("{}: {e}", config.display())))?;
    let scenarios = parse_config(&src)?;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| config.parent().map(Path::to_path_buf).unwrap_or_default());
    let mut written = Vec::new();
    for named in &scenarios {
        let text = render_scenario(named, run)?;
        let path = dir.join(named.output_name());
        write_file(&path, &text)?;
        written.push(path);
    }
    Ok(written)
}

/// Re-runs every golden config in `dir`, writing outputs under `dir/expected`.
pub fn regenerate_goldens(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut all = Vec::new();
    for name in GOLDEN_CONFIGS {
        let cfg = dir.join(format!("{name}.toml"));
        all.extend(run_config(&cfg, Some(&dir.join("expected")), &RunOptions::default())?);
    }
    Ok(all)
}

pub fn main_with(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out, seed_tolerance, jobs } => {
            if let Some(t) = seed_tolerance {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::config("--seed-tolerance", "must be positive and finite"));
                }
            }
            let run = RunOptions { seed_tolerance, jobs: jobs.max(1) };
            for p in run_config(&config, out.as_deref(), &run)? {
                println!("{}", p.display());
            }
        }
        Command::Goldens { dir } => {
            for p in regenerate_goldens(&dir.unwrap_or_else(default_golden_dir))? {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

//! Command-line interface.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};

use crate::commands::{self, PesPoint, COMPARISON_FILE};
use crate::config::{Method, Overrides, RunConfig};
use crate::fcidump::read_fcidump;
use crate::report::dissociation_from_pes;
use crate::runner::execute_into;

/// Environment variable that caps the worker thread count.
pub const THREADS_ENV: &str = "HIVQE_NUM_THREADS";

pub const EXIT_CONVERGED: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hivqe",
    version,
    about = "Selected CI and sampled hybrid eigensolvers over FCIDUMP Hamiltonians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Shared {
    /// TOML run configuration; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// HCI threshold in Hartree (for hivqe: classical-expansion threshold).
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

impl Shared {
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        cfg.apply(&Overrides {
            method: self.method,
            epsilon: self.epsilon,
            shots: self.shots,
            seed: self.seed,
        });
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one FCIDUMP and write trace.csv and summary.json.
    Run {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        shared: Shared,
    },
    /// Scan points given as LABEL=PATH and write pes.csv.
    Pes {
        #[arg(long = "point", required = true)]
        points: Vec<PesPoint>,
        #[command(flatten)]
        shared: Shared,
    },
    /// Dissociation energy E(ext) - E(eq) from a PES table.
    Dissociation {
        #[arg(long)]
        pes: PathBuf,
        #[arg(long)]
        eq: String,
        #[arg(long)]
        ext: String,
        /// Also write dissociation.json into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare finished runs (directories holding summary.json).
    Compare {
        #[arg(long, num_args = 2.., required = true)]
        runs: Vec<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .with_context(|| format!("{THREADS_ENV}={v} is not a count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

/// Runs a parsed command and maps the outcome to an exit status.
pub fn dispatch(cli: Cli) -> u8 {
    match try_dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn status(converged: bool) -> u8 {
    if converged {
        EXIT_CONVERGED
    } else {
        EXIT_NOT_CONVERGED
    }
}

fn try_dispatch(cli: Cli) -> anyhow::Result<u8> {
    configure_threads()?;
    match cli.command {
        Command::Run { input, shared } => {
            let cfg = shared.resolve()?;
            let s = read_fcidump(&input)?;
            let a = execute_into(&s, &cfg, &input.display().to_string(), &shared.out)
                .map_err(|f| f.error)?;
            println!(
                "{} energy {:.10} Ha with {} determinants ({})",
                cfg.method.name(),
                a.summary.energy_ha,
                a.summary.n_dets,
                if a.converged() {
                    "converged"
                } else {
                    "not converged"
                }
            );
            Ok(status(a.converged()))
        }
        Command::Pes { points, shared } => {
            let cfg = shared.resolve()?;
            let outcome = commands::pes(&points, &cfg, &shared.out)?;
            print!("{}", outcome.csv);
            Ok(status(outcome.all_converged()))
        }
        Command::Dissociation { pes, eq, ext, out } => {
            let text = std::fs::read_to_string(&pes)
                .with_context(|| format!("reading {}", pes.display()))?;
            let r = dissociation_from_pes(&text, &eq, &ext)?;
            print!("{}", r.render());
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                let mut json = serde_json::to_string_pretty(&r)?;
                json.push('\n');
                std::fs::write(dir.join("dissociation.json"), json)?;
            }
            Ok(EXIT_CONVERGED)
        }
        Command::Compare { runs, out } => {
            let c = commands::compare(&runs)?;
            std::fs::create_dir_all(&out)?;
            std::fs::write(out.join(COMPARISON_FILE), &c.csv)?;
            print!("{}", c.table);
            Ok(EXIT_CONVERGED)
        }
    }
}

pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    ExitCode::from(dispatch(Cli::parse()))
}

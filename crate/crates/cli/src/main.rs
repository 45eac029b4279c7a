//! `sl3k`: evaluate, enumerate and verify `SL(3, Z)` Kloosterman sums.

mod config;
mod enumerate;
mod output;
mod sum;
mod table;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sl3_kloosterman::par::{self, Mode};

use config::SweepConfig;
use output::Format;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed,
    Io(std::io::Error),
}

impl From<sl3_kloosterman::Error> for CliError {
    fn from(e: sl3_kloosterman::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "sl3k", version, about = "Exact SL(3,Z) Kloosterman sums")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, env = "SL3K_JOBS")]
    pub jobs: Option<usize>,
    /// TOML file with sweep defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Print canonical cyclotomic coefficients.
    #[arg(long, global = true)]
    pub exact: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one exponential sum.
    Sum(sum::SumArgs),
    /// Stream cosets, strata, Plücker sextuples or Kuznetsov indices as JSON lines.
    Enumerate(enumerate::EnumerateArgs),
    /// Run a verification suite; exit 1 on the first failing check.
    Verify(verify::VerifyArgs),
    /// Tabulate sums over a grid of moduli and characters.
    Table(table::TableArgs),
}

/// Resolved global settings after merging the config file.
pub struct Ctx {
    pub cfg: SweepConfig,
    format: Option<Format>,
    pub exact: bool,
    pub seed: u64,
    pub jobs: usize,
}

impl Ctx {
    fn new(g: &Global) -> Result<Self, CliError> {
        let cfg = match &g.config {
            Some(p) => SweepConfig::load(p)?,
            None => SweepConfig::default(),
        };
        Ok(Self {
            format: g.format.or(cfg.format),
            exact: g.exact,
            seed: g.seed.or(cfg.seed).unwrap_or(0),
            jobs: g.jobs.or(cfg.jobs).unwrap_or(0),
            cfg,
        })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn mode(&self) -> Mode {
        if self.jobs == 1 {
            Mode::Sequential
        } else {
            Mode::Auto
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Ctx::new(&cli.global)?;
    par::with_threads(ctx.jobs, || {
        let mut out = std::io::BufWriter::new(std::io::stdout());
        let r = match &cli.command {
            Command::Sum(a) => sum::run(&ctx, a, &mut out),
            Command::Enumerate(a) => enumerate::run(&ctx, a, &mut out),
            Command::Verify(a) => verify::run(&ctx, a, &mut out),
            Command::Table(a) => table::run(&ctx, a, &mut out),
        };
        out.flush()?;
        r
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

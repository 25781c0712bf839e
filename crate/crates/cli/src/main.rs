//! `spin-transfer`: command-line access to the chain computations.
//!
//! Exit status: 0 success, 1 invalid input, 2 verification failure,
//! 3 numeric or horizon failure.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

pub const THREADS_ENV: &str = "SPIN_TRANSFER_THREADS";

#[derive(Debug, Parser)]
#[command(name = "spin-transfer", version, about = "State transfer along alternating XY spin chains")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,

    /// Write the table here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(long, short, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ChainArgs {
    /// Number of spins N.
    #[arg(long = "n")]
    pub n_sites: usize,

    /// Coupling ratio delta = D2 / D1.
    #[arg(long)]
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct DeltaRange {
    #[arg(long, default_value_t = 2.0)]
    pub delta_lo: f64,

    #[arg(long, default_value_t = 3.0)]
    pub delta_hi: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum with provenance and residuals against the numeric solver.
    Eigs {
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Sampled transfer probability P_k(t); columns d1_t,probability.
    Curve {
        #[command(flatten)]
        chain: ChainArgs,
        /// Target node k (defaults to N).
        #[arg(long)]
        node: Option<usize>,
        #[arg(long, default_value_t = 30.0)]
        tmax: f64,
        #[arg(long, default_value_t = 3000)]
        samples: usize,
    },
    /// Ratio maximizing the first-peak probability.
    Optimize {
        #[arg(long = "n")]
        n_sites: usize,
        #[command(flatten)]
        range: DeltaRange,
    },
    /// Ratio maximizing the probability at a fixed time.
    FixedTime {
        #[arg(long = "n")]
        n_sites: usize,
        /// Transfer time D1 t.
        #[arg(long = "t")]
        time: f64,
        #[command(flatten)]
        range: DeltaRange,
    },
    /// First peaks at one ratio over several chain lengths.
    Table1 {
        #[arg(long)]
        delta: f64,
        #[arg(long = "n", value_delimiter = ',', num_args = 1..)]
        n_list: Vec<usize>,
    },
    /// Perfect-transfer parameters of the four-site chain.
    Ideal4 {
        /// Largest product ab of the half-period multiples.
        #[arg(long, default_value_t = 100)]
        max_product: u64,
    },
    /// Analytic cap on the transfer probability of odd chains.
    Bound {
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Oracle and invariant suite; exits 2 on the first violation.
    Verify,
}

pub enum Failure {
    Validation(anyhow::Error),
    Verification(String),
    Numeric(anyhow::Error),
}

impl From<spin_transfer::Error> for Failure {
    fn from(e: spin_transfer::Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.into())
        } else {
            Failure::Numeric(e.into())
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Verification(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        Failure::Validation(anyhow::anyhow!("{THREADS_ENV}={raw:?} is not a worker count"))
    })?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Validation(e.into()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let outcome = commands::dispatch(&cli.command)?;

    let sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(File::create(path).map_err(|e| {
            Failure::Validation(anyhow::anyhow!("cannot create {}: {e}", path.display()))
        })?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    outcome
        .table
        .write(cli.format, &mut sink)
        .and_then(|_| sink.flush().map_err(Into::into))
        .map_err(Failure::Validation)?;

    match outcome.deferred {
        Some(failure) => Err(failure),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Validation(e) => eprintln!("error: {e:#}"),
                Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
                Failure::Numeric(e) => eprintln!("numeric failure: {e:#}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}

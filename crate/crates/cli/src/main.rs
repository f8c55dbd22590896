//! `cohere`: majorization-lattice tools for coherence transformations.

mod commands;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coherence_lattice::{Exact, Mode};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "cohere", version, about = "Majorization-lattice tools for probabilistic coherence transformations")]
struct Cli {
    /// Numeric mode: exact rationals or f64 with absolute tolerance 1e-12.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Float)]
    mode: ModeArg,
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for `simulate`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trial count for `simulate`.
    #[arg(long, global = true, default_value_t = 10_000)]
    trials: usize,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ProtocolArg {
    Greedy,
    Thrifty,
    Both,
}

/// Vectors and matrices are inline JSON or paths to JSON files.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Majorization order between two vectors.
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Greatest lower bound of a set of vectors.
    Meet {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<String>,
    },
    /// Least upper bound of a set of vectors.
    Join {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<String>,
    },
    /// Ratio ladder and optimal success probability for psi -> phi.
    Ladder {
        #[arg(long)]
        psi: String,
        #[arg(long)]
        phi: String,
    },
    /// Greedy and/or thrifty protocol plans.
    Plan {
        #[arg(long, value_enum, default_value_t = ProtocolArg::Both)]
        protocol: ProtocolArg,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        phi: String,
    },
    /// Seeded Monte Carlo run of the protocols.
    Simulate {
        #[arg(long, value_enum, default_value_t = ProtocolArg::Both)]
        protocol: ProtocolArg,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        phi: String,
        /// Include the per-trial outcomes in the report.
        #[arg(long)]
        record_outcomes: bool,
        /// Run trials on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Deterministic feasibility and joint plan for a mixed state rho -> sigma.
    MixedCheck {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        sigma: String,
        /// 1-based index blocks, e.g. `[[1,2],[3,4]]`; searched when omitted.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Common resource state for a set of targets, and ensemble obtainability.
    EnsembleOcr {
        #[arg(long)]
        psi: String,
        #[arg(long, num_args = 1.., required = true)]
        targets: Vec<String>,
        /// Ensemble weights, one per target.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Probabilistic conversion of coherence into entanglement.
    EntConvert {
        #[arg(long)]
        psi: String,
        /// Schmidt coefficients of the target entangled state.
        #[arg(long)]
        lambda: String,
        /// Include the d^2 amplitudes of the embedded failure state.
        #[arg(long)]
        materialize: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed input: exit code 2.
    Usage(String),
    /// The input was well formed but the request is invalid: exit code 1.
    Domain(coherence_lattice::Error),
}

impl From<coherence_lattice::Error> for CliError {
    fn from(e: coherence_lattice::Error) -> Self {
        match e {
            coherence_lattice::Error::Parse(msg) => CliError::Usage(msg),
            other => CliError::Domain(other),
        }
    }
}

/// A command result rendered either as JSON or as text.
pub struct Output {
    pub json: Value,
    pub text: String,
}

pub struct Globals {
    pub seed: u64,
    pub trials: usize,
}

/// Inline JSON when the argument looks like JSON, otherwise a file path.
pub fn load(arg: &str) -> Result<Value, CliError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid JSON in {arg}: {e}")))
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, format!("{body}\n")).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        // a closed pipe (e.g. `| head`) is not an error worth reporting
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let globals = Globals { seed: cli.seed, trials: cli.trials };
    let mode = match cli.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Float => Mode::Float,
    };
    let result = match mode {
        Mode::Exact => commands::run::<Exact>(&cli.command, &globals),
        Mode::Float => commands::run::<f64>(&cli.command, &globals),
    };
    let result = result.and_then(|output| {
        let body = if cli.json {
            let mut doc = serde_json::Map::new();
            doc.insert("schema_version".into(), coherence_lattice::SCHEMA_VERSION.into());
            doc.insert("command".into(), commands::name(&cli.command).into());
            doc.insert("mode".into(), mode.as_str().into());
            if let Value::Object(fields) = output.json {
                doc.extend(fields);
            }
            serde_json::to_string_pretty(&Value::Object(doc)).expect("documents are plain data")
        } else {
            output.text
        };
        emit(&cli.out, &body)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

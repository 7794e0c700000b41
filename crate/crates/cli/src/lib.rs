//! Command-line front end for `qcorr`.
//!
//! ```text
//! qcorr table1
//! qcorr fig2 --kappa 0.5 --nmax 64 --grid 200 [--out fig2.csv]
//! qcorr tripartite
//! qcorr classify (--builtin NAME | --state FILE) [--observable FILE] [--seed N] [--restarts N] [--out FILE]
//! ```
//!
//! Exit codes: 0 on success, 2 for input errors, 3 for numerical failures.
//! `QCORR_TOL` overrides the solver tolerance (default `1e-10`).

pub mod commands;
pub mod error;
pub mod format;
pub mod input;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qcorr", version, about = "Witness bounds for coherence, entanglement and exchange symmetry")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bounds for the projectors onto the two-qudit examples.
    Table1 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expectation of |χ⟩⟨χ| under dephasing, with all bounds, as CSV.
    Fig2 {
        #[arg(long, default_value_t = 0.5)]
        kappa: f64,
        #[arg(long, default_value_t = qcorr::states::DEFAULT_N_MAX)]
        nmax: usize,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Γ values for the three-qudit examples.
    Tripartite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full bounds report for one state as JSON.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// psi1_0 … psi5_minus, tmsv or dephased_tmsv.
    #[arg(long, required_unless_present = "state", conflicts_with = "state")]
    pub builtin: Option<String>,
    /// JSON file with "amplitudes" or "matrix".
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// JSON file for L; defaults to the projector onto the input state.
    #[arg(long)]
    pub observable: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0.5)]
    pub kappa: f64,
    #[arg(long = "delta-phi", default_value_t = 0.0)]
    pub delta_phi: f64,
    #[arg(long, default_value_t = qcorr::states::DEFAULT_N_MAX)]
    pub nmax: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Table1 { out } => emit(&commands::table1()?, out.as_deref()),
        Command::Tripartite { seed, restarts, out } => emit(&commands::tripartite(seed, restarts)?, out.as_deref()),
        Command::Fig2 { kappa, nmax, grid, out } => {
            let fig = commands::fig2(kappa, nmax, grid)?;
            emit(&fig.csv, out.as_deref())?;
            let note = match fig.threshold {
                Some(t) => format!(
                    "threshold delta_phi* = {} (approximate; <L> = gsep_plus = {})\n",
                    format::g12(t),
                    format::g12(fig.gsep_plus)
                ),
                None => format!("no crossing of gsep_plus = {} on [0, pi]\n", format::g12(fig.gsep_plus)),
            };
            if out.is_some() {
                print!("{note}");
            } else {
                eprint!("{note}");
            }
            Ok(())
        }
        Command::Classify(args) => {
            let report = commands::run_classify(&commands::ClassifyRequest {
                builtin: args.builtin,
                state: args.state,
                observable: args.observable,
                seed: args.seed,
                restarts: args.restarts,
                kappa: args.kappa,
                delta_phi: args.delta_phi,
                n_max: args.nmax,
            })?;
            emit(&report.to_json(), args.out.as_deref())
        }
    }
}

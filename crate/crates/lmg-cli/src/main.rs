//! `lmg` — command-line front end for the LMG quench simulator.
//!
//! Subcommands: `spectrum`, `quench`, `sweep`, `scaling`, `semiclassics`,
//! `reproduce <fig>`. Every run that writes files also writes a
//! `manifest.json` echoing the full configuration; identical manifests
//! produce identical data files. Exit codes: 0 success, 2 parameter error,
//! 3 numerical failure.

mod commands;
mod figures;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lmg_core::io::OutputFormat;
use lmg_core::{InitialStateSpec, LmgError};
use num_complex::Complex64;

#[derive(Parser)]
#[command(
    name = "lmg",
    version,
    about = "Exact-diagonalization quench studies of the LMG model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues over an h grid (parity-tagged) plus a density of states at fixed h.
    Spectrum(SpectrumArgs),
    /// One sudden quench h_i -> h_f: work distribution, moments, entropy, survival.
    Quench(QuenchArgs),
    /// Scan observables over an h_f grid, system sizes and state kinds.
    Sweep(SweepArgs),
    /// Sweep plus a log2(N) fit of the entropy maximum.
    Scaling(SweepArgs),
    /// Closed-form coherent-state predictions for a quench protocol.
    Semiclassics(SemiclassicsArgs),
    /// Emit the data series behind a bundled figure preset (fig1 .. fig6c).
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Output directory (created if missing).
    #[arg(long, default_value = "lmg-out")]
    out: PathBuf,
    /// Tabular output encoding.
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Number of spins N (even).
    #[arg(long)]
    n: usize,
    /// h grid for the spectrum file, as a:b:step (inclusive ends).
    #[arg(long, default_value = "0:1.5:0.01")]
    grid: Grid,
    /// Field at which the density of states is evaluated.
    #[arg(long, default_value_t = 0.5)]
    h: f64,
    /// Symmetry-breaking bias.
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    /// Histogram bin width; default (E_max - E_min)/sqrt(D).
    #[arg(long)]
    bin_width: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct QuenchArgs {
    #[arg(long)]
    n: usize,
    /// Initial field h_i.
    #[arg(long)]
    hi: f64,
    /// Final field h_f.
    #[arg(long)]
    hf: f64,
    /// Symmetry-breaking bias; with fsb states a nonzero bias selects the
    /// biased-ground-state preparation.
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    /// Initial state: sym | sym-excited:k | fsb+ | fsb- | sup:cp,cm.
    #[arg(long, value_parser = parse_state, default_value = "sym")]
    state: InitialStateSpec,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// System sizes, comma separated (even).
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long)]
    hi: f64,
    /// h_f grid as a:b:step; default is 0.05 steps refined to 0.01 near h_f^c.
    #[arg(long)]
    grid: Option<Grid>,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    /// State kinds (repeat the flag for several).
    #[arg(long = "state", value_parser = parse_state, default_values = ["sym"])]
    states: Vec<InitialStateSpec>,
    /// Also record the survival ceiling and revival period per cell.
    #[arg(long, default_value_t = false)]
    survival: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SemiclassicsArgs {
    #[arg(long)]
    hi: f64,
    #[arg(long)]
    hf: f64,
    #[arg(long)]
    n: usize,
    /// Write semiclassics.json (+ manifest) instead of printing to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Figure id: fig1, fig2, fig2a..fig2c, fig3.., fig4, fig5, fig6.
    figure: String,
    #[command(flatten)]
    output: OutputArgs,
}

/// `a:b:step` grid, inclusive of both ends (within 1e-9 slack).
#[derive(Debug, Clone)]
struct Grid(Vec<f64>);

impl std::str::FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must be a:b:step, got `{s}`"));
        }
        let a: f64 = parts[0].parse().map_err(|e| format!("{e}"))?;
        let b: f64 = parts[1].parse().map_err(|e| format!("{e}"))?;
        let step: f64 = parts[2].parse().map_err(|e| format!("{e}"))?;
        if step.is_nan() || step <= 0.0 || b < a {
            return Err(format!("grid `{s}` must have b >= a and step > 0"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        Ok(Grid((0..count).map(|i| a + step * i as f64).collect()))
    }
}

fn parse_state(s: &str) -> Result<InitialStateSpec, String> {
    if s == "sym" {
        return Ok(InitialStateSpec::SymmetricGround);
    }
    if s == "fsb+" {
        return Ok(InitialStateSpec::FsbPlus);
    }
    if s == "fsb-" {
        return Ok(InitialStateSpec::FsbMinus);
    }
    if let Some(k) = s.strip_prefix("sym-excited:") {
        let level: usize = k
            .parse()
            .map_err(|e| format!("bad excited level `{k}`: {e}"))?;
        return Ok(InitialStateSpec::SymmetricExcited { level });
    }
    if let Some(rest) = s.strip_prefix("sup:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(format!("sup takes two coefficients, got `{rest}`"));
        }
        let cp: f64 = parts[0].parse().map_err(|e| format!("{e}"))?;
        let cm: f64 = parts[1].parse().map_err(|e| format!("{e}"))?;
        return Ok(InitialStateSpec::Superposition {
            c_plus: Complex64::new(cp, 0.0),
            c_minus: Complex64::new(cm, 0.0),
        });
    }
    Err(format!(
        "unknown state `{s}` (expected sym | sym-excited:k | fsb+ | fsb- | sup:cp,cm)"
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(args) => commands::cmd_spectrum(&args),
        Command::Quench(args) => commands::cmd_quench(&args),
        Command::Sweep(args) => commands::cmd_sweep(&args, false),
        Command::Scaling(args) => commands::cmd_sweep(&args, true),
        Command::Semiclassics(args) => commands::cmd_semiclassics(&args),
        Command::Reproduce(args) => figures::cmd_reproduce(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 = parameter error, 3 = numerical failure, 1 = I/O and everything else.
fn exit_code(e: &LmgError) -> u8 {
    match e {
        LmgError::InvalidParams(_)
        | LmgError::BiasPresent { .. }
        | LmgError::DimensionMismatch { .. }
        | LmgError::StatePrep(_)
        | LmgError::Domain(_)
        | LmgError::InsufficientData(_)
        | LmgError::UnknownFigure(_) => 2,
        LmgError::Convergence { .. } | LmgError::ResidualBound { .. } => 3,
        LmgError::Io(_) => 1,
    }
}

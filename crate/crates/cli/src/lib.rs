//! Argument parsing and command dispatch for the `qtorus` binary.
//!
//! Exit status: 0 on success, 1 when a mathematical check fails, 2 for
//! invalid input.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use qtorus_core::{CycParams, Error as CoreError, OddPrime, Sl2Matrix};

mod commands;
mod render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qtorus",
    version,
    about = "Exact SL2(Z) conjugating matrices for the quantum torus at an odd prime root of unity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RingArgs {
    /// Odd prime order of the root of unity
    #[arg(long)]
    pub n: i64,
    /// q = zeta^K, K coprime to n
    #[arg(long = "q-exp", default_value_t = 1, allow_hyphen_values = true)]
    pub q_exp: i64,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub ring: RingArgs,
    /// Entries a,b,c,d of B with ad - bc = 1
    #[arg(long, allow_hyphen_values = true)]
    pub mat: String,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the conjugating matrix C(B) as an exponent table and the path used
    Conj(MatrixArgs),
    /// Full report: C, K_B, trace, determinant, normalization, conjugation check
    Analyze(MatrixArgs),
    /// Exact trace, K_B, its Legendre symbol and the closed-form comparison
    Trace(MatrixArgs),
    /// Exact determinant, modulus check and numeric phase
    Det(MatrixArgs),
    /// Generators L, M of the representation, matrix-unit witness, fixedness
    Rep {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long = "rho-exp", default_value_t = 0, allow_hyphen_values = true)]
        rho_exp: i64,
        #[arg(long)]
        json: bool,
    },
    /// Scalar lambda with C(B1) C(B2) = lambda C(B1 B2)
    Cocycle {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, allow_hyphen_values = true)]
        mat1: String,
        #[arg(long, allow_hyphen_values = true)]
        mat2: String,
        #[arg(long)]
        json: bool,
    },
    /// Analyze pseudo-random products of S and T
    Scan {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum word length in S and T
        #[arg(long = "max-len", default_value_t = 12)]
        max_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the invariant suite at n = 3, 5, 7
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

impl RingArgs {
    pub fn params(&self) -> Result<CycParams, CoreError> {
        OddPrime::new(self.n)?;
        CycParams::new(self.n, self.q_exp)
    }
}

pub fn parse_matrix(s: &str) -> Result<Sl2Matrix, CoreError> {
    s.parse()
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_INVALID,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match commands::dispatch(&cli.command, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(commands::Failure::Invalid(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
        Err(commands::Failure::Defect(e)) => {
            let _ = writeln!(err, "error: internal check failed: {e}");
            EXIT_CHECK_FAILED
        }
        Err(commands::Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CHECK_FAILED
        }
    }
}

mod commands;
mod out;
mod poly;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hecke_core::{Budget, HeckeError};

use crate::out::Format;

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "Exact Hecke algebra computations for GL(3) and GL(2)")]
pub struct Cli {
    /// Emit a machine-readable JSON report
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV rows
    #[arg(long, global = true)]
    csv: bool,
    /// Worker threads for enumeration (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on candidate evaluations per enumeration
    #[arg(long, global = true, default_value_t = Budget::DEFAULT.0)]
    budget: u64,
    /// Seed for randomized inputs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct TypeArgs {
    /// Matrix size, 2 or 3
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Prime
    #[arg(long)]
    p: u64,
    /// Nondecreasing exponents, e.g. 0,1,2
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<u32>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideArg {
    Right,
    Left,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    TheoremA,
    CorollaryB,
    Appendix,
    Hall,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degree of Λ diag(p^α) Λ
    Degree {
        #[command(flatten)]
        t: TypeArgs,
        /// Fail (exit 1) when a known closed form disagrees
        #[arg(long)]
        check: bool,
    },
    /// Sorted coset representatives of Λ diag(p^α) Λ
    Cosets {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
        /// Compare against the explicit table
        #[arg(long)]
        check: bool,
    },
    /// Product of two double cosets
    Product {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        p: u64,
        /// Prime of the second factor (default: p)
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha1: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha2: Vec<u32>,
        /// Audit the multiplicities and compare with known closed forms
        #[arg(long)]
        check: bool,
    },
    /// Hall coefficients g^λ_{μν}(p), partitions weakly decreasing
    Hall {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        nu: Vec<u32>,
        /// Single λ; all nonzero coefficients when omitted
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<u32>>,
    },
    /// Run verification suites
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        primes: Vec<u64>,
        /// Extra (p, q) pairs for the linearizations, e.g. 2:3
        #[arg(long, value_parser = parse_pair)]
        cross: Vec<(u64, u64)>,
    },
    /// Interpolate the degree of diag(p^α) as a polynomial in p
    Fit {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Compare against the closed form where one is known
        #[arg(long)]
        check: bool,
    },
    /// Amplifier coefficients, amplitude and the splitting bound
    Amplifier {
        /// Length parameter L
        #[arg(long)]
        length: u64,
        /// Reference table c0 (default: GL(2) surrogate drawn from --seed)
        #[arg(long)]
        c0: Option<PathBuf>,
        /// Table c evaluated against α (default: c0)
        #[arg(long)]
        table: Option<PathBuf>,
        /// Write the reference table used to this file
        #[arg(long)]
        write_c0: Option<PathBuf>,
    },
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected p:q, got '{s}'"))?;
    let a = a.parse().map_err(|_| format!("bad prime '{a}'"))?;
    let b = b.parse().map_err(|_| format!("bad prime '{b}'"))?;
    Ok((a, b))
}

/// Command failure with its exit status.
#[derive(Debug)]
pub enum Failure {
    Hecke(HeckeError),
    Usage(String),
}

impl From<HeckeError> for Failure {
    fn from(e: HeckeError) -> Self {
        Failure::Hecke(e)
    }
}

const EXIT_VERIFY: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let format = match (cli.json, cli.csv) {
        (true, _) => Format::Json,
        (_, true) => Format::Csv,
        _ => Format::Text,
    };
    match commands::run(&cli) {
        Ok(output) => {
            if let Err(e) = output.write(format) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            if output.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Hecke(e)) => {
            eprintln!("error: {e}");
            if e.is_infeasible() {
                if matches!(e, HeckeError::BudgetExceeded { .. }) {
                    eprintln!("hint: raise the cap with --budget");
                }
                ExitCode::from(EXIT_INFEASIBLE)
            } else if matches!(e, HeckeError::Inconsistency(_)) {
                ExitCode::from(EXIT_VERIFY)
            } else {
                ExitCode::from(EXIT_USAGE)
            }
        }
    }
}

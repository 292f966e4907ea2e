//! `tridec` command-line front end.

pub mod commands;
pub mod doc;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_MALFORMED: i32 = 65;
pub const EXIT_IO: i32 = 74;

pub const REPORT_SCHEMA: &str = "tridec.report/1";

#[derive(Debug, Parser)]
#[command(name = "tridec", version, about = "Decoupling tests, invariants and canonical forms for symmetric cubic tensors")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Include wall-clock timing (makes reports nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a basis of polynomial invariants.
    Invariants {
        #[arg(long, value_enum)]
        basis: Basis,
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Promote floating-point input to exact rationals.
        #[arg(long)]
        exact: bool,
    },
    /// Decide decoupleability and print the residual table.
    Classify {
        #[arg(long, value_enum)]
        mode: ClassifyMode,
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, default_value_t = tridec_core::scalar::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        exact: bool,
    },
    /// Recover orthogonal maps to the reduced form.
    Recover {
        #[arg(long, value_enum)]
        mode: RecoverMode,
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long)]
        exact: bool,
    },
    /// Molien series coefficients of the n = 2 representation.
    Molien {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long = "max-degree")]
        max_degree: usize,
        /// Quadrature nodes on the circle.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Draw a tensor from a seeded orbit sampler.
    Sample {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Rational seed form and rational map.
        #[arg(long)]
        exact: bool,
    },
    /// Numerical orbit search for the nearest reduced pattern.
    Oracle {
        #[arg(long, value_enum)]
        pattern: PatternArg,
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Number of random starts per determinant sheet.
        #[arg(long, default_value_t = 32)]
        budget: usize,
        #[arg(long)]
        seed: u64,
        /// Iterations per start.
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Run the seeded property battery.
    Verify {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        cases: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    So2,
    O2,
    Oa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassifyMode {
    N2,
    Fd3,
    Pd3,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecoverMode {
    N2,
    Generic,
    Pd3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    So2,
    O2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Fd,
    Pd,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PatternArg {
    Fd,
    Pd,
}

/// A failure that ends the run without a report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Malformed(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Malformed(_) => EXIT_MALFORMED,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Malformed(m) | Failure::Io(m) => m,
        }
    }
}

impl From<doc::DocError> for Failure {
    fn from(e: doc::DocError) -> Self {
        Failure::Malformed(e.0)
    }
}

/// Raw bytes of `--in`; `-` reads standard input.
pub fn read_input(path: &std::path::Path) -> Result<Vec<u8>, Failure> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Failure::Io(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| Failure::Io(format!("reading {}: {e}", path.display())))
    }
}

fn emit(report: &Value, out: Option<&std::path::Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("writing {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("writing standard output: {e}")))
        }
    }
}

/// Parse `argv`, run the command, write the report and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let start = Instant::now();
    match commands::execute(&cli.command) {
        Ok((mut report, code)) => {
            if cli.timing {
                report["timing_ms"] = serde_json::json!(start.elapsed().as_secs_f64() * 1e3);
            }
            match emit(&report, cli.out.as_deref()) {
                Ok(()) => code,
                Err(f) => {
                    eprintln!("tridec: {}", f.message());
                    f.code()
                }
            }
        }
        Err(f) => {
            eprintln!("tridec: {}", f.message());
            f.code()
        }
    }
}

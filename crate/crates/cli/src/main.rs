//! `kuf`: construct and verify k-uniform states, orthogonal arrays, maskers
//! and pure codes; print existence tables.

mod commands;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "kuf", version, about = "k-uniform states, orthogonal arrays and quantum maskers")]
pub struct Cli {
    /// Worker threads for verification loops (0 picks the core count).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Seed for sampled sanity checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a state and write it to a file.
    #[command(subcommand)]
    Construct(Construct),
    /// Check a state, array or code file.
    #[command(subcommand)]
    Verify(Verify),
    /// Party-wise tensor product of two states with equal party counts.
    Compose {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Uniformity level to verify on the product.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Build or check a k-uniform masker bundle.
    #[command(subcommand)]
    Mask(Mask),
    /// Pure quantum error-correcting code checks.
    #[command(subcommand)]
    Qecc(Qecc),
    /// Existence grid for k-uniform states.
    Table {
        #[arg(long)]
        k: usize,
        /// Local dimensions, `a..b` (inclusive) or a single value.
        #[arg(long, value_parser = parse_range::<u32>)]
        d: (u32, u32),
        /// Party counts, `a..b` (inclusive) or a single value.
        #[arg(long = "N", value_parser = parse_range::<usize>)]
        n: (usize, usize),
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// Constructive rule from the existence catalog.
    Kuniform {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        k: usize,
    },
    /// Generalized GHZ state (1-uniform).
    Ghz {
        #[command(flatten)]
        shape: Shape,
    },
    /// Trimmed extended Reed-Solomon array over GF(q).
    Mds {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the irredundant orthogonal array.
        #[arg(long)]
        oa: Option<PathBuf>,
        /// Also write the generator of the untrimmed code.
        #[arg(long)]
        code: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Shape {
    #[arg(long)]
    pub d: u32,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// k-uniformity by exact partial traces.
    State {
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    /// Strength and irredundancy of an orthogonal array.
    Oa {
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    /// Distances of a linear code; with `--k`, whether its array is an IrOA of strength k.
    Code {
        #[arg(long)]
        k: Option<usize>,
        file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum Mask {
    /// Split a (k+1)-uniform state at one party into a k-uniform masker.
    Build {
        #[arg(long)]
        state: PathBuf,
        /// 0-based party carrying the input qudit.
        #[arg(long, default_value_t = 0)]
        split: usize,
        #[arg(long)]
        k: usize,
        /// Bundle directory for the images and manifest.json.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Re-check a masker bundle by cross reductions and seeded sampling.
    Verify {
        bundle: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Whether strong masking into N qudits of dimension d is possible.
    Feasible {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        d: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum Qecc {
    /// Knill-Laflamme conditions for an orthonormal basis, all errors of weight < delta.
    Verify {
        #[arg(long)]
        delta: usize,
        #[arg(required = true)]
        basis: Vec<PathBuf>,
    },
}

fn parse_range<T: std::str::FromStr + PartialOrd + Copy>(s: &str) -> Result<(T, T), String>
where
    T::Err: std::fmt::Display,
{
    let num = |x: &str| x.trim().parse::<T>().map_err(|e| format!("`{x}`: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

/// Arguments echoed in the report: everything but `--threads`, which does
/// not change results.
fn echo(args: &[OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        let a = a.to_string_lossy();
        if skip {
            skip = false;
        } else if a == "--threads" {
            skip = true;
        } else if !a.starts_with("--threads=") {
            out.push(a.into_owned());
        }
    }
    out
}

fn main() -> ExitCode {
    let args: Vec<OsString> = std::env::args_os().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("kuf: error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli, echo(&args)) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("kuf: error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod ranges;

use ranges::{PrimeRange, TSelection};
use toric_np::oracle::SumAlgorithm;

/// Predicted and exact Newton polygons for x^n + y + t/(xy) over F_p.
#[derive(Parser, Debug)]
#[command(name = "toric-np", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for the sum engines (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Exit non-zero on assumption failures (3) or prediction mismatches (4).
    #[arg(long, global = true)]
    pub strict: bool,
    /// Allow oracle runs over fields larger than 10^6 elements.
    #[arg(long, global = true)]
    pub heavy: bool,
    /// Memory budget for the convolution engine, in GB.
    #[arg(long, global = true, value_name = "GB")]
    pub mem_budget: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hodge numbers and Hodge polygon.
    Hodge {
        #[arg(long)]
        n: u32,
    },
    /// Predicted Newton polygon over F_p.
    Predict {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u64,
    },
    /// Determinant scan, prime bounds and the factorial condition.
    Assumptions {
        #[arg(long)]
        n: u32,
        /// A prime or an inclusive range `a..b`.
        #[arg(long)]
        p: Option<PrimeRange>,
    },
    /// Exact L-polynomial and Newton polygon from toric sums.
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u64,
        /// A residue, an inclusive range `a..b`, or `all`.
        #[arg(long)]
        t: TSelection,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Convolution)]
        algorithm: AlgorithmArg,
        /// Largest extension degree for direct sums (at least n+1 is used).
        #[arg(long)]
        max_k_budget: Option<usize>,
    },
    /// Predicted vs. exact Newton polygon.
    Compare {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Convolution)]
        algorithm: AlgorithmArg,
    },
    /// Maximal predicted-vs-Hodge slope deviation over a range of primes.
    ScanLimit {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: PrimeRange,
    },
    /// Built-in property and cross-algorithm checks.
    Selftest,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmArg {
    Naive,
    Convolution,
}

impl From<AlgorithmArg> for SumAlgorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Naive => SumAlgorithm::Naive,
            AlgorithmArg::Convolution => SumAlgorithm::Convolution,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod cmd;

/// p-adic valuations of Fibonacci numbers, p-regular representations and
/// p-kernel ranks.
#[derive(Debug, Parser)]
#[command(name = "fibreg", version)]
struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Lengyel,
    Matrix,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// nu_p(F_n) by one or all methods
    Valuation {
        p: u64,
        n: u64,
        #[arg(long, value_enum, default_value = "lengyel")]
        method: Method,
    },
    /// Restricted period alpha(m) and Pisano period pi(m)
    Periods { m: u64 },
    /// Build (or load) the representation of nu_p(F_{n+1}) and verify it
    Rep {
        /// Prime base; ignored with --load
        p: Option<u64>,
        /// Write the representation as JSON
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Read a representation from JSON instead of building one
        #[arg(long)]
        load: Option<std::path::PathBuf>,
        /// Largest n for relation and evaluation checks
        #[arg(long = "verify", default_value_t = 1000)]
        n_max: u64,
    },
    /// Empirical p-kernel rank
    Rank {
        p: Option<u64>,
        /// Every prime up to this bound
        #[arg(long, conflicts_with = "p")]
        scan: Option<u64>,
        /// Prefix length (default max(1024, 8 p alpha(p)))
        #[arg(long = "L")]
        truncation: Option<usize>,
        #[arg(long, default_value_t = 16)]
        max_depth: u32,
        /// Times the prefix length is doubled to test stabilization
        #[arg(long, default_value_t = 2)]
        doublings: u32,
        /// Also expand the children of dependent nodes once
        #[arg(long)]
        cross_check: bool,
    },
    /// Wall predicate nu_p(F_alpha(p)) = 1 versus pi(p^2) != pi(p)
    Wall {
        p: Option<u64>,
        #[arg(long, conflicts_with = "p")]
        scan: Option<u64>,
    },
    /// Relation suites, three-way valuation sweep and class-specific checks
    Verify {
        p: u64,
        #[arg(long, default_value_t = 1000)]
        n_max: u64,
        /// Random digit-sum pairs to test (1,4 mod 5 primes only)
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Stable process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Usage = 1,
    Verification = 2,
    Violation = 3,
}

fn configure_threads() {
    if let Some(n) = std::env::var("FIBREG_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                Exit::Usage
            } else {
                Exit::Success
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    configure_threads();
    let result = match cli.command {
        Command::Valuation { p, n, method } => cmd::valuation(p, n, method, cli.format),
        Command::Periods { m } => cmd::periods(m, cli.format),
        Command::Rep {
            p,
            out,
            load,
            n_max,
        } => cmd::rep(p, out, load, n_max, cli.format),
        Command::Rank {
            p,
            scan,
            truncation,
            max_depth,
            doublings,
            cross_check,
        } => {
            let config = fibreg::KernelConfig {
                truncation,
                max_depth,
                doublings,
                cross_check,
            };
            cmd::rank(p, scan, &config, cli.format)
        }
        Command::Wall { p, scan } => cmd::wall(p, scan, cli.format),
        Command::Verify {
            p,
            n_max,
            samples,
            seed,
        } => cmd::verify(p, n_max, samples, seed, cli.format),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Exit::Usage as u8)
        }
    }
}

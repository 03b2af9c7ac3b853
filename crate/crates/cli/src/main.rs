use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;

/// Primitive normal elements with primitive quadratic images in characteristic 3.
#[derive(Debug, Parser)]
#[command(name = "ffpn", version)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Factorization cache file.
    #[arg(long, global = true, env = "FFPN_CACHE")]
    cache: Option<PathBuf>,

    /// Checkpoint file for resumable sweeps.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,

    /// Worker threads (defaults to the available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized audit sampling.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct Pair {
    /// Base field size, a power of a prime.
    #[arg(long)]
    q: u64,
    /// Extension degree.
    #[arg(long)]
    m: u32,
}

#[derive(Debug, Args, Clone)]
pub struct Quadratic {
    /// Leading coefficient as comma-separated F_p coordinates.
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    b: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    c: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor an integer, or q^m - 1 when --q and --m are given.
    FactorInt {
        #[arg(long, conflicts_with_all = ["q", "m"], required_unless_present_all = ["q", "m"])]
        n: Option<String>,
        #[arg(long, requires = "m")]
        q: Option<u64>,
        #[arg(long, requires = "q")]
        m: Option<u32>,
        /// Known prime or composite divisors to split on first.
        #[arg(long = "hint")]
        hints: Vec<String>,
    },
    /// Factor x^m - 1 over F_q.
    FactorPoly(Pair),
    /// The basic condition q^{m/2} > 3 W(q^m-1)^2 Omega(x^m-1).
    Check(Pair),
    /// The sieve condition for given core divisors.
    Sieve {
        #[command(flatten)]
        pair: Pair,
        /// Divisor of q^m - 1.
        #[arg(long)]
        d: String,
        /// `full`, `one`, or a comma-separated list of factor degrees.
        #[arg(long, default_value = "full")]
        g: String,
    },
    /// Search for the sieve configuration with the smallest right-hand side.
    AutoSieve {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = ffpn::sieve::AUTO_SIEVE_BUDGET)]
        budget: usize,
    },
    /// Recompute a published table.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// List the primitive normal elements.
    Enumerate(Pair),
    /// Exact count of e1-free, g-free alpha with f(alpha) e2-free.
    Count {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        f: Quadratic,
        /// Divisor of q^m - 1 (default q^m - 1).
        #[arg(long)]
        e1: Option<u64>,
        #[arg(long)]
        e2: Option<u64>,
        /// `full`, `one`, or comma-separated exponents over the factors of x^m - 1.
        #[arg(long, default_value = "full")]
        g: String,
    },
    /// First primitive normal alpha with f(alpha) primitive.
    Witness {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        f: Quadratic,
    },
    /// Sweep every admissible quadratic over F_{q^m}.
    ResolvePair {
        #[command(flatten)]
        pair: Pair,
        /// Maximum number of primitivity probes.
        #[arg(long, default_value_t = ffpn::search::DEFAULT_PROBE_BUDGET)]
        budget: u64,
    },
    /// Orthogonality, indicator and Weil-bound audits.
    CharAudit {
        #[command(flatten)]
        pair: Pair,
        /// Random quadratics per order triple.
        #[arg(long, default_value_t = 100)]
        quadratics: usize,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    match commands::run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("JSON values serialize")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}

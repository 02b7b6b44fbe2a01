//! cornerlab: claim verification, saturation/extremal searches, and
//! coloring audits over F_p x F_p and [n] x [n].
//!
//! Every command emits one JSON document with a `manifest` (command,
//! parameters, seed, results digest) next to its payload. Exit codes:
//! 0 success, 1 check failure, 2 usage error, 3 I/O or file-format error.

mod audit_cmd;
mod density_cmd;
mod manifest;
mod search_cmd;
mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use cornerlab_core::{Domain, Error};
use manifest::OutTarget;

/// A command failure, classed by exit code.
#[derive(Debug)]
pub enum Failure {
    /// A verification check failed (exit 1).
    Check(String),
    /// Arguments were semantically invalid (exit 2).
    Usage(String),
    /// File or stream handling failed, including malformed inputs (exit 3).
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

/// Maps a core error to a usage failure (the common case for argument-level
/// preconditions); checkpoint-file problems are I/O class.
pub fn core_usage(e: Error) -> Failure {
    match e {
        Error::BadCheckpoint(_) => Failure::Io(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

/// Builds the working domain from the mutually exclusive --p/--n pair.
/// p = 2 is called out explicitly: the mod-2 plane has no usable rotation
/// structure (i = -i), so saturation questions degenerate there.
pub fn domain_from(p: Option<u32>, n: Option<u32>) -> Result<Domain, Failure> {
    match (p, n) {
        (Some(2), None) => Err(Failure::Usage(
            Error::InfeasibleDomain("p = 2: the mod-2 plane is rejected, use an odd prime".into())
                .to_string(),
        )),
        (Some(p), None) => Domain::prime_plane(p).map_err(core_usage),
        (None, Some(n)) => Domain::integer_grid(n).map_err(core_usage),
        _ => Err(Failure::Usage(
            "give exactly one of --p (prime plane) or --n (integer grid)".into(),
        )),
    }
}

#[derive(Parser)]
#[command(
    name = "cornerlab",
    version,
    about = "Corner and square configuration searches, saturation checks, and coloring audits"
)]
struct Cli {
    /// Worker threads (fallback: CORNERLAB_THREADS, then all cores).
    /// Results never depend on this; only timings do.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the output document to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchKindArg {
    /// Minimum corner-saturated set (set itself corner-free).
    CornerSat,
    /// Minimum square-saturated set (set itself square-free).
    SquareSat,
    /// Minimum square-covering set (freeness not required).
    SquareCover,
    /// Maximum corner-free set.
    CornerFreeMax,
    /// Maximum square-free set.
    SquareFreeMax,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Exhaustive ascending-cardinality sweep (minimum searches, small domains).
    Exact,
    /// Branch-and-bound with symmetry canonization (minimum searches).
    BranchBound,
    /// Seeded greedy maximal growth (minimum searches; fast, unproved).
    Greedy,
    /// Parallel tabu restarts (maximum searches; fast, unproved).
    Heuristic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FreeKindArg {
    Corner,
    Square,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant battery across all modules; exit 0 iff every check passes.
    VerifyClaims {
        /// Odd primes for the plane-based checks.
        #[arg(long, value_delimiter = ',', default_values_t = vec![3u32, 5, 7, 11])]
        p_list: Vec<u32>,
        /// Grid sides for the integer-grid trend checks.
        #[arg(long, value_delimiter = ',', default_values_t = vec![4u32, 8])]
        grid_list: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for a minimum saturated/covering set or a maximum free set.
    Search {
        #[arg(long, value_enum)]
        kind: SearchKindArg,
        /// Prime plane side (odd prime).
        #[arg(long)]
        p: Option<u32>,
        /// Integer grid side.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Node budget; exhausted budgets downgrade the result to best_found.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Disable symmetry canonization in branch-and-bound.
        #[arg(long)]
        no_canonize: bool,
        /// Periodically write a resumable checkpoint here (branch-bound only).
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Nodes between checkpoint writes.
        #[arg(long, default_value_t = 100_000)]
        checkpoint_interval: u64,
        /// Resume from a checkpoint file written by a previous run.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Audit a two-coloring: monochromatic corner counts, the balanced
    /// decomposition, axis-corner scan, and optional collinear triples.
    AuditColoring {
        /// Coloring JSON file: {"p"|"n": side, "r": colors, "colors": [row-major]}.
        #[arg(long, conflicts_with_all = ["random", "p", "n", "r"])]
        input: Option<PathBuf>,
        /// Generate a uniform random coloring instead of reading one.
        #[arg(long, requires = "r")]
        random: bool,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        /// Number of colors for --random.
        #[arg(long)]
        r: Option<u16>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reporting constant C in the p^3/4 - C*p^{5/2} reference bound.
        #[arg(long)]
        c_constant: Option<f64>,
        /// First step norm for the collinear-triple scan.
        #[arg(long, requires = "b")]
        a: Option<u32>,
        /// Second step norm for the collinear-triple scan.
        #[arg(long, requires = "a")]
        b: Option<u32>,
        /// Run the collinear scan even when a/b is not a quadratic residue.
        #[arg(long)]
        force: bool,
    },
    /// Maximum-free-set sizes and densities across a sweep of domains.
    DensityTable {
        #[arg(long, value_enum)]
        kind: FreeKindArg,
        /// Prime plane sides.
        #[arg(long, value_delimiter = ',')]
        p_list: Vec<u32>,
        /// Integer grid sides.
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<u32>,
        #[arg(long, value_enum, default_value_t = ModeArg::Heuristic)]
        mode: ModeArg,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON carries the manifest inline; CSV emits rows only and prints
        /// the manifest to stderr.
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Build a greedily saturated square-covering set and report the
    /// partial-sumset statistics of its covering pairs.
    KatzTao {
        /// Odd prime, 3 mod 4.
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn init_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("CORNERLAB_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n.filter(|&n| n > 0) {
        // Ignore failure: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let target = match cli.output {
        Some(path) => OutTarget::File(path),
        None => OutTarget::Stdout,
    };
    match cli.command {
        Command::VerifyClaims {
            p_list,
            grid_list,
            seed,
        } => verify::run(&p_list, &grid_list, seed, &target),
        Command::Search {
            kind,
            p,
            n,
            mode,
            budget,
            seed,
            no_canonize,
            checkpoint,
            checkpoint_interval,
            resume,
        } => search_cmd::run(search_cmd::SearchArgs {
            kind,
            p,
            n,
            mode,
            budget,
            seed,
            canonize: !no_canonize,
            checkpoint,
            checkpoint_interval,
            resume,
            target,
        }),
        Command::AuditColoring {
            input,
            random,
            p,
            n,
            r,
            seed,
            c_constant,
            a,
            b,
            force,
        } => audit_cmd::run(audit_cmd::AuditArgs {
            input,
            random,
            p,
            n,
            r,
            seed,
            c_constant,
            a,
            b,
            force,
            target,
        }),
        Command::DensityTable {
            kind,
            p_list,
            n_list,
            mode,
            budget,
            seed,
            format,
        } => density_cmd::run(kind, &p_list, &n_list, mode, budget, seed, format, &target),
        Command::KatzTao { p, seed } => search_cmd::run_katz_tao(p, seed, &target),
    }
}

fn main() {
    let cli = Cli::parse();
    init_threads(cli.threads);
    match run(cli) {
        Ok(()) => {}
        Err(f) => {
            eprintln!("error: {}", f.message());
            std::process::exit(f.code());
        }
    }
}

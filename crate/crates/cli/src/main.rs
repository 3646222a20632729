//! `fuglede`: spectral sets and tiles in finite cyclic groups from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

/// Exact computations with spectral sets and tiles in Z_N.
#[derive(Debug, Parser)]
#[command(name = "fuglede", version)]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for surveys (default: all cores).
    #[arg(long, global = true, value_name = "T")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zero set, prime-power structure, T1/T2, spectrum and tiling complement of a set.
    Analyze {
        /// Set literal such as `12:{0,1,6,7}`.
        set: String,
        /// Node limit for each search.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Classify every subset of Z_N up to translation.
    Survey(SurveyArgs),
    /// Split a multiset vanishing at a primitive N-th root into p- and q-cycles.
    Decompose { set: String },
    /// Check a candidate spectral or tiling pair.
    Verify(VerifyArgs),
    /// Root profile, symmetry check and deficit bounds of a spectral pair.
    Profile { a: String, b: String },
    /// Whether Z_N for N = p^a*q^b is covered by the known bounds.
    Exclude {
        /// Group order written as `p^a*q^b`.
        #[arg(long = "n", value_name = "FACTORED_N")]
        n: String,
    },
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    #[arg(long = "n", value_name = "N")]
    pub n: usize,
    /// Survey only sets of this size.
    #[arg(long, value_name = "K", conflicts_with = "max_size")]
    pub size: Option<usize>,
    /// Survey sizes 1..=K.
    #[arg(long, value_name = "K")]
    pub max_size: Option<usize>,
    /// Identify sets up to x -> ux + v with u a unit.
    #[arg(long)]
    pub affine: bool,
    /// Node limit for each spectrum or complement search.
    #[arg(long, value_name = "NODES", default_value_t = 10_000_000)]
    pub budget: u64,
    /// Cursor file; progress is saved there and resumed from it.
    #[arg(long, value_name = "CURSOR")]
    pub resume: Option<PathBuf>,
    /// Skip the extension-operator checks on spectral pairs.
    #[arg(long)]
    pub no_extensions: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["spectral", "tiling"])))]
pub struct VerifyArgs {
    /// Check that the exponentials indexed by B are orthogonal on A.
    #[arg(long)]
    pub spectral: bool,
    /// Check that A ⊕ B = Z_N.
    #[arg(long)]
    pub tiling: bool,
    pub a: String,
    pub b: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot start {threads} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(commands::run(&cli))
}

//! thetalab: exact Lovasz/Schrijver bounds for G(n,k,L) from the shell.
//!
//! Every command writes a fully deterministic byte stream to stdout; wall
//! clock timings go to stderr so repeated runs stay byte-identical.

mod commands;

use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;
use std::time::Instant;
use thetalab_core::Error;

#[derive(Parser)]
#[command(name = "thetalab", version, about = "Exact spectral bounds for generalized Johnson graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for commands that support it (tables default to csv,
    /// reports to plain text)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Significant digits in decimal approximations
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,

    /// Vertex cap for explicit graph construction; overrides THETALAB_CAP
    #[arg(long, global = true)]
    cap: Option<u64>,

    /// Accepted for pipeline compatibility; no command uses randomness
    #[arg(long, global = true)]
    seedless: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct SpecArgs {
    /// Ground set size
    #[arg(long)]
    n: u64,
    /// Subset size
    #[arg(long)]
    k: u64,
    /// Allowed intersection sizes, comma separated (empty for none)
    #[arg(long = "L", default_value = "")]
    ell: String,
}

#[derive(Subcommand)]
enum Command {
    /// Lovasz number of G(n,k,L), with the closed-form comparison bounds
    Theta {
        #[command(flatten)]
        spec: SpecArgs,
        /// Also print the Schrijver bound
        #[arg(long)]
        sigma: bool,
    },
    /// Schrijver bound of G(n,k,L); shorthand for `theta --sigma`
    Sigma {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Table of both bounds against the leading term over a range of n
    Sweep {
        /// Subset size
        #[arg(long)]
        k: u64,
        /// Allowed intersection sizes, comma separated
        #[arg(long = "L", default_value = "")]
        ell: String,
        /// First n (at least 2k)
        #[arg(long)]
        from: u64,
        /// Last n, inclusive
        #[arg(long)]
        to: u64,
        /// Stride between consecutive n
        #[arg(long, default_value_t = 1)]
        step: u64,
    },
    /// Exhaustive identity suites; nonzero exit on any failure
    Verify {
        /// Largest k exercised (at most 10)
        #[arg(long = "k-max", default_value_t = 6)]
        k_max: u64,
        /// Corrupt one coefficient to prove failures are caught
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Capacity-gap family rows for prime-power q
    Gap {
        /// Prime power defining the family (k = q^2 - 1)
        #[arg(long)]
        q: u64,
        /// Ground set sizes, comma separated
        #[arg(long)]
        n: String,
        /// Node budget for the ground-truth search on tiny instances
        #[arg(long, default_value_t = 1 << 22)]
        budget: u64,
    },
    /// Ground-truth independence number with the sandwich check
    Alpha {
        #[command(flatten)]
        spec: SpecArgs,
        /// Node budget for the branch-and-bound search
        #[arg(long, default_value_t = 1 << 22)]
        budget: u64,
    },
    /// Adjacency listing: one line per vertex, subset then neighbor indices
    DumpGraph {
        #[command(flatten)]
        spec: SpecArgs,
    },
}

/// 0 success, 2 input error, 3 identity-check failure, 4 resource cap,
/// 1 internal fault.
fn exit_for(err: &Error) -> u8 {
    match err {
        Error::InvalidSpec(_)
        | Error::EmptyL
        | Error::SchemePrecondition { .. }
        | Error::NotPrimePower { .. } => 2,
        Error::CapExceeded { .. } => 4,
        Error::ZeroDenominator { .. } | Error::SingularMatrix { .. } => 2,
        Error::Internal(_) => 1,
    }
}

fn vertex_cap(flag: Option<u64>) -> Result<u64, String> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var("THETALAB_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("THETALAB_CAP is not a vertex count: {v:?}")),
        Err(_) => Ok(5000),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = match vertex_cap(cli.cap) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let opts = commands::Options {
        format: match cli.format {
            Some(Format::Csv) => commands::OutputFormat::Csv,
            Some(Format::Json) => commands::OutputFormat::Json,
            None => commands::OutputFormat::Default,
        },
        precision: cli.precision,
        cap,
    };

    let started = Instant::now();
    let outcome = match cli.command {
        Command::Theta { spec, sigma } => commands::theta(&opts, &spec.into(), sigma),
        Command::Sigma { spec } => commands::sigma(&opts, &spec.into()),
        Command::Sweep { k, ell, from, to, step } => {
            commands::sweep(&opts, k, &ell, from, to, step)
        }
        Command::Verify { k_max, corrupt } => commands::verify(&opts, k_max, corrupt),
        Command::Gap { q, n, budget } => commands::gap(&opts, q, &n, budget),
        Command::Alpha { spec, budget } => commands::alpha(&opts, &spec.into(), budget),
        Command::DumpGraph { spec } => commands::dump_graph(&opts, &spec.into()),
    };
    eprintln!("elapsed: {:?}", started.elapsed());

    match outcome {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(commands::Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Core(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_for(&err))
        }
        Err(commands::Failure::CoreWithHint(err, hint)) => {
            eprintln!("error: {err}");
            eprintln!("{hint}");
            ExitCode::from(exit_for(&err))
        }
    }
}

impl From<SpecArgs> for commands::SpecInput {
    fn from(a: SpecArgs) -> Self {
        commands::SpecInput {
            n: a.n,
            k: a.k,
            ell: a.ell,
        }
    }
}

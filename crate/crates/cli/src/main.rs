use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use helly_core::Budget;

mod commands;
mod files;
mod report;

use commands::{parse_field, GenArgs};
use report::{envelope, CommandResult, Failure};

/// Exact common eigenvectors, invariant subspaces and Helly-type checks for
/// families of matrices over Q and GF(p).
#[derive(Parser)]
#[command(name = "helly", version)]
struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel sweeps; output does not depend on it.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal common eigenspaces of a family, or "none".
    CommonEig { family: PathBuf },
    /// Build the floor(3d/2)-operator family and check that it is sharp.
    VerifySharpness {
        #[arg(long)]
        d: usize,
        /// `Q` or `GF:p`.
        #[arg(long)]
        field: String,
    },
    /// Set families and the union condition.
    Lemma {
        #[command(subcommand)]
        command: LemmaCommand,
    },
    /// Sweep every k-subset for common eigenvectors.
    HellyEig {
        family: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Sweep every l-subset for common invariant subspaces (GF(p) only).
    HellyInv {
        family: PathBuf,
        #[arg(long)]
        l: usize,
    },
    /// Common invariant subspace from leave-one-out subspaces and an
    /// operator with distinct eigenvalues.
    Invsub {
        family: PathBuf,
        /// Name of the distinct-spectrum operator.
        #[arg(long)]
        a0: String,
        #[arg(long)]
        subspaces: PathBuf,
    },
    /// Write a seeded random family.
    Gen {
        /// uniform, planted_eigenvector, planted_invariant, block_scalar or
        /// perturbed_sharpness.
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field: String,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LemmaCommand {
    /// Check that every family of 2q - 1 distinct proper subsets violates
    /// the condition.
    Verify {
        #[arg(long)]
        q: usize,
        /// Random families to draw when exhaustion is too large (q = 5).
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The two-chain family with 2q - 2 members.
    Extremal {
        #[arg(long)]
        q: usize,
    },
    /// Smallest redundant union in a set-family file.
    Witness { family: PathBuf },
}

fn budget_from_env() -> Result<Budget, Failure> {
    match std::env::var("HELLY_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map(|n| Budget::default().with_count_limit(n))
            .map_err(|_| {
                Failure::input(format!(
                    "HELLY_BUDGET must be a non-negative integer, got {v:?}"
                ))
            }),
        Err(_) => Ok(Budget::default()),
    }
}

fn run(command: &Command) -> (&'static str, CommandResult) {
    let budget = match budget_from_env() {
        Ok(b) => b,
        Err(f) => return ("budget", Err(f)),
    };
    match command {
        Command::CommonEig { family } => ("common-eig", commands::common_eig(family)),
        Command::VerifySharpness { d, field } => (
            "verify-sharpness",
            parse_field(field).and_then(|f| commands::verify_sharpness_cmd(*d, f, &budget)),
        ),
        Command::Lemma { command } => match command {
            LemmaCommand::Verify { q, samples, seed } => {
                ("lemma verify", commands::lemma_verify(*q, *samples, *seed))
            }
            LemmaCommand::Extremal { q } => {
                ("lemma extremal", commands::lemma_extremal(*q, &budget))
            }
            LemmaCommand::Witness { family } => {
                ("lemma witness", commands::lemma_witness(family, &budget))
            }
        },
        Command::HellyEig { family, k } => ("helly-eig", commands::helly_eig(family, *k, &budget)),
        Command::HellyInv { family, l } => ("helly-inv", commands::helly_inv(family, *l, &budget)),
        Command::Invsub {
            family,
            a0,
            subspaces,
        } => ("invsub", commands::invsub(family, a0, subspaces, &budget)),
        Command::Gen {
            strategy,
            d,
            n,
            field,
            seed,
            output,
        } => (
            "gen",
            parse_field(field).and_then(|f| {
                commands::gen(GenArgs {
                    strategy,
                    d: *d,
                    n: *n,
                    field: f,
                    seed: *seed,
                    output: output.as_deref(),
                })
            }),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let (name, outcome) = run(&cli.command);
    let code = match &outcome {
        Ok(out) => out.status.code(),
        Err(f) => f.status.code(),
    };
    let mut stdout = std::io::stdout().lock();
    if cli.json {
        let _ = writeln!(stdout, "{}", envelope(name, &outcome));
    } else {
        match &outcome {
            Ok(out) => {
                let _ = stdout.write_all(out.text.as_bytes());
            }
            Err(f) => eprintln!("error: {}", f.message),
        }
    }
    ExitCode::from(code as u8)
}

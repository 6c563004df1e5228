use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use schwinger_cli::commands::{
    self, BasisSpec, CommandOutput, RenderOptions,
};
use schwinger_cli::format::OutputFormat;

/// Exact clock-and-shift operator pairs, coprime-split bases, and the
/// number theory connecting them, for an M-dimensional space.
#[derive(Parser)]
#[command(name = "schwinger", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,

    /// Print labels 0-based instead of the traditional 1..=m ranges
    /// (where the residue 0 is shown as m).
    #[arg(long, global = true)]
    zero_based: bool,

    /// Budget for dense float cross-checks (overrides SCHWINGER_MAX_DENSE).
    #[arg(long, global = true)]
    max_dense: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prime-power constituents of M with cofactors and modular inverses.
    Factor { m: u64 },
    /// Solutions of x^2 = 1 [mod M] and the coprime splits they select.
    Roots { m: u64 },
    /// Serialize a labeled basis.
    Basis {
        m: u64,
        /// Basis type: kq, KQ, q1q2, k1k2, complete, complete-momentum.
        #[arg(long = "type")]
        kind: String,
        /// Coprime split "a,b" with a*b = M (required for split bases).
        #[arg(long)]
        split: Option<String>,
    },
    /// Overlap table between two labeled bases.
    Overlap {
        m: u64,
        /// Bra basis type.
        #[arg(long)]
        bra: String,
        /// Ket basis type.
        #[arg(long)]
        ket: String,
        /// Coprime split "a,b" shared by both bases where required.
        #[arg(long)]
        split: Option<String>,
    },
    /// Run the verification suite; exits 1 if any check fails.
    Check {
        m: u64,
        /// Comma-separated check ids (default: all).
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
    },
}

fn parse_split(s: &str) -> anyhow::Result<(u64, u64)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| anyhow::anyhow!("--split expects two comma-separated factors, e.g. 3,5"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn run(cli: Cli) -> anyhow::Result<CommandOutput> {
    let opts = RenderOptions { format: cli.format, zero_based: cli.zero_based };
    match cli.command {
        Command::Factor { m } => commands::cmd_factor(m, opts),
        Command::Roots { m } => commands::cmd_roots(m, opts),
        Command::Basis { m, kind, split } => {
            let spec = BasisSpec::parse(&kind)?;
            let split = split.as_deref().map(parse_split).transpose()?;
            commands::cmd_basis(m, spec, split, opts)
        }
        Command::Overlap { m, bra, ket, split } => {
            let bra = BasisSpec::parse(&bra)?;
            let ket = BasisSpec::parse(&ket)?;
            let split = split.as_deref().map(parse_split).transpose()?;
            commands::cmd_overlap(m, bra, ket, split, opts)
        }
        Command::Check { m, checks } => {
            let max_dense = commands::resolve_max_dense(cli.max_dense)?;
            commands::cmd_check(m, &checks, max_dense, opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            // A closed pipe (e.g. piping into `head`) is not an error.
            if let Err(e) = io::stdout().write_all(out.stdout.as_bytes()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if out.failures {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

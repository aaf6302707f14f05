use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qaffine::cli::{exit_code, parse_weight, run_with_jobs, Command, Format, JobConfig};
use qaffine::gram::Engine;
use qaffine::{CartanType, Error};

#[derive(Parser)]
#[command(name = "qaffine", version, about = "Monomial, PBW and canonical bases of quantum affine algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Cartan type: A, D or E.
    #[arg(long = "type", global = true, default_value = "A")]
    kind: String,

    #[arg(long, global = true, default_value_t = 2)]
    rank: usize,

    /// Weight in simple-root coordinates, vertex 0 first, e.g. 1,1,1.
    #[arg(long, global = true)]
    weight: Option<String>,

    /// Series order for almost-orthonormality and CSV expansions.
    #[arg(long, global = true, default_value_t = 10)]
    order: i64,

    /// dp, brute or oracle-check.
    #[arg(long, global = true, default_value = "dp")]
    engine: String,

    /// json or csv.
    #[arg(long, global = true, default_value = "json")]
    format: String,

    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for Gram assembly.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// |k| bound of the roots table.
    #[arg(long, global = true, default_value_t = 12)]
    bound: i64,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// The word h, tau, the order on I and the beta_k table.
    Roots,
    /// The ordered fiber of PBW indices of a weight.
    Index,
    /// The Gram matrix of the monomial basis.
    Gram,
    /// H, D, P, Q and Q^-1 with the verification report.
    Canon,
    /// Stratum data per index.
    Strata,
    /// Full invariant suite; nonzero exit on failure.
    Verify,
}

fn config(cli: &Cli) -> Result<JobConfig, Error> {
    let command = match cli.command {
        Cmd::Roots => Command::Roots,
        Cmd::Index => Command::Index,
        Cmd::Gram => Command::Gram,
        Cmd::Canon => Command::Canon,
        Cmd::Strata => Command::Strata,
        Cmd::Verify => Command::Verify,
    };
    let kind: CartanType = cli.kind.parse()?;
    let mut cfg = JobConfig::new(kind, cli.rank, command);
    cfg.weight = cli.weight.as_deref().map(parse_weight).transpose()?;
    cfg.order = cli.order;
    cfg.engine = cli.engine.parse::<Engine>()?;
    cfg.format = cli.format.parse::<Format>()?;
    cfg.bound = cli.bound;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(&cli).and_then(|cfg| run_with_jobs(cfg, cli.jobs));
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.output) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.output),
    }
    match outcome.failure {
        Some(f) => {
            eprintln!("invariant violated: {f}");
            ExitCode::from(3)
        }
        None => ExitCode::SUCCESS,
    }
}

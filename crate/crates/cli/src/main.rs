//! `dexact-index`: catalogs, indices and batch verification for bound quiver algebras.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 parse or usage error,
//! 3 infinite-dimensional algebra, 4 resolution failure, 5 inconclusive search.

mod alg;
mod commands;
mod session;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{Check, Format};
use dexact::par::Exec;
use session::{CliError, Session};

#[derive(Parser)]
#[command(name = "dexact-index", version, about = "Indices and index formulas over bound quiver algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// `.alg` file describing the algebra, subcategories and settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Named subcategory (`proj`, `inj`, `all` or a `[subcat NAME]` from the file).
    #[arg(long, global = true)]
    subcat: Option<String>,
    /// Object as a dimension vector such as `(0,1,0)`, or a catalog label.
    #[arg(long, global = true)]
    object: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// List the indecomposables with their dimension vectors and hom dimensions.
    Catalog,
    /// Resolve an object by a subcategory and print its index.
    Index,
    /// Run one batch verification.
    Verify {
        #[arg(value_enum)]
        which: Check,
    },
}

/// Sizes the rayon pool from `DEXACT_THREADS`; `1` also selects the sequential path.
fn configure_threads() -> Result<Exec, CliError> {
    let Ok(v) = std::env::var("DEXACT_THREADS") else {
        return Ok(Exec::Parallel);
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("DEXACT_THREADS must be a positive integer, got `{v}`")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(if n == 1 { Exec::Sequential } else { Exec::Parallel })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let exec = configure_threads()?;
    let config = cli.config.ok_or_else(|| CliError::Usage("--config FILE is required".into()))?;
    let s = Session::load(&config, cli.seed, exec)?;
    match cli.command {
        Command::Catalog => commands::catalog(&s, cli.format),
        Command::Index => {
            let object = cli.object.ok_or_else(|| CliError::Usage("index needs --object".into()))?;
            commands::index(&s, &object, cli.subcat.as_deref(), cli.format)
        }
        Command::Verify { which } => commands::verify(&s, which, cli.subcat.as_deref(), cli.format),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    std::process::exit(code);
}

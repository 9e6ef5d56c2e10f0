use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use filicheck_cli::{
    cmd_analyze, cmd_search, cmd_verify_catalog, parse_overrides, resolve_seed, CliError, Mode, Report, SearchOptions,
    Source, SEED_ENV,
};
use filicheck_core::structures::DEFAULT_TOL;

/// Nilpotency, characteristic sequences and complex structures on small real Lie algebras.
#[derive(Parser)]
#[command(name = "filicheck", version)]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized stages; falls back to $FILICHECK_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Catalog key such as L6, g6_2 or h3+h3.
    #[arg(long)]
    builtin: Option<String>,
    /// Structure-constant file.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl SourceArgs {
    fn source(self) -> Source {
        match (self.builtin, self.file) {
            (Some(key), _) => Source::Builtin(key),
            (None, Some(path)) => Source::File(path),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate and report series, nilpotency, filiformity and the characteristic sequence.
    Analyze {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Decide whether a (bi-)invariant complex structure exists.
    Search {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value_t = Mode::Bi)]
        mode: Mode,
        /// Numeric restarts when the exact stages are inconclusive.
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        /// Residual tolerance for the numeric stage.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Recompute every catalog expectation and report differences.
    VerifyCatalog {
        /// File of `key property value` lines replacing catalog expectations.
        #[arg(long)]
        overrides: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let env_seed = std::env::var(SEED_ENV).ok();
    let seed = resolve_seed(cli.seed, env_seed.as_deref())?;
    match cli.command {
        Command::Analyze { source } => cmd_analyze(&source.source(), seed),
        Command::Search { source, mode, restarts, tol } => {
            cmd_search(&source.source(), &SearchOptions { mode, restarts, tol, seed })
        }
        Command::VerifyCatalog { overrides } => {
            let overrides = match overrides {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
                    parse_overrides(&text)?
                }
                None => Vec::new(),
            };
            cmd_verify_catalog(seed, &overrides)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            print!("{}", if json { report.to_json() } else { report.to_text() });
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("filicheck: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

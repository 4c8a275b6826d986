use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use aw_core::cache::{Cache, CACHE_ENV_VAR, DEFAULT_CACHE_PATH};
use aw_core::classify::DEFAULT_MAX_PRIME;
use aw_core::{Classifier, OracleConfig};

mod commands;

/// Anti-van der Waerden numbers of finite abelian groups.
#[derive(Debug, Parser)]
#[command(name = "aw", version)]
struct Cli {
    /// Oracle result cache.
    #[arg(long, global = true, env = CACHE_ENV_VAR, default_value = DEFAULT_CACHE_PATH)]
    cache: PathBuf,

    /// Do not read or write the cache file.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Largest group order the exhaustive search accepts (at most 64).
    /// Also bounds which odd primes are classified by search.
    #[arg(long, global = true)]
    max_oracle_order: Option<usize>,

    /// Threads for a single exhaustive search.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Log to stderr; repeat for more detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    /// Same as plain except for `table`.
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Aw,
    Awu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModesArg {
    Aw,
    Awu,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Formula,
    Exact,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Construct,
    Oracle,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Value of aw or awu for one group.
    Value {
        /// Group such as Z4xZ2, "4,2" or Z1.
        group: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Aw)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// Verified extremal rainbow-free coloring.
    Witness {
        group: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Aw)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Source::Construct)]
        source: Source,
    },
    /// One row per isomorphism class up to an order.
    Table {
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
        max_order: u64,
        #[arg(long, value_enum, default_value_t = ModesArg::Both)]
        mode: ModesArg,
    },
    /// aw(Z_p,3) for odd primes p.
    Primes {
        #[arg(long, default_value_t = 19)]
        up_to: u64,
    },
    /// Formula/oracle comparison, construction and lemma sweeps.
    Check {
        #[arg(long, default_value_t = 12)]
        max_order: u64,
        #[arg(long, value_enum, default_value_t = ModesArg::Both)]
        mode: ModesArg,
        /// Also run the lemmas over every rainbow-free coloring.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Cache maintenance.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
enum CacheAction {
    /// Re-check every stored witness.
    Verify,
}

/// A run that completed but found something wrong.
#[derive(Debug)]
pub struct Failed(pub String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use aw_core::Error as E;
    if err.downcast_ref::<Failed>().is_some() {
        return 3;
    }
    match err.downcast_ref::<E>() {
        Some(E::Infeasible { .. } | E::UnclassifiedPrime(_) | E::Unconstructible { .. }) => 2,
        Some(E::Verification { .. }) => 3,
        _ => 1,
    }
}

fn classifier(cli: &Cli) -> anyhow::Result<Classifier> {
    let mut oracle = OracleConfig::default().with_workers(cli.workers.max(1));
    let mut max_prime = DEFAULT_MAX_PRIME;
    if let Some(k) = cli.max_oracle_order {
        oracle = oracle.with_max_order(k);
        max_prime = k as u64;
    }
    let mut cls = Classifier::new(oracle).with_max_prime(max_prime);
    if !cli.no_cache {
        let cache = Cache::open(&cli.cache)
            .with_context(|| format!("opening cache {}", cli.cache.display()))?;
        cls = cls.with_cache(Arc::new(cache));
    }
    Ok(cls)
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let cls = classifier(cli)?;
    let fmt = cli.format;
    match &cli.command {
        Command::Value {
            group,
            mode,
            method,
        } => commands::value(&cls, fmt, group, (*mode).into(), *method),
        Command::Witness {
            group,
            mode,
            source,
        } => commands::witness(&cls, fmt, group, (*mode).into(), *source),
        Command::Table { max_order, mode } => commands::table(&cls, fmt, *max_order, mode.modes()),
        Command::Primes { up_to } => commands::primes(&cls, fmt, *up_to),
        Command::Check {
            max_order,
            mode,
            exhaustive,
        } => commands::check(&cls, fmt, *max_order, mode.modes(), *exhaustive),
        Command::Cache {
            action: CacheAction::Verify,
        } => commands::cache_verify(&cls, fmt),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

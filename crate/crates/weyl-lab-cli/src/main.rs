//! Entry point: configuration precedence, dispatch, and exit codes.
//!
//! Configuration is resolved flag > config file > environment >
//! built-in default. Exit codes: 0 success, 1 I/O failure, 2 invalid
//! parameters, 3 budget exceeded, 4 corrupt cache entry (which is also
//! quarantined in place).

mod cache;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde::Deserialize;

use weyl_lab::{Error, Result};

use crate::cache::TableCache;
use crate::commands::{CacheCmd, Cli, Command, Mode};
use crate::output::Document;

/// Optional JSON config file: `{"cacheDir": "...", "threads": 8}`.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct FileConfig {
    cache_dir: Option<PathBuf>,
    threads: Option<usize>,
}

fn load_file_config(path: Option<&PathBuf>) -> Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let raw = std::fs::read_to_string(path)?;
    serde_json::from_str(&raw)
        .map_err(|e| Error::InvalidParameter(format!("config file {}: {e}", path.display())))
}

fn resolve_cache_dir(cli: &Cli, file: &FileConfig) -> PathBuf {
    cli.globals
        .cache_dir
        .clone()
        .or_else(|| file.cache_dir.clone())
        .or_else(|| std::env::var_os("WEYL_LAB_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| std::env::temp_dir().join("weyl-lab-cache"))
}

fn resolve_threads(cli: &Cli, file: &FileConfig) -> Result<Option<usize>> {
    if let Some(t) = cli.globals.threads {
        return Ok(Some(t));
    }
    if let Some(t) = file.threads {
        return Ok(Some(t));
    }
    match std::env::var("WEYL_LAB_THREADS") {
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Error::invalid("WEYL_LAB_THREADS must be a thread count")),
        Err(_) => Ok(None),
    }
}

fn run(cli: &Cli) -> Result<()> {
    let started_at = chrono::Utc::now().to_rfc3339();
    let file = load_file_config(cli.globals.config.as_ref())?;
    let cache_dir = resolve_cache_dir(cli, &file);
    if let Some(threads) = resolve_threads(cli, &file)? {
        if threads == 0 {
            return Err(Error::invalid("thread count must be >= 1"));
        }
        // A second initialization in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let format = cli.globals.format;
    let doc: Document = match &cli.command {
        Command::Counts(args) => {
            // An explicit backend choice must actually run that
            // backend, so only the automatic route consults the cache.
            let store;
            let cache = if cli.globals.no_cache || !matches!(args.mode, Mode::Auto) {
                None
            } else {
                store = TableCache::open(&cache_dir)?;
                Some(&store)
            };
            commands::run_counts(args, cache, format)?
        }
        Command::Meanvalue(args) => {
            let store;
            let cache = if cli.globals.no_cache {
                None
            } else {
                store = TableCache::open(&cache_dir)?;
                Some(&store)
            };
            commands::run_meanvalue(args, cache, format)?
        }
        Command::Quadrature(args) => commands::run_quadrature(args, format)?,
        Command::Multiplier(cmd) => commands::run_multiplier(cmd, format)?,
        Command::Arcs(cmd) => commands::run_arcs(cmd, format)?,
        Command::Operator(cmd) => commands::run_operator(cmd, format)?,
        Command::Regions(args) => commands::run_regions(args, format)?,
        Command::Fit(args) => commands::run_fit(args)?,
        Command::Audit(args) => commands::run_audit(args, cli.globals.seed)?,
        Command::Cache(CacheCmd::Clear) => {
            let removed = TableCache::open(&cache_dir)?.clear()?;
            Document::text(format!(
                "cleared {removed} cached tables from {}\n",
                cache_dir.display()
            ))
        }
        Command::Cache(CacheCmd::Path) => {
            let store = TableCache::open(&cache_dir)?;
            Document::text(format!("{}\n", store.dir().display()))
        }
        Command::Cache(CacheCmd::Roundtrip(args)) => commands::run_cache_roundtrip(args)?,
    };

    let record = output::emit(&doc, cli.globals.out.as_ref(), false)?;
    if let Some(manifest_path) = &cli.globals.manifest {
        let config = serde_json::to_value(cli)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        output::write_manifest(manifest_path, config, started_at, vec![record])?;
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_) => 2,
        Error::BudgetExceeded { .. } => 3,
        Error::CorruptTable(_) => 4,
        Error::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        // A reader that closed the pipe early is not an error.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

//! `happening serve | seed-demo | export | import`.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for runtime failures.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::api::{self, AppState};
use crate::clock::{Clock, SystemClock};
use crate::config::{ConfigError, ConfigFile, Settings};
use crate::demo;
use crate::store::{EventStore, StoreError};
use crate::transfer::{self, Format, TransferError};

#[derive(Debug, Parser)]
#[command(name = "happening", version, about = "Team activity tracker")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Serve the HTTP API and the web UI
    Serve {
        #[arg(long)]
        data_dir: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Flat JSON config file
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory with the built web UI
        #[arg(long, default_value = "ui")]
        ui_dir: PathBuf,
    },
    /// Fill an empty store with a demo team
    SeedDemo {
        #[arg(long)]
        data_dir: PathBuf,
    },
    /// Write live events to a file (`-` for stdout)
    Export {
        #[arg(long)]
        data_dir: PathBuf,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
    /// Append events from a file, all or nothing
    Import {
        #[arg(long)]
        data_dir: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: Format,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error("{context}: {source}")]
    Io { context: String, source: io::Error },
}

fn io_context(context: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

/// Parses `args` and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
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
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Serve {
            data_dir,
            bind,
            port,
            config,
            ui_dir,
        } => run_serve(&data_dir, &bind, port, config.as_deref(), &ui_dir),
        Command::SeedDemo { data_dir } => run_seed_demo(&data_dir),
        Command::Export {
            data_dir,
            format,
            out,
        } => run_export(&data_dir, format, &out),
        Command::Import {
            data_dir,
            input,
            format,
        } => run_import(&data_dir, &input, format),
    }
}

fn open_store(data_dir: &Path) -> Result<EventStore, CliError> {
    let store = EventStore::open(data_dir)?;
    for warning in store.warnings() {
        eprintln!("warning: {warning}");
    }
    Ok(store)
}

fn load_settings(config: Option<&Path>) -> Result<Settings, CliError> {
    let file = match config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    Ok(file.resolve_from_env()?)
}

pub fn run_serve(
    data_dir: &Path,
    bind: &str,
    port: u16,
    config: Option<&Path>,
    ui_dir: &Path,
) -> Result<(), CliError> {
    let settings = load_settings(config)?;
    let store = open_store(data_dir)?;
    let runtime = tokio::runtime::Runtime::new().map_err(io_context("cannot start runtime"))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind((bind, port))
            .await
            .map_err(io_context(format!("cannot listen on {bind}:{port}")))?;
        let addr: SocketAddr = listener
            .local_addr()
            .map_err(io_context("cannot read listen address"))?;
        println!(
            "happening listening on http://{addr} ({} events, {} members, data dir {}, auth {})",
            store.event_count(),
            store.members().len(),
            data_dir.display(),
            if settings.auth_token.is_some() {
                "on"
            } else {
                "off"
            },
        );
        let _ = io::stdout().flush();
        let state = AppState::new(store, settings, Arc::new(SystemClock));
        let app = api::router(state, Some(ui_dir));
        axum::serve(listener, app)
            .with_graceful_shutdown(shutdown_signal())
            .await
            .map_err(io_context("server failed"))
    })
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let terminate = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut signal) => {
                signal.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {}
        _ = terminate => {}
    }
}

fn ensure_dir(data_dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(data_dir)
        .map_err(io_context(format!("cannot create {}", data_dir.display())))
}

pub fn run_seed_demo(data_dir: &Path) -> Result<(), CliError> {
    ensure_dir(data_dir)?;
    let settings = load_settings(None)?;
    let mut store = open_store(data_dir)?;
    let clock = SystemClock;
    demo::seed(
        &mut store,
        settings.calendar.today(&clock),
        settings.calendar.now(&clock),
    )?;
    println!(
        "seeded {} members and {} events into {}",
        store.members().len(),
        store.event_count(),
        data_dir.display()
    );
    Ok(())
}

pub fn run_export(data_dir: &Path, format: Format, out: &Path) -> Result<(), CliError> {
    let store = open_store(data_dir)?;
    let count = if out == Path::new("-") {
        let stdout = io::stdout();
        transfer::export(&store, format, &mut stdout.lock())
    } else {
        let file =
            File::create(out).map_err(io_context(format!("cannot create {}", out.display())))?;
        let mut writer = BufWriter::new(file);
        transfer::export(&store, format, &mut writer).and_then(|n| {
            writer
                .into_inner()
                .map_err(|e| e.into_error())?
                .sync_all()?;
            Ok(n)
        })
    }
    .map_err(io_context(format!("cannot write {}", out.display())))?;
    if out != Path::new("-") {
        println!("exported {count} events to {}", out.display());
    }
    Ok(())
}

pub fn run_import(data_dir: &Path, input: &Path, format: Format) -> Result<(), CliError> {
    ensure_dir(data_dir)?;
    let settings = load_settings(None)?;
    let mut store = open_store(data_dir)?;
    let mut file =
        File::open(input).map_err(io_context(format!("cannot open {}", input.display())))?;
    let today = settings.calendar.today(&SystemClock as &dyn Clock);
    let events = transfer::import(&mut store, format, &mut file, today)?;
    println!(
        "imported {} events into {}",
        events.len(),
        data_dir.display()
    );
    Ok(())
}

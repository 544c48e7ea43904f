mod args;
mod commands;
mod config;
mod error;
mod io;
mod kinds;

use clap::Parser;
use error::CliError;

/// Size of the global rayon pool from `WSFBM_THREADS`.
fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("WSFBM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("WSFBM_THREADS={raw:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Numerical(format!("thread pool: {e}")))
}

fn main() {
    let cli = args::Cli::parse();
    if let Err(e) = init_threads().and_then(|()| commands::run(cli)) {
        eprintln!("wsfbm: {e}");
        std::process::exit(e.exit_code());
    }
}

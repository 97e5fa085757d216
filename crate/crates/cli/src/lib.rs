//! Library side of the `condscreen` command-line harness.

pub mod config;
pub mod error;
pub mod report;
pub mod screen;
pub mod simulate;

pub use config::{Cli, Mode, RunConfig};
pub use error::{CliError, Result};
pub use report::Report;
pub use screen::run_screen_file;
pub use simulate::run_simulation;

/// Dispatches on the configured mode.
pub fn run(config: &RunConfig) -> Result<Report> {
    match config.mode {
        Mode::Simulate => run_simulation(config),
        Mode::Screen => run_screen_file(config),
    }
}

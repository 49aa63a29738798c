//! Scenario runner for the `qrframe` command-line tool.
//!
//! Each `run_*` function takes a validated [`ScenarioConfig`] and returns a
//! [`Report`]: the table to emit plus an optional tolerance breach, which the
//! binary maps to exit code 3 after writing the table.

pub mod config;
pub mod error;
pub mod output;

mod bhd;
mod change_frame;
mod limit_sweep;
mod overlap;

pub use bhd::run_bhd;
pub use change_frame::run_change_frame;
pub use config::{Command, RawConfig, ScenarioConfig};
pub use error::{CliError, Result};
pub use limit_sweep::run_limit_sweep;
pub use output::{Cell, Table};
pub use overlap::run_overlap;

#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    /// Description of the first tolerance breach, if any.
    pub violation: Option<String>,
    /// Non-fatal notes (e.g. renormalized inputs), also echoed in the metadata.
    pub warnings: Vec<String>,
}

impl Report {
    fn new(table: Table) -> Self {
        Report { table, violation: None, warnings: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.violation.is_none() {
            self.violation = Some(what());
        }
    }

    fn warn(&mut self, msg: String) {
        self.table.meta("warning", &msg);
        self.warnings.push(msg);
    }
}

pub fn run(config: &ScenarioConfig) -> Result<Report> {
    match config.command {
        Command::Overlap => run_overlap(config),
        Command::ChangeFrame => run_change_frame(config),
        Command::LimitSweep => run_limit_sweep(config),
        Command::Bhd => run_bhd(config),
    }
}

/// Table with the standard metadata block: tool, version and config echo.
fn base_table(config: &ScenarioConfig, columns: &[&str]) -> Table {
    let mut t = Table::new(columns);
    t.meta("tool", "qrframe");
    t.meta("version", env!("CARGO_PKG_VERSION"));
    for (k, v) in &config.echo {
        t.meta(k, v);
    }
    t
}

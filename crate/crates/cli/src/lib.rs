//! Scenario-file front end: parses a JSON scenario, runs one sweep and
//! renders the result as CSV with a `#` metadata header.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod quantity;

use std::path::Path;

pub use commands::Command;
pub use config::{Overrides, ScenarioFile};
pub use error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Reads a scenario and fills in overrides and defaults.
pub fn load(path: &Path, ov: Overrides) -> Result<ScenarioFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    ScenarioFile::from_json(&text)?.with_defaults(ov)
}

/// Runs `cmd` and returns the CSV document.
pub fn render(cmd: Command, file: &ScenarioFile, simulate: bool) -> Result<String, CliError> {
    let cfg = file.resolve()?;
    let table = commands::run(cmd, &cfg, simulate)?;
    let compact = serde_json::to_string(file).expect("scenario file serializes");
    let preamble = vec![
        format!("rocbound {VERSION}"),
        format!("command: {}{}", cmd.name(), if simulate { " --simulate" } else { "" }),
        format!("config: {compact}"),
    ];
    let mut buf = Vec::new();
    table.write(&mut buf, &preamble)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

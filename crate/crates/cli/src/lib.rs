//! Command-line surface of `hdcoint`: CSV ingestion, subcommands and
//! all-or-nothing output writing.

pub mod args;
pub mod commands;
pub mod error;
pub mod grid;
pub mod ingest;

use std::io::Write;
use std::path::Path;

pub use args::{Cli, Command};
pub use commands::Output;
pub use error::{CliError, CliResult};
pub use ingest::{ingest_csv, parse_panel};

pub fn execute(command: &Command) -> CliResult<Vec<Output>> {
    match command {
        Command::Analyze(a) => commands::cmd_analyze(a),
        Command::Simulate(a) => commands::cmd_simulate(a),
        Command::Dist(a) => commands::cmd_dist(a),
        Command::Centers(a) => commands::cmd_centers(a),
        Command::Qq(a) => commands::cmd_qq(a),
    }
}

/// Writes every file to a temporary sibling first and renames only once all
/// of them are written, so a failure leaves no partial output behind.
pub fn commit(outputs: Vec<Output>) -> CliResult<()> {
    let mut staged = Vec::new();
    let mut stdout = Vec::new();
    for o in outputs {
        let Some(path) = o.path else {
            stdout.push(o.bytes);
            continue;
        };
        let out_err = |source| CliError::Output {
            path: path.clone(),
            source,
        };
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(out_err)?;
        tmp.write_all(&o.bytes).map_err(out_err)?;
        tmp.as_file().sync_all().map_err(out_err)?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(&path).map_err(|e| CliError::Output {
            path,
            source: e.error,
        })?;
    }
    let mut out = std::io::stdout().lock();
    for bytes in stdout {
        out.write_all(&bytes)
            .and_then(|_| out.flush())
            .map_err(|source| CliError::Output {
                path: "<stdout>".into(),
                source,
            })?;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> CliResult<()> {
    commit(execute(&cli.command)?)
}

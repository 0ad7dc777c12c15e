use std::io::{ErrorKind, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &str) -> CliResult<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
    } else {
        s = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    }
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: &str) -> CliResult<T> {
    Ok(serde_json::from_str(&read_input(path)?)?)
}

/// Writes to standard output; a closed pipe ends the output silently.
pub fn emit(text: &str) -> CliResult<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(CliError::Io { path: "<stdout>".into(), source: e }),
        _ => Ok(()),
    }
}

pub fn print_json<T: serde::Serialize>(v: &T) -> CliResult<()> {
    emit(&(serde_json::to_string_pretty(v)? + "\n"))
}

pub fn write_json<T: serde::Serialize>(path: &Path, v: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

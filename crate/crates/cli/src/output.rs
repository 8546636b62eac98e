use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    /// Input parsed or computed, but is not what the command needs.
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Domain(_) => 2,
        }
    }

    pub fn domain(e: impl std::fmt::Display) -> Self {
        CliError::Domain(e.to_string())
    }
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Exact counts as JSON numbers when they fit, decimal strings otherwise.
pub fn unsigned(v: &BigUint) -> Value {
    u64::try_from(v).map_or_else(|_| Value::String(v.to_string()), Value::from)
}

pub fn signed(v: &BigInt) -> Value {
    i64::try_from(v).map_or_else(|_| Value::String(v.to_string()), Value::from)
}

/// What a command produced: a JSON document, its human rendering and an
/// optional CSV table.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
}

impl Report {
    /// The generic shape `{"command", "inputs", "results"}`.
    pub fn new(command: &str, inputs: Value, results: Value, text: impl Into<String>) -> Self {
        Report {
            json: json!({ "command": command, "inputs": inputs, "results": results }),
            text: text.into(),
            csv: None,
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        if let Value::Object(map) = &mut self.json {
            map.insert(key.to_string(), value);
        }
    }
}

pub fn emit(report: &Report, as_json: bool, csv: Option<&Path>) -> Result<(), CliError> {
    if let Some(path) = csv {
        let table = report.csv.as_ref().ok_or_else(|| {
            CliError::Usage("--csv is only supported by count, fnk and transform".into())
        })?;
        write_file(path, table)?;
    }
    let mut out = io::stdout().lock();
    let written = if as_json {
        let doc = serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
        writeln!(out, "{doc}")
    } else {
        out.write_all(report.text.as_bytes())
    };
    written.map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

pub fn object(pairs: impl IntoIterator<Item = (String, Value)>) -> Value {
    Value::Object(pairs.into_iter().collect::<Map<_, _>>())
}

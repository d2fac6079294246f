//! Experiment runner for the `wgreedy` library.

pub mod commands;
pub mod config;
pub mod output;

use std::fmt;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exit {
    Ok = 0,
    BoundFailure = 1,
    Config = 2,
    Numerical = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Config(_) => Exit::Config,
            CliError::Numerical(_) => Exit::Numerical,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<wgreedy::Error> for CliError {
    fn from(e: wgreedy::Error) -> Self {
        use wgreedy::Error as E;
        match e {
            E::InvalidSet(_)
            | E::InvalidArgument(_)
            | E::InvalidExponent(_)
            | E::EmptySet
            | E::WrongMode { .. }
            | E::IndexRange(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numerical(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Numerical(format!("csv: {e}"))
    }
}

use std::path::Path;

use morselab_core::automata::AutomatonError;
use morselab_core::cayley::CayleyError;
use morselab_core::diagrams::DiagramError;
use morselab_core::mltg::MltgError;
use morselab_core::smallcancel::FunctionError;
use morselab_core::walks::WalkError;
use morselab_core::ParseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("presentation: {0}")]
    Parse(#[from] ParseError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("output: {0}")]
    Output(String),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Mltg(#[from] MltgError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse(_) => "parse",
            CliError::Usage(_) => "usage",
            CliError::Input(_) | CliError::Json(_) | CliError::Csv(_) => "input",
            CliError::Output(_) => "output",
            CliError::Cayley(CayleyError::Budget { .. }) => "budget",
            CliError::Cayley(_) => "cayley",
            CliError::Function(_) => "function",
            CliError::Diagram(_) => "diagram",
            CliError::Automaton(AutomatonError::Budget(_)) => "budget",
            CliError::Automaton(_) => "automaton",
            CliError::Mltg(_) => "mltg",
            CliError::Walk(_) => "walk",
            CliError::Internal(_) => "internal",
        }
    }

    pub fn line(&self) -> Option<usize> {
        match self {
            CliError::Parse(e) => e.line(),
            _ => None,
        }
    }
}

impl From<morselab_core::words::WordError> for CliError {
    fn from(e: morselab_core::words::WordError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<morselab_core::rational::RationalParseError> for CliError {
    fn from(e: morselab_core::rational::RationalParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

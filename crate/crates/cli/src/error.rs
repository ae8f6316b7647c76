use autrel::{AutomataError, BuchiError, ConvError, TilingError};
use thiserror::Error;

/// Command failures. The display form is a single line
/// `<kind>: <reason>`, and each kind has its own exit status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("parse: line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("io: {0}")]
    Io(String),
    #[error("budget: {0}")]
    Budget(String),
    #[error("precondition: {0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }
}

impl From<AutomataError> for CliError {
    fn from(e: AutomataError) -> CliError {
        match e {
            AutomataError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<ConvError> for CliError {
    fn from(e: ConvError) -> CliError {
        match e {
            ConvError::Automata(a) => a.into(),
            ConvError::NodeBudget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<TilingError> for CliError {
    fn from(e: TilingError) -> CliError {
        match e {
            TilingError::Automata(a) => a.into(),
            TilingError::Budget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<BuchiError> for CliError {
    fn from(e: BuchiError) -> CliError {
        CliError::Precondition(e.to_string())
    }
}

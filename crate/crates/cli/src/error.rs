use std::process::ExitCode;

use serde_json::json;
use thiserror::Error;

pub const EXIT_POSITIVE_RECURRENT: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INDETERMINATE: u8 = 3;
pub const EXIT_NOT_POSITIVE_RECURRENT: u8 = 10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] srbm_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "InputError",
            CliError::Core(e) if e.is_indeterminate() => "Indeterminate",
            CliError::Core(e) if is_input_error(e) => "InputError",
            CliError::Core(_) => "ComputationError",
            CliError::Io(_) | CliError::Csv(_) => "OutputError",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "InputError" => EXIT_INPUT,
            "Indeterminate" => EXIT_INDETERMINATE,
            _ => EXIT_FAILURE,
        }
    }

    /// Prints `{"error": {"kind", "message"}}` to stderr.
    pub fn report(&self) -> ExitCode {
        let doc = json!({ "error": { "kind": self.kind(), "message": self.to_string() } });
        eprintln!("{doc}");
        ExitCode::from(self.exit_code())
    }
}

fn is_input_error(e: &srbm_core::Error) -> bool {
    use srbm_core::Error::*;
    matches!(
        e,
        InvalidInput(_)
            | Dimension { .. }
            | NonFinite(_)
            | NotCompletelyS { .. }
            | CovarianceNotPositiveDefinite
            | Precondition(_)
    )
}

//! CLI-level errors and their exit codes.
//!
//! | code | meaning                                            |
//! |------|----------------------------------------------------|
//! | 0    | success                                            |
//! | 2    | scenario/configuration validation failure          |
//! | 3    | physics failure (orthogonal postselection, grid…)  |
//! | 4    | internal tolerance breach (self-checks disagree)   |

use vnpointer_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The scenario file or command arguments are invalid.
    #[error("{0}")]
    Validation(String),
    /// The configuration is well-formed but physically unusable.
    #[error("{0}")]
    Physics(String),
    /// An internal consistency check failed beyond its tolerance.
    #[error("{0}")]
    ToleranceBreach(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Physics(_) => 3,
            CliError::ToleranceBreach(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    /// Classify a core error, attaching a remediation hint where one helps.
    pub fn from_core(context: &str, err: CoreError) -> Self {
        match &err {
            CoreError::OrthogonalPostselection { .. } => CliError::Physics(format!(
                "{context}: {err}; choose pre/postselections with |<psi_f|psi_i>| > 1e-10"
            )),
            CoreError::GridOverflow { .. } => CliError::Physics(format!(
                "{context}: {err}; enlarge the grid bounds or reduce |gamma|"
            )),
            CoreError::GridTooSmall(_) => CliError::Physics(format!(
                "{context}: {err}; enlarge the grid bounds or raise the sample count"
            )),
            CoreError::PostselectionImpossible { .. } | CoreError::DegenerateOverlap { .. } => {
                CliError::Physics(format!("{context}: {err}"))
            }
            CoreError::NumericalDegeneracy(_) => {
                CliError::ToleranceBreach(format!("{context}: {err}"))
            }
            _ => CliError::Validation(format!("{context}: {err}")),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

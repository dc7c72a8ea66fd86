//! Scenario runner around [`vnpointer_core`]: declarative JSON scenarios
//! in, CSV densities and JSON reports out, plus the oracle verification
//! battery behind `vnpointer verify`.

pub mod artifacts;
pub mod error;
pub mod pipeline;
pub mod scenario;
pub mod verify;

pub use error::{CliError, Result};

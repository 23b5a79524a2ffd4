//! Scenario-file parsing and CSV serialization behind the `acdrive` binary.

pub mod config;
pub mod csvio;

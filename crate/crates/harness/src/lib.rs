//! Instance IO, generators, seeded trial campaigns and report rendering for
//! the `dynevo` engine. The `dynevo` binary is a thin CLI over this crate.

pub mod bound;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod instance;
pub mod report;

pub use error::{HarnessError, Result};

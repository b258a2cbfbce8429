//! Temporary build scaffold; full docs land with the remaining modules.
pub mod classical;
pub mod exactalg;
pub mod laws;
pub mod partitions;
pub mod weingarten;

mod error;

pub use error::{Error, Result};

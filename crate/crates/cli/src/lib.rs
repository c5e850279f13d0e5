//! Library side of the `commdeg` binary: the algebra file format, report
//! rendering and the command drivers.

pub mod commands;
pub mod format;
pub mod report;

pub use commands::{exit, run};

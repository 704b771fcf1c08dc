//! Command implementations behind the `wordprobe` binary, exposed as a
//! library so integration tests can drive whole runs in-process.

pub mod commands;
pub mod config;

//! Library half of the `etafano` binary: report encodings and the
//! subcommand bodies, exposed so tests can load reports back.

pub mod commands;
pub mod report;

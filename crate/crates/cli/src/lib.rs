//! Library half of the `gravwitness` binary: configuration, subcommands and
//! output formats. Kept separate so integration tests can call it directly.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod svg;
pub mod sweep;

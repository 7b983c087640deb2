//! Command-line front end for `advice-soco-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod schema;
pub mod settings;

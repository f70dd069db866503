//! File formats, a parallel sweep driver and the `harm-ent` command line on top
//! of [`harm_ent_core`].

pub mod cli;
pub mod commands;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod spec_file;
pub mod svg;

pub use error::{CliError, Result};

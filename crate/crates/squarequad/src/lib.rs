//! Registry of worked cases, file formats and the command-line front end for
//! `squarequad-core`.

pub mod cli;
pub mod error;
pub mod formats;
pub mod registry;
pub mod reproduce;
pub mod runner;

pub use error::{AppError, AppResult};

//! CLI, JSON/CSV file formats, and the reproducible acceptance suite.

pub mod accept;
pub mod cli;
pub mod formats;

pub use cli::run;

//! Command-line front end, file formats and reports for `convexa-core`.

pub mod cli;
pub mod meshio;
pub mod report;
pub mod spec;

//! Model files, reports and the command-line front end for `fmr-core`.

pub mod cli;
pub mod model_file;
pub mod report;

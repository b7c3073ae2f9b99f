//! Files, directories and the command line around `tabsynth-core`.

pub mod config;
pub mod dataset;
pub mod detect;
pub mod error;
pub mod eval;
pub mod io;
pub mod split;
pub mod stats;
pub mod validate;

pub use error::DatasetError;
pub use tabsynth_core as core;

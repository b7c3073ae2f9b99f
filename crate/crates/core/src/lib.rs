//! Deterministic synthesis of document pages containing tables, with
//! pixel-aligned table and column masks, plus a projection-profile baseline
//! detector and XOR evaluation.
//!
//! Everything here is `no_std` with `alloc`. File formats and the command
//! line live in the `tabsynth` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod augment;
pub mod config;
pub mod content;
pub mod detect;
pub mod error;
pub mod latex;
pub mod layout;
pub mod metrics;
pub mod pipeline;
pub mod raster;
pub mod rng;
pub mod sampler;

pub use config::GenerationConfig;
pub use error::{ConfigError, EvalError, LayoutError, RasterError, SynthError};
pub use pipeline::{synthesize, Generator, Sample};

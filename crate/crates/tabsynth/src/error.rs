use std::path::{Path, PathBuf};

use tabsynth_core::{EvalError, RasterError, SynthError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error("{path}: {source}")]
    Mask {
        path: PathBuf,
        #[source]
        source: RasterError,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Toml {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("png encoding failed: {0}")]
    Encode(#[from] image::ImageError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("predictions without ground truth: {}", .0.join(", "))]
    OrphanPredictions(Vec<String>),
    #[error("ground truth without predictions: {}", .0.join(", "))]
    MissingPredictions(Vec<String>),
    #[error("count must be at least 1")]
    EmptyCount,
    #[error("could not start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl DatasetError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        DatasetError::Io { path: path.to_owned(), source }
    }
}

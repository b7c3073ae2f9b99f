use alloc::string::String;
use thiserror::Error;

/// Invalid generation or augmentation settings.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid {name} bounds [{min}, {max}]: need {floor} <= min <= max")]
    Bounds {
        name: &'static str,
        min: u32,
        max: u32,
        floor: u32,
    },
    #[error("probability `{name}` = {value} lies outside [0, 1]")]
    Probability { name: &'static str, value: f64 },
    #[error("`{name}` = {value} is out of range, expected {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("table needs {required} page units of width but only {available} are available")]
    InsufficientWidth { required: f64, available: f64 },
    #[error("table block needs {required} page units of height but only {available} are available")]
    TooTall { required: f64, available: f64 },
    #[error("table content does not match its spec: {0}")]
    ContentMismatch(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RasterError {
    #[error("{what} spans x {x0}..{x1}, y {y0}..{y1}, outside the {width}x{height} raster")]
    OutOfBounds {
        what: &'static str,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        width: u32,
        height: u32,
    },
    #[error("dimensions must be positive, got {width}x{height}")]
    ZeroDimension { width: u32, height: u32 },
    #[error("pixel buffer holds {len} bytes, expected {expected}")]
    BufferLength { len: usize, expected: usize },
    #[error("mask pixel {index} has value {value}; masks hold only 0 and 255")]
    NonBinary { index: usize, value: u8 },
    #[error("{what}: {a_w}x{a_h} vs {b_w}x{b_h}")]
    DimensionMismatch {
        what: &'static str,
        a_w: u32,
        a_h: u32,
        b_w: u32,
        b_h: u32,
    },
    #[error("homography is singular")]
    SingularTransform,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("prediction is {pred_w}x{pred_h} but ground truth is {gt_w}x{gt_h}")]
    ShapeMismatch {
        pred_w: u32,
        pred_h: u32,
        gt_w: u32,
        gt_h: u32,
    },
    #[error("sample list is empty")]
    EmptyInput,
    #[error("train fraction {0} must lie strictly between 0 and 1")]
    TrainFraction(f64),
    #[error("unknown configuration label `{0}`; expected <resolution>/<epochs>/<Marmot|Novel>")]
    UnknownLabel(String),
    #[error(transparent)]
    Raster(#[from] RasterError),
}

/// Failure of the end-to-end per-sample pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("sample {index}: layout rejected after {attempts} attempts: {last}")]
    LayoutRejected {
        index: u64,
        attempts: u32,
        last: LayoutError,
    },
    #[error(transparent)]
    Raster(#[from] RasterError),
}

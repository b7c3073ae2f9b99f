//! Pixel-wise XOR error, the train/test split, and report aggregation.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::EvalError;
use crate::raster::{MaskImage, Resize};
use crate::rng::{SampleRng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ResizePolicy {
    /// Dimensions must match exactly.
    #[default]
    Strict,
    /// The prediction is nearest-neighbour resized to the ground truth first.
    ResizePredToGt,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct XorResult {
    pub sample_id: String,
    /// Disagreeing pixels over total pixels, in `[0, 1]`.
    pub xor_error: f64,
    pub mismatched: u64,
    pub pred_dims: (u32, u32),
    pub gt_dims: (u32, u32),
    pub resized: bool,
}

impl XorResult {
    pub fn with_id(mut self, sample_id: impl Into<String>) -> Self {
        self.sample_id = sample_id.into();
        self
    }
}

fn mismatch(pred: &MaskImage, gt: &MaskImage) -> EvalError {
    EvalError::ShapeMismatch {
        pred_w: pred.width(),
        pred_h: pred.height(),
        gt_w: gt.width(),
        gt_h: gt.height(),
    }
}

fn same_shape(pred: &MaskImage, gt: &MaskImage) -> bool {
    (pred.width(), pred.height()) == (gt.width(), gt.height())
}

/// Fraction of pixels where `pred` and `gt` disagree.
pub fn xor_error(pred: &MaskImage, gt: &MaskImage, policy: ResizePolicy) -> Result<XorResult, EvalError> {
    let resized = !same_shape(pred, gt);
    let owned;
    let p = match (resized, policy) {
        (false, _) => pred,
        (true, ResizePolicy::Strict) => return Err(mismatch(pred, gt)),
        (true, ResizePolicy::ResizePredToGt) => {
            owned = pred.resize(gt.width(), gt.height())?;
            &owned
        }
    };
    let mismatched = p.pixels().iter().zip(gt.pixels()).filter(|(a, b)| a != b).count() as u64;
    let total = u64::from(gt.width()) * u64::from(gt.height());
    Ok(XorResult {
        sample_id: String::new(),
        xor_error: mismatched as f64 / total as f64,
        mismatched,
        pred_dims: (pred.width(), pred.height()),
        gt_dims: (gt.width(), gt.height()),
        resized,
    })
}

/// 255 where the masks disagree, 0 elsewhere.
pub fn xor_diff_image(pred: &MaskImage, gt: &MaskImage) -> Result<MaskImage, EvalError> {
    if !same_shape(pred, gt) {
        return Err(mismatch(pred, gt));
    }
    let px = pred.pixels().iter().zip(gt.pixels()).map(|(a, b)| a ^ b).collect();
    Ok(MaskImage::from_raw(gt.width(), gt.height(), px)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Partition {
    Train,
    Test,
}

impl Partition {
    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Test => "test",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "train" => Some(Partition::Train),
            "test" => Some(Partition::Test),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitAssignment {
    pub sample_id: String,
    pub partition: Partition,
}

/// Number of training samples: `floor(n * train_fraction)`.
///
/// A tiny epsilon absorbs products like `10 * 0.9 = 8.999...`.
pub fn train_count(n: usize, train_fraction: f64) -> usize {
    libm::floor(n as f64 * train_fraction + 1e-9) as usize
}

/// Seeded uniform random split. Assignments come back in input order.
pub fn split_dataset<S: AsRef<str>>(
    sample_ids: &[S],
    train_fraction: f64,
    seed: u64,
) -> Result<Vec<SplitAssignment>, EvalError> {
    if sample_ids.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(EvalError::TrainFraction(train_fraction));
    }
    let n = sample_ids.len();
    let mut order: Vec<usize> = (0..n).collect();
    SampleRng::for_stream(seed, Stream::Split).shuffle(&mut order);
    let mut partition = alloc::vec![Partition::Test; n];
    for &i in &order[..train_count(n, train_fraction)] {
        partition[i] = Partition::Train;
    }
    Ok(sample_ids
        .iter()
        .zip(partition)
        .map(|(id, partition)| SplitAssignment { sample_id: id.as_ref().to_string(), partition })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalReport {
    pub config_label: String,
    pub per_sample: Vec<XorResult>,
    pub count: usize,
    /// Arithmetic mean of the per-sample errors; 0 for an empty report.
    pub mean_xor: f64,
}

impl EvalReport {
    pub fn from_results(config_label: impl Into<String>, per_sample: Vec<XorResult>) -> Self {
        let count = per_sample.len();
        let mean_xor = if count == 0 {
            0.0
        } else {
            neumaier_sum(per_sample.iter().map(|r| r.xor_error)) / count as f64
        };
        EvalReport { config_label: config_label.into(), per_sample, count, mean_xor }
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then_some(self.mean_xor)
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceDataset {
    Marmot,
    Novel,
}

impl ReferenceDataset {
    pub fn as_str(self) -> &'static str {
        match self {
            ReferenceDataset::Marmot => "Marmot",
            ReferenceDataset::Novel => "Novel",
        }
    }
}

/// One published XOR error rate, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub resolution: u32,
    pub epochs: u32,
    pub dataset: ReferenceDataset,
    pub xor_percent: f64,
    /// Lowest error for its resolution and dataset.
    pub best: bool,
}

impl ReferenceRow {
    pub fn label(&self) -> String {
        format!("{}/{}/{}", self.resolution, self.epochs, self.dataset.as_str())
    }
}

const fn row(resolution: u32, epochs: u32, dataset: ReferenceDataset, xor_percent: f64, best: bool) -> ReferenceRow {
    ReferenceRow { resolution, epochs, dataset, xor_percent, best }
}

/// Published TableNet results. Reported values, not reproduced here.
pub const REFERENCE: [ReferenceRow; 12] = {
    use ReferenceDataset::{Marmot, Novel};
    [
        row(256, 240, Marmot, 12.14, false),
        row(256, 240, Novel, 10.50, false),
        row(256, 500, Marmot, 9.18, true),
        row(256, 500, Novel, 5.41, false),
        row(256, 1540, Marmot, 11.69, false),
        row(256, 1540, Novel, 4.04, true),
        row(1024, 150, Marmot, 13.83, true),
        row(1024, 150, Novel, 5.75, false),
        row(1024, 260, Marmot, 14.33, false),
        row(1024, 260, Novel, 4.59, false),
        row(1024, 760, Marmot, 13.91, false),
        row(1024, 760, Novel, 4.33, true),
    ]
};

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub reference: ReferenceRow,
    /// Measured mean error in percent, present only on the report's row.
    pub measured_percent: Option<f64>,
}

impl ComparisonRow {
    pub fn delta(&self) -> Option<f64> {
        self.measured_percent.map(|m| m - self.reference.xor_percent)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub label: String,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    pub fn row(&self, label: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.reference.label() == label)
    }
}

/// Pairs a report with the reference table by its `config_label`.
///
/// Every reference row is listed; only the matching one carries a measured
/// value, and only when the report is non-empty. Informational, no verdict.
pub fn compare_to_reference(report: &EvalReport, reference: &[ReferenceRow]) -> Result<Comparison, EvalError> {
    if !reference.iter().any(|r| r.label() == report.config_label) {
        return Err(EvalError::UnknownLabel(report.config_label.clone()));
    }
    let rows = reference
        .iter()
        .map(|r| ComparisonRow {
            reference: *r,
            measured_percent: (r.label() == report.config_label)
                .then(|| report.mean().map(|m| m * 100.0))
                .flatten(),
        })
        .collect();
    Ok(Comparison { label: report.config_label.clone(), rows })
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# reference values are published figures, not reproduced here")?;
        writeln!(f, "{:<18} {:>10} {:>10} {:>9}", "config", "reference%", "measured%", "delta")?;
        for r in &self.rows {
            let label = r.reference.label();
            let mark = if r.reference.best { "*" } else { " " };
            let ours = label == self.label;
            let measured = match (ours, r.measured_percent) {
                (true, Some(m)) => format!("{m:.2}"),
                (true, None) => "absent".into(),
                (false, _) => "-".into(),
            };
            let delta = r.delta().map_or_else(|| "-".into(), |d| format!("{d:+.2}"));
            writeln!(f, "{label:<18} {:>9.2}{mark} {measured:>10} {delta:>9}", r.reference.xor_percent)?;
        }
        Ok(())
    }
}

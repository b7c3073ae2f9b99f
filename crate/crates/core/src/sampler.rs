//! Reproducible table specifications and augmentation plans.
//!
//! A sample is identified by `(master_seed, sample_index)`. Everything about
//! it is drawn from independent streams of its derived seed (see
//! [`crate::rng`]), so samples can be produced in any order or in parallel.

use alloc::vec::Vec;

use crate::augment::{sample_homography, Homography};
use crate::error::ConfigError;
use crate::rng::{derive_seed, SampleRng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ColumnType {
    Numeric,
    Text,
    Date,
}

impl ColumnType {
    pub const ALL: [ColumnType; 3] = [ColumnType::Numeric, ColumnType::Text, ColumnType::Date];
}

/// The five table looks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TableStyle {
    /// Full grid drawn with dashed rules.
    Dashed,
    /// Horizontal rules between every row, no vertical rules.
    NoVerticalBorders,
    /// Solid full grid with a filled header row.
    ColoredHeader,
    /// No rules at all.
    NoRules,
    /// Heavy top and bottom rules plus a light rule under the header.
    Booktabs,
}

impl TableStyle {
    pub const ALL: [TableStyle; 5] = [
        TableStyle::Dashed,
        TableStyle::NoVerticalBorders,
        TableStyle::ColoredHeader,
        TableStyle::NoRules,
        TableStyle::Booktabs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableStyle::Dashed => "dashed",
            TableStyle::NoVerticalBorders => "no-vertical-borders",
            TableStyle::ColoredHeader => "colored-header",
            TableStyle::NoRules => "no-rules",
            TableStyle::Booktabs => "booktabs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PageVariant {
    /// Two-column page with body text and a caption around the table.
    WithText,
    /// The table alone on an otherwise blank page.
    TableOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TableSpec {
    /// Body rows, header excluded.
    pub rows: u32,
    pub cols: u32,
    pub column_types: Vec<ColumnType>,
    pub style: TableStyle,
    pub variant: PageVariant,
    pub sample_index: u64,
    pub derived_seed: u64,
}

/// Ranges for the sampled table shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationBounds {
    pub rows_min: u32,
    pub rows_max: u32,
    pub cols_min: u32,
    pub cols_max: u32,
    /// Probability that a page is [`PageVariant::WithText`].
    pub with_text_ratio: f64,
}

impl Default for GenerationBounds {
    fn default() -> Self {
        GenerationBounds {
            rows_min: 2,
            rows_max: 30,
            cols_min: 2,
            cols_max: 8,
            with_text_ratio: 0.5,
        }
    }
}

impl GenerationBounds {
    pub const MIN_EXTENT: u32 = 2;

    pub fn validate(&self) -> Result<(), ConfigError> {
        check_bounds("rows", self.rows_min, self.rows_max)?;
        check_bounds("cols", self.cols_min, self.cols_max)?;
        check_probability("with_text_ratio", self.with_text_ratio)
    }
}

fn check_bounds(name: &'static str, min: u32, max: u32) -> Result<(), ConfigError> {
    if min < GenerationBounds::MIN_EXTENT || min > max {
        return Err(ConfigError::Bounds {
            name,
            min,
            max,
            floor: GenerationBounds::MIN_EXTENT,
        });
    }
    Ok(())
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<(), ConfigError> {
    if !(0.0..=1.0).contains(&value) {
        return Err(ConfigError::Probability { name, value });
    }
    Ok(())
}

/// First-attempt spec for `(master_seed, sample_index)`.
pub fn sample_spec(
    master_seed: u64,
    sample_index: u64,
    bounds: &GenerationBounds,
) -> Result<TableSpec, ConfigError> {
    sample_spec_attempt(derive_seed(master_seed, sample_index), sample_index, bounds, 0)
}

/// Spec for a given layout attempt. Attempt `k > 0` is used only when the
/// spec of attempt `k - 1` could not be laid out on the page.
///
/// Draw order: rows, cols, one type per column, style, variant.
pub fn sample_spec_attempt(
    derived_seed: u64,
    sample_index: u64,
    bounds: &GenerationBounds,
    attempt: u32,
) -> Result<TableSpec, ConfigError> {
    bounds.validate()?;
    let mut rng = SampleRng::for_stream(derived_seed, Stream::Spec { attempt });
    let rows = rng.range_inclusive(bounds.rows_min, bounds.rows_max);
    let cols = rng.range_inclusive(bounds.cols_min, bounds.cols_max);
    let column_types = (0..cols)
        .map(|_| ColumnType::ALL[rng.index(ColumnType::ALL.len())])
        .collect();
    let style = TableStyle::ALL[rng.index(TableStyle::ALL.len())];
    let variant = if rng.bernoulli(bounds.with_text_ratio) {
        PageVariant::WithText
    } else {
        PageVariant::TableOnly
    };
    Ok(TableSpec {
        rows,
        cols,
        column_types,
        style,
        variant,
        sample_index,
        derived_seed,
    })
}

/// Page background. RGB values are fixed; see [`Background::rgb`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Background {
    White,
    LightBlue,
    LightRed,
}

impl Background {
    pub const fn rgb(self) -> [u8; 3] {
        match self {
            Background::White => [255, 255, 255],
            Background::LightBlue => [219, 233, 246],
            Background::LightRed => [246, 223, 219],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentationConfig {
    /// Joint probability of right-to-left cells and rotated headers.
    pub non_western_probability: f64,
    /// Probability of a colored background, split evenly between blue and red.
    pub colored_background_probability: f64,
    /// Poisson rate per pixel for scanner noise.
    pub noise_lambda: f64,
    pub perspective_probability: f64,
    /// Corner jitter as a fraction of the short page side, at most 0.05.
    pub jitter_fraction: f64,
}

impl Default for AugmentationConfig {
    fn default() -> Self {
        AugmentationConfig {
            non_western_probability: 0.15,
            colored_background_probability: 0.10,
            noise_lambda: 0.1,
            perspective_probability: 1.0,
            jitter_fraction: 0.02,
        }
    }
}

impl AugmentationConfig {
    pub const MAX_JITTER: f64 = 0.05;

    /// All augmentations switched off.
    pub fn clean() -> Self {
        AugmentationConfig {
            non_western_probability: 0.0,
            colored_background_probability: 0.0,
            noise_lambda: 0.0,
            perspective_probability: 0.0,
            jitter_fraction: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        check_probability("non_western_probability", self.non_western_probability)?;
        check_probability(
            "colored_background_probability",
            self.colored_background_probability,
        )?;
        check_probability("perspective_probability", self.perspective_probability)?;
        if !(0.0..=crate::rng::Poisson::MAX_LAMBDA).contains(&self.noise_lambda) {
            return Err(ConfigError::OutOfRange {
                name: "noise_lambda",
                value: self.noise_lambda,
                expected: "0 <= noise_lambda <= 100",
            });
        }
        if !(0.0..=Self::MAX_JITTER).contains(&self.jitter_fraction) {
            return Err(ConfigError::OutOfRange {
                name: "jitter_fraction",
                value: self.jitter_fraction,
                expected: "0 <= jitter_fraction <= 0.05",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AugmentationPlan {
    /// Drives both right-to-left cell text and rotated header text.
    pub non_western: bool,
    pub background: Background,
    pub noise_lambda: f64,
    pub perspective: Option<Homography>,
}

/// Draw order: non-western flag, colored-background flag, blue/red choice
/// (only when colored), perspective flag, homography (only when applied).
pub fn sample_augmentation(
    derived_seed: u64,
    config: &AugmentationConfig,
    page_w: u32,
    page_h: u32,
) -> Result<AugmentationPlan, ConfigError> {
    config.validate()?;
    let mut rng = SampleRng::for_stream(derived_seed, Stream::Augmentation);
    let non_western = rng.bernoulli(config.non_western_probability);
    let background = if rng.bernoulli(config.colored_background_probability) {
        if rng.bernoulli(0.5) {
            Background::LightBlue
        } else {
            Background::LightRed
        }
    } else {
        Background::White
    };
    let perspective = if rng.bernoulli(config.perspective_probability) {
        Some(sample_homography(
            &mut rng,
            config.jitter_fraction,
            f64::from(page_w),
            f64::from(page_h),
        )?)
    } else {
        None
    };
    Ok(AugmentationPlan {
        non_western,
        background,
        noise_lambda: config.noise_lambda,
        perspective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_inputs_same_spec() {
        let b = GenerationBounds::default();
        assert_eq!(sample_spec(7, 0, &b).unwrap(), sample_spec(7, 0, &b).unwrap());
    }

    #[test]
    fn neighbouring_indices_have_distinct_seeds() {
        let b = GenerationBounds::default();
        let a = sample_spec(7, 0, &b).unwrap();
        let c = sample_spec(7, 1, &b).unwrap();
        assert_ne!(a.derived_seed, c.derived_seed);
    }

    #[test]
    fn bounds_respected_exhaustively() {
        let b = GenerationBounds::default();
        for i in 0..10_000 {
            let s = sample_spec(99, i, &b).unwrap();
            assert!((2..=30).contains(&s.rows));
            assert!((2..=8).contains(&s.cols));
            assert_eq!(s.column_types.len(), s.cols as usize);
        }
    }

    #[test]
    fn invalid_bounds_rejected() {
        let b = GenerationBounds { rows_min: 1, ..GenerationBounds::default() };
        assert!(matches!(sample_spec(1, 0, &b), Err(ConfigError::Bounds { name: "rows", .. })));
        let b = GenerationBounds { cols_min: 9, ..GenerationBounds::default() };
        assert!(matches!(sample_spec(1, 0, &b), Err(ConfigError::Bounds { name: "cols", .. })));
    }

    #[test]
    fn degenerate_bounds_pin_the_shape() {
        let b = GenerationBounds {
            rows_min: 4,
            rows_max: 4,
            cols_min: 3,
            cols_max: 3,
            with_text_ratio: 1.0,
        };
        let s = sample_spec(5, 5, &b).unwrap();
        assert_eq!((s.rows, s.cols, s.variant), (4, 3, PageVariant::WithText));
    }

    #[test]
    fn zero_probabilities_give_plain_plan() {
        let mut cfg = AugmentationConfig::clean();
        cfg.noise_lambda = 0.25;
        for seed in 0..200 {
            let plan = sample_augmentation(seed, &cfg, 1240, 1754).unwrap();
            assert_eq!(
                plan,
                AugmentationPlan {
                    non_western: false,
                    background: Background::White,
                    noise_lambda: 0.25,
                    perspective: None,
                }
            );
        }
    }

    #[test]
    fn probability_outside_unit_interval_rejected() {
        let cfg = AugmentationConfig { non_western_probability: 1.5, ..AugmentationConfig::default() };
        assert!(matches!(
            sample_augmentation(0, &cfg, 100, 100),
            Err(ConfigError::Probability { name: "non_western_probability", .. })
        ));
        let cfg = AugmentationConfig { colored_background_probability: -0.1, ..AugmentationConfig::default() };
        assert!(sample_augmentation(0, &cfg, 100, 100).is_err());
    }

    #[test]
    fn default_plans_carry_invertible_homographies() {
        let cfg = AugmentationConfig::default();
        for seed in 0..100 {
            let plan = sample_augmentation(seed, &cfg, 1240, 1754).unwrap();
            let h = plan.perspective.expect("perspective applies by default");
            assert!(h.determinant().abs() > 1e-9);
            assert_eq!(h.matrix()[2][2], 1.0);
        }
    }
}

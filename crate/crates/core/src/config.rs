use crate::content::ContentConfig;
use crate::error::ConfigError;
use crate::layout::PageConfig;
use crate::sampler::{AugmentationConfig, GenerationBounds};

/// Every generation setting in one flat record.
///
/// Missing keys take their defaults when deserialized; unknown keys are
/// rejected.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct GenerationConfig {
    pub rows_min: u32,
    pub rows_max: u32,
    pub cols_min: u32,
    pub cols_max: u32,
    pub with_text_ratio: f64,

    pub non_western_probability: f64,
    pub colored_background_probability: f64,
    pub noise_lambda: f64,
    pub perspective_probability: f64,
    pub jitter_fraction: f64,

    pub text_words_min: u32,
    pub text_words_max: u32,
    pub header_words_max: u32,

    pub page_w: u32,
    pub page_h: u32,
    pub margin: u32,
    pub column_gap: u32,
    pub cell_padding: u32,
    pub glyph_size: u32,
    pub min_glyph_size: u32,
    pub body_glyph_size: u32,
    pub line_spacing: u32,
    pub rule_thickness: u32,
    pub dash_on: u32,
    pub dash_off: u32,
    pub column_inset: u32,
    pub block_gap: u32,
    pub paragraph_words_min: u32,
    pub paragraph_words_max: u32,
    pub caption_words_min: u32,
    pub caption_words_max: u32,

    /// Extra spec draws allowed after the first one fails to lay out.
    pub max_layout_retries: u32,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig::from_parts(
            &GenerationBounds::default(),
            &AugmentationConfig::default(),
            &ContentConfig::default(),
            &PageConfig::default(),
            16,
        )
    }
}

impl GenerationConfig {
    pub fn from_parts(
        bounds: &GenerationBounds,
        augmentation: &AugmentationConfig,
        content: &ContentConfig,
        page: &PageConfig,
        max_layout_retries: u32,
    ) -> Self {
        GenerationConfig {
            rows_min: bounds.rows_min,
            rows_max: bounds.rows_max,
            cols_min: bounds.cols_min,
            cols_max: bounds.cols_max,
            with_text_ratio: bounds.with_text_ratio,
            non_western_probability: augmentation.non_western_probability,
            colored_background_probability: augmentation.colored_background_probability,
            noise_lambda: augmentation.noise_lambda,
            perspective_probability: augmentation.perspective_probability,
            jitter_fraction: augmentation.jitter_fraction,
            text_words_min: content.text_words_min,
            text_words_max: content.text_words_max,
            header_words_max: content.header_words_max,
            page_w: page.page_w,
            page_h: page.page_h,
            margin: page.margin,
            column_gap: page.column_gap,
            cell_padding: page.cell_padding,
            glyph_size: page.glyph_size,
            min_glyph_size: page.min_glyph_size,
            body_glyph_size: page.body_glyph_size,
            line_spacing: page.line_spacing,
            rule_thickness: page.rule_thickness,
            dash_on: page.dash_on,
            dash_off: page.dash_off,
            column_inset: page.column_inset,
            block_gap: page.block_gap,
            paragraph_words_min: page.paragraph_words_min,
            paragraph_words_max: page.paragraph_words_max,
            caption_words_min: page.caption_words_min,
            caption_words_max: page.caption_words_max,
            max_layout_retries,
        }
    }

    pub fn bounds(&self) -> GenerationBounds {
        GenerationBounds {
            rows_min: self.rows_min,
            rows_max: self.rows_max,
            cols_min: self.cols_min,
            cols_max: self.cols_max,
            with_text_ratio: self.with_text_ratio,
        }
    }

    pub fn augmentation(&self) -> AugmentationConfig {
        AugmentationConfig {
            non_western_probability: self.non_western_probability,
            colored_background_probability: self.colored_background_probability,
            noise_lambda: self.noise_lambda,
            perspective_probability: self.perspective_probability,
            jitter_fraction: self.jitter_fraction,
        }
    }

    pub fn content(&self) -> ContentConfig {
        ContentConfig {
            text_words_min: self.text_words_min,
            text_words_max: self.text_words_max,
            header_words_max: self.header_words_max,
        }
    }

    pub fn page(&self) -> PageConfig {
        PageConfig {
            page_w: self.page_w,
            page_h: self.page_h,
            margin: self.margin,
            column_gap: self.column_gap,
            cell_padding: self.cell_padding,
            glyph_size: self.glyph_size,
            min_glyph_size: self.min_glyph_size,
            body_glyph_size: self.body_glyph_size,
            line_spacing: self.line_spacing,
            rule_thickness: self.rule_thickness,
            dash_on: self.dash_on,
            dash_off: self.dash_off,
            column_inset: self.column_inset,
            block_gap: self.block_gap,
            paragraph_words_min: self.paragraph_words_min,
            paragraph_words_max: self.paragraph_words_max,
            caption_words_min: self.caption_words_min,
            caption_words_max: self.caption_words_max,
        }
    }

    /// No augmentation of any kind.
    pub fn clean(mut self) -> Self {
        let a = AugmentationConfig::clean();
        self.non_western_probability = a.non_western_probability;
        self.colored_background_probability = a.colored_background_probability;
        self.noise_lambda = a.noise_lambda;
        self.perspective_probability = a.perspective_probability;
        self.jitter_fraction = a.jitter_fraction;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.bounds().validate()?;
        self.augmentation().validate()?;
        self.content().validate()?;
        self.page().validate()
    }
}

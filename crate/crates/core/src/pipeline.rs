//! End-to-end synthesis of one sample.

use crate::augment::{apply_poisson_noise_in_place, warp};
use crate::config::GenerationConfig;
use crate::content::{populate_table, ContentConfig, MarkovModel, TableContent};
use crate::error::{LayoutError, SynthError};
use crate::layout::{layout_page, PageConfig, PageGeometry};
use crate::raster::{render_masks, render_page, MaskImage, RasterImage};
use crate::rng::{derive_seed, SampleRng, Stream};
use crate::sampler::{
    sample_augmentation, sample_spec_attempt, AugmentationConfig, AugmentationPlan, GenerationBounds, TableSpec,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub spec: TableSpec,
    pub plan: AugmentationPlan,
    pub content: TableContent,
    /// Layout before the perspective warp.
    pub geometry: PageGeometry,
    pub image: RasterImage,
    pub table_mask: MaskImage,
    pub column_mask: MaskImage,
    /// Spec draws used, 1 when the first one laid out.
    pub layout_attempts: u32,
    pub noise_pixels: usize,
}

/// Validated configuration plus the text model, shared across samples.
#[derive(Debug, Clone)]
pub struct Generator {
    config: GenerationConfig,
    bounds: GenerationBounds,
    augmentation: AugmentationConfig,
    content: ContentConfig,
    page: PageConfig,
    model: MarkovModel,
}

impl Generator {
    pub fn new(config: GenerationConfig) -> Result<Self, SynthError> {
        config.validate()?;
        Ok(Generator {
            bounds: config.bounds(),
            augmentation: config.augmentation(),
            content: config.content(),
            page: config.page(),
            model: MarkovModel::lorem_ipsum(),
            config,
        })
    }

    pub fn config(&self) -> &GenerationConfig {
        &self.config
    }

    pub fn model(&self) -> &MarkovModel {
        &self.model
    }

    /// Spec, content and layout, retrying with fresh spec draws on rejection.
    pub fn plan(
        &self,
        master_seed: u64,
        index: u64,
    ) -> Result<(TableSpec, AugmentationPlan, TableContent, PageGeometry, u32), SynthError> {
        let derived = derive_seed(master_seed, index);
        let plan = sample_augmentation(derived, &self.augmentation, self.page.page_w, self.page.page_h)?;
        let mut last = LayoutError::ContentMismatch("no attempt made");
        for attempt in 0..=self.config.max_layout_retries {
            let spec = sample_spec_attempt(derived, index, &self.bounds, attempt)?;
            let mut rng = SampleRng::for_stream(derived, Stream::Content);
            let content = populate_table(&spec, &self.content, &self.model, &mut rng);
            match layout_page(&spec, &content, &plan, &self.page, &self.model) {
                Ok(geometry) => return Ok((spec, plan, content, geometry, attempt + 1)),
                Err(e) => last = e,
            }
        }
        Err(SynthError::LayoutRejected {
            index,
            attempts: self.config.max_layout_retries + 1,
            last,
        })
    }

    /// Render, warp, then add noise. Masks are warped but never noised.
    pub fn sample(&self, master_seed: u64, index: u64) -> Result<Sample, SynthError> {
        let (spec, plan, content, geometry, layout_attempts) = self.plan(master_seed, index)?;
        let mut image = render_page(&geometry)?;
        let (mut table_mask, mut column_mask) = render_masks(&geometry)?;
        if let Some(h) = &plan.perspective {
            (image, table_mask, column_mask) = warp(&image, &table_mask, &column_mask, h, plan.background.rgb())?;
        }
        let mut rng = SampleRng::for_stream(spec.derived_seed, Stream::Noise);
        let noise_pixels = apply_poisson_noise_in_place(&mut image, plan.noise_lambda, &mut rng)?;
        Ok(Sample {
            spec,
            plan,
            content,
            geometry,
            image,
            table_mask,
            column_mask,
            layout_attempts,
            noise_pixels,
        })
    }
}

/// One-off convenience around [`Generator`].
pub fn synthesize(master_seed: u64, index: u64, config: &GenerationConfig) -> Result<Sample, SynthError> {
    Generator::new(config.clone())?.sample(master_seed, index)
}

//! On-disk dataset layout, manifest, and parallel generation.
//!
//! ```text
//! DIR/
//!   images/000000.png
//!   masks/table/000000.png
//!   masks/column/000000.png
//!   latex/000000.tex, latex/000000.mask.tex   (optional)
//!   meta/000000.json
//!   manifest.json                              (written last)
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tabsynth_core::content::TableContent;
use tabsynth_core::latex::{emit_document, emit_mask_variant};
use tabsynth_core::layout::Placement;
use tabsynth_core::sampler::{AugmentationPlan, TableSpec};
use tabsynth_core::{GenerationConfig, Generator};

use crate::error::DatasetError;
use crate::io::{write_bytes, write_image, write_mask};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const SPLIT_FILE: &str = "split.tsv";
pub const FORMAT_VERSION: u32 = 1;
pub const GENERATOR_VERSION: &str = concat!("tabsynth ", env!("CARGO_PKG_VERSION"));

/// Zero-padded to six digits so lexicographic order is numeric order.
pub fn sample_id(index: u64) -> String {
    format!("{index:06}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaskTarget {
    Table,
    Column,
}

impl MaskTarget {
    pub fn dir(self) -> &'static str {
        match self {
            MaskTarget::Table => "masks/table",
            MaskTarget::Column => "masks/column",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MaskTarget::Table => "table",
            MaskTarget::Column => "column",
        }
    }
}

pub fn image_rel(id: &str) -> String {
    format!("images/{id}.png")
}

pub fn mask_rel(target: MaskTarget, id: &str) -> String {
    format!("{}/{id}.png", target.dir())
}

pub fn meta_rel(id: &str) -> String {
    format!("meta/{id}.json")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplePaths {
    pub image: String,
    pub table_mask: String,
    pub column_mask: String,
    pub meta: String,
    pub latex: Option<String>,
    pub latex_mask: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRecord {
    pub sample_id: String,
    pub index: u64,
    pub spec: TableSpec,
    pub plan: AugmentationPlan,
    pub paths: SamplePaths,
    pub image_dims: (u32, u32),
    pub layout_attempts: u32,
    pub noise_pixels: u64,
}

/// Per-sample metadata file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleMeta {
    pub sample_id: String,
    pub spec: TableSpec,
    pub plan: AugmentationPlan,
    pub content: TableContent,
    pub placement: Option<Placement>,
    pub glyph_size: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationStats {
    /// Samples whose first spec draw failed to lay out.
    pub resampled: u64,
    /// Extra spec draws across all samples.
    pub layout_retries: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format_version: u32,
    pub generator_version: String,
    pub master_seed: u64,
    pub config_snapshot: GenerationConfig,
    pub statistics: GenerationStats,
    pub records: Vec<SampleRecord>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self, DatasetError> {
        serde_json::from_str(text).map_err(|source| DatasetError::Json { path: path.to_owned(), source })
    }
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, DatasetError> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| DatasetError::io(&path, e))?;
    Manifest::from_json(&text, &path)
}

pub fn read_meta(dir: &Path, record: &SampleRecord) -> Result<SampleMeta, DatasetError> {
    let path = dir.join(&record.paths.meta);
    let text = fs::read_to_string(&path).map_err(|e| DatasetError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|source| DatasetError::Json { path, source })
}

/// Temp file then rename, so a manifest is never partially written.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), DatasetError> {
    let tmp = path.with_extension("json.tmp");
    write_bytes(&tmp, bytes)?;
    fs::rename(&tmp, path).map_err(|e| DatasetError::io(path, e))
}

#[derive(Debug, Clone, Default)]
pub struct GenerateOptions {
    pub latex: bool,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
}

fn create_dirs(out: &Path, latex: bool) -> Result<(), DatasetError> {
    let mut dirs = vec![
        out.join("images"),
        out.join(MaskTarget::Table.dir()),
        out.join(MaskTarget::Column.dir()),
        out.join("meta"),
    ];
    if latex {
        dirs.push(out.join("latex"));
    }
    for d in dirs {
        fs::create_dir_all(&d).map_err(|e| DatasetError::io(&d, e))?;
    }
    Ok(())
}

fn generate_one(
    generator: &Generator,
    master_seed: u64,
    index: u64,
    out: &Path,
    latex: bool,
) -> Result<SampleRecord, DatasetError> {
    let s = generator.sample(master_seed, index)?;
    let id = sample_id(index);
    let paths = SamplePaths {
        image: image_rel(&id),
        table_mask: mask_rel(MaskTarget::Table, &id),
        column_mask: mask_rel(MaskTarget::Column, &id),
        meta: meta_rel(&id),
        latex: latex.then(|| format!("latex/{id}.tex")),
        latex_mask: latex.then(|| format!("latex/{id}.mask.tex")),
    };
    write_image(&out.join(&paths.image), &s.image)?;
    write_mask(&out.join(&paths.table_mask), &s.table_mask)?;
    write_mask(&out.join(&paths.column_mask), &s.column_mask)?;

    let placement = s.geometry.table.as_ref().map(|_| s.geometry.placement);
    if let (Some(doc_path), Some(mask_path), Some(p)) = (&paths.latex, &paths.latex_mask, placement) {
        let doc = emit_document(&s.spec, &s.content, &s.plan, p, generator.model());
        let mask = emit_mask_variant(&s.spec, &s.content, &s.plan, p, generator.model());
        write_bytes(&out.join(doc_path), doc.source().as_bytes())?;
        write_bytes(&out.join(mask_path), mask.source().as_bytes())?;
    }
    let meta = SampleMeta {
        sample_id: id.clone(),
        spec: s.spec.clone(),
        plan: s.plan.clone(),
        content: s.content,
        placement,
        glyph_size: s.geometry.table.as_ref().map(|t| t.glyph_size),
    };
    let mut meta_json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    meta_json.push('\n');
    write_bytes(&out.join(&paths.meta), meta_json.as_bytes())?;

    Ok(SampleRecord {
        sample_id: id,
        index,
        spec: s.spec,
        plan: s.plan,
        paths,
        image_dims: (s.image.width(), s.image.height()),
        layout_attempts: s.layout_attempts,
        noise_pixels: s.noise_pixels as u64,
    })
}

/// Generates samples `0..count` into `out` and writes the manifest last.
///
/// Output bytes depend only on the seed, the config and the generator
/// version, never on the number of worker threads.
pub fn generate_dataset(
    config: &GenerationConfig,
    master_seed: u64,
    count: u64,
    out: &Path,
    options: &GenerateOptions,
) -> Result<Manifest, DatasetError> {
    if count == 0 {
        return Err(DatasetError::EmptyCount);
    }
    let generator = Generator::new(config.clone())?;
    create_dirs(out, options.latex)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = options.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let records = pool.build()?.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| generate_one(&generator, master_seed, i, out, options.latex))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let statistics = GenerationStats {
        resampled: records.iter().filter(|r| r.layout_attempts > 1).count() as u64,
        layout_retries: records.iter().map(|r| u64::from(r.layout_attempts - 1)).sum(),
    };
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        generator_version: GENERATOR_VERSION.to_string(),
        master_seed,
        config_snapshot: config.clone(),
        statistics,
        records,
    };
    write_atomic(&out.join(MANIFEST_FILE), manifest.to_json().as_bytes())?;
    Ok(manifest)
}

pub fn list_pngs(dir: &Path) -> Result<Vec<(String, PathBuf)>, DatasetError> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| DatasetError::io(dir, e))? {
        let path = entry.map_err(|e| DatasetError::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == "png") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                out.push((stem.to_string(), path.clone()));
            }
        }
    }
    out.sort();
    Ok(out)
}

//! Runs the baseline detector over a dataset's images.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use tabsynth_core::detect::{detect, DetectParams};

use crate::dataset::{list_pngs, mask_rel, MaskTarget};
use crate::error::DatasetError;
use crate::io::{read_image, write_mask};

/// Writes `out/masks/table/ID.png` and `out/masks/column/ID.png` for every
/// `dir/images/ID.png`, the same layout as ground truth. Returns the ids.
pub fn detect_dataset(
    dir: &Path,
    out: &Path,
    params: &DetectParams,
    jobs: Option<usize>,
) -> Result<Vec<String>, DatasetError> {
    let images = list_pngs(&dir.join("images"))?;
    for t in [MaskTarget::Table, MaskTarget::Column] {
        let d = out.join(t.dir());
        fs::create_dir_all(&d).map_err(|e| DatasetError::io(&d, e))?;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j.max(1));
    }
    pool.build()?.install(|| {
        images
            .par_iter()
            .map(|(id, path)| {
                let d = detect(&read_image(path)?, params)?;
                write_mask(&out.join(mask_rel(MaskTarget::Table, id)), &d.table_mask)?;
                write_mask(&out.join(mask_rel(MaskTarget::Column, id)), &d.column_mask)?;
                Ok(id.clone())
            })
            .collect()
    })
}

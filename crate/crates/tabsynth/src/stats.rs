//! Empirical distributions of a generated dataset.

use std::fmt;
use std::path::Path;

use tabsynth_core::content::parse_date;
use tabsynth_core::sampler::{Background, ColumnType, PageVariant, TableStyle};

use crate::dataset::{read_manifest, read_meta};
use crate::error::DatasetError;

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetStats {
    pub samples: usize,
    /// Fraction per style, in [`TableStyle::ALL`] order.
    pub style: [f64; 5],
    pub with_text: f64,
    pub non_western: f64,
    pub light_blue: f64,
    pub light_red: f64,
    pub perspective: f64,
    pub numeric_cells: usize,
    pub numeric_mean: Option<f64>,
    pub numeric_std: Option<f64>,
    pub date_cells: usize,
    pub date_min: Option<String>,
    pub date_max: Option<String>,
    pub layout_retries: u64,
}

fn fraction(hits: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        hits as f64 / n as f64
    }
}

pub fn dataset_stats(dir: &Path) -> Result<DatasetStats, DatasetError> {
    let manifest = read_manifest(dir)?;
    let recs = &manifest.records;
    let n = recs.len();
    let count = |f: &dyn Fn(&crate::dataset::SampleRecord) -> bool| fraction(recs.iter().filter(|r| f(r)).count(), n);

    let mut style = [0.0; 5];
    for (slot, s) in style.iter_mut().zip(TableStyle::ALL) {
        *slot = count(&|r| r.spec.style == s);
    }

    let (mut sum, mut sum_sq, mut numeric_cells) = (0.0f64, 0.0f64, 0usize);
    let mut dates: Vec<String> = Vec::new();
    for r in recs {
        let meta = read_meta(dir, r)?;
        for (row, types) in meta.content.body.iter().zip(&meta.content.cell_types) {
            for (cell, t) in row.iter().zip(types) {
                match t {
                    ColumnType::Numeric => {
                        if let Ok(v) = cell.parse::<f64>() {
                            sum += v;
                            sum_sq += v * v;
                            numeric_cells += 1;
                        }
                    }
                    ColumnType::Date if parse_date(cell).is_some() => dates.push(cell.clone()),
                    _ => {}
                }
            }
        }
    }
    let numeric_mean = (numeric_cells > 0).then(|| sum / numeric_cells as f64);
    let numeric_std = numeric_mean.filter(|_| numeric_cells > 1).map(|m| {
        let var = (sum_sq - numeric_cells as f64 * m * m) / (numeric_cells - 1) as f64;
        var.max(0.0).sqrt()
    });
    dates.sort();

    Ok(DatasetStats {
        samples: n,
        style,
        with_text: count(&|r| r.spec.variant == PageVariant::WithText),
        non_western: count(&|r| r.plan.non_western),
        light_blue: count(&|r| r.plan.background == Background::LightBlue),
        light_red: count(&|r| r.plan.background == Background::LightRed),
        perspective: count(&|r| r.plan.perspective.is_some()),
        numeric_cells,
        numeric_mean,
        numeric_std,
        date_cells: dates.len(),
        date_min: dates.first().cloned(),
        date_max: dates.last().cloned(),
        layout_retries: manifest.statistics.layout_retries,
    })
}

impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
        writeln!(f, "samples\t{}", self.samples)?;
        for (s, p) in TableStyle::ALL.iter().zip(self.style) {
            writeln!(f, "style.{}\t{p:.6}", s.name())?;
        }
        writeln!(f, "variant.with-text\t{:.6}", self.with_text)?;
        writeln!(f, "non-western\t{:.6}", self.non_western)?;
        writeln!(f, "background.light-blue\t{:.6}", self.light_blue)?;
        writeln!(f, "background.light-red\t{:.6}", self.light_red)?;
        writeln!(f, "perspective\t{:.6}", self.perspective)?;
        writeln!(f, "numeric.cells\t{}", self.numeric_cells)?;
        writeln!(f, "numeric.mean\t{}", opt(self.numeric_mean))?;
        writeln!(f, "numeric.std\t{}", opt(self.numeric_std))?;
        writeln!(f, "date.cells\t{}", self.date_cells)?;
        writeln!(f, "date.min\t{}", self.date_min.as_deref().unwrap_or("-"))?;
        writeln!(f, "date.max\t{}", self.date_max.as_deref().unwrap_or("-"))?;
        writeln!(f, "layout.retries\t{}", self.layout_retries)
    }
}

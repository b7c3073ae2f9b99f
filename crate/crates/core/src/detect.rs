//! Projection-profile table detector.
//!
//! A fixed, non-learned baseline. It binarizes the page, groups ink rows into
//! bands, keeps bands whose text lines recur at a regular pitch, and takes
//! the heaviest one as the table. Columns are split at whitespace valleys of
//! the band's vertical profile once rule rows and rule columns are removed.
//!
//! Lengths in [`DetectParams`] are fractions of the page so the detector
//! behaves the same on resized inputs.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::RasterError;
use crate::layout::Rect;
use crate::raster::{MaskImage, RasterImage};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct DetectParams {
    /// Luma strictly below this is ink.
    pub ink_threshold: u8,
    /// Row-profile threshold as a fraction of the way from the noise floor
    /// to the peak row.
    pub row_threshold: f64,
    /// Ink rows closer than this fraction of the height join one band.
    pub merge_gap: f64,
    /// Minimum number of text lines in a table band.
    pub min_lines: usize,
    /// Largest allowed coefficient of variation of the line pitch.
    pub max_pitch_cv: f64,
    /// Runs of ink rows at most this many pixels tall are treated as rules.
    pub max_rule_px: usize,
    /// A row or column is a rule when ink covers this fraction of the band.
    pub rule_coverage: f64,
    /// Minimum valley width between columns, as a fraction of the width.
    pub min_valley: f64,
    /// Padding added on sides without a border rule, as a fraction of the width.
    pub cell_pad: f64,
    /// Inset applied to each detected column, as a fraction of the width.
    pub column_inset: f64,
}

impl Default for DetectParams {
    fn default() -> Self {
        DetectParams {
            ink_threshold: 160,
            row_threshold: 0.02,
            merge_gap: 0.02,
            min_lines: 2,
            max_pitch_cv: 0.35,
            max_rule_px: 4,
            rule_coverage: 0.5,
            min_valley: 11.0 / 1240.0,
            cell_pad: 6.0 / 1240.0,
            column_inset: 3.0 / 1240.0,
        }
    }
}

/// Ink mask: 255 where luma is below `threshold`.
pub fn binarize(image: &RasterImage, threshold: u8) -> MaskImage {
    let n = image.width() as usize * image.height() as usize;
    let px = (0..n).map(|i| if image.luma_at(i) < threshold { 255 } else { 0 }).collect();
    MaskImage::from_raw(image.width(), image.height(), px).expect("dimensions come from a valid image")
}

/// Ink counts per row and per column of a binary mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionProfile {
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
}

impl ProjectionProfile {
    pub fn of(mask: &MaskImage) -> Self {
        Self::of_window(mask, 0..mask.width() as usize, 0..mask.height() as usize)
    }

    pub fn of_window(mask: &MaskImage, xs: core::ops::Range<usize>, ys: core::ops::Range<usize>) -> Self {
        let w = mask.width() as usize;
        let mut rows = vec![0u32; ys.len()];
        let mut cols = vec![0u32; xs.len()];
        for (ri, y) in ys.clone().enumerate() {
            let line = &mask.pixels()[y * w + xs.start..y * w + xs.end];
            for (ci, &v) in line.iter().enumerate() {
                if v != 0 {
                    rows[ri] += 1;
                    cols[ci] += 1;
                }
            }
        }
        ProjectionProfile { rows, cols }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub table_mask: MaskImage,
    pub column_mask: MaskImage,
    /// Detected table box, `None` when no band qualified.
    pub region: Option<Rect>,
    /// Detected column boxes in page pixels.
    pub columns: Vec<Rect>,
}

fn percentile(values: &[u32], p: f64) -> u32 {
    if values.is_empty() {
        return 0;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    v[((v.len() - 1) as f64 * p) as usize]
}

/// Maximal runs of `true`, as half-open ranges.
fn runs(flags: impl Iterator<Item = bool>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut n = 0;
    for (i, f) in flags.enumerate() {
        match (f, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i));
                start = None;
            }
            _ => {}
        }
        n = i + 1;
    }
    if let Some(s) = start {
        out.push((s, n));
    }
    out
}

fn merge(mut spans: Vec<(usize, usize)>, gap: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for s in spans.drain(..) {
        match out.last_mut() {
            Some(last) if s.0 - last.1 <= gap => last.1 = s.1,
            _ => out.push(s),
        }
    }
    out
}

fn is_periodic(lines: &[(usize, usize)], max_cv: f64) -> bool {
    // The header line may be taller (rotated headers), so its pitch is skipped.
    let pitches: Vec<f64> = lines.windows(2).skip(1).map(|w| (w[1].0 - w[0].0) as f64).collect();
    if pitches.len() < 2 {
        return true;
    }
    let mean = pitches.iter().sum::<f64>() / pitches.len() as f64;
    let var = pitches.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / pitches.len() as f64;
    libm::sqrt(var) <= max_cv * mean
}

fn px(fraction: f64, extent: u32) -> usize {
    libm::round(fraction * f64::from(extent)) as usize
}

pub fn detect(image: &RasterImage, params: &DetectParams) -> Result<Detection, RasterError> {
    let (w, h) = (image.width(), image.height());
    let mut table_mask = MaskImage::zeros(w, h)?;
    let mut column_mask = MaskImage::zeros(w, h)?;
    let none = |t, c| Detection { table_mask: t, column_mask: c, region: None, columns: Vec::new() };

    let ink = binarize(image, params.ink_threshold);
    let profile = ProjectionProfile::of(&ink);
    let floor = percentile(&profile.rows, 0.05);
    let peak = profile.rows.iter().copied().max().unwrap_or(0);
    if peak <= floor {
        return Ok(none(table_mask, column_mask));
    }
    let threshold = f64::from(floor) + (params.row_threshold * f64::from(peak - floor)).max(1.0);
    let ink_rows = runs(profile.rows.iter().map(|&c| f64::from(c) >= threshold));
    let bands = merge(ink_rows.clone(), px(params.merge_gap, h));

    let mut best: Option<((usize, usize), u64)> = None;
    for &band in &bands {
        let lines: Vec<(usize, usize)> = ink_rows
            .iter()
            .copied()
            .filter(|r| r.0 >= band.0 && r.1 <= band.1 && r.1 - r.0 > params.max_rule_px)
            .collect();
        if lines.len() < params.min_lines || !is_periodic(&lines, params.max_pitch_cv) {
            continue;
        }
        let mass: u64 = profile.rows[band.0..band.1].iter().map(|&c| u64::from(c - c.min(floor))).sum();
        if best.is_none_or(|(_, m)| mass > m) {
            best = Some((band, mass));
        }
    }
    let Some(((y0, y1), _)) = best else {
        return Ok(none(table_mask, column_mask));
    };

    // Grow the band over faint rows that still carry ink above the floor.
    let (mut y0, mut y1) = (y0, y1);
    while y0 > 0 && profile.rows[y0 - 1] > floor {
        y0 -= 1;
    }
    while y1 < h as usize && profile.rows[y1] > floor {
        y1 += 1;
    }
    let band_cols = ProjectionProfile::of_window(&ink, 0..w as usize, y0..y1).cols;
    let col_floor = percentile(&band_cols, 0.05);
    let Some(x0) = band_cols.iter().position(|&c| c > col_floor) else {
        return Ok(none(table_mask, column_mask));
    };
    let x1 = band_cols.iter().rposition(|&c| c > col_floor).map_or(x0 + 1, |x| x + 1);

    let window = ProjectionProfile::of_window(&ink, x0..x1, y0..y1);
    let (bw, bh) = ((x1 - x0) as f64, (y1 - y0) as f64);
    let rule_row = |c: u32| f64::from(c) >= params.rule_coverage * bw;
    let rule_col = |c: u32| f64::from(c) >= params.rule_coverage * bh;
    let pad = px(params.cell_pad, w);
    let grow = |ruled: bool| if ruled { 0 } else { pad };
    let left = x0.saturating_sub(grow(rule_col(window.cols[0])));
    let right = (x1 + grow(rule_col(window.cols[x1 - x0 - 1]))).min(w as usize);
    let top = y0.saturating_sub(grow(rule_row(window.rows[0])));
    let bottom = (y1 + grow(rule_row(window.rows[y1 - y0 - 1]))).min(h as usize);
    let region = Rect::new(left as f64, top as f64, (right - left) as f64, (bottom - top) as f64);
    table_mask.fill_rect(&region);

    // Column profile without rule rows or rule columns.
    let w_us = w as usize;
    let mut cols = vec![0u32; x1 - x0];
    for (ri, y) in (y0..y1).enumerate() {
        if rule_row(window.rows[ri]) {
            continue;
        }
        for (ci, c) in cols.iter_mut().enumerate() {
            if ink.pixels()[y * w_us + x0 + ci] != 0 && !rule_col(window.cols[ci]) {
                *c += 1;
            }
        }
    }
    let valley_floor = col_floor;
    let min_valley = px(params.min_valley, w).max(1);
    let mut cuts = Vec::new();
    for (a, b) in runs(cols.iter().map(|&c| c <= valley_floor)) {
        if a > 0 && b < cols.len() && b - a >= min_valley {
            cuts.push(x0 + (a + b) / 2);
        }
    }
    let inset = px(params.column_inset, w) as f64;
    let mut edges = vec![left];
    edges.extend(cuts);
    edges.push(right);
    let mut columns = Vec::new();
    for pair in edges.windows(2) {
        let (a, b) = (pair[0] as f64 + inset, pair[1] as f64 - inset);
        if b > a {
            let r = Rect::new(a, region.y, b - a, region.h);
            column_mask.fill_rect(&r);
            columns.push(r);
        }
    }
    Ok(Detection { table_mask, column_mask, region: Some(region), columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::{MarkovModel, populate_table, ContentConfig};
    use crate::layout::{layout_page, PageConfig};
    use crate::metrics::{xor_error, ResizePolicy};
    use crate::raster::{render_masks, render_page};
    use crate::rng::{SampleRng, Stream};
    use crate::sampler::{sample_spec, AugmentationPlan, Background, GenerationBounds, PageVariant};

    #[test]
    fn blank_and_black_pages_give_empty_masks() {
        for rgb in [[255u8; 3], [0; 3]] {
            let img = RasterImage::filled(120, 90, rgb).unwrap();
            let d = detect(&img, &DetectParams::default()).unwrap();
            assert_eq!(d.region, None);
            assert_eq!(d.table_mask.count_foreground(), 0);
            assert_eq!(d.column_mask.count_foreground(), 0);
        }
    }

    #[test]
    fn runs_and_merge() {
        let f = [false, true, true, false, false, true, false, true];
        assert_eq!(runs(f.iter().copied()), vec![(1, 3), (5, 6), (7, 8)]);
        assert_eq!(merge(vec![(1, 3), (5, 6), (7, 8)], 1), vec![(1, 3), (5, 8)]);
        assert_eq!(merge(vec![(1, 3), (5, 6), (7, 8)], 2), vec![(1, 8)]);
    }

    #[test]
    fn profile_counts() {
        let mut m = MaskImage::zeros(5, 4).unwrap();
        m.fill_rect(&Rect::new(1.0, 1.0, 3.0, 2.0));
        let p = ProjectionProfile::of(&m);
        assert_eq!(p.rows, vec![0, 3, 3, 0]);
        assert_eq!(p.cols, vec![0, 2, 2, 2, 0]);
    }

    #[test]
    fn finds_clean_tables() {
        let model = MarkovModel::lorem_ipsum();
        let cfg = PageConfig::default();
        let bounds = GenerationBounds { with_text_ratio: 0.0, ..GenerationBounds::default() };
        let plan = AugmentationPlan {
            non_western: false,
            background: Background::White,
            noise_lambda: 0.0,
            perspective: None,
        };
        let mut total = 0.0;
        let n = 12;
        for i in 0..n {
            let spec = sample_spec(99, i, &bounds).unwrap();
            assert_eq!(spec.variant, PageVariant::TableOnly);
            let mut rng = SampleRng::for_stream(spec.derived_seed, Stream::Content);
            let content = populate_table(&spec, &ContentConfig::default(), &model, &mut rng);
            let Ok(page) = layout_page(&spec, &content, &plan, &cfg, &model) else { continue };
            let img = render_page(&page).unwrap();
            let (gt, _) = render_masks(&page).unwrap();
            let d = detect(&img, &DetectParams::default()).unwrap();
            let a = detect(&img, &DetectParams::default()).unwrap();
            assert_eq!(a, d);
            assert!(d.table_mask.pixels().iter().all(|&v| v == 0 || v == 255));
            total += xor_error(&d.table_mask, &gt, ResizePolicy::Strict).unwrap().xor_error;
        }
        assert!(total / n as f64 <= 0.05, "{}", total / n as f64);
    }
}

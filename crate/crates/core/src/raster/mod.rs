//! Rendering page geometry to pixels.
//!
//! A pixel belongs to a region iff its centre lies inside the region's
//! half-open box. The page image and both masks are drawn from the same
//! geometry with that rule, never derived from each other.

pub mod atlas;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::RasterError;
use crate::layout::{mask_regions, GlyphRun, LinePattern, PageGeometry, Rect, TextDirection};

/// Ink colour for text and rules.
pub const INK: [u8; 3] = [0, 0, 0];
/// Header fill for the colored-header style.
pub const HEADER_FILL: [u8; 3] = [189, 208, 232];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channels {
    Gray = 1,
    Rgb = 3,
}

/// Row-major 8-bit image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    channels: Channels,
    pixels: Vec<u8>,
}

impl RasterImage {
    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Result<Self, RasterError> {
        check_dims(width, height)?;
        let n = width as usize * height as usize;
        let mut pixels = Vec::with_capacity(n * 3);
        for _ in 0..n {
            pixels.extend_from_slice(&rgb);
        }
        Ok(RasterImage { width, height, channels: Channels::Rgb, pixels })
    }

    pub fn from_raw(
        width: u32,
        height: u32,
        channels: Channels,
        pixels: Vec<u8>,
    ) -> Result<Self, RasterError> {
        check_dims(width, height)?;
        let expected = width as usize * height as usize * channels as usize;
        if pixels.len() != expected {
            return Err(RasterError::BufferLength { len: pixels.len(), expected });
        }
        Ok(RasterImage { width, height, channels, pixels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> Channels {
        self.channels
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.pixels
    }

    pub fn pixel(&self, x: u32, y: u32) -> &[u8] {
        let c = self.channels as usize;
        let i = (y as usize * self.width as usize + x as usize) * c;
        &self.pixels[i..i + c]
    }

    /// Luma of pixel `i` with integer weights 299/587/114 (rounded).
    pub fn luma_at(&self, i: usize) -> u8 {
        match self.channels {
            Channels::Gray => self.pixels[i],
            Channels::Rgb => {
                let p = &self.pixels[i * 3..i * 3 + 3];
                luma(p[0], p[1], p[2])
            }
        }
    }

    fn fill_rect(&mut self, rect: &Rect, rgb: [u8; 3]) {
        let (xs, ys) = (pixel_span(rect.x, rect.right(), self.width), pixel_span(rect.y, rect.bottom(), self.height));
        for y in ys {
            for x in xs.clone() {
                self.put(x, y, rgb);
            }
        }
    }

    #[inline]
    fn put(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = y * self.width as usize + x;
        match self.channels {
            Channels::Gray => self.pixels[i] = luma(rgb[0], rgb[1], rgb[2]),
            Channels::Rgb => self.pixels[i * 3..i * 3 + 3].copy_from_slice(&rgb),
        }
    }
}

#[inline]
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    ((299 * u32::from(r) + 587 * u32::from(g) + 114 * u32::from(b) + 500) / 1000) as u8
}

/// Binary mask: every pixel is 0 or 255.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl MaskImage {
    pub fn zeros(width: u32, height: u32) -> Result<Self, RasterError> {
        check_dims(width, height)?;
        Ok(MaskImage { width, height, pixels: vec![0; width as usize * height as usize] })
    }

    pub fn full(width: u32, height: u32) -> Result<Self, RasterError> {
        check_dims(width, height)?;
        Ok(MaskImage { width, height, pixels: vec![255; width as usize * height as usize] })
    }

    /// Validates length and binariness.
    pub fn from_raw(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self, RasterError> {
        check_dims(width, height)?;
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(RasterError::BufferLength { len: pixels.len(), expected });
        }
        if let Some((index, &value)) = pixels.iter().enumerate().find(|(_, &v)| v != 0 && v != 255) {
            return Err(RasterError::NonBinary { index, value });
        }
        Ok(MaskImage { width, height, pixels })
    }

    /// Maps `v >= threshold` to 255 and everything else to 0.
    pub fn from_threshold(width: u32, height: u32, values: &[u8], threshold: u8) -> Result<Self, RasterError> {
        let pixels = values.iter().map(|&v| if v >= threshold { 255 } else { 0 }).collect();
        Self::from_raw(width, height, pixels)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.pixels[y as usize * self.width as usize + x as usize] == 255
    }

    pub fn set(&mut self, x: u32, y: u32, on: bool) {
        self.pixels[y as usize * self.width as usize + x as usize] = if on { 255 } else { 0 };
    }

    pub fn count_foreground(&self) -> usize {
        self.pixels.iter().filter(|&&v| v == 255).count()
    }

    pub fn fill_rect(&mut self, rect: &Rect) {
        let (xs, ys) = (pixel_span(rect.x, rect.right(), self.width), pixel_span(rect.y, rect.bottom(), self.height));
        for y in ys {
            let row = y * self.width as usize;
            self.pixels[row + xs.start..row + xs.end].fill(255);
        }
    }

    /// Bitwise complement.
    pub fn inverted(&self) -> MaskImage {
        MaskImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|v| 255 - v).collect(),
        }
    }
}

fn check_dims(width: u32, height: u32) -> Result<(), RasterError> {
    if width == 0 || height == 0 {
        return Err(RasterError::ZeroDimension { width, height });
    }
    Ok(())
}

/// Pixels whose centres fall in `[lo, hi)`, clamped to `[0, limit)`.
pub fn pixel_span(lo: f64, hi: f64, limit: u32) -> core::ops::Range<usize> {
    let clamp = |v: f64| libm::ceil(v - 0.5).clamp(0.0, f64::from(limit)) as usize;
    let (a, b) = (clamp(lo), clamp(hi));
    a..b.max(a)
}

fn check_inside(page: &Rect, what: &'static str, r: &Rect, w: u32, h: u32) -> Result<(), RasterError> {
    if page.contains_rect(r) {
        return Ok(());
    }
    Err(RasterError::OutOfBounds {
        what,
        x0: r.x,
        x1: r.right(),
        y0: r.y,
        y1: r.bottom(),
        width: w,
        height: h,
    })
}

fn check_geometry(g: &PageGeometry) -> Result<(), RasterError> {
    let page = g.page_rect();
    let (w, h) = (g.page_w, g.page_h);
    if let Some(t) = &g.table {
        check_inside(&page, "table", &t.outer, w, h)?;
        for rule in &t.rules {
            check_inside(&page, "rule", &rule.bounds(), w, h)?;
        }
        for run in t.cell_runs.iter().flatten() {
            check_inside(&page, "cell text", &run.bounds(), w, h)?;
        }
    }
    for run in &g.text_runs {
        check_inside(&page, "body text", &run.bounds(), w, h)?;
    }
    if let Some(c) = &g.caption_run {
        check_inside(&page, "caption", &c.bounds(), w, h)?;
    }
    Ok(())
}

/// Draws the page: background, header fill, rules, then all text.
///
/// Dashed rules repeat `dash_on` drawn units then `dash_off` blank units,
/// measured from the rule's start point.
pub fn render_page(geometry: &PageGeometry) -> Result<RasterImage, RasterError> {
    check_geometry(geometry)?;
    let mut img = RasterImage::filled(geometry.page_w, geometry.page_h, geometry.background.rgb())?;
    if let Some(table) = &geometry.table {
        if let Some(fill) = &table.header_fill {
            img.fill_rect(fill, HEADER_FILL);
        }
        for rule in &table.rules {
            let b = rule.bounds();
            match rule.pattern {
                LinePattern::Solid => img.fill_rect(&b, INK),
                LinePattern::Dashed => {
                    let period = geometry.dash_on + geometry.dash_off;
                    let horizontal = rule.is_horizontal();
                    let xs = pixel_span(b.x, b.right(), img.width);
                    let ys = pixel_span(b.y, b.bottom(), img.height);
                    for y in ys {
                        for x in xs.clone() {
                            let along = if horizontal {
                                x as f64 + 0.5 - rule.from.x
                            } else {
                                y as f64 + 0.5 - rule.from.y
                            };
                            if along - libm::floor(along / period) * period < geometry.dash_on {
                                img.put(x, y, INK);
                            }
                        }
                    }
                }
            }
        }
        for run in table.cell_runs.iter().flatten() {
            draw_run(&mut img, run);
        }
    }
    if let Some(c) = &geometry.caption_run {
        draw_run(&mut img, c);
    }
    for run in &geometry.text_runs {
        draw_run(&mut img, run);
    }
    Ok(img)
}

/// Blits a run. Each glyph cell is `glyph_size / 2` wide and `glyph_size`
/// tall (swapped for rotated text) and samples the 8x16 atlas by nearest
/// neighbour.
fn draw_run(img: &mut RasterImage, run: &GlyphRun) {
    let adv = run.advance();
    let size = run.glyph_size;
    let b = run.bounds();
    for (i, ch) in run.text.chars().enumerate() {
        if ch == ' ' {
            continue;
        }
        // Cell origin and extent on the page.
        let cell = match run.direction {
            TextDirection::LeftToRight => Rect::new(b.x + i as f64 * adv, b.y, adv, size),
            TextDirection::RightToLeft => Rect::new(b.right() - (i + 1) as f64 * adv, b.y, adv, size),
            TextDirection::RotatedVertical => Rect::new(b.x, b.bottom() - (i + 1) as f64 * adv, size, adv),
        };
        let xs = pixel_span(cell.x, cell.right(), img.width);
        let ys = pixel_span(cell.y, cell.bottom(), img.height);
        for y in ys {
            for x in xs.clone() {
                // Position inside the cell in [0, 1).
                let u = (x as f64 + 0.5 - cell.x) / cell.w;
                let v = (y as f64 + 0.5 - cell.y) / cell.h;
                let (ax, ay) = match run.direction {
                    TextDirection::RotatedVertical => {
                        // Counter-clockwise: glyph top faces left, glyph x runs upward.
                        ((1.0 - v) * atlas::CELL_W as f64, u * atlas::CELL_H as f64)
                    }
                    _ => (u * atlas::CELL_W as f64, v * atlas::CELL_H as f64),
                };
                let ax = (ax as usize).min(atlas::CELL_W - 1);
                let ay = (ay as usize).min(atlas::CELL_H - 1);
                if atlas::ink(ch, ax, ay) {
                    img.put(x, y, INK);
                }
            }
        }
    }
}

/// Table mask and column mask at the page's resolution. Pages without a
/// table give two empty masks.
pub fn render_masks(geometry: &PageGeometry) -> Result<(MaskImage, MaskImage), RasterError> {
    let mut table = MaskImage::zeros(geometry.page_w, geometry.page_h)?;
    let mut columns = MaskImage::zeros(geometry.page_w, geometry.page_h)?;
    if let Some(regions) = mask_regions(geometry) {
        table.fill_rect(&regions.table);
        for c in &regions.columns {
            columns.fill_rect(c);
        }
    }
    Ok((table, columns))
}

/// Resampling to a new size: bilinear for images, nearest neighbour for
/// masks. Both map pixel centres, so resizing to the same size is exact.
pub trait Resize: Sized {
    fn resize(&self, width: u32, height: u32) -> Result<Self, RasterError>;
}

/// Nearest source index for destination pixel `d` (integer arithmetic).
#[inline]
fn nearest(d: usize, src: u32, dst: u32) -> usize {
    ((2 * d as u64 + 1) * u64::from(src) / (2 * u64::from(dst))) as usize
}

impl Resize for MaskImage {
    fn resize(&self, width: u32, height: u32) -> Result<Self, RasterError> {
        check_dims(width, height)?;
        let xs: Vec<usize> = (0..width as usize).map(|x| nearest(x, self.width, width)).collect();
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height as usize {
            let row = nearest(y, self.height, height) * self.width as usize;
            pixels.extend(xs.iter().map(|&sx| self.pixels[row + sx]));
        }
        Ok(MaskImage { width, height, pixels })
    }
}

/// Source sample positions and weights for bilinear resampling on one axis.
fn bilinear_axis(src: u32, dst: u32) -> Vec<(usize, usize, f64)> {
    let scale = f64::from(src) / f64::from(dst);
    let max = src as usize - 1;
    (0..dst as usize)
        .map(|d| {
            let s = ((d as f64 + 0.5) * scale - 0.5).max(0.0);
            let i0 = (libm::floor(s) as usize).min(max);
            let i1 = (i0 + 1).min(max);
            (i0, i1, s - i0 as f64)
        })
        .collect()
}

impl Resize for RasterImage {
    fn resize(&self, width: u32, height: u32) -> Result<Self, RasterError> {
        check_dims(width, height)?;
        if (width, height) == (self.width, self.height) {
            return Ok(self.clone());
        }
        let c = self.channels as usize;
        let xs = bilinear_axis(self.width, width);
        let ys = bilinear_axis(self.height, height);
        let stride = self.width as usize * c;
        let mut pixels = Vec::with_capacity(width as usize * height as usize * c);
        for &(y0, y1, fy) in &ys {
            for &(x0, x1, fx) in &xs {
                for k in 0..c {
                    let p = |y: usize, x: usize| f64::from(self.pixels[y * stride + x * c + k]);
                    let top = p(y0, x0) * (1.0 - fx) + p(y0, x1) * fx;
                    let bottom = p(y1, x0) * (1.0 - fx) + p(y1, x1) * fx;
                    let v = top * (1.0 - fy) + bottom * fy;
                    pixels.push(libm::round(v).clamp(0.0, 255.0) as u8);
                }
            }
        }
        Ok(RasterImage { width, height, channels: self.channels, pixels })
    }
}

//! Resolution-independent page geometry.
//!
//! One page unit is one pixel at the page's reference resolution. All
//! coordinates produced here are whole numbers (or half units for odd rule
//! thicknesses), so rasterization and the mask oracles agree exactly.
//!
//! Glyphs use a fixed advance of half the glyph size, which makes every text
//! width an exact product.

use alloc::string::String;
use alloc::vec::Vec;

use crate::content::{gen_paragraphs, gen_text, MarkovModel, TableContent};
use crate::error::{ConfigError, LayoutError};
use crate::rng::{SampleRng, Stream};
use crate::sampler::{AugmentationPlan, Background, PageVariant, TableSpec, TableStyle};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Axis-aligned half-open rectangle `[x, x + w) x [y, y + h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub const fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Rect { x, y, w, h }
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * (self.w + self.h)
    }

    /// True when the interiors overlap.
    pub fn intersects(&self, other: &Rect) -> bool {
        self.x < other.right()
            && other.x < self.right()
            && self.y < other.bottom()
            && other.y < self.bottom()
    }

    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        x >= self.x && x < self.right() && y >= self.y && y < self.bottom()
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.x >= self.x
            && other.y >= self.y
            && other.right() <= self.right()
            && other.bottom() <= self.bottom()
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Rect {
        Rect::new(self.x + dx, self.y + dy, self.w, self.h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LinePattern {
    Solid,
    Dashed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RuleWeight {
    Normal,
    Heavy,
}

/// Axis-aligned rule. `from`/`to` lie on the centre line; the drawn band
/// extends `thickness / 2` to each side.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RuleSegment {
    pub from: Point,
    pub to: Point,
    pub thickness: f64,
    pub pattern: LinePattern,
    pub weight: RuleWeight,
}

impl RuleSegment {
    pub fn is_horizontal(&self) -> bool {
        self.from.y == self.to.y
    }

    /// Area covered by the rule band.
    pub fn bounds(&self) -> Rect {
        let half = self.thickness / 2.0;
        if self.is_horizontal() {
            Rect::new(self.from.x, self.from.y - half, self.to.x - self.from.x, self.thickness)
        } else {
            Rect::new(self.from.x - half, self.from.y, self.thickness, self.to.y - self.from.y)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TextDirection {
    LeftToRight,
    /// First character at the right edge, advancing leftwards.
    RightToLeft,
    /// Glyphs turned 90 degrees counter-clockwise, reading bottom to top.
    RotatedVertical,
}

/// A line of monospaced text. `origin` is the top-left corner of its box.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GlyphRun {
    pub text: String,
    pub origin: Point,
    pub glyph_size: f64,
    pub direction: TextDirection,
}

impl GlyphRun {
    pub fn advance(&self) -> f64 {
        self.glyph_size / 2.0
    }

    pub fn len(&self) -> usize {
        self.text.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn bounds(&self) -> Rect {
        let along = self.len() as f64 * self.advance();
        match self.direction {
            TextDirection::RotatedVertical => {
                Rect::new(self.origin.x, self.origin.y, self.glyph_size, along)
            }
            _ => Rect::new(self.origin.x, self.origin.y, along, self.glyph_size),
        }
    }

    fn translate(&mut self, dx: f64, dy: f64) {
        self.origin.x += dx;
        self.origin.y += dy;
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TableGeometry {
    pub outer: Rect,
    /// `(rows + 1) x cols`, header row first.
    pub cell_boxes: Vec<Vec<Rect>>,
    pub rules: Vec<RuleSegment>,
    pub header_fill: Option<Rect>,
    /// Full-height region of each column, left to right.
    pub column_spans: Vec<Rect>,
    /// Text of every cell, same shape as `cell_boxes`.
    pub cell_runs: Vec<Vec<GlyphRun>>,
    pub glyph_size: f64,
}

impl TableGeometry {
    pub fn translate(&mut self, dx: f64, dy: f64) {
        self.outer = self.outer.translated(dx, dy);
        for row in &mut self.cell_boxes {
            for cell in row {
                *cell = cell.translated(dx, dy);
            }
        }
        for rule in &mut self.rules {
            rule.from.x += dx;
            rule.from.y += dy;
            rule.to.x += dx;
            rule.to.y += dy;
        }
        if let Some(fill) = &mut self.header_fill {
            *fill = fill.translated(dx, dy);
        }
        for span in &mut self.column_spans {
            *span = span.translated(dx, dy);
        }
        for run in self.cell_runs.iter_mut().flatten() {
            run.translate(dx, dy);
        }
    }
}

/// Where the table sits on the page.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Placement {
    LeftColumn,
    RightColumn,
    Span,
    /// Table-only pages: horizontally centred in the text block.
    Centered,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PageGeometry {
    pub page_w: u32,
    pub page_h: u32,
    pub column_boxes: [Rect; 2],
    pub table: Option<TableGeometry>,
    pub placement: Placement,
    pub text_runs: Vec<GlyphRun>,
    pub caption_run: Option<GlyphRun>,
    pub background: Background,
    /// Horizontal inset applied to each column span for the column mask.
    pub column_inset: f64,
    pub dash_on: f64,
    pub dash_off: f64,
}

impl PageGeometry {
    /// A page with nothing on it.
    pub fn blank(page_w: u32, page_h: u32, background: Background) -> Self {
        let half = f64::from(page_w) / 2.0;
        PageGeometry {
            page_w,
            page_h,
            column_boxes: [
                Rect::new(0.0, 0.0, half, f64::from(page_h)),
                Rect::new(half, 0.0, half, f64::from(page_h)),
            ],
            table: None,
            placement: Placement::Centered,
            text_runs: Vec::new(),
            caption_run: None,
            background,
            column_inset: 0.0,
            dash_on: 6.0,
            dash_off: 4.0,
        }
    }

    pub fn page_rect(&self) -> Rect {
        Rect::new(0.0, 0.0, f64::from(self.page_w), f64::from(self.page_h))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageConfig {
    pub page_w: u32,
    pub page_h: u32,
    pub margin: u32,
    pub column_gap: u32,
    pub cell_padding: u32,
    /// Largest table glyph size tried; smaller even sizes are tried down to
    /// `min_glyph_size` when the table is too wide.
    pub glyph_size: u32,
    pub min_glyph_size: u32,
    pub body_glyph_size: u32,
    pub line_spacing: u32,
    pub rule_thickness: u32,
    pub dash_on: u32,
    pub dash_off: u32,
    pub column_inset: u32,
    /// Vertical clearance between the table block and body text.
    pub block_gap: u32,
    pub paragraph_words_min: u32,
    pub paragraph_words_max: u32,
    pub caption_words_min: u32,
    pub caption_words_max: u32,
}

impl Default for PageConfig {
    /// A4 at roughly 150 DPI.
    fn default() -> Self {
        PageConfig {
            page_w: 1240,
            page_h: 1754,
            margin: 96,
            column_gap: 40,
            cell_padding: 6,
            glyph_size: 16,
            min_glyph_size: 10,
            body_glyph_size: 12,
            line_spacing: 4,
            rule_thickness: 2,
            dash_on: 6,
            dash_off: 4,
            column_inset: 3,
            block_gap: 24,
            paragraph_words_min: 40,
            paragraph_words_max: 120,
            caption_words_min: 3,
            caption_words_max: 8,
        }
    }
}

impl PageConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        fn positive(name: &'static str, v: u32) -> Result<(), ConfigError> {
            if v == 0 {
                return Err(ConfigError::OutOfRange {
                    name,
                    value: 0.0,
                    expected: "a positive value",
                });
            }
            Ok(())
        }
        fn even(name: &'static str, v: u32) -> Result<(), ConfigError> {
            if v < 2 || !v.is_multiple_of(2) {
                return Err(ConfigError::OutOfRange {
                    name,
                    value: f64::from(v),
                    expected: "an even size >= 2",
                });
            }
            Ok(())
        }
        positive("page_w", self.page_w)?;
        positive("page_h", self.page_h)?;
        positive("rule_thickness", self.rule_thickness)?;
        positive("dash_on", self.dash_on)?;
        even("glyph_size", self.glyph_size)?;
        even("min_glyph_size", self.min_glyph_size)?;
        even("body_glyph_size", self.body_glyph_size)?;
        if self.min_glyph_size > self.glyph_size {
            return Err(ConfigError::Bounds {
                name: "glyph_size",
                min: self.min_glyph_size,
                max: self.glyph_size,
                floor: 2,
            });
        }
        if self.cell_padding < 2 * self.rule_thickness {
            return Err(ConfigError::OutOfRange {
                name: "cell_padding",
                value: f64::from(self.cell_padding),
                expected: "at least twice rule_thickness",
            });
        }
        if 2 * self.margin + self.column_gap + 2 > self.page_w || 2 * self.margin + 1 > self.page_h {
            return Err(ConfigError::OutOfRange {
                name: "margin",
                value: f64::from(self.margin),
                expected: "margins and column gap that leave room for two columns",
            });
        }
        if self.paragraph_words_min == 0 || self.paragraph_words_min > self.paragraph_words_max {
            return Err(ConfigError::Bounds {
                name: "paragraph_words",
                min: self.paragraph_words_min,
                max: self.paragraph_words_max,
                floor: 1,
            });
        }
        if self.caption_words_min == 0 || self.caption_words_min > self.caption_words_max {
            return Err(ConfigError::Bounds {
                name: "caption_words",
                min: self.caption_words_min,
                max: self.caption_words_max,
                floor: 1,
            });
        }
        Ok(())
    }

    fn text_block(&self) -> Rect {
        let m = f64::from(self.margin);
        Rect::new(
            m,
            m,
            f64::from(self.page_w) - 2.0 * m,
            f64::from(self.page_h) - 2.0 * m,
        )
    }

    pub fn column_boxes(&self) -> [Rect; 2] {
        let block = self.text_block();
        let col_w = libm::floor((block.w - f64::from(self.column_gap)) / 2.0);
        [
            Rect::new(block.x, block.y, col_w, block.h),
            Rect::new(block.right() - col_w, block.y, col_w, block.h),
        ]
    }
}

/// Sizes that drive a table layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableMetrics {
    pub glyph_size: u32,
    pub cell_padding: u32,
    pub rule_thickness: u32,
    /// Right-to-left body cells and rotated headers.
    pub non_western: bool,
}

fn char_count(s: &str) -> usize {
    s.chars().count()
}

/// Lays out the table with its top-left corner at `avail`'s top-left.
///
/// Column width is the widest cell text plus padding on both sides. Style
/// only changes rules and header fill, never cell boxes.
pub fn layout_table(
    spec: &TableSpec,
    content: &TableContent,
    avail: Rect,
    metrics: &TableMetrics,
) -> Result<TableGeometry, LayoutError> {
    let cols = spec.cols as usize;
    let rows = spec.rows as usize;
    if content.header.len() != cols {
        return Err(LayoutError::ContentMismatch("header length differs from cols"));
    }
    if content.body.len() != rows || content.body.iter().any(|r| r.len() != cols) {
        return Err(LayoutError::ContentMismatch("body grid differs from rows x cols"));
    }

    let glyph = f64::from(metrics.glyph_size);
    let adv = glyph / 2.0;
    let pad = f64::from(metrics.cell_padding);
    let vertical_headers = metrics.non_western;

    let col_w: Vec<f64> = (0..cols)
        .map(|c| {
            let header = if vertical_headers {
                glyph
            } else {
                char_count(&content.header[c]) as f64 * adv
            };
            let body = content
                .body
                .iter()
                .map(|r| char_count(&r[c]) as f64 * adv)
                .fold(0.0, f64::max);
            header.max(body) + 2.0 * pad
        })
        .collect();
    let header_h = if vertical_headers {
        content
            .header
            .iter()
            .map(|h| char_count(h) as f64 * adv)
            .fold(0.0, f64::max)
            .max(glyph)
            + 2.0 * pad
    } else {
        glyph + 2.0 * pad
    };
    let body_h = glyph + 2.0 * pad;

    let total_w: f64 = col_w.iter().sum();
    let total_h = header_h + rows as f64 * body_h;
    if total_w > avail.w {
        return Err(LayoutError::InsufficientWidth {
            required: total_w,
            available: avail.w,
        });
    }
    if total_h > avail.h {
        return Err(LayoutError::TooTall {
            required: total_h,
            available: avail.h,
        });
    }

    let (x0, y0) = (avail.x, avail.y);
    let mut xs = Vec::with_capacity(cols + 1);
    xs.push(x0);
    for w in &col_w {
        xs.push(xs.last().unwrap() + w);
    }
    let mut ys = Vec::with_capacity(rows + 2);
    ys.push(y0);
    ys.push(y0 + header_h);
    for _ in 0..rows {
        ys.push(ys.last().unwrap() + body_h);
    }
    let outer = Rect::new(x0, y0, total_w, total_h);

    let cell_boxes: Vec<Vec<Rect>> = (0..=rows)
        .map(|r| {
            (0..cols)
                .map(|c| Rect::new(xs[c], ys[r], col_w[c], ys[r + 1] - ys[r]))
                .collect()
        })
        .collect();
    let column_spans = (0..cols)
        .map(|c| Rect::new(xs[c], y0, col_w[c], total_h))
        .collect();

    let mut cell_runs = Vec::with_capacity(rows + 1);
    cell_runs.push(
        (0..cols)
            .map(|c| {
                let cell = cell_boxes[0][c];
                let text = content.header[c].clone();
                if vertical_headers {
                    let len = char_count(&text) as f64 * adv;
                    GlyphRun {
                        text,
                        origin: Point { x: cell.x + pad, y: cell.bottom() - pad - len },
                        glyph_size: glyph,
                        direction: TextDirection::RotatedVertical,
                    }
                } else {
                    GlyphRun {
                        text,
                        origin: Point { x: cell.x + pad, y: cell.y + pad },
                        glyph_size: glyph,
                        direction: TextDirection::LeftToRight,
                    }
                }
            })
            .collect(),
    );
    for r in 0..rows {
        cell_runs.push(
            (0..cols)
                .map(|c| {
                    let cell = cell_boxes[r + 1][c];
                    let text = content.body[r][c].clone();
                    if metrics.non_western {
                        let len = char_count(&text) as f64 * adv;
                        GlyphRun {
                            text,
                            origin: Point { x: cell.right() - pad - len, y: cell.y + pad },
                            glyph_size: glyph,
                            direction: TextDirection::RightToLeft,
                        }
                    } else {
                        GlyphRun {
                            text,
                            origin: Point { x: cell.x + pad, y: cell.y + pad },
                            glyph_size: glyph,
                            direction: TextDirection::LeftToRight,
                        }
                    }
                })
                .collect(),
        );
    }

    let t = f64::from(metrics.rule_thickness);
    let rules = style_rules(spec.style, &xs, &ys, t);
    let header_fill = (spec.style == TableStyle::ColoredHeader)
        .then(|| Rect::new(x0, y0, total_w, header_h));

    Ok(TableGeometry {
        outer,
        cell_boxes,
        rules,
        header_fill,
        column_spans,
        cell_runs,
        glyph_size: glyph,
    })
}

/// Rules for a style given the column (`xs`) and row (`ys`) boundaries.
/// Outer rules sit just inside the table box; inner rules straddle the
/// boundary.
fn style_rules(style: TableStyle, xs: &[f64], ys: &[f64], t: f64) -> Vec<RuleSegment> {
    let (left, right) = (xs[0], xs[xs.len() - 1]);
    let (top, bottom) = (ys[0], ys[ys.len() - 1]);

    let horizontal = |k: usize, thickness: f64, pattern, weight| {
        let y = if k == 0 {
            top + thickness / 2.0
        } else if k == ys.len() - 1 {
            bottom - thickness / 2.0
        } else {
            ys[k]
        };
        RuleSegment {
            from: Point { x: left, y },
            to: Point { x: right, y },
            thickness,
            pattern,
            weight,
        }
    };
    let vertical = |k: usize, pattern| {
        let x = if k == 0 {
            left + t / 2.0
        } else if k == xs.len() - 1 {
            right - t / 2.0
        } else {
            xs[k]
        };
        RuleSegment {
            from: Point { x, y: top },
            to: Point { x, y: bottom },
            thickness: t,
            pattern,
            weight: RuleWeight::Normal,
        }
    };
    let all_rows = |pattern| {
        (0..ys.len())
            .map(|k| horizontal(k, t, pattern, RuleWeight::Normal))
            .collect::<Vec<_>>()
    };
    let all_cols = |pattern| (0..xs.len()).map(|k| vertical(k, pattern)).collect::<Vec<_>>();

    match style {
        TableStyle::Dashed => {
            let mut r = all_rows(LinePattern::Dashed);
            r.extend(all_cols(LinePattern::Dashed));
            r
        }
        TableStyle::NoVerticalBorders => all_rows(LinePattern::Solid),
        TableStyle::ColoredHeader => {
            let mut r = all_rows(LinePattern::Solid);
            r.extend(all_cols(LinePattern::Solid));
            r
        }
        TableStyle::NoRules => Vec::new(),
        TableStyle::Booktabs => alloc::vec![
            horizontal(0, 2.0 * t, LinePattern::Solid, RuleWeight::Heavy),
            horizontal(1, t, LinePattern::Solid, RuleWeight::Normal),
            horizontal(ys.len() - 1, 2.0 * t, LinePattern::Solid, RuleWeight::Heavy),
        ],
    }
}

/// Tries the configured table glyph size, then successively smaller even
/// sizes, returning the first layout that fits `avail`.
fn fit_table(
    spec: &TableSpec,
    content: &TableContent,
    avail: Rect,
    config: &PageConfig,
    non_western: bool,
) -> Result<TableGeometry, LayoutError> {
    let mut glyph = config.glyph_size;
    loop {
        let metrics = TableMetrics {
            glyph_size: glyph,
            cell_padding: config.cell_padding,
            rule_thickness: config.rule_thickness,
            non_western,
        };
        match layout_table(spec, content, avail, &metrics) {
            Ok(t) => return Ok(t),
            Err(e @ LayoutError::ContentMismatch(_)) => return Err(e),
            Err(e) if glyph <= config.min_glyph_size => return Err(e),
            Err(_) => glyph -= 2,
        }
    }
}

/// Supplies words paragraph by paragraph for body text.
struct WordFlow<'a> {
    model: &'a MarkovModel,
    words: Vec<String>,
    pos: usize,
    range: (u32, u32),
}

impl WordFlow<'_> {
    /// Next word, and whether it ends its paragraph.
    fn next(&mut self, rng: &mut SampleRng) -> (String, bool) {
        if self.pos >= self.words.len() {
            let para = gen_paragraphs(rng, self.model, 1, self.range).remove(0);
            self.words = para.split(' ').map(String::from).collect();
            self.pos = 0;
        }
        let w = core::mem::take(&mut self.words[self.pos]);
        self.pos += 1;
        (w, self.pos == self.words.len())
    }
}

/// Composes the page: table placement, caption, and body text.
///
/// Layout draws come from the sample's `Layout` stream in this order:
/// placement, vertical position, caption length and words, body words.
/// Table-only pages draw only the vertical position.
pub fn layout_page(
    spec: &TableSpec,
    content: &TableContent,
    plan: &AugmentationPlan,
    config: &PageConfig,
    model: &MarkovModel,
) -> Result<PageGeometry, LayoutError> {
    let mut rng = SampleRng::for_stream(spec.derived_seed, Stream::Layout);
    let columns = config.column_boxes();
    let block = config.text_block();
    let body_glyph = f64::from(config.body_glyph_size);
    let line_h = body_glyph + f64::from(config.line_spacing);
    let gap = f64::from(config.block_gap);

    let mut page = PageGeometry {
        page_w: config.page_w,
        page_h: config.page_h,
        column_boxes: columns,
        table: None,
        placement: Placement::Centered,
        text_runs: Vec::new(),
        caption_run: None,
        background: plan.background,
        column_inset: f64::from(config.column_inset),
        dash_on: f64::from(config.dash_on),
        dash_off: f64::from(config.dash_off),
    };

    if spec.variant == PageVariant::TableOnly {
        let mut table = fit_table(spec, content, block, config, plan.non_western)?;
        let dx = libm::floor((block.w - table.outer.w) / 2.0);
        let free = (block.h - table.outer.h) as u32;
        let dy = f64::from(rng.range_inclusive(0, free));
        table.translate(dx, dy);
        page.table = Some(table);
        return Ok(page);
    }

    let caption_h = gap / 2.0 + body_glyph;
    let mut placement = match rng.index(3) {
        0 => Placement::LeftColumn,
        1 => Placement::RightColumn,
        _ => Placement::Span,
    };
    let area_for = |p: Placement| match p {
        Placement::LeftColumn => columns[0],
        Placement::RightColumn => columns[1],
        _ => block,
    };
    let fit_in = |p: Placement| {
        let a = area_for(p);
        fit_table(
            spec,
            content,
            Rect::new(a.x, a.y, a.w, a.h - caption_h),
            config,
            plan.non_western,
        )
    };
    let mut table = match fit_in(placement) {
        Ok(t) => t,
        Err(LayoutError::InsufficientWidth { .. }) if placement != Placement::Span => {
            placement = Placement::Span;
            fit_in(placement)?
        }
        Err(e) => return Err(e),
    };
    let area = area_for(placement);
    let block_h = table.outer.h + caption_h;
    let free = (area.h - block_h) as u32;
    let top = area.y + f64::from(rng.range_inclusive(0, free));
    let dx = libm::floor((area.w - table.outer.w) / 2.0);
    table.translate(dx, top - area.y);

    // Caption, trimmed word by word to the space right of the table's left edge.
    let caption_x = table.outer.x;
    let caption_room = area.right() - caption_x;
    let n_words = rng.range_inclusive(config.caption_words_min, config.caption_words_max);
    let words = gen_text(&mut rng, model, n_words as usize);
    let mut words: Vec<&str> = words.split(' ').collect();
    let adv = body_glyph / 2.0;
    let caption = loop {
        let mut text = String::from("Table 1:");
        for w in &words {
            text.push(' ');
            text.push_str(w);
        }
        if char_count(&text) as f64 * adv <= caption_room {
            break Some(text);
        }
        if words.pop().is_none() {
            break None;
        }
    };
    page.caption_run = caption.map(|text| GlyphRun {
        text,
        origin: Point { x: caption_x, y: table.outer.bottom() + gap / 2.0 },
        glyph_size: body_glyph,
        direction: TextDirection::LeftToRight,
    });

    // Vertical band kept free of body text around the table block.
    let band = (top - gap, top + block_h + gap);
    let blocked = |col: usize| match placement {
        Placement::LeftColumn => col == 0,
        Placement::RightColumn => col == 1,
        _ => true,
    };

    let mut flow = WordFlow {
        model,
        words: Vec::new(),
        pos: 0,
        range: (config.paragraph_words_min, config.paragraph_words_max),
    };
    let mut carry: Option<(String, bool)> = None;
    for (ci, col) in columns.iter().enumerate() {
        let mut y = col.y;
        while y + body_glyph <= col.bottom() {
            if blocked(ci) && y < band.1 && y + body_glyph > band.0 {
                y = band.1;
                continue;
            }
            let mut line = String::new();
            loop {
                let (word, ends) = carry.take().unwrap_or_else(|| flow.next(&mut rng));
                let extra = if line.is_empty() { 0 } else { 1 };
                let width = (char_count(&line) + extra + char_count(&word)) as f64 * adv;
                if width > col.w {
                    if line.is_empty() {
                        // Wider than the column on its own; drop it.
                        if ends {
                            break;
                        }
                        continue;
                    }
                    carry = Some((word, ends));
                    break;
                }
                if extra == 1 {
                    line.push(' ');
                }
                line.push_str(&word);
                if ends {
                    break;
                }
            }
            if !line.is_empty() {
                page.text_runs.push(GlyphRun {
                    text: line,
                    origin: Point { x: col.x, y },
                    glyph_size: body_glyph,
                    direction: TextDirection::LeftToRight,
                });
            }
            y += line_h;
        }
    }

    page.placement = placement;
    page.table = Some(table);
    Ok(page)
}

/// Regions the two ground-truth masks are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskRegions {
    pub table: Rect,
    /// Column spans narrowed by the page's column inset, left to right.
    pub columns: Vec<Rect>,
}

/// Table and column mask regions; `None` for a page without a table.
///
/// Each column region is its span with `column_inset` removed from both
/// sides, clamped so the region keeps a positive width.
pub fn mask_regions(geometry: &PageGeometry) -> Option<MaskRegions> {
    let table = geometry.table.as_ref()?;
    let columns = table
        .column_spans
        .iter()
        .map(|s| {
            let inset = geometry.column_inset.min(libm::floor((s.w - 1.0) / 2.0)).max(0.0);
            Rect::new(s.x + inset, s.y, s.w - 2.0 * inset, s.h)
        })
        .collect();
    Some(MaskRegions {
        table: table.outer,
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::{populate_table, ContentConfig};
    use crate::sampler::{sample_spec, ColumnType, GenerationBounds};
    use alloc::vec;

    fn spec(rows: u32, cols: u32, style: TableStyle, variant: PageVariant, seed: u64) -> TableSpec {
        TableSpec {
            rows,
            cols,
            column_types: (0..cols).map(|c| ColumnType::ALL[c as usize % 3]).collect(),
            style,
            variant,
            sample_index: 0,
            derived_seed: seed,
        }
    }

    fn content_for(s: &TableSpec) -> TableContent {
        populate_table(
            s,
            &ContentConfig::default(),
            &MarkovModel::lorem_ipsum(),
            &mut SampleRng::from_seed(s.derived_seed),
        )
    }

    fn metrics(non_western: bool) -> TableMetrics {
        TableMetrics {
            glyph_size: 16,
            cell_padding: 6,
            rule_thickness: 2,
            non_western,
        }
    }

    fn plain_plan() -> AugmentationPlan {
        AugmentationPlan {
            non_western: false,
            background: Background::White,
            noise_lambda: 0.0,
            perspective: None,
        }
    }

    const AVAIL: Rect = Rect::new(50.0, 60.0, 1100.0, 1600.0);

    fn assert_tiling(t: &TableGeometry) {
        let area: f64 = t.cell_boxes.iter().flatten().map(Rect::area).sum();
        assert_eq!(area, t.outer.area());
        for row in &t.cell_boxes {
            assert!(row.iter().all(|c| c.y == row[0].y && c.h == row[0].h));
            for pair in row.windows(2) {
                assert_eq!(pair[0].right(), pair[1].x);
            }
        }
        for c in 0..t.column_spans.len() {
            let col: Vec<Rect> = t.cell_boxes.iter().map(|r| r[c]).collect();
            assert!(col.iter().all(|b| b.x == col[0].x && b.w == col[0].w));
            for pair in col.windows(2) {
                assert_eq!(pair[0].bottom(), pair[1].y);
            }
            let span = t.column_spans[c];
            assert_eq!(span, Rect::new(col[0].x, col[0].y, col[0].w, col.last().unwrap().bottom() - col[0].y));
        }
        for pair in t.column_spans.windows(2) {
            assert!(pair[0].x < pair[1].x);
        }
        for (row, runs) in t.cell_boxes.iter().zip(&t.cell_runs) {
            for (cell, run) in row.iter().zip(runs) {
                assert!(cell.contains_rect(&run.bounds()), "{run:?} escapes {cell:?}");
            }
        }
    }

    #[test]
    fn tiling_holds_for_every_style() {
        for (i, style) in TableStyle::ALL.into_iter().enumerate() {
            for nw in [false, true] {
                let s = spec(5, 4, style, PageVariant::TableOnly, i as u64 + 10);
                let t = layout_table(&s, &content_for(&s), AVAIL, &metrics(nw)).unwrap();
                assert_tiling(&t);
                assert_eq!(t.outer.x, AVAIL.x);
                assert_eq!(t.outer.y, AVAIL.y);
            }
        }
    }

    #[test]
    fn no_rules_style() {
        let s = spec(4, 3, TableStyle::NoRules, PageVariant::TableOnly, 1);
        let t = layout_table(&s, &content_for(&s), AVAIL, &metrics(false)).unwrap();
        assert!(t.rules.is_empty());
        assert!(t.header_fill.is_none());
    }

    #[test]
    fn booktabs_has_three_horizontal_rules() {
        let s = spec(3, 3, TableStyle::Booktabs, PageVariant::TableOnly, 2);
        let t = layout_table(&s, &content_for(&s), AVAIL, &metrics(false)).unwrap();
        assert_eq!(t.rules.len(), 3);
        assert!(t.rules.iter().all(RuleSegment::is_horizontal));
        let weights: Vec<RuleWeight> = t.rules.iter().map(|r| r.weight).collect();
        assert_eq!(weights, vec![RuleWeight::Heavy, RuleWeight::Normal, RuleWeight::Heavy]);
        assert!(t.rules.iter().all(|r| t.outer.contains_rect(&r.bounds())));
    }

    #[test]
    fn style_rule_shapes() {
        let (rows, cols) = (4u32, 3u32);
        let count = |style| {
            let s = spec(rows, cols, style, PageVariant::TableOnly, 3);
            let t = layout_table(&s, &content_for(&s), AVAIL, &metrics(false)).unwrap();
            let h = t.rules.iter().filter(|r| r.is_horizontal()).count();
            (h, t.rules.len() - h, t)
        };
        let (h, v, t) = count(TableStyle::Dashed);
        assert_eq!((h, v), (rows as usize + 2, cols as usize + 1));
        assert!(t.rules.iter().all(|r| r.pattern == LinePattern::Dashed));
        let (h, v, _) = count(TableStyle::NoVerticalBorders);
        assert_eq!((h, v), (rows as usize + 2, 0));
        let (h, v, t) = count(TableStyle::ColoredHeader);
        assert_eq!((h, v), (rows as usize + 2, cols as usize + 1));
        assert_eq!(t.header_fill, Some(Rect::new(t.outer.x, t.outer.y, t.outer.w, t.cell_boxes[0][0].h)));
    }

    #[test]
    fn insufficient_width_reports_both_widths() {
        let s = spec(3, 6, TableStyle::Dashed, PageVariant::TableOnly, 4);
        let narrow = Rect::new(0.0, 0.0, 100.0, 1000.0);
        match layout_table(&s, &content_for(&s), narrow, &metrics(false)) {
            Err(LayoutError::InsufficientWidth { required, available }) => {
                assert!(required > 100.0);
                assert_eq!(available, 100.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn content_shape_checked() {
        let s = spec(3, 3, TableStyle::Dashed, PageVariant::TableOnly, 4);
        let mut c = content_for(&s);
        c.body.pop();
        assert!(matches!(
            layout_table(&s, &c, AVAIL, &metrics(false)),
            Err(LayoutError::ContentMismatch(_))
        ));
    }

    #[test]
    fn non_western_directions() {
        let s = spec(3, 3, TableStyle::Booktabs, PageVariant::TableOnly, 5);
        let t = layout_table(&s, &content_for(&s), AVAIL, &metrics(true)).unwrap();
        assert!(t.cell_runs[0].iter().all(|r| r.direction == TextDirection::RotatedVertical));
        assert!(t.cell_runs[1..]
            .iter()
            .flatten()
            .all(|r| r.direction == TextDirection::RightToLeft));
        // right-aligned against the padding
        let cell = t.cell_boxes[1][0];
        assert_eq!(t.cell_runs[1][0].bounds().right(), cell.right() - 6.0);
    }

    #[test]
    fn table_only_page_has_no_text() {
        let s = spec(6, 4, TableStyle::Dashed, PageVariant::TableOnly, 6);
        let p = layout_page(&s, &content_for(&s), &plain_plan(), &PageConfig::default(), &MarkovModel::lorem_ipsum()).unwrap();
        assert!(p.text_runs.is_empty());
        assert!(p.caption_run.is_none());
        assert!(p.page_rect().contains_rect(&p.table.unwrap().outer));
    }

    #[test]
    fn page_plan_drives_header_direction() {
        let s = spec(4, 3, TableStyle::NoRules, PageVariant::WithText, 7);
        let mut plan = plain_plan();
        plan.non_western = true;
        let p = layout_page(&s, &content_for(&s), &plan, &PageConfig::default(), &MarkovModel::lorem_ipsum()).unwrap();
        let t = p.table.unwrap();
        assert!(t.cell_runs[0].iter().all(|r| r.direction == TextDirection::RotatedVertical));
    }

    fn check_page_invariants(p: &PageGeometry) {
        assert!(!p.column_boxes[0].intersects(&p.column_boxes[1]));
        let t = p.table.as_ref().unwrap();
        let page = p.page_rect();
        assert!(page.contains_rect(&t.outer));
        let mut boxes: Vec<Rect> = p.text_runs.iter().map(GlyphRun::bounds).collect();
        if let Some(c) = &p.caption_run {
            boxes.push(c.bounds());
        }
        for b in &boxes {
            assert!(page.contains_rect(b));
            assert!(!b.intersects(&t.outer), "text {b:?} overlaps table {:?}", t.outer);
        }
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                assert!(!boxes[i].intersects(&boxes[j]));
            }
        }
        for r in &p.text_runs {
            assert!(p.column_boxes.iter().any(|c| c.contains_rect(&r.bounds())));
        }
    }

    #[test]
    fn sampled_pages_keep_text_clear_of_table() {
        let bounds = GenerationBounds { with_text_ratio: 1.0, ..Default::default() };
        let model = MarkovModel::lorem_ipsum();
        let mut laid_out = 0;
        for i in 0..60 {
            let s = sample_spec(31, i, &bounds).unwrap();
            let c = content_for(&s);
            if let Ok(p) = layout_page(&s, &c, &plain_plan(), &PageConfig::default(), &model) {
                assert!(!p.text_runs.is_empty());
                check_page_invariants(&p);
                laid_out += 1;
            }
        }
        assert!(laid_out > 50, "{laid_out}");
    }

    #[test]
    fn layout_is_deterministic() {
        let s = spec(6, 4, TableStyle::Dashed, PageVariant::WithText, 9);
        let c = content_for(&s);
        let m = MarkovModel::lorem_ipsum();
        let a = layout_page(&s, &c, &plain_plan(), &PageConfig::default(), &m).unwrap();
        let b = layout_page(&s, &c, &plain_plan(), &PageConfig::default(), &m).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mask_regions_follow_columns() {
        let s = spec(4, 4, TableStyle::Dashed, PageVariant::TableOnly, 12);
        let p = layout_page(&s, &content_for(&s), &plain_plan(), &PageConfig::default(), &MarkovModel::lorem_ipsum()).unwrap();
        let m = mask_regions(&p).unwrap();
        assert_eq!(m.table, p.table.as_ref().unwrap().outer);
        assert_eq!(m.columns.len(), 4);
        for c in &m.columns {
            assert!(m.table.contains_rect(c));
        }
        for pair in m.columns.windows(2) {
            assert!(pair[0].right() <= pair[1].x);
        }
    }

    #[test]
    fn single_column_region_is_inset_table() {
        let s = spec(3, 1, TableStyle::Booktabs, PageVariant::TableOnly, 13);
        let p = layout_page(&s, &content_for(&s), &plain_plan(), &PageConfig::default(), &MarkovModel::lorem_ipsum()).unwrap();
        let m = mask_regions(&p).unwrap();
        assert_eq!(m.columns.len(), 1);
        let t = m.table;
        assert_eq!(m.columns[0], Rect::new(t.x + 3.0, t.y, t.w - 6.0, t.h));
    }

    #[test]
    fn blank_page_has_no_regions() {
        assert!(mask_regions(&PageGeometry::blank(10, 10, Background::White)).is_none());
    }

    #[test]
    fn too_tall_table_rejected() {
        let s = spec(30, 2, TableStyle::Dashed, PageVariant::TableOnly, 14);
        let cfg = PageConfig { page_h: 400, ..PageConfig::default() };
        assert!(matches!(
            layout_page(&s, &content_for(&s), &plain_plan(), &cfg, &MarkovModel::lorem_ipsum()),
            Err(LayoutError::TooTall { .. })
        ));
    }

    #[test]
    fn page_config_validation() {
        assert!(PageConfig::default().validate().is_ok());
        assert!(PageConfig { glyph_size: 15, ..Default::default() }.validate().is_err());
        assert!(PageConfig { cell_padding: 1, ..Default::default() }.validate().is_err());
        assert!(PageConfig { margin: 700, ..Default::default() }.validate().is_err());
    }
}

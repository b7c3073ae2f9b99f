//! LaTeX source for a generated table page, plus a mask variant.
//!
//! Compiling both sources at the same resolution and thresholding the mask
//! render yields a table mask for the TeX layout. The native rasterizer stays
//! the reference; nothing here invokes TeX.
//!
//! Every colour directive sits on a line of its own, so the two variants
//! differ line by line and only on those lines.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::content::{gen_paragraphs, gen_text, MarkovModel, TableContent};
use crate::layout::Placement;
use crate::rng::{SampleRng, Stream};
use crate::sampler::{AugmentationPlan, PageVariant, TableSpec, TableStyle};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatexDocument {
    pub preamble: String,
    pub body: String,
    pub required_packages: Vec<&'static str>,
}

impl LatexDocument {
    pub fn source(&self) -> String {
        format!("{}{}", self.preamble, self.body)
    }
}

/// Escapes characters that TeX treats specially.
pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            '\\' => out.push_str("\\textbackslash{}"),
            _ => out.push(c),
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Variant {
    Normal,
    Mask,
}

const PARAGRAPHS: (usize, usize) = (4, 8);
const PARAGRAPH_WORDS: (u32, u32) = (40, 120);
const CAPTION_WORDS: (u32, u32) = (3, 8);

fn packages(spec: &TableSpec, plan: &AugmentationPlan) -> Vec<&'static str> {
    let mut p = Vec::new();
    if spec.style == TableStyle::Booktabs {
        p.push("booktabs");
    }
    p.push("xcolor");
    if spec.style == TableStyle::Dashed {
        p.push("arydshln");
    }
    if plan.non_western {
        p.push("graphicx");
    }
    p
}

fn column_spec(spec: &TableSpec, plan: &AugmentationPlan) -> String {
    let align = if plan.non_western { "r" } else { "l" };
    let sep = match spec.style {
        TableStyle::Dashed => ";{6pt/4pt}",
        TableStyle::ColoredHeader => "|",
        _ => "",
    };
    let mut s = String::from(sep);
    for _ in 0..spec.cols {
        s.push_str(align);
        s.push_str(sep);
    }
    s
}

/// Rule lines above the header, under it, between body rows, and at the bottom.
fn rules(style: TableStyle) -> (&'static str, &'static str, &'static str, &'static str) {
    match style {
        TableStyle::Dashed => ("\\hdashline[6pt/4pt]", "\\hdashline[6pt/4pt]", "\\hdashline[6pt/4pt]", "\\hdashline[6pt/4pt]"),
        TableStyle::NoVerticalBorders | TableStyle::ColoredHeader => ("\\hline", "\\hline", "\\hline", "\\hline"),
        TableStyle::NoRules => ("", "", "", ""),
        TableStyle::Booktabs => ("\\toprule", "\\midrule", "", "\\bottomrule"),
    }
}

fn emit(
    spec: &TableSpec,
    content: &TableContent,
    plan: &AugmentationPlan,
    placement: Placement,
    model: &MarkovModel,
    variant: Variant,
) -> LatexDocument {
    let mask = variant == Variant::Mask;
    let required_packages = packages(spec, plan);
    let [r, g, b] = plan.background.rgb();

    let mut pre = String::new();
    pre.push_str("\\documentclass[twocolumn]{article}\n");
    for p in &required_packages {
        match *p {
            "xcolor" => pre.push_str("\\usepackage[table]{xcolor}\n"),
            _ => {
                let _ = writeln!(pre, "\\usepackage{{{p}}}");
            }
        }
    }
    if spec.style == TableStyle::Booktabs {
        pre.push_str("\\setlength{\\aboverulesep}{0pt}\n\\setlength{\\belowrulesep}{0pt}\n");
    }
    if spec.style == TableStyle::Dashed {
        let _ = writeln!(pre, "\\setlength{{\\dashlinedash}}{{6pt}}\n\\setlength{{\\dashlinegap}}{{4pt}}");
    }
    let _ = writeln!(pre, "\\definecolor{{pagebg}}{{RGB}}{{{r},{g},{b}}}");
    pre.push_str("\\definecolor{headerfill}{RGB}{189,208,232}\n");
    pre.push_str("\\pagestyle{empty}\n");

    let mut rng = SampleRng::for_stream(spec.derived_seed, Stream::Latex);
    let mut body = String::new();
    body.push_str("\\begin{document}\n");
    body.push_str(if mask { "\\pagecolor{white}\n" } else { "\\pagecolor{pagebg}\n" });
    body.push_str(if mask { "\\color{white}\n" } else { "\\color{black}\n" });

    let with_text = spec.variant == PageVariant::WithText;
    let caption = with_text.then(|| {
        let n = rng.range_inclusive(CAPTION_WORDS.0, CAPTION_WORDS.1) as usize;
        escape(&gen_text(&mut rng, model, n))
    });
    let paragraphs = if with_text {
        let n = PARAGRAPHS.0 + rng.index(PARAGRAPHS.1 - PARAGRAPHS.0 + 1);
        gen_paragraphs(&mut rng, model, n, PARAGRAPH_WORDS)
    } else {
        Vec::new()
    };

    let env = match placement {
        Placement::LeftColumn | Placement::RightColumn => "table",
        Placement::Span | Placement::Centered => "table*",
    };
    let split = paragraphs.len() / 2;
    for p in &paragraphs[..split] {
        let _ = writeln!(body, "{}\n", escape(p));
    }
    let _ = writeln!(body, "\\begin{{{env}}}[t]");
    body.push_str("\\centering\n");
    body.push_str("\\arrayrulecolor{black}\n");
    body.push_str("\\color{black}\n");
    let _ = writeln!(body, "\\begin{{tabular}}{{{}}}", column_spec(spec, plan));

    let (top, mid, between, bottom) = rules(spec.style);
    let rule = |out: &mut String, r: &str| {
        if !r.is_empty() {
            out.push_str(r);
            out.push('\n');
        }
    };
    let row_color = |out: &mut String, header: bool| {
        let fill = match (mask, header && spec.style == TableStyle::ColoredHeader) {
            (true, _) => "black",
            (false, true) => "headerfill",
            (false, false) => "pagebg",
        };
        let _ = writeln!(out, "\\rowcolor{{{fill}}}");
    };
    let row = |cells: &mut dyn Iterator<Item = String>| cells.collect::<Vec<_>>().join(" & ") + " \\\\\n";

    rule(&mut body, top);
    row_color(&mut body, true);
    body.push_str(&row(&mut content.header.iter().map(|h| {
        if plan.non_western {
            format!("\\rotatebox{{90}}{{{}}}", escape(h))
        } else {
            escape(h)
        }
    })));
    rule(&mut body, mid);
    for (i, cells) in content.body.iter().enumerate() {
        if i > 0 {
            rule(&mut body, between);
        }
        row_color(&mut body, false);
        body.push_str(&row(&mut cells.iter().map(|c| {
            if plan.non_western {
                escape(&c.chars().rev().collect::<String>())
            } else {
                escape(c)
            }
        })));
    }
    rule(&mut body, bottom);
    body.push_str("\\end{tabular}\n");
    if let Some(c) = &caption {
        body.push_str(if mask { "\\color{white}\n" } else { "\\color{black}\n" });
        let _ = writeln!(body, "\\caption{{{c}}}");
    }
    let _ = writeln!(body, "\\end{{{env}}}\n");
    for p in &paragraphs[split..] {
        let _ = writeln!(body, "{}\n", escape(p));
    }
    body.push_str("\\end{document}\n");

    LatexDocument { preamble: pre, body, required_packages }
}

/// Two-column article reproducing the page's table, caption and body text.
pub fn emit_document(
    spec: &TableSpec,
    content: &TableContent,
    plan: &AugmentationPlan,
    placement: Placement,
    model: &MarkovModel,
) -> LatexDocument {
    emit(spec, content, plan, placement, model, Variant::Normal)
}

/// Same source with the table region solid black and everything else white.
pub fn emit_mask_variant(
    spec: &TableSpec,
    content: &TableContent,
    plan: &AugmentationPlan,
    placement: Placement,
    model: &MarkovModel,
) -> LatexDocument {
    emit(spec, content, plan, placement, model, Variant::Mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::{populate_table, ContentConfig};
    use crate::sampler::{Background, ColumnType};
    use alloc::string::ToString;
    use alloc::vec;

    fn spec(style: TableStyle, variant: PageVariant) -> TableSpec {
        TableSpec {
            rows: 3,
            cols: 4,
            column_types: vec![ColumnType::Text, ColumnType::Numeric, ColumnType::Date, ColumnType::Text],
            style,
            variant,
            sample_index: 0,
            derived_seed: 17,
        }
    }

    fn plan(non_western: bool) -> AugmentationPlan {
        AugmentationPlan { non_western, background: Background::LightBlue, noise_lambda: 0.0, perspective: None }
    }

    fn content(s: &TableSpec) -> TableContent {
        let mut rng = SampleRng::for_stream(s.derived_seed, Stream::Content);
        populate_table(s, &ContentConfig::default(), &MarkovModel::lorem_ipsum(), &mut rng)
    }

    fn doc(style: TableStyle, variant: PageVariant, nw: bool) -> (LatexDocument, LatexDocument) {
        let s = spec(style, variant);
        let c = content(&s);
        let m = MarkovModel::lorem_ipsum();
        (
            emit_document(&s, &c, &plan(nw), Placement::Span, &m),
            emit_mask_variant(&s, &c, &plan(nw), Placement::Span, &m),
        )
    }

    fn count(hay: &str, needle: &str) -> usize {
        hay.matches(needle).count()
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("a&b_c"), "a\\&b\\_c");
        assert_eq!(escape("50% $x# {y}"), "50\\% \\$x\\# \\{y\\}");
        assert_eq!(escape("~^\\"), "\\textasciitilde{}\\textasciicircum{}\\textbackslash{}");
    }

    #[test]
    fn escaped_cells_leave_only_alignment_ampersands() {
        let s = spec(TableStyle::NoRules, PageVariant::TableOnly);
        let mut c = content(&s);
        c.body[0][0] = "a&b_c".to_string();
        let d = emit_document(&s, &c, &plan(false), Placement::Centered, &MarkovModel::lorem_ipsum());
        assert!(d.body.contains("a\\&b\\_c"));
        let bare = d.body.match_indices('&').filter(|(i, _)| !d.body[..*i].ends_with('\\')).count();
        // (cols - 1) separators on the header and each body row.
        assert_eq!(bare, 3 * 4);
    }

    #[test]
    fn booktabs_rules() {
        let (d, _) = doc(TableStyle::Booktabs, PageVariant::WithText, false);
        assert_eq!(count(&d.body, "\\toprule"), 1);
        assert_eq!(count(&d.body, "\\midrule"), 1);
        assert_eq!(count(&d.body, "\\bottomrule"), 1);
        assert_eq!(count(&d.body, "\\hline"), 0);
        assert!(d.required_packages.contains(&"booktabs"));
    }

    #[test]
    fn style_mapping() {
        let (d, _) = doc(TableStyle::Dashed, PageVariant::TableOnly, false);
        assert!(d.body.contains("\\begin{tabular}{;{6pt/4pt}l;{6pt/4pt}l;{6pt/4pt}l;{6pt/4pt}l;{6pt/4pt}}"));
        assert_eq!(count(&d.body, "\\hdashline"), 5);
        assert!(d.required_packages.contains(&"arydshln"));

        let (d, _) = doc(TableStyle::NoVerticalBorders, PageVariant::TableOnly, false);
        assert!(d.body.contains("\\begin{tabular}{llll}"));
        assert_eq!(count(&d.body, "\\hline"), 5);

        let (d, _) = doc(TableStyle::ColoredHeader, PageVariant::TableOnly, false);
        assert!(d.body.contains("\\begin{tabular}{|l|l|l|l|}"));
        assert_eq!(count(&d.body, "\\rowcolor{headerfill}"), 1);

        let (d, _) = doc(TableStyle::NoRules, PageVariant::TableOnly, false);
        assert!(d.body.contains("\\begin{tabular}{llll}"));
        for r in ["\\hline", "\\toprule", "\\midrule", "\\bottomrule", "dashline"] {
            assert_eq!(count(&d.body, r), 0, "{r}");
        }
    }

    #[test]
    fn every_style_is_well_formed() {
        for style in TableStyle::ALL {
            for variant in [PageVariant::WithText, PageVariant::TableOnly] {
                for nw in [false, true] {
                    let (d, m) = doc(style, variant, nw);
                    for src in [d.source(), m.source()] {
                        assert!(src.starts_with("\\documentclass[twocolumn]{article}\n"));
                        assert_eq!(count(&src, "\\begin{table"), 1);
                        assert_eq!(count(&src, "\\end{table*}") + count(&src, "\\end{table}"), 1);
                        assert_eq!(count(&src, "\\begin{tabular}"), 1);
                        assert_eq!(count(&src, "{"), count(&src, "}") + count(&src, "\\}") - count(&src, "\\{"));
                        assert!(src.trim_end().ends_with("\\end{document}"));
                    }
                    for p in &d.required_packages {
                        assert!(d.preamble.contains(&format!("{{{p}}}")), "{p}");
                    }
                    assert_eq!(variant == PageVariant::WithText, d.body.contains("\\caption{"));
                    assert_eq!(nw, d.body.contains("\\rotatebox{90}"));
                }
            }
        }
    }

    #[test]
    fn mask_variant_differs_only_in_color_lines() {
        for style in TableStyle::ALL {
            let (d, m) = doc(style, PageVariant::WithText, true);
            let (a, b) = (d.source(), m.source());
            let (la, lb): (Vec<&str>, Vec<&str>) = (a.lines().collect(), b.lines().collect());
            assert_eq!(la.len(), lb.len());
            let mut changed = 0;
            for (x, y) in la.iter().zip(&lb) {
                if x != y {
                    changed += 1;
                    let color = |l: &str| {
                        ["\\pagecolor{", "\\color{", "\\rowcolor{", "\\arrayrulecolor{"].iter().any(|p| l.starts_with(p))
                    };
                    assert!(color(x) && color(y), "{x} / {y}");
                }
            }
            assert!(changed > 0);
            let spec_line = |s: &str| s.lines().find(|l| l.starts_with("\\begin{tabular}")).unwrap().to_string();
            assert_eq!(spec_line(&a), spec_line(&b));
            assert_eq!(count(&b, "\\rowcolor{black}"), 4);
        }
    }

    #[test]
    fn rtl_cells_are_reversed() {
        let s = spec(TableStyle::NoRules, PageVariant::TableOnly);
        let mut c = content(&s);
        c.body[1][2] = "abc 12".to_string();
        let d = emit_document(&s, &c, &plan(true), Placement::Centered, &MarkovModel::lorem_ipsum());
        assert!(d.body.contains("21 cba"));
        assert!(d.body.contains("\\begin{tabular}{rrrr}"));
    }

    #[test]
    fn deterministic() {
        let (a, b) = doc(TableStyle::Booktabs, PageVariant::WithText, false);
        let (c, e) = doc(TableStyle::Booktabs, PageVariant::WithText, false);
        assert_eq!((a, b), (c, e));
    }
}

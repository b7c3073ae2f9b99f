#![allow(dead_code)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use tabsynth_core::GenerationConfig;

/// SHA-256 over every file's relative path and contents, in path order.
pub fn tree_hash(root: &Path) -> String {
    fn walk(dir: &Path, out: &mut Vec<PathBuf>) {
        for e in fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(&p, out);
            } else {
                out.push(p);
            }
        }
    }
    let mut files = Vec::new();
    walk(root, &mut files);
    files.sort();
    let mut h = Sha256::new();
    for f in files {
        let rel = f.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
        h.update(rel.as_bytes());
        h.update([0]);
        let bytes = fs::read(&f).unwrap();
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// A 124x175 page with everything scaled down to match.
pub fn tiny_config() -> GenerationConfig {
    GenerationConfig {
        rows_min: 2,
        rows_max: 10,
        cols_min: 2,
        cols_max: 4,
        text_words_min: 1,
        text_words_max: 2,
        header_words_max: 1,
        page_w: 124,
        page_h: 175,
        margin: 8,
        column_gap: 4,
        cell_padding: 2,
        glyph_size: 6,
        min_glyph_size: 2,
        body_glyph_size: 2,
        line_spacing: 1,
        rule_thickness: 1,
        dash_on: 2,
        dash_off: 1,
        column_inset: 0,
        block_gap: 2,
        paragraph_words_min: 5,
        paragraph_words_max: 15,
        caption_words_min: 1,
        caption_words_max: 2,
        max_layout_retries: 64,
        ..GenerationConfig::default()
    }
}

/// Prints one verdict line past the test harness's output capture, then
/// fails the test if the check did not pass.
pub fn verdict(name: &str, pass: bool, detail: impl AsRef<str>) {
    let line = format!("{} {name}: {}\n", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{name}: {}", detail.as_ref());
}

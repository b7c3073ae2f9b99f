//! Consistency checks over a generated dataset.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use crate::dataset::{read_manifest, SampleRecord};
use crate::error::DatasetError;
use crate::io::read_gray;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    MissingFile(String),
    Unreadable { path: String, reason: String },
    NonBinary { path: String, value: u8, count: usize },
    DimensionMismatch { path: String, expected: (u32, u32), found: (u32, u32) },
    ColumnOutsideTable { count: usize },
    DuplicateId,
    Unsorted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub sample_id: String,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let id = &self.sample_id;
        match &self.kind {
            ViolationKind::MissingFile(p) => write!(f, "{id}: missing file {p}"),
            ViolationKind::Unreadable { path, reason } => write!(f, "{id}: cannot read {path}: {reason}"),
            ViolationKind::NonBinary { path, value, count } => {
                write!(f, "{id}: {path} has {count} non-binary pixels (first value {value})")
            }
            ViolationKind::DimensionMismatch { path, expected, found } => write!(
                f,
                "{id}: {path} is {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            ViolationKind::ColumnOutsideTable { count } => {
                write!(f, "{id}: {count} column-mask pixels lie outside the table mask")
            }
            ViolationKind::DuplicateId => write!(f, "{id}: duplicate sample id"),
            ViolationKind::Unsorted => write!(f, "{id}: records are not sorted by sample id"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub samples: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_record(dir: &Path, r: &SampleRecord, out: &mut Vec<Violation>) {
    let mut push = |kind| out.push(Violation { sample_id: r.sample_id.clone(), kind });
    let p = &r.paths;
    let mut files = vec![&p.image, &p.table_mask, &p.column_mask, &p.meta];
    files.extend(p.latex.iter().chain(&p.latex_mask));
    for f in files {
        if !dir.join(f).is_file() {
            push(ViolationKind::MissingFile(f.clone()));
        }
    }

    let load = |rel: &String, push: &mut dyn FnMut(ViolationKind)| -> Option<Vec<u8>> {
        let path = dir.join(rel);
        if !path.is_file() {
            return None;
        }
        match read_gray(&path) {
            Ok((w, h, px)) => {
                if (w, h) != r.image_dims {
                    push(ViolationKind::DimensionMismatch { path: rel.clone(), expected: r.image_dims, found: (w, h) });
                    return None;
                }
                Some(px)
            }
            Err(e) => {
                push(ViolationKind::Unreadable { path: rel.clone(), reason: e.to_string() });
                None
            }
        }
    };
    load(&p.image, &mut push);
    let table = load(&p.table_mask, &mut push);
    let column = load(&p.column_mask, &mut push);
    let mut binary = true;
    for (rel, px) in [(&p.table_mask, &table), (&p.column_mask, &column)] {
        let Some(px) = px else { continue };
        let bad: Vec<u8> = px.iter().copied().filter(|&v| v != 0 && v != 255).collect();
        if let Some(&value) = bad.first() {
            binary = false;
            push(ViolationKind::NonBinary { path: rel.clone(), value, count: bad.len() });
        }
    }
    if let (Some(t), Some(c), true) = (&table, &column, binary) {
        let count = t.iter().zip(c).filter(|(t, c)| **c != 0 && **t == 0).count();
        if count > 0 {
            push(ViolationKind::ColumnOutsideTable { count });
        }
    }
}

/// Checks every record: files present, masks binary and sized like the
/// image, column mask inside the table mask, ids unique and sorted.
pub fn validate_dataset(dir: &Path) -> Result<ValidationReport, DatasetError> {
    let manifest = read_manifest(dir)?;
    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    for (i, r) in manifest.records.iter().enumerate() {
        if !seen.insert(r.sample_id.as_str()) {
            violations.push(Violation { sample_id: r.sample_id.clone(), kind: ViolationKind::DuplicateId });
        }
        if i > 0 && manifest.records[i - 1].sample_id > r.sample_id {
            violations.push(Violation { sample_id: r.sample_id.clone(), kind: ViolationKind::Unsorted });
        }
        check_record(dir, r, &mut violations);
    }
    Ok(ValidationReport { samples: manifest.records.len(), violations })
}

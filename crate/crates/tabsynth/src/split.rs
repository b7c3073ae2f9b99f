//! Train/test split files: tab-separated `sample_id` and `partition` columns
//! under a header line.

use std::fs;
use std::path::Path;

use tabsynth_core::metrics::{split_dataset, Partition, SplitAssignment};

use crate::dataset::{read_manifest, SPLIT_FILE};
use crate::error::DatasetError;
use crate::io::write_bytes;

const HEADER: &str = "sample_id\tpartition";

pub fn format_split(assignments: &[SplitAssignment]) -> String {
    let mut s = String::from(HEADER);
    s.push('\n');
    for a in assignments {
        s.push_str(&a.sample_id);
        s.push('\t');
        s.push_str(a.partition.as_str());
        s.push('\n');
    }
    s
}

pub fn parse_split(text: &str, path: &Path) -> Result<Vec<SplitAssignment>, DatasetError> {
    let err = |line: usize, message: String| DatasetError::Parse { path: path.to_owned(), line, message };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        _ => return Err(err(1, format!("expected header `{HEADER}`"))),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let (id, p) = l.split_once('\t').ok_or_else(|| err(i + 1, "expected two tab-separated fields".into()))?;
            let partition = Partition::parse(p).ok_or_else(|| err(i + 1, format!("unknown partition `{p}`")))?;
            Ok(SplitAssignment { sample_id: id.to_string(), partition })
        })
        .collect()
}

pub fn read_split(path: &Path) -> Result<Vec<SplitAssignment>, DatasetError> {
    let text = fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    parse_split(&text, path)
}

/// Splits the dataset's sample ids and writes `split.tsv` into `dir`.
pub fn split_and_write(dir: &Path, train_fraction: f64, seed: u64) -> Result<Vec<SplitAssignment>, DatasetError> {
    let manifest = read_manifest(dir)?;
    let ids: Vec<&str> = manifest.records.iter().map(|r| r.sample_id.as_str()).collect();
    let assignments = split_dataset(&ids, train_fraction, seed)?;
    write_bytes(&dir.join(SPLIT_FILE), format_split(&assignments).as_bytes())?;
    Ok(assignments)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let a = split_dataset(&["000000", "000001", "000002"], 0.5, 1).unwrap();
        let text = format_split(&a);
        assert!(text.starts_with("sample_id\tpartition\n"));
        assert_eq!(parse_split(&text, Path::new("s")).unwrap(), a);
    }

    #[test]
    fn malformed_lines_name_their_line() {
        let e = parse_split("sample_id\tpartition\n000001\tvalidation\n", Path::new("s")).unwrap_err();
        assert!(matches!(e, DatasetError::Parse { line: 2, .. }));
        assert!(parse_split("id\tp\n", Path::new("s")).is_err());
    }
}

//! Scoring prediction directories against ground truth, and the report file.
//!
//! Predictions use the dataset mask layout: `PRED/masks/table/ID.png` and
//! `PRED/masks/column/ID.png`.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use tabsynth_core::metrics::{xor_diff_image, xor_error, EvalReport, ResizePolicy, XorResult};

use crate::dataset::{list_pngs, MaskTarget};
use crate::error::DatasetError;
use crate::io::{read_mask, write_mask};

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    pub policy: ResizePolicy,
    pub label: String,
    /// Restrict scoring to these ids; each must then have a prediction.
    pub subset: Option<HashSet<String>>,
    /// Write per-sample XOR diff masks here.
    pub diff_dir: Option<PathBuf>,
}

pub fn policy_name(p: ResizePolicy) -> &'static str {
    match p {
        ResizePolicy::Strict => "strict",
        ResizePolicy::ResizePredToGt => "resize-pred-to-gt",
    }
}

fn parse_policy(s: &str) -> Option<ResizePolicy> {
    match s {
        "strict" => Some(ResizePolicy::Strict),
        "resize-pred-to-gt" => Some(ResizePolicy::ResizePredToGt),
        _ => None,
    }
}

pub fn evaluate_run(
    pred_dir: &Path,
    gt_dir: &Path,
    target: MaskTarget,
    options: &EvalOptions,
) -> Result<EvalReport, DatasetError> {
    let preds: BTreeMap<String, PathBuf> = list_pngs(&pred_dir.join(target.dir()))?.into_iter().collect();
    let gts: BTreeMap<String, PathBuf> = list_pngs(&gt_dir.join(target.dir()))?.into_iter().collect();

    let orphans: Vec<String> = preds.keys().filter(|id| !gts.contains_key(*id)).cloned().collect();
    if !orphans.is_empty() {
        return Err(DatasetError::OrphanPredictions(orphans));
    }
    let wanted = |id: &String| options.subset.as_ref().is_none_or(|s| s.contains(id));
    if options.subset.is_some() {
        let missing: Vec<String> = gts.keys().filter(|id| wanted(id) && !preds.contains_key(*id)).cloned().collect();
        if !missing.is_empty() {
            return Err(DatasetError::MissingPredictions(missing));
        }
    }
    if let Some(d) = &options.diff_dir {
        fs::create_dir_all(d).map_err(|e| DatasetError::io(d, e))?;
    }

    let pairs: Vec<(&String, &PathBuf)> = preds.iter().filter(|(id, _)| wanted(id)).collect();
    let results = pairs
        .par_iter()
        .map(|(id, pred_path)| {
            let pred = read_mask(pred_path)?;
            let gt = read_mask(&gts[*id])?;
            let r = xor_error(&pred, &gt, options.policy)?.with_id(id.as_str());
            if let Some(d) = &options.diff_dir {
                let pred = match r.resized {
                    true => tabsynth_core::raster::Resize::resize(&pred, gt.width(), gt.height())?,
                    false => pred,
                };
                write_mask(&d.join(format!("{id}.png")), &xor_diff_image(&pred, &gt)?)?;
            }
            Ok(r)
        })
        .collect::<Result<Vec<XorResult>, DatasetError>>()?;
    Ok(EvalReport::from_results(options.label.clone(), results))
}

const COLUMNS: &str = "sample_id\txor_error\tpred_w\tpred_h\tgt_w\tgt_h\tresized";

/// A report together with what it measured.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportFile {
    pub target: MaskTarget,
    pub policy: ResizePolicy,
    pub report: EvalReport,
}

impl ReportFile {
    /// Tab-separated text. Floats are written with round-trip precision.
    pub fn to_text(&self) -> String {
        let r = &self.report;
        let mut s = String::from("# xor error report\n");
        let _ = writeln!(s, "label\t{}", r.config_label);
        let _ = writeln!(s, "target\t{}", self.target.name());
        let _ = writeln!(s, "policy\t{}", policy_name(self.policy));
        let _ = writeln!(s, "{COLUMNS}");
        for x in &r.per_sample {
            let _ = writeln!(
                s,
                "{}\t{:?}\t{}\t{}\t{}\t{}\t{}",
                x.sample_id, x.xor_error, x.pred_dims.0, x.pred_dims.1, x.gt_dims.0, x.gt_dims.1, x.resized
            );
        }
        s.push_str("# aggregate\n");
        let _ = writeln!(s, "count\t{}", r.count);
        let _ = writeln!(s, "mean_xor\t{:?}", r.mean_xor);
        s
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, DatasetError> {
        let err = |line: usize, message: &str| DatasetError::Parse {
            path: path.to_owned(),
            line,
            message: message.to_string(),
        };
        let lines: Vec<&str> = text.lines().collect();
        let field = |i: usize, key: &str| -> Result<&str, DatasetError> {
            lines
                .get(i)
                .and_then(|l| l.strip_prefix(key))
                .and_then(|l| l.strip_prefix('\t'))
                .ok_or_else(|| err(i + 1, &format!("expected `{key}`")))
        };
        let label = field(1, "label")?.to_string();
        let target = match field(2, "target")? {
            "table" => MaskTarget::Table,
            "column" => MaskTarget::Column,
            _ => return Err(err(3, "unknown target")),
        };
        let policy = parse_policy(field(3, "policy")?).ok_or_else(|| err(4, "unknown policy"))?;
        if lines.get(4) != Some(&COLUMNS) {
            return Err(err(5, "expected column header"));
        }
        let mut per_sample = Vec::new();
        let mut i = 5;
        while i < lines.len() && lines[i] != "# aggregate" {
            let f: Vec<&str> = lines[i].split('\t').collect();
            let bad = || err(i + 1, "malformed sample record");
            if f.len() != 7 {
                return Err(bad());
            }
            let num = |s: &str| s.parse::<u32>().map_err(|_| bad());
            per_sample.push(XorResult {
                sample_id: f[0].to_string(),
                xor_error: f[1].parse().map_err(|_| bad())?,
                mismatched: 0,
                pred_dims: (num(f[2])?, num(f[3])?),
                gt_dims: (num(f[4])?, num(f[5])?),
                resized: f[6].parse().map_err(|_| bad())?,
            });
            i += 1;
        }
        for r in &mut per_sample {
            r.mismatched = (r.xor_error * f64::from(r.gt_dims.0) * f64::from(r.gt_dims.1)).round() as u64;
        }
        let report = EvalReport::from_results(label, per_sample);
        let count: usize = field(i + 1, "count")?.parse().map_err(|_| err(i + 2, "bad count"))?;
        if count != report.count {
            return Err(err(i + 2, "count does not match the records"));
        }
        Ok(ReportFile { target, policy, report })
    }
}

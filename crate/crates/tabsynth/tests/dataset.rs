mod common;

use std::fs;
use std::path::Path;

use common::tiny_config;
use tabsynth::dataset::{
    generate_dataset, list_pngs, mask_rel, read_manifest, read_meta, GenerateOptions, MaskTarget, Manifest,
    MANIFEST_FILE,
};
use tabsynth::eval::{evaluate_run, EvalOptions, ReportFile};
use tabsynth::io::{read_mask, write_mask};
use tabsynth::split::{read_split, split_and_write};
use tabsynth::stats::dataset_stats;
use tabsynth::validate::{validate_dataset, ViolationKind};
use tabsynth::DatasetError;
use tabsynth_core::metrics::{Partition, ResizePolicy};
use tabsynth_core::raster::MaskImage;
use tabsynth_core::sampler::PageVariant;

fn generate(out: &Path, count: u64, latex: bool) -> Manifest {
    generate_dataset(&tiny_config(), 9, count, out, &GenerateOptions { latex, jobs: Some(1) }).unwrap()
}

fn copy_masks(gt: &Path, pred: &Path) {
    for t in [MaskTarget::Table, MaskTarget::Column] {
        fs::create_dir_all(pred.join(t.dir())).unwrap();
        for (id, path) in list_pngs(&gt.join(t.dir())).unwrap() {
            fs::copy(path, pred.join(mask_rel(t, &id))).unwrap();
        }
    }
}

#[test]
fn writes_one_file_set_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate(dir.path(), 5, true);
    assert_eq!(m.records.len(), 5);
    for sub in ["images", "masks/table", "masks/column"] {
        assert_eq!(list_pngs(&dir.path().join(sub)).unwrap().len(), 5, "{sub}");
    }
    assert_eq!(fs::read_dir(dir.path().join("meta")).unwrap().count(), 5);
    assert_eq!(fs::read_dir(dir.path().join("latex")).unwrap().count(), 10);
    let ids: Vec<&str> = m.records.iter().map(|r| r.sample_id.as_str()).collect();
    assert_eq!(ids, ["000000", "000001", "000002", "000003", "000004"]);
    for r in &m.records {
        let meta = read_meta(dir.path(), r).unwrap();
        assert_eq!(meta.spec, r.spec);
        assert!(dir.path().join(r.paths.latex_mask.as_ref().unwrap()).is_file());
    }
    assert!(!dir.path().join("manifest.json.tmp").exists());
}

#[test]
fn manifest_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate(dir.path(), 3, false);
    let text = fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
    let back = read_manifest(dir.path()).unwrap();
    assert_eq!(back, m);
    assert_eq!(back.to_json(), text);
}

#[test]
fn validate_accepts_fresh_output() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), 4, false);
    let r = validate_dataset(dir.path()).unwrap();
    assert!(r.is_clean(), "{:?}", r.violations);
    assert_eq!(r.samples, 4);
}

#[test]
fn validate_reports_a_missing_mask() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), 4, false);
    fs::remove_file(dir.path().join(mask_rel(MaskTarget::Column, "000002"))).unwrap();
    let r = validate_dataset(dir.path()).unwrap();
    assert_eq!(r.violations.len(), 1, "{:?}", r.violations);
    assert_eq!(r.violations[0].sample_id, "000002");
    assert!(matches!(r.violations[0].kind, ViolationKind::MissingFile(_)));
    assert!(r.violations[0].to_string().contains("000002"));
}

#[test]
fn validate_reports_non_binary_pixels() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), 2, false);
    let path = dir.path().join(mask_rel(MaskTarget::Table, "000001"));
    let mut img = image::open(&path).unwrap().into_luma8();
    img.put_pixel(0, 0, image::Luma([7]));
    img.save(&path).unwrap();
    let r = validate_dataset(dir.path()).unwrap();
    assert!(r
        .violations
        .iter()
        .any(|v| v.sample_id == "000001" && matches!(v.kind, ViolationKind::NonBinary { value: 7, count: 1, .. })));
}

#[test]
fn stats_on_a_single_sample_are_indicator_values() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), 1, false);
    let s = dataset_stats(dir.path()).unwrap();
    assert_eq!(s.samples, 1);
    let all = s.style.iter().chain([&s.with_text, &s.non_western, &s.light_blue, &s.light_red, &s.perspective]);
    for f in all {
        assert!(*f == 0.0 || *f == 1.0, "{f}");
    }
    assert_eq!(s.style.iter().sum::<f64>(), 1.0);
}

#[test]
fn with_text_ratio_holds_over_a_thousand_pages() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate_dataset(&tiny_config().clean(), 31, 1000, dir.path(), &GenerateOptions::default()).unwrap();
    let with_text = m.records.iter().filter(|r| r.spec.variant == PageVariant::WithText).count();
    let s = dataset_stats(dir.path()).unwrap();
    assert!((s.with_text - 0.5).abs() <= 0.05, "{}", s.with_text);
    assert_eq!(s.with_text, with_text as f64 / 1000.0);
}

#[test]
fn split_file_covers_the_dataset() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), 10, false);
    let a = split_and_write(dir.path(), 0.9, 4).unwrap();
    let back = read_split(&dir.path().join("split.tsv")).unwrap();
    assert_eq!(a, back);
    assert_eq!(back.iter().filter(|a| a.partition == Partition::Train).count(), 9);
    let text = fs::read_to_string(dir.path().join("split.tsv")).unwrap();
    assert_eq!(text.lines().next(), Some("sample_id\tpartition"));
}

#[test]
fn ground_truth_scores_zero_against_itself() {
    let dir = tempfile::tempdir().unwrap();
    let (gt, pred) = (dir.path().join("gt"), dir.path().join("pred"));
    generate(&gt, 6, false);
    copy_masks(&gt, &pred);
    for t in [MaskTarget::Table, MaskTarget::Column] {
        let r = evaluate_run(&pred, &gt, t, &EvalOptions::default()).unwrap();
        assert_eq!((r.count, r.mean_xor), (6, 0.0));
    }
}

#[test]
fn empty_predictions_score_the_foreground_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let (gt, pred) = (dir.path().join("gt"), dir.path().join("pred"));
    generate(&gt, 6, false);
    fs::create_dir_all(pred.join(MaskTarget::Table.dir())).unwrap();
    let mut expected = 0.0;
    for (id, path) in list_pngs(&gt.join(MaskTarget::Table.dir())).unwrap() {
        let m = read_mask(&path).unwrap();
        expected += m.count_foreground() as f64 / (m.width() * m.height()) as f64;
        write_mask(&pred.join(mask_rel(MaskTarget::Table, &id)), &MaskImage::zeros(m.width(), m.height()).unwrap())
            .unwrap();
    }
    let r = evaluate_run(&pred, &gt, MaskTarget::Table, &EvalOptions::default()).unwrap();
    assert!((r.mean_xor - expected / 6.0).abs() < 1e-12);
}

#[test]
fn orphan_predictions_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (gt, pred) = (dir.path().join("gt"), dir.path().join("pred"));
    generate(&gt, 2, false);
    copy_masks(&gt, &pred);
    write_mask(&pred.join(mask_rel(MaskTarget::Table, "999999")), &MaskImage::zeros(4, 4).unwrap()).unwrap();
    match evaluate_run(&pred, &gt, MaskTarget::Table, &EvalOptions::default()) {
        Err(DatasetError::OrphanPredictions(ids)) => assert_eq!(ids, ["999999"]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn subset_requires_every_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let (gt, pred) = (dir.path().join("gt"), dir.path().join("pred"));
    generate(&gt, 3, false);
    copy_masks(&gt, &pred);
    fs::remove_file(pred.join(mask_rel(MaskTarget::Table, "000001"))).unwrap();
    let subset = Some(["000000", "000001"].map(String::from).into_iter().collect());
    let opts = EvalOptions { subset, ..EvalOptions::default() };
    match evaluate_run(&pred, &gt, MaskTarget::Table, &opts) {
        Err(DatasetError::MissingPredictions(ids)) => assert_eq!(ids, ["000001"]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn size_mismatch_needs_the_resize_policy() {
    let dir = tempfile::tempdir().unwrap();
    let (gt, pred) = (dir.path().join("gt"), dir.path().join("pred"));
    generate(&gt, 1, false);
    fs::create_dir_all(pred.join(MaskTarget::Table.dir())).unwrap();
    write_mask(&pred.join(mask_rel(MaskTarget::Table, "000000")), &MaskImage::zeros(62, 88).unwrap()).unwrap();
    assert!(evaluate_run(&pred, &gt, MaskTarget::Table, &EvalOptions::default()).is_err());
    let opts = EvalOptions { policy: ResizePolicy::ResizePredToGt, ..EvalOptions::default() };
    let r = evaluate_run(&pred, &gt, MaskTarget::Table, &opts).unwrap();
    assert!(r.per_sample[0].resized);
}

#[test]
fn report_text_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (gt, pred) = (dir.path().join("gt"), dir.path().join("pred"));
    generate(&gt, 3, false);
    copy_masks(&gt, &pred);
    write_mask(&pred.join(mask_rel(MaskTarget::Column, "000000")), &MaskImage::zeros(124, 175).unwrap()).unwrap();
    let opts = EvalOptions { label: "256/500/Novel".into(), ..EvalOptions::default() };
    let report = evaluate_run(&pred, &gt, MaskTarget::Column, &opts).unwrap();
    let file = ReportFile { target: MaskTarget::Column, policy: ResizePolicy::Strict, report };
    let back = ReportFile::parse(&file.to_text(), Path::new("report.tsv")).unwrap();
    assert_eq!(back, file);
}

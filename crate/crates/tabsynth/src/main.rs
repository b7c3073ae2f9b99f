use std::collections::HashSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use tabsynth::config::{load_config, render_config};
use tabsynth::dataset::{generate_dataset, GenerateOptions, MaskTarget};
use tabsynth::detect::detect_dataset;
use tabsynth::eval::{evaluate_run, EvalOptions, ReportFile};
use tabsynth::split::{read_split, split_and_write};
use tabsynth::stats::dataset_stats;
use tabsynth::validate::validate_dataset;
use tabsynth_core::detect::DetectParams;
use tabsynth_core::metrics::{compare_to_reference, Partition, ResizePolicy, REFERENCE};
use tabsynth_core::GenerationConfig;

#[derive(Parser)]
#[command(name = "tabsynth", version, about = "Synthetic table pages with pixel-aligned masks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Table,
    Column,
}

#[derive(Clone, Copy, ValueEnum)]
enum PartitionArg {
    Train,
    Test,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset of page images and masks.
    Generate {
        #[arg(long)]
        count: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// TOML file; missing keys keep their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        with_text_ratio: Option<f64>,
        /// Also write LaTeX sources and their mask variants.
        #[arg(long)]
        latex: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Write a seeded train/test split to DIR/split.tsv.
    Split {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 0.9)]
        train_fraction: f64,
        #[arg(long)]
        seed: u64,
    },
    /// Run the projection-profile detector over DIR/images.
    Detect {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Score predictions against ground truth with the XOR error rate.
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        gt: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        /// Resize predictions to the ground-truth size instead of failing.
        #[arg(long)]
        resize_pred: bool,
        /// Run label, e.g. 256/500/Marmot.
        #[arg(long, default_value = "")]
        label: String,
        /// Print the label's row of the published reference table.
        #[arg(long, requires = "label")]
        compare: bool,
        /// Only score ids in this partition of a split file.
        #[arg(long, requires = "partition")]
        split: Option<PathBuf>,
        #[arg(long, value_enum, requires = "split")]
        partition: Option<PartitionArg>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write per-sample XOR difference masks into this directory.
        #[arg(long)]
        diff_out: Option<PathBuf>,
    },
    /// Empirical frequencies and content statistics.
    Stats {
        #[arg(long)]
        dir: PathBuf,
    },
    /// Check every manifest record against the files on disk.
    Validate {
        #[arg(long)]
        dir: PathBuf,
    },
    /// Print the full default configuration as TOML.
    Config,
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate { count, seed, out, config, with_text_ratio, latex, jobs } => {
            let mut cfg = match &config {
                Some(p) => load_config(p)?,
                None => GenerationConfig::default(),
            };
            if let Some(r) = with_text_ratio {
                cfg.with_text_ratio = r;
            }
            let m = generate_dataset(&cfg, seed, count, &out, &GenerateOptions { latex, jobs })
                .with_context(|| format!("generating into {}", out.display()))?;
            println!(
                "wrote {} samples to {} ({} layout retries)",
                m.records.len(),
                out.display(),
                m.statistics.layout_retries
            );
        }
        Command::Split { dir, train_fraction, seed } => {
            let a = split_and_write(&dir, train_fraction, seed)?;
            let train = a.iter().filter(|a| a.partition == Partition::Train).count();
            println!("train\t{train}\ntest\t{}", a.len() - train);
        }
        Command::Detect { dir, out, jobs } => {
            let ids = detect_dataset(&dir, &out, &DetectParams::default(), jobs)?;
            println!("wrote predictions for {} images to {}", ids.len(), out.display());
        }
        Command::Eval { pred, gt, target, resize_pred, label, compare, split, partition, report, diff_out } => {
            let target = match target {
                Target::Table => MaskTarget::Table,
                Target::Column => MaskTarget::Column,
            };
            let policy = if resize_pred { ResizePolicy::ResizePredToGt } else { ResizePolicy::Strict };
            let subset = match (split, partition) {
                (Some(path), Some(p)) => {
                    let want = match p {
                        PartitionArg::Train => Partition::Train,
                        PartitionArg::Test => Partition::Test,
                    };
                    let ids: HashSet<String> = read_split(&path)?
                        .into_iter()
                        .filter(|a| a.partition == want)
                        .map(|a| a.sample_id)
                        .collect();
                    Some(ids)
                }
                _ => None,
            };
            let options = EvalOptions { policy, label, subset, diff_dir: diff_out };
            let r = evaluate_run(&pred, &gt, target, &options)?;
            let comparison = compare.then(|| compare_to_reference(&r, &REFERENCE)).transpose()?;
            let text = ReportFile { target, policy, report: r.clone() }.to_text();
            match report {
                Some(path) => {
                    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                    println!("count\t{}\nmean_xor\t{}", r.count, r.mean_xor);
                }
                None => print!("{text}"),
            }
            if let Some(c) = comparison {
                print!("{c}");
            }
        }
        Command::Stats { dir } => print!("{}", dataset_stats(&dir)?),
        Command::Validate { dir } => {
            let report = validate_dataset(&dir)?;
            for v in &report.violations {
                println!("{v}");
            }
            println!("{} samples, {} violations", report.samples, report.violations.len());
            if !report.is_clean() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Config => print!("{}", render_config(&GenerationConfig::default())),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn compare_needs_label() {
        let r = Cli::try_parse_from(["tabsynth", "eval", "--pred", "p", "--gt", "g", "--target", "table", "--compare"]);
        assert!(r.is_err());
    }
}

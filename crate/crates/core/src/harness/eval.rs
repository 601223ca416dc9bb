//! Evaluation runs: score a directory of predicted SVGs against manifest
//! ground truth and aggregate into a report.

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::metrics::{aggregate, score_pair, MetricReport, SampleScore, ScoreConfig, ScoreStatus};
use crate::raster::read_image;

use super::{read_manifest, resolve_path, ManifestEntry, ManifestIoError, Split};

/// Scores `<id>.svg` under `pred_dir` against each selected manifest
/// entry. `split` picks the entries; the default takes the test split, or
/// every entry when the manifest has no test split. Missing or unreadable
/// predictions score as unparseable rather than aborting the run. Samples
/// come back ordered by id.
pub fn run_eval(
    pred_dir: &Path,
    manifest_path: &Path,
    config: &ScoreConfig,
    split: Option<Split>,
) -> Result<(MetricReport, Vec<SampleScore>), ManifestIoError> {
    let entries = read_manifest(manifest_path)?;
    let manifest_dir = manifest_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let selected: Vec<&ManifestEntry> = match split {
        Some(s) => entries.iter().filter(|e| e.split == s).collect(),
        None => {
            let test: Vec<&ManifestEntry> =
                entries.iter().filter(|e| e.split == Split::Test).collect();
            if test.is_empty() {
                entries.iter().collect()
            } else {
                test
            }
        }
    };
    let dataset = manifest_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());

    let mut scores: Vec<SampleScore> = selected
        .par_iter()
        .map(|e| score_entry(pred_dir, &manifest_dir, e, config))
        .collect();
    scores.sort_by(|a, b| a.id.cmp(&b.id));
    let report = aggregate(&scores, &dataset, config);
    Ok((report, scores))
}

fn failed(id: &str, status: ScoreStatus) -> SampleScore {
    SampleScore { id: id.to_string(), mse: None, ssim: None, cd: None, status }
}

fn score_entry(
    pred_dir: &Path,
    manifest_dir: &Path,
    entry: &ManifestEntry,
    config: &ScoreConfig,
) -> SampleScore {
    let pred_path = pred_dir.join(format!("{}.svg", entry.id));
    let Ok(pred) = fs::read_to_string(&pred_path) else {
        return failed(&entry.id, ScoreStatus::PredUnparseable);
    };
    let gt_path = resolve_path(manifest_dir, &entry.svg_path);
    let Ok(gt) = fs::read_to_string(&gt_path) else {
        return failed(&entry.id, ScoreStatus::GtUnparseable);
    };
    let gt_img = match &entry.png_path {
        Some(p) => match read_image(&resolve_path(manifest_dir, p)) {
            Ok(img) => Some(img),
            Err(_) => return failed(&entry.id, ScoreStatus::GtUnparseable),
        },
        None => None,
    };
    score_pair(&entry.id, &pred, &gt, gt_img.as_ref(), config)
}

//! Image and geometry similarity metrics plus per-sample scoring and
//! report aggregation.

mod chamfer;
mod ssim;

pub use chamfer::{chamfer, chamfer_points, KdTree};
pub use ssim::ssim;

use serde::Serialize;
use thiserror::Error;

use crate::normalize::normalize;
use crate::parse::parse_svg;
use crate::raster::{rasterize, RasterImage};
use crate::repair::repair;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("image dimensions differ: {a:?} vs {b:?}")]
    DimensionMismatch { a: (usize, usize), b: (usize, usize) },
    #[error("image side {side} is below the {need}-pixel window")]
    TooSmall { side: usize, need: usize },
    #[error("document has no sampleable geometry")]
    EmptyGeometry,
}

/// Mean squared channel difference, in [0,1].
pub fn mse(a: &RasterImage, b: &RasterImage) -> Result<f64, MetricError> {
    if (a.width, a.height) != (b.width, b.height) {
        return Err(MetricError::DimensionMismatch {
            a: (a.width, a.height),
            b: (b.width, b.height),
        });
    }
    let sum: f64 = a.pixels.iter().zip(&b.pixels).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(sum / a.pixels.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreStatus {
    Ok,
    PredUnparseable,
    GtUnparseable,
    EmptyGeometry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleScore {
    pub id: String,
    pub mse: Option<f64>,
    pub ssim: Option<f64>,
    pub cd: Option<f64>,
    pub status: ScoreStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreConfig {
    /// Output image side in pixels.
    pub size: u32,
    pub supersample: u32,
    /// Arc-length sampling step for the Chamfer distance, in user units.
    pub step: f64,
}

impl Default for ScoreConfig {
    fn default() -> ScoreConfig {
        ScoreConfig { size: 224, supersample: 4, step: 2.0 }
    }
}

/// Repairs, parses, and normalizes one SVG text into the scoring frame.
fn prepare(text: &str, size: u32) -> Option<crate::model::SvgDocument> {
    let (fixed, report) = repair(text).ok()?;
    if !report.compilable {
        return None;
    }
    let doc = parse_svg(&fixed).ok()?;
    normalize(&doc, size).ok()
}

/// Scores one prediction against one ground truth. Every failure mode maps
/// to a status; this never errors. When `gt_img` is given it replaces the
/// rasterization of `gt_svg` (the document itself is still needed for the
/// Chamfer term).
pub fn score_pair(
    id: &str,
    pred_svg: &str,
    gt_svg: &str,
    gt_img: Option<&RasterImage>,
    config: &ScoreConfig,
) -> SampleScore {
    let fail = |status: ScoreStatus| SampleScore {
        id: id.to_string(),
        mse: None,
        ssim: None,
        cd: None,
        status,
    };
    let pred_doc = match prepare(pred_svg, config.size) {
        Some(d) => d,
        None => return fail(ScoreStatus::PredUnparseable),
    };
    let gt_doc = match prepare(gt_svg, config.size) {
        Some(d) => d,
        None => return fail(ScoreStatus::GtUnparseable),
    };
    let pred_img = rasterize(&pred_doc, config.size, config.supersample);
    let rendered_gt;
    let gt_image = match gt_img {
        Some(img) => img,
        None => {
            rendered_gt = rasterize(&gt_doc, config.size, config.supersample);
            &rendered_gt
        }
    };
    // A supplied ground-truth image at the wrong size makes the ground
    // truth unusable for this config.
    let (mse_v, ssim_v) = match (mse(&pred_img, gt_image), ssim(&pred_img, gt_image)) {
        (Ok(m), Ok(s)) => (m, s),
        _ => return fail(ScoreStatus::GtUnparseable),
    };
    match chamfer(&pred_doc, &gt_doc, config.step) {
        Ok(cd) => SampleScore {
            id: id.to_string(),
            mse: Some(mse_v),
            ssim: Some(ssim_v),
            cd: Some(cd),
            status: ScoreStatus::Ok,
        },
        Err(_) => SampleScore {
            id: id.to_string(),
            mse: Some(mse_v),
            ssim: Some(ssim_v),
            cd: None,
            status: ScoreStatus::EmptyGeometry,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub dataset: String,
    pub n_total: usize,
    pub n_ok: usize,
    pub mean_mse: Option<f64>,
    pub mean_ssim: Option<f64>,
    pub mean_cd: Option<f64>,
    pub size: u32,
    pub supersample: u32,
    pub step: f64,
}

/// Order-insensitive summation: splitting in halves keeps rounding error
/// around machine epsilon times log(n).
fn pairwise_sum(s: &[f64]) -> f64 {
    match s.len() {
        0 => 0.0,
        1 => s[0],
        n => pairwise_sum(&s[..n / 2]) + pairwise_sum(&s[n / 2..]),
    }
}

/// Means over samples with status Ok; everything else only counts toward
/// `n_total`.
pub fn aggregate(scores: &[SampleScore], dataset: &str, config: &ScoreConfig) -> MetricReport {
    let mean = |f: fn(&SampleScore) -> Option<f64>| {
        let vals: Vec<f64> = scores
            .iter()
            .filter(|s| s.status == ScoreStatus::Ok)
            .filter_map(f)
            .collect();
        if vals.is_empty() {
            None
        } else {
            Some(pairwise_sum(&vals) / vals.len() as f64)
        }
    };
    MetricReport {
        dataset: dataset.to_string(),
        n_total: scores.len(),
        n_ok: scores.iter().filter(|s| s.status == ScoreStatus::Ok).count(),
        mean_mse: mean(|s| s.mse),
        mean_ssim: mean(|s| s.ssim),
        mean_cd: mean(|s| s.cd),
        size: config.size,
        supersample: config.supersample,
        step: config.step,
    }
}

#[derive(Serialize)]
struct FullReport<'a> {
    report: &'a MetricReport,
    samples: &'a [SampleScore],
}

pub fn report_json(report: &MetricReport, samples: &[SampleScore]) -> String {
    serde_json::to_string_pretty(&FullReport { report, samples }).expect("serializable report")
}

/// One row per dataset in table column order; the LPIPS column is always
/// empty (it needs a pretrained network this toolkit does not ship).
pub fn report_csv(reports: &[MetricReport]) -> String {
    let mut out = String::from("dataset,n_total,n_ok,mse,cd,lpips,ssim\n");
    for r in reports {
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
        let name = if r.dataset.contains([',', '"', '\n']) {
            format!("\"{}\"", r.dataset.replace('"', "\"\""))
        } else {
            r.dataset.clone()
        };
        out.push_str(&format!(
            "{},{},{},{},{},,{}\n",
            name,
            r.n_total,
            r.n_ok,
            cell(r.mean_mse),
            cell(r.mean_cd),
            cell(r.mean_ssim),
        ));
    }
    out
}

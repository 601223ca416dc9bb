//! Command line front end: one subcommand per pipeline stage.
//!
//! Exit codes: 0 on success, 1 for user errors (bad flags or paths), 2 for
//! data errors (inputs that are malformed beyond repair).

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use svgkit::augment::{augment, AugmentConfig};
use svgkit::harness::{
    build_manifest, dataset_stats, dedup, dedup_against, filter_by_context, make_splits,
    read_manifest, run_eval, write_manifest, Split, Tokenizer, TokenizerSpec, DEFAULT_MAX_TOKENS,
};
use svgkit::metrics::{report_csv, report_json, ScoreConfig};
use svgkit::model::SvgDocument;
use svgkit::normalize::simplify;
use svgkit::raster::{read_image, write_ppm};
use svgkit::vectorize::{vectorize, VectorizeConfig};
use svgkit::{parse_svg, rasterize, repair, serialize, validate};

#[derive(Parser)]
#[command(
    name = "svgkit",
    version,
    about = "Parse, repair, rasterize, augment, vectorize, and score SVG documents"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate an SVG file and print its report (exit 0 iff compilable).
    Parse { file: PathBuf },
    /// Repair truncated or broken SVG text and write the fixed file.
    Repair { input: PathBuf, output: PathBuf },
    /// Render an SVG into a square PPM image.
    Rasterize {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value_t = 224, value_parser = clap::value_parser!(u32).range(1..))]
        size: u32,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        supersample: u32,
    },
    /// Reduce a document to stroked outlines (line-art form).
    Simplify { input: PathBuf, output: PathBuf },
    /// Apply seeded rotation, color, and curve-warp augmentations.
    Augment {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Rotation bounds in degrees, as `lo,hi`.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        rotation_range: Option<(f64, f64)>,
        /// Gaussian stddev added to fill channels, in 0-255 units.
        #[arg(long)]
        color_sigma: Option<f64>,
        /// Warp amplitude bounds as a fraction of the frame, as `lo,hi`.
        #[arg(long, value_parser = parse_pair)]
        curve_scale: Option<(f64, f64)>,
        /// Warp noise cycles across the frame.
        #[arg(long)]
        perlin_freq: Option<f64>,
    },
    /// Trace a raster image (PNG or PPM) into a flat-color SVG.
    Vectorize {
        input: PathBuf,
        output: PathBuf,
        /// Color bits kept per channel during quantization (1-8).
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=8))]
        color_precision: u32,
        /// Regions smaller than this many pixels merge into a neighbor.
        #[arg(long, default_value_t = 16)]
        min_region: usize,
        /// Polygon simplification tolerance in pixels.
        #[arg(long, default_value_t = 1.0)]
        simplify_epsilon: f64,
        /// Turns sharper than this many degrees become corners.
        #[arg(long, default_value_t = 60.0)]
        corner_angle: f64,
        /// Squared curve-fit error budget in pixels.
        #[arg(long, default_value_t = 4.0)]
        fit_error: f64,
    },
    /// Manifest maintenance: build, dedup, filter, split.
    #[command(subcommand)]
    Manifest(ManifestCmd),
    /// Print per-split counts and token-length stats for a manifest.
    Stats {
        manifest: PathBuf,
        #[arg(long, default_value = "approx4")]
        tokenizer: String,
    },
    /// Score a directory of predicted SVGs against manifest ground truth.
    Eval {
        /// Directory holding `<id>.svg` predictions.
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
        /// JSON report output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional CSV report output path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Chamfer sampling step in user units.
        #[arg(long, default_value_t = 2.0)]
        step: f64,
        #[arg(long, default_value_t = 224, value_parser = clap::value_parser!(u32).range(1..))]
        size: u32,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        supersample: u32,
        /// Restrict scoring to one split (default: test if present, else all).
        #[arg(long)]
        split: Option<String>,
        /// Worker threads (default: CPU count).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ManifestCmd {
    /// Scan a directory tree for SVG files and write a manifest.
    Build {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// `bytes`, `approx4`, or `vocab:<path>`.
        #[arg(long, default_value = "approx4")]
        tokenizer: String,
    },
    /// Drop duplicate entries by canonical content hash.
    Dedup {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also drop entries whose hash appears in this manifest.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Keep entries whose token length fits the context budget.
    Filter {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_TOKENS)]
        max_tokens: u64,
    },
    /// Assign train/val/test splits with a seeded, order-independent draw.
    Split {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Train,val,test fractions summing to 1.
        #[arg(long, default_value = "0.9,0.05,0.05", value_parser = parse_triple)]
        ratios: (f64, f64, f64),
    },
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected `lo,hi`, got {s:?}"));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|e| format!("bad number {:?}: {e}", parts[0]))?;
    let hi: f64 = parts[1].trim().parse().map_err(|e| format!("bad number {:?}: {e}", parts[1]))?;
    Ok((lo, hi))
}

fn parse_triple(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected `train,val,test`, got {s:?}"));
    }
    let mut v = [0.0f64; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|e| format!("bad number {part:?}: {e}"))?;
    }
    Ok((v[0], v[1], v[2]))
}

/// User errors exit 1, data errors exit 2.
enum Failure {
    User(String),
    Data(String),
}

fn user(msg: impl Display) -> Failure {
    Failure::User(msg.to_string())
}

fn data(msg: impl Display) -> Failure {
    Failure::Data(msg.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            // Help and version output.
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| user(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| user(format!("cannot write {}: {e}", path.display())))
}

/// Standard SVG entrance for pipeline commands: repair, then parse.
fn load_doc(path: &Path) -> Result<SvgDocument, Failure> {
    let text = read_text(path)?;
    let (fixed, report) =
        repair(&text).map_err(|e| data(format!("{}: {e}", path.display())))?;
    if !report.compilable {
        return Err(data(format!("{}: not compilable after repair", path.display())));
    }
    parse_svg(&fixed).map_err(|e| data(format!("{}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Parse { file } => {
            let text = read_text(&file)?;
            let report = validate(&text);
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            if report.compilable {
                Ok(())
            } else {
                Err(data(format!("{} is not compilable", file.display())))
            }
        }
        Cmd::Repair { input, output } => {
            let text = read_text(&input)?;
            let (fixed, report) =
                repair(&text).map_err(|e| data(format!("{}: {e}", input.display())))?;
            write_output(&output, fixed.as_bytes())?;
            println!("repaired: {}, issues: {}", report.repaired, report.issues.len());
            Ok(())
        }
        Cmd::Rasterize { input, output, size, supersample } => {
            let doc = load_doc(&input)?;
            let img = rasterize(&doc, size, supersample);
            write_output(&output, &write_ppm(&img))
        }
        Cmd::Simplify { input, output } => {
            let doc = load_doc(&input)?;
            write_output(&output, serialize(&simplify(&doc)).as_bytes())
        }
        Cmd::Augment {
            input,
            output,
            seed,
            rotation_range,
            color_sigma,
            curve_scale,
            perlin_freq,
        } => {
            let doc = load_doc(&input)?;
            let mut config = AugmentConfig { seed, ..AugmentConfig::default() };
            if let Some(r) = rotation_range {
                config.rotation_range_deg = r;
            }
            if let Some(s) = color_sigma {
                config.color_sigma = s;
            }
            if let Some(c) = curve_scale {
                config.curve_noise_scale_range = c;
            }
            if let Some(f) = perlin_freq {
                config.perlin_frequency = f;
            }
            write_output(&output, serialize(&augment(&doc, &config)).as_bytes())
        }
        Cmd::Vectorize {
            input,
            output,
            color_precision,
            min_region,
            simplify_epsilon,
            corner_angle,
            fit_error,
        } => {
            let img =
                read_image(&input).map_err(|e| data(format!("{}: {e}", input.display())))?;
            let config = VectorizeConfig {
                color_precision,
                min_region_px: min_region,
                simplify_epsilon,
                corner_angle_deg: corner_angle,
                fit_error,
            };
            write_output(&output, serialize(&vectorize(&img, &config)).as_bytes())
        }
        Cmd::Manifest(cmd) => run_manifest(cmd),
        Cmd::Stats { manifest, tokenizer } => {
            let spec = TokenizerSpec::parse_flag(&tokenizer).map_err(user)?;
            let entries =
                read_manifest(&manifest).map_err(|e| data(format!("{e}")))?;
            print!("{}", dataset_stats(&entries, &spec).render());
            Ok(())
        }
        Cmd::Eval { pred, manifest, out, csv, step, size, supersample, split, jobs } => {
            let split = match split {
                None => None,
                Some(s) => Some(
                    Split::parse_flag(&s)
                        .ok_or_else(|| user(format!("unknown split {s:?}")))?,
                ),
            };
            if let Some(n) = jobs {
                if n == 0 {
                    return Err(user("--jobs must be at least 1"));
                }
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| user(format!("cannot size worker pool: {e}")))?;
            }
            let config = ScoreConfig { size, supersample, step };
            let (report, samples) =
                run_eval(&pred, &manifest, &config, split).map_err(|e| data(format!("{e}")))?;
            write_output(&out, report_json(&report, &samples).as_bytes())?;
            if let Some(csv_path) = csv {
                write_output(&csv_path, report_csv(std::slice::from_ref(&report)).as_bytes())?;
            }
            let show = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
            println!(
                "{}: ok {}/{}  mse {}  cd {}  ssim {}",
                report.dataset,
                report.n_ok,
                report.n_total,
                show(report.mean_mse),
                show(report.mean_cd),
                show(report.mean_ssim),
            );
            Ok(())
        }
    }
}

fn run_manifest(cmd: ManifestCmd) -> Result<(), Failure> {
    match cmd {
        ManifestCmd::Build { dir, out, tokenizer } => {
            let spec = TokenizerSpec::parse_flag(&tokenizer).map_err(user)?;
            let tok = Tokenizer::load(&spec).map_err(user)?;
            let manifest_dir = out.parent().filter(|p| !p.as_os_str().is_empty());
            let manifest_dir = manifest_dir.unwrap_or(Path::new("."));
            fs::create_dir_all(manifest_dir)
                .map_err(|e| user(format!("cannot create {}: {e}", manifest_dir.display())))?;
            let entries = build_manifest(&dir, manifest_dir, &tok)
                .map_err(|e| user(format!("{e}")))?;
            write_manifest(&out, &entries).map_err(|e| user(format!("{e}")))?;
            println!("wrote {} entries to {}", entries.len(), out.display());
            Ok(())
        }
        ManifestCmd::Dedup { input, out, against } => {
            let entries = read_manifest(&input).map_err(|e| data(format!("{e}")))?;
            let before = entries.len();
            let mut kept = dedup(entries);
            if let Some(other) = against {
                let exclusion = read_manifest(&other).map_err(|e| data(format!("{e}")))?;
                kept = dedup_against(kept, &exclusion);
            }
            write_manifest(&out, &kept).map_err(|e| user(format!("{e}")))?;
            println!("kept {} of {} entries", kept.len(), before);
            Ok(())
        }
        ManifestCmd::Filter { input, out, max_tokens } => {
            let entries = read_manifest(&input).map_err(|e| data(format!("{e}")))?;
            let (kept, dropped) = filter_by_context(entries, max_tokens);
            write_manifest(&out, &kept).map_err(|e| user(format!("{e}")))?;
            println!("kept {} entries, dropped {}", kept.len(), dropped);
            Ok(())
        }
        ManifestCmd::Split { input, out, seed, ratios } => {
            let entries = read_manifest(&input).map_err(|e| data(format!("{e}")))?;
            let assigned = make_splits(entries, ratios, seed).map_err(user)?;
            write_manifest(&out, &assigned).map_err(|e| user(format!("{e}")))?;
            let count = |s: Split| assigned.iter().filter(|e| e.split == s).count();
            println!(
                "train {} / val {} / test {}",
                count(Split::Train),
                count(Split::Val),
                count(Split::Test),
            );
            Ok(())
        }
    }
}

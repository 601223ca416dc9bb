//! Release acceptance suite. One test per gate, so the test harness prints
//! one pass/fail line per gate:
//!
//! 1. metric self-comparisons are fixed points
//! 2. Chamfer distance agrees with a brute-force oracle
//! 3. SSIM agrees with a literal sliding-window reference
//! 4. parse/serialize round-trips and truncation repair is total
//! 5. rasterizer coverage is exact on aligned edges, tight on rotated ones
//! 6. the vectorizer reconstructs the bundled icon corpus
//! 7. augmentations are seeded, bounded, and always valid
//! 8. manifest splits, filtering, and dedup are deterministic
//! 9. the eval CLI scores ground-truth predictions perfectly

use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use svgkit::augment::{augment, curve_scale_draw, AugmentConfig};
use svgkit::corpus::ICONS;
use svgkit::geometry::{sample_points, to_cubics, AffineTransform, Point};
use svgkit::harness::{content_hash, dedup, filter_by_context, make_splits, ManifestEntry, Split};
use svgkit::lower::lower_primitives;
use svgkit::metrics::{chamfer, chamfer_points, mse, ssim};
use svgkit::model::{Geometry, Group, Shape};
use svgkit::testgen;
use svgkit::vectorize::{vectorize, VectorizeConfig};
use svgkit::{
    parse_svg, rasterize, repair, serialize, validate, Node, Paint, PathOp, RasterImage,
    SvgDocument, ViewBox,
};

const FRAME: u32 = 224;

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn unit_f64(state: &mut u64) -> f64 {
    (splitmix(state) >> 11) as f64 / (1u64 << 53) as f64
}

/// First `n` generated documents (from `index` 0 up) that contain geometry.
fn docs_with_geometry(seed: u64, n: usize) -> Vec<SvgDocument> {
    let mut docs = Vec::new();
    let mut index = 0u64;
    while docs.len() < n {
        let doc = testgen::document(seed, index);
        index += 1;
        assert!(index < 10 * n as u64 + 100, "generator starves geometry");
        if sample_points(&doc, 2.0).is_ok() {
            docs.push(doc);
        }
    }
    docs
}

#[test]
fn a1_self_comparison_metrics_are_fixed_points() {
    let start = Instant::now();
    for doc in docs_with_geometry(0xA1, 50) {
        let img = rasterize(&doc, FRAME, 2);
        assert_eq!(mse(&img, &img).unwrap(), 0.0);
        assert!((ssim(&img, &img).unwrap() - 1.0).abs() <= 1e-9);
        assert_eq!(chamfer(&doc, &doc, 2.0).unwrap(), 0.0);
    }
    assert!(start.elapsed().as_secs() < 30, "took {:?}", start.elapsed());
}

fn brute_chamfer(a: &[Point], b: &[Point]) -> f64 {
    let directional = |from: &[Point], to: &[Point]| -> f64 {
        let total: f64 = from
            .iter()
            .map(|p| {
                to.iter()
                    .map(|q| {
                        let dx = p.x - q.x;
                        let dy = p.y - q.y;
                        dx * dx + dy * dy
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .sum();
        total / from.len() as f64
    };
    directional(a, b) + directional(b, a)
}

#[test]
fn a2_chamfer_distance_matches_brute_force() {
    assert_eq!(chamfer_points(&[Point::new(0.0, 0.0)], &[Point::new(3.0, 4.0)]), 50.0);
    assert_eq!(
        chamfer_points(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0)], &[Point::new(0.0, 0.0)]),
        0.5
    );

    let mut pairs = 0;
    let mut index = 0u64;
    while pairs < 200 {
        let da = testgen::document(0xA2A, index);
        let db = testgen::document(0xA2B, index);
        index += 1;
        assert!(index < 2000, "generator starves geometry");
        let (Ok(sa), Ok(sb)) = (sample_points(&da, 4.0), sample_points(&db, 4.0)) else {
            continue;
        };
        let mut a = sa.points;
        let mut b = sb.points;
        a.truncate(500);
        b.truncate(500);
        let fast = chamfer_points(&a, &b);
        let slow = brute_chamfer(&a, &b);
        assert!(
            (fast - slow).abs() <= 1e-9 * slow.max(1.0),
            "pair {index}: indexed {fast} vs brute {slow}"
        );
        pairs += 1;
    }
}

/// Direct 2D windowed SSIM, written from the formula: 11x11 Gaussian
/// window (sigma 1.5), C1 = 0.01^2, C2 = 0.03^2, valid-mode sliding
/// windows over the luma planes, mean over window scores.
fn ssim_reference(a: &RasterImage, b: &RasterImage) -> f64 {
    assert_eq!((a.width, a.height), (b.width, b.height));
    let (w, h) = (a.width, a.height);
    let luma = |img: &RasterImage| -> Vec<f64> {
        img.pixels
            .chunks_exact(3)
            .map(|p| 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2])
            .collect()
    };
    let la = luma(a);
    let lb = luma(b);
    let mut k = [0.0f64; 11];
    for (i, v) in k.iter_mut().enumerate() {
        let d = i as f64 - 5.0;
        *v = (-d * d / (2.0 * 1.5 * 1.5)).exp();
    }
    let norm: f64 = k.iter().sum();
    for v in &mut k {
        *v /= norm;
    }
    let (c1, c2) = (0.0001, 0.0009);
    let mut total = 0.0;
    let mut count = 0usize;
    for y in 0..=h - 11 {
        for x in 0..=w - 11 {
            let (mut mx, mut my) = (0.0, 0.0);
            for dy in 0..11 {
                for dx in 0..11 {
                    let wgt = k[dy] * k[dx];
                    mx += wgt * la[(y + dy) * w + x + dx];
                    my += wgt * lb[(y + dy) * w + x + dx];
                }
            }
            let (mut vx, mut vy, mut cov) = (0.0, 0.0, 0.0);
            for dy in 0..11 {
                for dx in 0..11 {
                    let wgt = k[dy] * k[dx];
                    let da = la[(y + dy) * w + x + dx] - mx;
                    let db = lb[(y + dy) * w + x + dx] - my;
                    vx += wgt * da * da;
                    vy += wgt * db * db;
                    cov += wgt * da * db;
                }
            }
            total += ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
            count += 1;
        }
    }
    total / count as f64
}

#[test]
fn a3_ssim_matches_literal_reference() {
    let mut state = 0xA3u64;
    for case in 0..50 {
        let mut random_img = || {
            let pixels = (0..32 * 32 * 3).map(|_| unit_f64(&mut state)).collect();
            RasterImage::new(32, 32, pixels)
        };
        let a = random_img();
        let b = random_img();
        let got = ssim(&a, &b).unwrap();
        let want = ssim_reference(&a, &b);
        assert!((got - want).abs() <= 1e-9, "case {case}: {got} vs reference {want}");
    }

    let black = RasterImage::new(32, 32, vec![0.0; 32 * 32 * 3]);
    let white = RasterImage::new(32, 32, vec![1.0; 32 * 32 * 3]);
    let got = ssim(&black, &white).unwrap();
    let want = 0.0001 / 1.0001;
    assert!((got - want).abs() <= 1e-9, "constant images: {got} vs {want}");
}

#[test]
fn a4_parse_serialize_round_trip_and_repair_totality() {
    for i in 0..1000u64 {
        let doc = testgen::document(0xA4, i);
        let text = serialize(&doc);
        assert_eq!(parse_svg(&text).unwrap(), doc, "round trip failed at index {i}");
    }

    let mut state = 0xA4A4u64;
    for i in 0..1000u64 {
        let text = serialize(&testgen::document(0xA4B, i));
        let min_len = text.find("<svg").unwrap() + 4;
        let mut cut = min_len + (splitmix(&mut state) as usize) % (text.len() - min_len + 1);
        while !text.is_char_boundary(cut) {
            cut -= 1;
        }
        let prefix = &text[..cut];
        let (fixed, _) = repair(prefix).unwrap_or_else(|e| panic!("prefix {i}: {e:?}"));
        assert!(parse_svg(&fixed).is_ok(), "repaired prefix {i} does not parse");
    }
}

fn frame_doc(nodes: Vec<Node>) -> SvgDocument {
    SvgDocument {
        view_box: Some(ViewBox::new(0.0, 0.0, 224.0, 224.0)),
        width: None,
        height: None,
        nodes,
    }
}

fn black_rect(x: f64, y: f64, width: f64, height: f64) -> Node {
    Node::Shape(Shape {
        paint: Paint::default(),
        geometry: Geometry::Rect { x, y, width, height, rx: 0.0, ry: 0.0 },
    })
}

/// Area of the unit pixel square at (px, py) on the `g(q) >= 0` side of a
/// half-plane: clip the square, then shoelace.
fn pixel_coverage(px: f64, py: f64, g: impl Fn(f64, f64) -> f64) -> f64 {
    let square = [(px, py), (px + 1.0, py), (px + 1.0, py + 1.0), (px, py + 1.0)];
    let mut clipped: Vec<(f64, f64)> = Vec::new();
    for i in 0..4 {
        let a = square[i];
        let b = square[(i + 1) % 4];
        let (ga, gb) = (g(a.0, a.1), g(b.0, b.1));
        if ga >= 0.0 {
            clipped.push(a);
        }
        if (ga >= 0.0) != (gb >= 0.0) {
            let t = ga / (ga - gb);
            clipped.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
        }
    }
    let mut area = 0.0;
    for i in 0..clipped.len() {
        let a = clipped[i];
        let b = clipped[(i + 1) % clipped.len()];
        area += a.0 * b.1 - b.0 * a.1;
    }
    area.abs() / 2.0
}

#[test]
fn a5_rasterizer_coverage_is_accurate() {
    // A rectangle covering the left half of the frame lands exactly on a
    // pixel boundary, so every pixel must be pure black or pure white.
    let half = frame_doc(vec![black_rect(0.0, 0.0, 112.0, 224.0)]);
    for supersample in [1, 4] {
        let img = rasterize(&half, FRAME, supersample);
        let mut black = 0usize;
        for y in 0..img.height {
            for x in 0..img.width {
                let v = img.pixel(x, y)[0];
                let expected = if x < 112 { 0.0 } else { 1.0 };
                assert_eq!(v, expected, "pixel ({x},{y}) at supersample {supersample}");
                if v == 0.0 {
                    black += 1;
                }
            }
        }
        assert_eq!(black, 112 * 224);
    }

    // A half-plane at 30 degrees, built from a huge rotated rectangle whose
    // near edge passes through the frame center. Per-pixel coverage from the
    // supersampled render must track the analytic clipped area.
    let theta = 30.0f64.to_radians();
    let rotated = frame_doc(vec![Node::Group(Group {
        transform: AffineTransform::rotate_deg_about(30.0, 112.0, 112.0),
        children: vec![black_rect(112.0, -2000.0, 2000.0, 4000.0)],
    })]);
    let img = rasterize(&rotated, FRAME, 8);
    let inside = |x: f64, y: f64| theta.cos() * (x - 112.0) + theta.sin() * (y - 112.0);
    let mut worst = 0.0f64;
    for y in 0..img.height {
        for x in 0..img.width {
            let estimated = 1.0 - img.pixel(x, y)[0];
            let analytic = pixel_coverage(x as f64, y as f64, inside);
            worst = worst.max((estimated - analytic).abs());
        }
    }
    assert!(worst <= 0.08, "worst per-pixel coverage error {worst}");
}

#[test]
fn a6_vectorizer_reconstructs_icon_corpus() {
    let start = Instant::now();
    let config = VectorizeConfig::default();
    let mut mse_sum = 0.0;
    let mut cd_sum = 0.0;
    for icon in &ICONS {
        let reference = parse_svg(icon.svg).unwrap();
        let img = rasterize(&reference, FRAME, 1);
        let traced = vectorize(&img, &config);
        let back = rasterize(&traced, FRAME, 1);
        mse_sum += mse(&img, &back).unwrap();
        cd_sum += chamfer(&traced, &reference, 2.0).unwrap();
    }
    let n = ICONS.len() as f64;
    let (mean_mse, mean_cd) = (mse_sum / n, cd_sum / n);
    assert!(mean_mse <= 0.02, "mean reconstruction MSE {mean_mse}");
    assert!(mean_cd <= 5.0, "mean Chamfer distance {mean_cd}");
    assert!(start.elapsed().as_secs() < 60, "took {:?}", start.elapsed());
}

fn path_points(doc: &SvgDocument) -> Vec<Point> {
    fn walk(nodes: &[Node], out: &mut Vec<Point>) {
        for node in nodes {
            match node {
                Node::Group(g) => walk(&g.children, out),
                Node::Shape(s) => {
                    let Geometry::Path { commands } = &s.geometry else { continue };
                    for c in commands {
                        match c.op {
                            PathOp::Move { to } | PathOp::Line { to } => out.push(to),
                            PathOp::Cubic { c1, c2, to } => out.extend([c1, c2, to]),
                            PathOp::Close => {}
                            ref op => panic!("unexpected op {op:?} in cubic-only path"),
                        }
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(&doc.nodes, &mut out);
    out
}

#[test]
fn a7_augmentations_are_seeded_bounded_and_valid() {
    // Zero-strength settings must leave the serialized bytes untouched.
    for i in 0..100u64 {
        let doc = testgen::document(0xA7A, i);
        let cfg = AugmentConfig {
            rotation_range_deg: (0.0, 0.0),
            color_sigma: 0.0,
            curve_noise_scale_range: (0.0, 0.0),
            perlin_frequency: 4.0,
            seed: i,
        };
        assert_eq!(serialize(&augment(&doc, &cfg)), serialize(&doc), "index {i}");
    }

    // Same seed, same bytes.
    for i in 0..100u64 {
        let doc = testgen::document(0xA7B, i);
        let cfg = AugmentConfig { seed: i.wrapping_mul(0x9e37), ..AugmentConfig::default() };
        assert_eq!(serialize(&augment(&doc, &cfg)), serialize(&augment(&doc, &cfg)));
    }

    // With only the curve warp active, every control point stays within the
    // drawn scale times the frame side of its pre-warp position.
    for i in 0..1000u64 {
        let doc = testgen::document(0xA7C, i);
        let cfg = AugmentConfig {
            rotation_range_deg: (0.0, 0.0),
            color_sigma: 0.0,
            seed: i,
            ..AugmentConfig::default()
        };
        let s = curve_scale_draw(&cfg);
        assert!((0.01..=0.05).contains(&s), "scale draw {s} for seed {i}");
        let frame = doc.resolved_view_box().map(|vb| vb.max_side()).unwrap_or(224.0);
        let mut base = lower_primitives(&doc);
        base.visit_shapes_mut(&mut |_, shape| {
            if let Geometry::Path { commands } = &mut shape.geometry {
                *commands = to_cubics(commands);
            }
        });
        let before = path_points(&base);
        let after = path_points(&augment(&doc, &cfg));
        assert_eq!(before.len(), after.len(), "index {i}");
        let bound = s * frame + 1e-9;
        for (p, q) in before.iter().zip(&after) {
            let moved = p.distance(*q);
            assert!(moved <= bound, "index {i}: point moved {moved}, bound {bound}");
        }
    }

    // Full-strength augmented output always validates.
    for i in 0..1000u64 {
        let doc = testgen::document(0xA7D, i);
        let cfg = AugmentConfig { seed: i, ..AugmentConfig::default() };
        let report = validate(&serialize(&augment(&doc, &cfg)));
        assert!(report.compilable, "index {i}: {:?}", report.issues);
    }

    // The drawn warp scale covers exactly the documented range.
    for seed in 0..1000u64 {
        let s = curve_scale_draw(&AugmentConfig { seed, ..AugmentConfig::default() });
        assert!((0.01..=0.05).contains(&s), "seed {seed} drew {s}");
    }
}

fn entry(id: &str, token_len: u64, content_hash: u64) -> ManifestEntry {
    ManifestEntry {
        id: id.to_string(),
        svg_path: PathBuf::from(format!("{id}.svg")),
        png_path: None,
        split: Split::Unassigned,
        token_len,
        content_hash,
    }
}

#[test]
fn a8_manifest_splits_filter_and_dedup_are_deterministic() {
    let entries: Vec<ManifestEntry> =
        (0..100).map(|i| entry(&format!("icon-{i:03}"), 100 + i as u64, i as u64)).collect();

    let split = make_splits(entries.clone(), (0.9, 0.05, 0.05), 7).unwrap();
    let count = |s: Split| split.iter().filter(|e| e.split == s).count();
    assert_eq!(count(Split::Train), 90);
    assert_eq!(count(Split::Val), 5);
    assert_eq!(count(Split::Test), 5);

    let mut reversed = entries.clone();
    reversed.reverse();
    let split_rev = make_splits(reversed, (0.9, 0.05, 0.05), 7).unwrap();
    for e in &split {
        let other = split_rev.iter().find(|o| o.id == e.id).unwrap();
        assert_eq!(e.split, other.split, "id {} moved across permutation", e.id);
    }

    let boundary = vec![entry("fits", 8192, 1), entry("too-long", 8193, 2)];
    let (kept, dropped) = filter_by_context(boundary, 8192);
    assert_eq!(kept.len(), 1);
    assert_eq!(kept[0].id, "fits");
    assert_eq!(dropped, 1);

    let tight = r##"<svg viewBox="0 0 224 224"><rect x="10" y="10" width="50" height="40" fill="#204060"/></svg>"##;
    let airy = "<svg   viewBox=\"0 0 224 224\" >\n  <rect x=\"10\"  y=\"10\"\n        width=\"50\" height=\"40\" fill=\"#204060\" />\n</svg>\n";
    assert_eq!(content_hash(tight), content_hash(airy));
    let dupes = vec![
        entry("a", 10, content_hash(tight)),
        entry("b", 10, content_hash(airy)),
        entry("c", 10, content_hash("<svg/>")),
    ];
    let unique = dedup(dupes);
    assert_eq!(unique.len(), 2);
    assert_eq!(unique[0].id, "a");
    assert_eq!(unique[1].id, "c");
}

#[test]
fn a9_eval_cli_scores_ground_truth_perfectly() {
    let bin = env!("CARGO_BIN_EXE_svgkit");
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("corpus");
    let preds = tmp.path().join("preds");
    fs::create_dir_all(&data).unwrap();
    fs::create_dir_all(&preds).unwrap();
    for icon in &ICONS {
        fs::write(data.join(format!("{}.svg", icon.name)), icon.svg).unwrap();
        fs::write(preds.join(format!("{}.svg", icon.name)), icon.svg).unwrap();
    }

    let manifest = tmp.path().join("corpus.jsonl");
    let build = Command::new(bin)
        .args(["manifest", "build"])
        .arg(&data)
        .arg("--out")
        .arg(&manifest)
        .args(["--tokenizer", "approx4"])
        .output()
        .unwrap();
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));

    let report_path = tmp.path().join("report.json");
    let csv_path = tmp.path().join("report.csv");
    let eval = Command::new(bin)
        .arg("eval")
        .arg("--pred")
        .arg(&preds)
        .arg("--manifest")
        .arg(&manifest)
        .arg("--out")
        .arg(&report_path)
        .arg("--csv")
        .arg(&csv_path)
        .output()
        .unwrap();
    assert!(eval.status.success(), "{}", String::from_utf8_lossy(&eval.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    let summary = &report["report"];
    assert_eq!(summary["n_total"], 16);
    assert_eq!(summary["n_ok"], 16);
    assert_eq!(summary["mean_mse"].as_f64().unwrap(), 0.0);
    assert_eq!(summary["mean_cd"].as_f64().unwrap(), 0.0);
    assert!(summary["mean_ssim"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert_eq!(report["samples"].as_array().unwrap().len(), 16);

    let csv = fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("dataset,n_total,n_ok,mse,cd,lpips,ssim"));
    assert_eq!(lines.next(), Some("corpus,16,16,0.000000,0.000000,,1.000000"));
    assert_eq!(lines.next(), None);
}

//! Rule-based image to SVG conversion: color quantization into flat
//! layers, boundary tracing, polygon simplification, and cubic fitting.

mod contour;
mod fit;

pub use contour::{refill, trace_contours, Contour, Mask};
pub use fit::{fit_beziers, simplify_polygon};

use std::cmp::Reverse;
use std::collections::BTreeMap;

use crate::model::{
    FillRule, Geometry, Node, Paint, Rgb, Shape, SvgDocument, ViewBox,
};
use crate::raster::RasterImage;

#[derive(Debug, Clone, PartialEq)]
pub struct VectorizeConfig {
    /// Bits per channel kept during quantization, 1..=8.
    pub color_precision: u32,
    /// Regions smaller than this are merged into a neighbor.
    pub min_region_px: usize,
    /// Polygon simplification tolerance in pixels.
    pub simplify_epsilon: f64,
    /// Turn angle above which a vertex is a fixed corner, degrees.
    pub corner_angle_deg: f64,
    /// Max squared curve-fitting error in pixels squared.
    pub fit_error: f64,
}

impl Default for VectorizeConfig {
    fn default() -> VectorizeConfig {
        VectorizeConfig {
            color_precision: 5,
            min_region_px: 16,
            simplify_epsilon: 1.0,
            corner_angle_deg: 60.0,
            fit_error: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum VectorizeError {
    #[error("mask has no foreground pixels")]
    EmptyMask,
}

/// One flat color plane of the quantized image. `rank` is paint order:
/// rank 0 is the largest layer, painted first (background).
#[derive(Debug, Clone, PartialEq)]
pub struct ColorLayer {
    pub color: Rgb,
    pub mask: Mask,
    pub rank: usize,
}

fn find(parent: &mut [u32], mut i: u32) -> u32 {
    while parent[i as usize] != i {
        parent[i as usize] = parent[parent[i as usize] as usize];
        i = parent[i as usize];
    }
    i
}

fn color_dist_sq(a: [u8; 3], b: [u8; 3]) -> i64 {
    let mut d = 0i64;
    for c in 0..3 {
        let diff = a[c] as i64 - b[c] as i64;
        d += diff * diff;
    }
    d
}

/// Truncates channels to `color_precision` bits, labels 4-connected
/// regions of equal quantized color, merges regions below `min_region_px`
/// into their most color-similar neighbor (ties go to the largest), and
/// groups the survivors into one layer per color, largest first. Layer
/// colors are the mean of the member pixels, rounded back to 8 bits.
pub fn quantize_colors(img: &RasterImage, config: &VectorizeConfig) -> Vec<ColorLayer> {
    let (w, h) = (img.width, img.height);
    let n = w * h;
    let bits = config.color_precision.clamp(1, 8);
    let keep = ((0xFFu16 << (8 - bits)) & 0xFF) as u8;

    let mut orig = vec![[0u8; 3]; n];
    let mut quant = vec![[0u8; 3]; n];
    for y in 0..h {
        for x in 0..w {
            let px = img.pixel(x, y);
            let i = y * w + x;
            for c in 0..3 {
                let byte = (px[c].clamp(0.0, 1.0) * 255.0).round() as u8;
                orig[i][c] = byte;
                quant[i][c] = byte & keep;
            }
        }
    }

    let mut parent: Vec<u32> = (0..n as u32).collect();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if x > 0 && quant[i] == quant[i - 1] {
                let (a, b) = (find(&mut parent, i as u32), find(&mut parent, (i - 1) as u32));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
            if y > 0 && quant[i] == quant[i - w] {
                let (a, b) = (find(&mut parent, i as u32), find(&mut parent, (i - w) as u32));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
    }

    // Region index per pixel, in first-occurrence order.
    let mut region_of_root = vec![u32::MAX; n];
    let mut region_of_pixel = vec![0u32; n];
    let mut size: Vec<usize> = Vec::new();
    let mut color: Vec<[u8; 3]> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i as u32) as usize;
        if region_of_root[root] == u32::MAX {
            region_of_root[root] = size.len() as u32;
            size.push(0);
            color.push(quant[root]);
        }
        let r = region_of_root[root];
        region_of_pixel[i] = r;
        size[r as usize] += 1;
    }
    let regions = size.len();

    let mut neighbors: Vec<std::collections::BTreeSet<usize>> =
        vec![std::collections::BTreeSet::new(); regions];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let r = region_of_pixel[i] as usize;
            if x + 1 < w {
                let q = region_of_pixel[i + 1] as usize;
                if q != r {
                    neighbors[r].insert(q);
                    neighbors[q].insert(r);
                }
            }
            if y + 1 < h {
                let q = region_of_pixel[i + w] as usize;
                if q != r {
                    neighbors[r].insert(q);
                    neighbors[q].insert(r);
                }
            }
        }
    }

    // Merge undersized regions smallest-first; each merge re-evaluates,
    // since absorption changes sizes and adjacency.
    let mut alive = vec![true; regions];
    let mut merged_into: Vec<usize> = (0..regions).collect();
    loop {
        let mut pick: Option<usize> = None;
        for r in 0..regions {
            if !alive[r] || size[r] >= config.min_region_px || neighbors[r].is_empty() {
                continue;
            }
            if pick.is_none_or(|p| size[r] < size[p]) {
                pick = Some(r);
            }
        }
        let Some(r) = pick else { break };
        let rc = color[r];
        let mut best = usize::MAX;
        for &nb in &neighbors[r] {
            if best == usize::MAX {
                best = nb;
                continue;
            }
            let (db, dn) = (color_dist_sq(color[best], rc), color_dist_sq(color[nb], rc));
            if dn < db
                || (dn == db && (size[nb] > size[best] || (size[nb] == size[best] && nb < best)))
            {
                best = nb;
            }
        }
        alive[r] = false;
        merged_into[r] = best;
        size[best] += size[r];
        let nbs = std::mem::take(&mut neighbors[r]);
        for nb in nbs {
            neighbors[nb].remove(&r);
            if nb != best {
                neighbors[nb].insert(best);
                neighbors[best].insert(nb);
            }
        }
    }

    let mut final_of = vec![usize::MAX; regions];
    for r in 0..regions {
        let mut cur = r;
        while !alive[cur] {
            cur = merged_into[cur];
        }
        final_of[r] = cur;
    }

    struct Accum {
        mask: Mask,
        count: usize,
        sum: [u64; 3],
    }
    let mut by_color: BTreeMap<[u8; 3], Accum> = BTreeMap::new();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let region = final_of[region_of_pixel[i] as usize];
            let acc = by_color.entry(color[region]).or_insert_with(|| Accum {
                mask: Mask::new(w, h),
                count: 0,
                sum: [0; 3],
            });
            acc.mask.set(x, y, true);
            acc.count += 1;
            for c in 0..3 {
                acc.sum[c] += orig[i][c] as u64;
            }
        }
    }

    let mut layers: Vec<([u8; 3], Accum)> = by_color.into_iter().collect();
    layers.sort_by_key(|(key, acc)| (Reverse(acc.count), *key));
    layers
        .into_iter()
        .enumerate()
        .map(|(rank, (_, acc))| {
            let mean = |c: usize| (acc.sum[c] as f64 / acc.count as f64).round() as u8;
            ColorLayer {
                color: Rgb::new(mean(0), mean(1), mean(2)),
                mask: acc.mask,
                rank,
            }
        })
        .collect()
}

/// Full pipeline: one even-odd filled path per color layer (holes ride in
/// the same path), painted largest layer first, in a viewBox matching the
/// image frame.
pub fn vectorize(img: &RasterImage, config: &VectorizeConfig) -> SvgDocument {
    let layers = quantize_colors(img, config);
    let mut nodes = Vec::new();
    for layer in &layers {
        let contours = trace_contours(&layer.mask).expect("layer masks are never empty");
        let mut commands = Vec::new();
        for contour in &contours {
            let simplified = simplify_polygon(contour, config.simplify_epsilon);
            commands.extend(fit_beziers(&simplified, config));
        }
        nodes.push(Node::Shape(Shape {
            paint: Paint {
                fill: Some(layer.color),
                stroke: None,
                stroke_width: 1.0,
                fill_rule: FillRule::EvenOdd,
            },
            geometry: Geometry::Path { commands },
        }));
    }
    SvgDocument {
        view_box: Some(ViewBox::new(0.0, 0.0, img.width as f64, img.height as f64)),
        width: None,
        height: None,
        nodes,
    }
}

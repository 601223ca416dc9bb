//! Deterministic CPU rasterizer and image I/O.
//!
//! Shapes are painted in document order onto a white supersampled canvas
//! (opaque colors, so later shapes overwrite earlier ones), then box-filtered
//! down to the output size. Fills use scanline coverage under the shape's
//! fill rule; strokes are unions of round-capped segment capsules, which is
//! exactly a round-join/round-cap stroke outline.

mod io;

pub use io::{read_image, read_png, read_ppm, write_ppm, ImageError};

use crate::geometry::{flatten_commands, transform_commands, AffineTransform, Point};
use crate::lower::geometry_to_commands;
use crate::model::{FillRule, Geometry, PathCommand, Rgb, SvgDocument};

/// Row-major RGB image with channel values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<f64>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> RasterImage {
        assert_eq!(pixels.len(), width * height * 3, "pixel buffer size mismatch");
        RasterImage { width, height, pixels }
    }

    pub fn white(width: usize, height: usize) -> RasterImage {
        RasterImage { width, height, pixels: vec![1.0; width * height * 3] }
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        let i = (y * self.width + x) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }
}

/// Flattening tolerance in supersampled pixels. At the default supersample
/// of 4 this is 1/16 of an output pixel.
const FLATTEN_TOLERANCE: f64 = 0.25;

/// Renders the document into a `size`x`size` image. The viewBox (or the
/// width/height fallback) is letterboxed into the square; documents with
/// neither are drawn in pixel coordinates.
pub fn rasterize(doc: &SvgDocument, size: u32, supersample: u32) -> RasterImage {
    assert!(size > 0, "size must be positive");
    assert!(supersample >= 1, "supersample must be at least 1");
    let ss = supersample as usize;
    let side = size as usize * ss;
    let mut canvas = Canvas::white(side, side);
    let base = match doc.resolved_view_box() {
        Some(vb) => AffineTransform::letterbox(&vb, size as f64),
        None => AffineTransform::IDENTITY,
    };
    let to_device = AffineTransform::scale(ss as f64, ss as f64).mul(&base);

    doc.visit_shapes(&mut |t, shape| {
        let commands: Vec<PathCommand> = match &shape.geometry {
            Geometry::Path { commands } => {
                if commands.is_empty() {
                    return;
                }
                commands.clone()
            }
            other => match geometry_to_commands(other) {
                Some(cmds) => cmds,
                None => return,
            },
        };
        let full = to_device.mul(t);
        let device = transform_commands(&full, &commands);
        let subpaths = flatten_commands(&device, FLATTEN_TOLERANCE);
        if subpaths.is_empty() {
            return;
        }
        if let Some(color) = shape.paint.fill {
            let rings: Vec<&[Point]> = subpaths.iter().map(|s| s.points.as_slice()).collect();
            fill_rings(&mut canvas, &rings, shape.paint.fill_rule, color);
        }
        if let Some(color) = shape.paint.stroke {
            let hw = shape.paint.stroke_width * full.mean_scale() / 2.0;
            if hw > 0.0 {
                for sub in &subpaths {
                    stroke_polyline(&mut canvas, &sub.points, hw, color);
                }
            }
        }
    });
    canvas.downsample(ss)
}

/// Supersampled working surface, RGB bytes.
struct Canvas {
    w: usize,
    h: usize,
    data: Vec<u8>,
}

impl Canvas {
    fn white(w: usize, h: usize) -> Canvas {
        Canvas { w, h, data: vec![255; w * h * 3] }
    }

    fn put(&mut self, x: usize, y: usize, color: Rgb) {
        let i = (y * self.w + x) * 3;
        self.data[i] = color.r;
        self.data[i + 1] = color.g;
        self.data[i + 2] = color.b;
    }

    /// Sets every subpixel whose center lies in `[xl, xr)` on row `y`.
    fn fill_span(&mut self, y: usize, xl: f64, xr: f64, color: Rgb) {
        let x0 = (xl - 0.5).ceil().max(0.0) as usize;
        let x1 = ((xr - 0.5).ceil().max(0.0) as usize).min(self.w);
        for x in x0..x1 {
            self.put(x, y, color);
        }
    }

    /// Box-filters `ss`x`ss` blocks down to one output pixel.
    fn downsample(&self, ss: usize) -> RasterImage {
        let size = self.w / ss;
        let denom = (ss * ss * 255) as f64;
        let mut pixels = Vec::with_capacity(size * size * 3);
        for py in 0..size {
            for px in 0..size {
                let mut acc = [0u32; 3];
                for sy in 0..ss {
                    let row = (py * ss + sy) * self.w;
                    for sx in 0..ss {
                        let i = (row + px * ss + sx) * 3;
                        acc[0] += self.data[i] as u32;
                        acc[1] += self.data[i + 1] as u32;
                        acc[2] += self.data[i + 2] as u32;
                    }
                }
                pixels.push(acc[0] as f64 / denom);
                pixels.push(acc[1] as f64 / denom);
                pixels.push(acc[2] as f64 / denom);
            }
        }
        RasterImage { width: size, height: size, pixels }
    }
}

/// Scanline fill over all rings at once, so winding interacts across
/// subpaths (holes). Open rings are closed by an implicit wrap segment.
fn fill_rings(canvas: &mut Canvas, rings: &[&[Point]], rule: FillRule, color: Rgb) {
    #[derive(Clone, Copy)]
    struct Edge {
        ytop: f64,
        ybot: f64,
        x_at_ytop: f64,
        slope: f64,
        dir: i32,
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for ring in rings {
        if ring.len() < 3 {
            continue;
        }
        let n = ring.len();
        for i in 0..n {
            let a = ring[i];
            let b = ring[(i + 1) % n];
            if a.y == b.y {
                continue;
            }
            let (top, bot, dir) = if a.y < b.y { (a, b, 1) } else { (b, a, -1) };
            edges.push(Edge {
                ytop: top.y,
                ybot: bot.y,
                x_at_ytop: top.x,
                slope: (bot.x - top.x) / (bot.y - top.y),
                dir,
            });
            ymin = ymin.min(top.y);
            ymax = ymax.max(bot.y);
        }
    }
    if edges.is_empty() {
        return;
    }
    let y0 = ymin.floor().max(0.0) as usize;
    let y1 = (ymax.ceil().max(0.0) as usize).min(canvas.h);
    let mut crossings: Vec<(f64, i32)> = Vec::new();
    for y in y0..y1 {
        // Sampling at row centers makes vertex hits measure-zero and the
        // half-open [ytop, ybot) ranges count shared vertices exactly once.
        let yc = y as f64 + 0.5;
        crossings.clear();
        for e in &edges {
            if e.ytop <= yc && yc < e.ybot {
                crossings.push((e.x_at_ytop + (yc - e.ytop) * e.slope, e.dir));
            }
        }
        if crossings.is_empty() {
            continue;
        }
        crossings.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut winding = 0i32;
        let mut parity = false;
        let mut prev = 0.0f64;
        for &(x, dir) in crossings.iter() {
            let inside = match rule {
                FillRule::NonZero => winding != 0,
                FillRule::EvenOdd => parity,
            };
            if inside {
                canvas.fill_span(y, prev, x, color);
            }
            winding += dir;
            parity = !parity;
            prev = x;
        }
    }
}

fn stroke_polyline(canvas: &mut Canvas, pts: &[Point], hw: f64, color: Rgb) {
    match pts {
        [] => {}
        [p] => capsule(canvas, *p, *p, hw, color),
        _ => {
            for w in pts.windows(2) {
                capsule(canvas, w[0], w[1], hw, color);
            }
        }
    }
}

/// Sets every subpixel whose center is within `hw` of segment `ab`.
fn capsule(canvas: &mut Canvas, a: Point, b: Point, hw: f64, color: Rgb) {
    let x0 = (a.x.min(b.x) - hw - 1.0).floor().max(0.0) as usize;
    let x1 = ((a.x.max(b.x) + hw + 1.0).ceil().max(0.0) as usize).min(canvas.w);
    let y0 = (a.y.min(b.y) - hw - 1.0).floor().max(0.0) as usize;
    let y1 = ((a.y.max(b.y) + hw + 1.0).ceil().max(0.0) as usize).min(canvas.h);
    let d = b - a;
    let len2 = d.dot(d);
    let r2 = hw * hw;
    for y in y0..y1 {
        for x in x0..x1 {
            let p = Point::new(x as f64 + 0.5, y as f64 + 0.5);
            let nearest = if len2 == 0.0 {
                a
            } else {
                a + d * ((p - a).dot(d) / len2).clamp(0.0, 1.0)
            };
            if p.distance_sq(nearest) <= r2 {
                canvas.put(x, y, color);
            }
        }
    }
}

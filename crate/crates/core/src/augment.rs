//! Seeded SVG-code augmentations: rotation about the frame center, Gaussian
//! noise on fill colors, and a smooth gradient-noise warp of path control
//! points. All draws come from counter-based streams keyed on the config
//! seed, so outputs are reproducible bit-for-bit.

use crate::geometry::{path::transform_shape, to_cubics, AffineTransform, Perlin2, Point};
use crate::lower::lower_primitives;
use crate::model::{Geometry, Group, Node, PathCommand, PathOp, Rgb, SvgDocument};
use crate::rng::{gaussian, stream, unit};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentConfig {
    pub rotation_range_deg: (f64, f64),
    /// Gaussian stddev added to fill channels, in 0-255 units.
    pub color_sigma: f64,
    /// The warp amplitude is drawn uniformly from this range and scales
    /// the frame side, so 0.05 moves points by at most 5% of the frame.
    pub curve_noise_scale_range: (f64, f64),
    /// Noise cycles across the frame.
    pub perlin_frequency: f64,
    pub seed: u64,
}

impl Default for AugmentConfig {
    fn default() -> AugmentConfig {
        AugmentConfig {
            rotation_range_deg: (-10.0, 10.0),
            color_sigma: 8.0,
            curve_noise_scale_range: (0.01, 0.05),
            perlin_frequency: 4.0,
            seed: 0,
        }
    }
}

// Tags separating the document-level draws within one seed's stream.
const ROTATION_DRAW: u64 = 1;
const CURVE_SCALE_DRAW: u64 = 3;

fn frame_center(doc: &SvgDocument) -> (f64, f64) {
    match doc.resolved_view_box() {
        Some(vb) => (vb.min_x + vb.width / 2.0, vb.min_y + vb.height / 2.0),
        None => (112.0, 112.0),
    }
}

/// Rotates all geometry about the frame center. Paint survives unchanged
/// (a rotation has mean scale 1, so stroke widths keep their value).
pub fn rotate_svg(doc: &SvgDocument, angle_deg: f64) -> SvgDocument {
    let (cx, cy) = frame_center(doc);
    let rot = AffineTransform::rotate_deg_about(angle_deg, cx, cy);

    fn walk(nodes: &[Node], t: &AffineTransform) -> Vec<Node> {
        let mut out = Vec::with_capacity(nodes.len());
        for node in nodes {
            match node {
                Node::Group(g) => out.push(Node::Group(Group {
                    transform: AffineTransform::IDENTITY,
                    children: walk(&g.children, &t.mul(&g.transform)),
                })),
                Node::Shape(s) => {
                    if let Some(mapped) = transform_shape(t, s) {
                        out.push(Node::Shape(mapped));
                    }
                }
            }
        }
        out
    }

    SvgDocument { nodes: walk(&doc.nodes, &rot), ..doc.clone() }
}

/// Adds clamped Gaussian noise to every shape's fill color. Draws are keyed
/// by (seed, shape index, channel), so a shape's noise does not depend on
/// the rest of the document.
pub fn color_noise(doc: &SvgDocument, sigma: f64, seed: u64) -> SvgDocument {
    assert!(sigma >= 0.0, "sigma must be non-negative");
    let mut out = doc.clone();
    if sigma == 0.0 {
        return out;
    }
    out.visit_shapes_mut(&mut |i, shape| {
        if let Some(fill) = shape.paint.fill {
            let chan = |c: u8, ch: u64| {
                let g = gaussian(
                    stream(seed, &[i as u64, ch, 0]),
                    stream(seed, &[i as u64, ch, 1]),
                );
                (c as f64 + sigma * g).round().clamp(0.0, 255.0) as u8
            };
            shape.paint.fill = Some(Rgb::new(chan(fill.r, 0), chan(fill.g, 1), chan(fill.b, 2)));
        }
    });
    out
}

/// The warp amplitude fraction drawn for this config's seed. `curve_noise`
/// displaces every point by at most this fraction of the frame side.
pub fn curve_scale_draw(config: &AugmentConfig) -> f64 {
    let (lo, hi) = config.curve_noise_scale_range;
    assert!((0.0..=hi).contains(&lo), "scale range must be ordered and non-negative");
    lo + (hi - lo) * unit(stream(config.seed, &[CURVE_SCALE_DRAW]))
}

/// Displaces path points by a smooth noise field over input coordinates,
/// so coincident points (subpath joins) stay coincident. Primitives are
/// lowered and quads/arcs become cubics before displacement.
pub fn curve_noise(doc: &SvgDocument, config: &AugmentConfig) -> SvgDocument {
    let s = curve_scale_draw(config);
    if s == 0.0 {
        return doc.clone();
    }
    let frame = doc.resolved_view_box().map(|vb| vb.max_side()).unwrap_or(224.0);
    let f = config.perlin_frequency / frame;
    let noise_x = Perlin2::new(config.seed);
    let noise_y = Perlin2::new(config.seed.wrapping_add(1));
    let amp = s * frame;
    let displace = |p: Point| {
        Point::new(
            p.x + amp * noise_x.get(p.x * f, p.y * f),
            p.y + amp * noise_y.get(p.x * f, p.y * f),
        )
    };
    let mut out = lower_primitives(doc);
    out.visit_shapes_mut(&mut |_, shape| {
        if let Geometry::Path { commands } = &mut shape.geometry {
            *commands =
                to_cubics(commands).into_iter().map(|c| displace_command(c, &displace)).collect();
        }
    });
    out
}

fn displace_command(cmd: PathCommand, d: &impl Fn(Point) -> Point) -> PathCommand {
    let op = match cmd.op {
        PathOp::Move { to } => PathOp::Move { to: d(to) },
        PathOp::Line { to } => PathOp::Line { to: d(to) },
        PathOp::Cubic { c1, c2, to } => PathOp::Cubic { c1: d(c1), c2: d(c2), to: d(to) },
        PathOp::Close => PathOp::Close,
        other => other,
    };
    PathCommand { relative: false, op }
}

/// Rotation, then color noise, then the control point warp, all derived
/// from one seed.
pub fn augment(doc: &SvgDocument, config: &AugmentConfig) -> SvgDocument {
    let (lo, hi) = config.rotation_range_deg;
    assert!(lo <= hi, "rotation range must be ordered");
    let angle = lo + (hi - lo) * unit(stream(config.seed, &[ROTATION_DRAW]));
    let rotated = if angle == 0.0 { doc.clone() } else { rotate_svg(doc, angle) };
    let colored = color_noise(&rotated, config.color_sigma, config.seed);
    curve_noise(&colored, config)
}

//! Command-list utilities: conversion to absolute form, cubic-only form,
//! flattened polylines, and affine mapping.

use crate::lower::geometry_to_commands;
use crate::model::{Geometry, Group, Node, PathCommand, PathOp, Shape, SvgDocument};

use super::bezier::{arc_to_cubics, quad_to_cubic, CubicBezier};
use super::{AffineTransform, Point};

/// One flattened subpath. `points` holds at least the start point; closed
/// subpaths repeat the start point at the end so the closing edge is part
/// of the polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Subpath {
    pub points: Vec<Point>,
    pub closed: bool,
}

/// Rewrites a command list to absolute coordinates, expands H/V to LineTo
/// and smooth commands to their explicit forms. Output ops are limited to
/// Move, Line, Cubic, Quad, Arc, and Close.
pub fn absolutize(commands: &[PathCommand]) -> Vec<PathCommand> {
    let mut out = Vec::with_capacity(commands.len());
    let mut cur = Point::ZERO;
    let mut start = Point::ZERO;
    // Reflection anchors for smooth commands.
    let mut prev_cubic_ctrl: Option<Point> = None;
    let mut prev_quad_ctrl: Option<Point> = None;

    for cmd in commands {
        let rel = cmd.relative;
        let resolve = |p: Point| if rel { cur + p } else { p };
        let mut next_cubic_ctrl = None;
        let mut next_quad_ctrl = None;
        match cmd.op {
            PathOp::Move { to } => {
                let p = resolve(to);
                out.push(PathCommand::abs(PathOp::Move { to: p }));
                cur = p;
                start = p;
            }
            PathOp::Line { to } => {
                let p = resolve(to);
                out.push(PathCommand::abs(PathOp::Line { to: p }));
                cur = p;
            }
            PathOp::HLine { x } => {
                let p = if rel { Point::new(cur.x + x, cur.y) } else { Point::new(x, cur.y) };
                out.push(PathCommand::abs(PathOp::Line { to: p }));
                cur = p;
            }
            PathOp::VLine { y } => {
                let p = if rel { Point::new(cur.x, cur.y + y) } else { Point::new(cur.x, y) };
                out.push(PathCommand::abs(PathOp::Line { to: p }));
                cur = p;
            }
            PathOp::Cubic { c1, c2, to } => {
                let (c1, c2, to) = (resolve(c1), resolve(c2), resolve(to));
                out.push(PathCommand::abs(PathOp::Cubic { c1, c2, to }));
                next_cubic_ctrl = Some(c2);
                cur = to;
            }
            PathOp::SmoothCubic { c2, to } => {
                let c1 = match prev_cubic_ctrl {
                    Some(prev) => cur + (cur - prev),
                    None => cur,
                };
                let (c2, to) = (resolve(c2), resolve(to));
                out.push(PathCommand::abs(PathOp::Cubic { c1, c2, to }));
                next_cubic_ctrl = Some(c2);
                cur = to;
            }
            PathOp::Quad { c, to } => {
                let (c, to) = (resolve(c), resolve(to));
                out.push(PathCommand::abs(PathOp::Quad { c, to }));
                next_quad_ctrl = Some(c);
                cur = to;
            }
            PathOp::SmoothQuad { to } => {
                let c = match prev_quad_ctrl {
                    Some(prev) => cur + (cur - prev),
                    None => cur,
                };
                let to = resolve(to);
                out.push(PathCommand::abs(PathOp::Quad { c, to }));
                next_quad_ctrl = Some(c);
                cur = to;
            }
            PathOp::Arc { rx, ry, x_rotation, large_arc, sweep, to } => {
                let to = resolve(to);
                out.push(PathCommand::abs(PathOp::Arc {
                    rx,
                    ry,
                    x_rotation,
                    large_arc,
                    sweep,
                    to,
                }));
                cur = to;
            }
            PathOp::Close => {
                out.push(PathCommand::abs(PathOp::Close));
                cur = start;
            }
        }
        prev_cubic_ctrl = next_cubic_ctrl;
        prev_quad_ctrl = next_quad_ctrl;
    }
    out
}

/// Absolute commands with all curves as cubics: quadratics by exact degree
/// elevation, arcs by quarter-turn approximation. Output ops are limited
/// to Move, Line, Cubic, and Close.
pub fn to_cubics(commands: &[PathCommand]) -> Vec<PathCommand> {
    let abs = absolutize(commands);
    let mut out = Vec::with_capacity(abs.len());
    let mut cur = Point::ZERO;
    let mut start = Point::ZERO;
    for cmd in &abs {
        match cmd.op {
            PathOp::Move { to } => {
                out.push(*cmd);
                cur = to;
                start = to;
            }
            PathOp::Line { to } => {
                out.push(*cmd);
                cur = to;
            }
            PathOp::Cubic { to, .. } => {
                out.push(*cmd);
                cur = to;
            }
            PathOp::Quad { c, to } => {
                let cubic = quad_to_cubic(cur, c, to);
                out.push(PathCommand::abs(PathOp::Cubic {
                    c1: cubic.p1,
                    c2: cubic.p2,
                    to: cubic.p3,
                }));
                cur = to;
            }
            PathOp::Arc { rx, ry, x_rotation, large_arc, sweep, to } => {
                for seg in arc_to_cubics(cur, rx, ry, x_rotation, large_arc, sweep, to) {
                    out.push(PathCommand::abs(PathOp::Cubic {
                        c1: seg.p1,
                        c2: seg.p2,
                        to: seg.p3,
                    }));
                }
                cur = to;
            }
            PathOp::Close => {
                out.push(*cmd);
                cur = start;
            }
            // absolutize never emits these.
            PathOp::HLine { .. }
            | PathOp::VLine { .. }
            | PathOp::SmoothCubic { .. }
            | PathOp::SmoothQuad { .. } => unreachable!("absolutize leaves no shorthand ops"),
        }
    }
    out
}

/// Flattens a command list into polyline subpaths at the given tolerance.
pub fn flatten_commands(commands: &[PathCommand], tolerance: f64) -> Vec<Subpath> {
    let abs = absolutize(commands);
    let mut subpaths: Vec<Subpath> = Vec::new();
    let mut points: Vec<Point> = Vec::new();
    let mut cur = Point::ZERO;
    let mut start = Point::ZERO;

    let finish = |points: &mut Vec<Point>, closed: bool, subpaths: &mut Vec<Subpath>| {
        if !points.is_empty() {
            subpaths.push(Subpath { points: std::mem::take(points), closed });
        }
    };

    for cmd in &abs {
        match cmd.op {
            PathOp::Move { to } => {
                // A buffer holding only a moveto (or a post-Close restart
                // point) has no geometry and is not a subpath.
                if points.len() > 1 {
                    finish(&mut points, false, &mut subpaths);
                } else {
                    points.clear();
                }
                points.push(to);
                cur = to;
                start = to;
            }
            PathOp::Line { to } => {
                points.push(to);
                cur = to;
            }
            PathOp::Cubic { c1, c2, to } => {
                CubicBezier::new(cur, c1, c2, to).flatten_into(tolerance, &mut points);
                cur = to;
            }
            PathOp::Quad { c, to } => {
                quad_to_cubic(cur, c, to).flatten_into(tolerance, &mut points);
                cur = to;
            }
            PathOp::Arc { rx, ry, x_rotation, large_arc, sweep, to } => {
                for seg in arc_to_cubics(cur, rx, ry, x_rotation, large_arc, sweep, to) {
                    seg.flatten_into(tolerance, &mut points);
                }
                cur = to;
            }
            PathOp::Close => {
                if points.first() != points.last() {
                    if let Some(&first) = points.first() {
                        points.push(first);
                    }
                }
                finish(&mut points, true, &mut subpaths);
                cur = start;
                // Per SVG, drawing may continue from the closed subpath's
                // start without an intervening Move.
                points.push(start);
            }
            PathOp::HLine { .. }
            | PathOp::VLine { .. }
            | PathOp::SmoothCubic { .. }
            | PathOp::SmoothQuad { .. } => unreachable!("absolutize leaves no shorthand ops"),
        }
    }
    // A trailing run that only ever held the post-Close restart point is
    // not a real subpath.
    if points.len() > 1 {
        finish(&mut points, false, &mut subpaths);
    }
    subpaths
}

/// Applies an affine map to every coordinate of a command list. Command
/// kinds are preserved where the transform allows: H/V survive only
/// axis-aligned maps, arcs survive direct similarities and are otherwise
/// converted to cubics.
pub fn transform_commands(t: &AffineTransform, commands: &[PathCommand]) -> Vec<PathCommand> {
    let mut out = Vec::with_capacity(commands.len());
    let mut cur = Point::ZERO; // input-space current point
    let mut start = Point::ZERO;
    let is_sim = t.is_direct_similarity();

    for cmd in commands {
        let rel = cmd.relative;
        let map = |p: Point| if rel { t.apply_vector(p) } else { t.apply(p) };
        let input_pos = |p: Point, cur: Point| if rel { cur + p } else { p };
        match cmd.op {
            PathOp::Move { to } => {
                out.push(PathCommand { relative: rel, op: PathOp::Move { to: map(to) } });
                cur = input_pos(to, cur);
                start = cur;
            }
            PathOp::Line { to } => {
                out.push(PathCommand { relative: rel, op: PathOp::Line { to: map(to) } });
                cur = input_pos(to, cur);
            }
            PathOp::HLine { x } => {
                let end_in =
                    if rel { Point::new(cur.x + x, cur.y) } else { Point::new(x, cur.y) };
                if t.b == 0.0 {
                    let op = if rel {
                        PathOp::HLine { x: t.apply_vector(Point::new(x, 0.0)).x }
                    } else {
                        PathOp::HLine { x: t.apply(end_in).x }
                    };
                    out.push(PathCommand { relative: rel, op });
                } else {
                    let op = if rel {
                        PathOp::Line { to: t.apply_vector(Point::new(x, 0.0)) }
                    } else {
                        PathOp::Line { to: t.apply(end_in) }
                    };
                    out.push(PathCommand { relative: rel, op });
                }
                cur = end_in;
            }
            PathOp::VLine { y } => {
                let end_in =
                    if rel { Point::new(cur.x, cur.y + y) } else { Point::new(cur.x, y) };
                if t.c == 0.0 {
                    let op = if rel {
                        PathOp::VLine { y: t.apply_vector(Point::new(0.0, y)).y }
                    } else {
                        PathOp::VLine { y: t.apply(end_in).y }
                    };
                    out.push(PathCommand { relative: rel, op });
                } else {
                    let op = if rel {
                        PathOp::Line { to: t.apply_vector(Point::new(0.0, y)) }
                    } else {
                        PathOp::Line { to: t.apply(end_in) }
                    };
                    out.push(PathCommand { relative: rel, op });
                }
                cur = end_in;
            }
            PathOp::Cubic { c1, c2, to } => {
                out.push(PathCommand {
                    relative: rel,
                    op: PathOp::Cubic { c1: map(c1), c2: map(c2), to: map(to) },
                });
                cur = input_pos(to, cur);
            }
            PathOp::SmoothCubic { c2, to } => {
                out.push(PathCommand {
                    relative: rel,
                    op: PathOp::SmoothCubic { c2: map(c2), to: map(to) },
                });
                cur = input_pos(to, cur);
            }
            PathOp::Quad { c, to } => {
                out.push(PathCommand {
                    relative: rel,
                    op: PathOp::Quad { c: map(c), to: map(to) },
                });
                cur = input_pos(to, cur);
            }
            PathOp::SmoothQuad { to } => {
                out.push(PathCommand { relative: rel, op: PathOp::SmoothQuad { to: map(to) } });
                cur = input_pos(to, cur);
            }
            PathOp::Arc { rx, ry, x_rotation, large_arc, sweep, to } => {
                let end_in = input_pos(to, cur);
                if is_sim {
                    let s = t.similarity_scale();
                    out.push(PathCommand {
                        relative: rel,
                        op: PathOp::Arc {
                            rx: rx * s,
                            ry: ry * s,
                            x_rotation: x_rotation + t.similarity_rotation_deg(),
                            large_arc,
                            sweep,
                            to: map(to),
                        },
                    });
                } else {
                    // Coincident endpoints yield no segments: the arc drew
                    // nothing, so nothing is emitted.
                    for seg in arc_to_cubics(cur, rx, ry, x_rotation, large_arc, sweep, end_in) {
                        out.push(PathCommand::abs(PathOp::Cubic {
                            c1: t.apply(seg.p1),
                            c2: t.apply(seg.p2),
                            to: t.apply(seg.p3),
                        }));
                    }
                }
                cur = end_in;
            }
            PathOp::Close => {
                out.push(*cmd);
                cur = start;
            }
        }
    }
    out
}

/// Maps a shape's geometry through a transform, preserving the geometry
/// kind where the transform allows: rects and ellipses survive axis-aligned
/// scaling, point-list shapes survive anything, and the rest lower to
/// paths. Stroke width scales by the transform's mean scale factor.
/// Returns `None` when the shape draws nothing.
pub fn transform_shape(t: &AffineTransform, shape: &Shape) -> Option<Shape> {
    let axis = t.is_axis_aligned_scale();
    let geometry = match &shape.geometry {
        Geometry::Path { commands } => {
            Geometry::Path { commands: transform_commands(t, commands) }
        }
        Geometry::Rect { x, y, width, height, rx, ry } if axis => Geometry::Rect {
            x: t.a * x + t.e,
            y: t.d * y + t.f,
            width: t.a * width,
            height: t.d * height,
            rx: t.a * rx,
            ry: t.d * ry,
        },
        Geometry::Circle { cx, cy, r } if axis => {
            let c = t.apply(Point::new(*cx, *cy));
            if t.a == t.d {
                Geometry::Circle { cx: c.x, cy: c.y, r: r * t.a }
            } else {
                Geometry::Ellipse { cx: c.x, cy: c.y, rx: r * t.a, ry: r * t.d }
            }
        }
        Geometry::Ellipse { cx, cy, rx, ry } if axis => {
            let c = t.apply(Point::new(*cx, *cy));
            Geometry::Ellipse { cx: c.x, cy: c.y, rx: rx * t.a, ry: ry * t.d }
        }
        Geometry::Line { p1, p2 } => Geometry::Line { p1: t.apply(*p1), p2: t.apply(*p2) },
        Geometry::Polyline { points } => {
            Geometry::Polyline { points: points.iter().map(|&p| t.apply(p)).collect() }
        }
        Geometry::Polygon { points } => {
            Geometry::Polygon { points: points.iter().map(|&p| t.apply(p)).collect() }
        }
        other => {
            let commands = geometry_to_commands(other)?;
            Geometry::Path { commands: transform_commands(t, &commands) }
        }
    };
    let mut paint = shape.paint;
    paint.stroke_width *= t.mean_scale();
    Some(Shape { paint, geometry })
}

/// Maps every coordinate of a document. Top-level shapes are transformed
/// directly; groups absorb the transform into their own matrix so their
/// children need no rewriting.
pub fn transform_doc(t: &AffineTransform, doc: &SvgDocument) -> SvgDocument {
    let nodes = doc
        .nodes
        .iter()
        .filter_map(|node| match node {
            Node::Shape(s) => transform_shape(t, s).map(Node::Shape),
            Node::Group(g) => Some(Node::Group(Group {
                transform: t.mul(&g.transform),
                children: g.children.clone(),
            })),
        })
        .collect();
    SvgDocument {
        view_box: doc.view_box,
        width: doc.width,
        height: doc.height,
        nodes,
    }
}

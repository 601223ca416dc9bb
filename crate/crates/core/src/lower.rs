//! Lowering of shape primitives to path commands.

use crate::geometry::Point;
use crate::model::{Geometry, Group, Node, PathCommand, PathOp, Shape, SvgDocument};

/// Converts a shape's geometry into an equivalent command list. Returns
/// `None` for shapes that draw nothing (zero-sized rects, zero radii,
/// single-point polylines), which SVG defines as not rendered.
pub fn geometry_to_commands(geometry: &Geometry) -> Option<Vec<PathCommand>> {
    let cmds = match geometry {
        Geometry::Path { commands } => {
            if commands.is_empty() {
                return None;
            }
            commands.clone()
        }
        Geometry::Rect { x, y, width, height, rx, ry } => {
            if *width <= 0.0 || *height <= 0.0 {
                return None;
            }
            // Per SVG, radii are clamped to half the side lengths; a
            // missing one copies the other (the parser resolves that).
            let rx = rx.max(0.0).min(width / 2.0);
            let ry = ry.max(0.0).min(height / 2.0);
            if rx == 0.0 || ry == 0.0 {
                vec![
                    PathCommand::abs(PathOp::Move { to: Point::new(*x, *y) }),
                    PathCommand::abs(PathOp::Line { to: Point::new(x + width, *y) }),
                    PathCommand::abs(PathOp::Line { to: Point::new(x + width, y + height) }),
                    PathCommand::abs(PathOp::Line { to: Point::new(*x, y + height) }),
                    PathCommand::abs(PathOp::Close),
                ]
            } else {
                let arc = |to: Point| {
                    PathCommand::abs(PathOp::Arc {
                        rx,
                        ry,
                        x_rotation: 0.0,
                        large_arc: false,
                        sweep: true,
                        to,
                    })
                };
                vec![
                    PathCommand::abs(PathOp::Move { to: Point::new(x + rx, *y) }),
                    PathCommand::abs(PathOp::Line { to: Point::new(x + width - rx, *y) }),
                    arc(Point::new(x + width, y + ry)),
                    PathCommand::abs(PathOp::Line { to: Point::new(x + width, y + height - ry) }),
                    arc(Point::new(x + width - rx, y + height)),
                    PathCommand::abs(PathOp::Line { to: Point::new(x + rx, y + height) }),
                    arc(Point::new(*x, y + height - ry)),
                    PathCommand::abs(PathOp::Line { to: Point::new(*x, y + ry) }),
                    arc(Point::new(x + rx, *y)),
                    PathCommand::abs(PathOp::Close),
                ]
            }
        }
        Geometry::Circle { cx, cy, r } => return ellipse_commands(*cx, *cy, *r, *r),
        Geometry::Ellipse { cx, cy, rx, ry } => return ellipse_commands(*cx, *cy, *rx, *ry),
        Geometry::Line { p1, p2 } => {
            if p1 == p2 {
                return None;
            }
            vec![
                PathCommand::abs(PathOp::Move { to: *p1 }),
                PathCommand::abs(PathOp::Line { to: *p2 }),
            ]
        }
        Geometry::Polyline { points } => poly_commands(points, false)?,
        Geometry::Polygon { points } => poly_commands(points, true)?,
    };
    Some(cmds)
}

fn ellipse_commands(cx: f64, cy: f64, rx: f64, ry: f64) -> Option<Vec<PathCommand>> {
    if rx <= 0.0 || ry <= 0.0 {
        return None;
    }
    let arc = |to: Point| {
        PathCommand::abs(PathOp::Arc { rx, ry, x_rotation: 0.0, large_arc: false, sweep: true, to })
    };
    Some(vec![
        PathCommand::abs(PathOp::Move { to: Point::new(cx + rx, cy) }),
        arc(Point::new(cx, cy + ry)),
        arc(Point::new(cx - rx, cy)),
        arc(Point::new(cx, cy - ry)),
        arc(Point::new(cx + rx, cy)),
        PathCommand::abs(PathOp::Close),
    ])
}

fn poly_commands(points: &[Point], close: bool) -> Option<Vec<PathCommand>> {
    if points.len() < 2 {
        return None;
    }
    let mut cmds = Vec::with_capacity(points.len() + 1);
    cmds.push(PathCommand::abs(PathOp::Move { to: points[0] }));
    for &p in &points[1..] {
        cmds.push(PathCommand::abs(PathOp::Line { to: p }));
    }
    if close {
        cmds.push(PathCommand::abs(PathOp::Close));
    }
    Some(cmds)
}

/// Rewrites every shape as a Path node. Group structure and paint are
/// preserved; shapes that draw nothing are dropped.
pub fn lower_primitives(doc: &SvgDocument) -> SvgDocument {
    fn walk(nodes: &[Node]) -> Vec<Node> {
        let mut out = Vec::with_capacity(nodes.len());
        for node in nodes {
            match node {
                Node::Group(g) => out.push(Node::Group(Group {
                    transform: g.transform,
                    children: walk(&g.children),
                })),
                Node::Shape(s) => {
                    if let Some(commands) = geometry_to_commands(&s.geometry) {
                        out.push(Node::Shape(Shape {
                            paint: s.paint,
                            geometry: Geometry::Path { commands },
                        }));
                    }
                }
            }
        }
        out
    }
    SvgDocument {
        view_box: doc.view_box,
        width: doc.width,
        height: doc.height,
        nodes: walk(&doc.nodes),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{flatten_commands, Point};
    use crate::model::Paint;

    fn only_paths(doc: &SvgDocument) -> bool {
        fn check(nodes: &[Node]) -> bool {
            nodes.iter().all(|n| match n {
                Node::Group(g) => check(&g.children),
                Node::Shape(s) => matches!(s.geometry, Geometry::Path { .. }),
            })
        }
        check(&doc.nodes)
    }

    #[test]
    fn rect_becomes_closed_four_liner() {
        let cmds = geometry_to_commands(&Geometry::Rect {
            x: 0.0,
            y: 0.0,
            width: 10.0,
            height: 10.0,
            rx: 0.0,
            ry: 0.0,
        })
        .unwrap();
        let expect = vec![
            PathCommand::abs(PathOp::Move { to: Point::new(0.0, 0.0) }),
            PathCommand::abs(PathOp::Line { to: Point::new(10.0, 0.0) }),
            PathCommand::abs(PathOp::Line { to: Point::new(10.0, 10.0) }),
            PathCommand::abs(PathOp::Line { to: Point::new(0.0, 10.0) }),
            PathCommand::abs(PathOp::Close),
        ];
        assert_eq!(cmds, expect);
    }

    #[test]
    fn polygon_becomes_closed_lines() {
        let cmds = geometry_to_commands(&Geometry::Polygon {
            points: vec![Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(4.0, 4.0)],
        })
        .unwrap();
        let expect = vec![
            PathCommand::abs(PathOp::Move { to: Point::new(0.0, 0.0) }),
            PathCommand::abs(PathOp::Line { to: Point::new(4.0, 0.0) }),
            PathCommand::abs(PathOp::Line { to: Point::new(4.0, 4.0) }),
            PathCommand::abs(PathOp::Close),
        ];
        assert_eq!(cmds, expect);
    }

    #[test]
    fn circle_becomes_four_arcs_on_the_circle() {
        let cmds = geometry_to_commands(&Geometry::Circle { cx: 5.0, cy: 5.0, r: 5.0 }).unwrap();
        let n_arcs = cmds.iter().filter(|c| matches!(c.op, PathOp::Arc { .. })).count();
        assert_eq!(n_arcs, 4);
        let subs = flatten_commands(&cmds, 1e-4);
        assert_eq!(subs.len(), 1);
        assert!(subs[0].closed);
        for p in &subs[0].points {
            let r = p.distance(Point::new(5.0, 5.0));
            assert!((r - 5.0).abs() < 5e-3, "radius {r}");
        }
    }

    #[test]
    fn rounded_rect_radii_are_clamped() {
        // rx beyond width/2 clamps to 5 and the flattened outline stays in
        // the rect's bounding box.
        let cmds = geometry_to_commands(&Geometry::Rect {
            x: 0.0,
            y: 0.0,
            width: 10.0,
            height: 6.0,
            rx: 50.0,
            ry: 2.0,
        })
        .unwrap();
        for sub in flatten_commands(&cmds, 1e-3) {
            for p in &sub.points {
                assert!((-1e-9..=10.0 + 1e-9).contains(&p.x));
                assert!((-1e-9..=6.0 + 1e-9).contains(&p.y));
            }
        }
    }

    #[test]
    fn degenerate_shapes_are_dropped() {
        for g in [
            Geometry::Rect { x: 0.0, y: 0.0, width: 0.0, height: 5.0, rx: 0.0, ry: 0.0 },
            Geometry::Circle { cx: 0.0, cy: 0.0, r: 0.0 },
            Geometry::Ellipse { cx: 0.0, cy: 0.0, rx: 1.0, ry: 0.0 },
            Geometry::Polyline { points: vec![Point::new(1.0, 1.0)] },
            Geometry::Line { p1: Point::new(2.0, 2.0), p2: Point::new(2.0, 2.0) },
            Geometry::Path { commands: Vec::new() },
        ] {
            assert_eq!(geometry_to_commands(&g), None, "{g:?}");
        }
    }

    #[test]
    fn lowering_keeps_groups_and_paint() {
        let doc = SvgDocument {
            view_box: Some(crate::model::ViewBox::new(0.0, 0.0, 10.0, 10.0)),
            nodes: vec![Node::Group(Group {
                transform: crate::geometry::AffineTransform::translate(1.0, 0.0),
                children: vec![Node::Shape(Shape {
                    paint: Paint { fill: Some(crate::model::Rgb::new(9, 9, 9)), ..Paint::default() },
                    geometry: Geometry::Circle { cx: 4.0, cy: 4.0, r: 2.0 },
                })],
            })],
            ..SvgDocument::default()
        };
        let lowered = lower_primitives(&doc);
        assert!(only_paths(&lowered));
        let mut paints = Vec::new();
        lowered.visit_shapes(&mut |_, s| paints.push(s.paint));
        assert_eq!(paints.len(), 1);
        assert_eq!(paints[0].fill, Some(crate::model::Rgb::new(9, 9, 9)));
    }
}

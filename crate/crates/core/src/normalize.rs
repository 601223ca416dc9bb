//! Viewport normalization and stroke-only simplification.

use thiserror::Error;

use crate::geometry::{absolutize, path::transform_shape, to_cubics, AffineTransform};
use crate::lower::lower_primitives;
use crate::model::{
    FillRule, Geometry, Group, Node, Paint, Rgb, Shape, SvgDocument, ViewBox,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("document has neither a viewBox nor positive width/height")]
    NoResolvableSize,
}

/// Rewrites the document into the canonical `[0,target]^2` frame: a uniform
/// scale-and-center (letterbox) maps the viewBox into the target square,
/// group transforms are folded into geometry, path commands become absolute
/// with H/V and smooth shorthands expanded, and stroke widths scale with
/// the frame. The result has viewBox `(0,0,target,target)` and is a fixed
/// point of this function.
pub fn normalize(doc: &SvgDocument, target: u32) -> Result<SvgDocument, NormalizeError> {
    let vb = doc.resolved_view_box().ok_or(NormalizeError::NoResolvableSize)?;
    if !(vb.width > 0.0 && vb.height > 0.0 && vb.width.is_finite() && vb.height.is_finite()) {
        return Err(NormalizeError::NoResolvableSize);
    }
    let letterbox = AffineTransform::letterbox(&vb, target as f64);

    fn walk(nodes: &[Node], t: &AffineTransform) -> Vec<Node> {
        let mut out = Vec::with_capacity(nodes.len());
        for node in nodes {
            match node {
                Node::Group(g) => {
                    let children = walk(&g.children, &t.mul(&g.transform));
                    out.push(Node::Group(Group {
                        transform: AffineTransform::IDENTITY,
                        children,
                    }));
                }
                Node::Shape(s) => {
                    let abs_shape = match &s.geometry {
                        Geometry::Path { commands } => Shape {
                            paint: s.paint,
                            geometry: Geometry::Path { commands: absolutize(commands) },
                        },
                        _ => s.clone(),
                    };
                    if let Some(mapped) = transform_shape(t, &abs_shape) {
                        out.push(Node::Shape(mapped));
                    }
                }
            }
        }
        out
    }

    Ok(SvgDocument {
        view_box: Some(ViewBox::new(0.0, 0.0, target as f64, target as f64)),
        width: None,
        height: None,
        nodes: walk(&doc.nodes, &letterbox),
    })
}

/// Line-art reduction: primitives lowered to paths, arcs and quadratics
/// converted to cubics, fills dropped, and every path given a hairline
/// black stroke. Idempotent.
pub fn simplify(doc: &SvgDocument) -> SvgDocument {
    let mut out = lower_primitives(doc);
    out.visit_shapes_mut(&mut |_, shape| {
        if let Geometry::Path { commands } = &shape.geometry {
            shape.geometry = Geometry::Path { commands: to_cubics(commands) };
        }
        shape.paint = Paint {
            fill: None,
            stroke: Some(Rgb::BLACK),
            stroke_width: 1.0,
            fill_rule: FillRule::NonZero,
        };
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{flatten_commands, Point};
    use crate::model::{PathCommand, PathOp};

    fn path_shape(commands: Vec<PathCommand>) -> Node {
        Node::Shape(Shape { paint: Paint::default(), geometry: Geometry::Path { commands } })
    }

    fn doc(view_box: ViewBox, nodes: Vec<Node>) -> SvgDocument {
        SvgDocument { view_box: Some(view_box), width: None, height: None, nodes }
    }

    fn path_points(doc: &SvgDocument) -> Vec<Point> {
        let mut pts = Vec::new();
        doc.visit_shapes(&mut |_, s| {
            if let Geometry::Path { commands } = &s.geometry {
                for sub in flatten_commands(commands, 1e-6) {
                    pts.extend(sub.points.iter().copied());
                }
            }
        });
        pts
    }

    #[test]
    fn square_viewbox_scales_uniformly() {
        let d = doc(
            ViewBox::new(0.0, 0.0, 10.0, 10.0),
            vec![path_shape(vec![
                PathCommand::abs(PathOp::Move { to: Point::new(0.0, 0.0) }),
                PathCommand::abs(PathOp::Line { to: Point::new(10.0, 10.0) }),
            ])],
        );
        let n = normalize(&d, 224).unwrap();
        let pts = path_points(&n);
        assert_eq!(pts, vec![Point::new(0.0, 0.0), Point::new(224.0, 224.0)]);
        assert_eq!(n.view_box, Some(ViewBox::new(0.0, 0.0, 224.0, 224.0)));
    }

    #[test]
    fn wide_viewbox_letterboxes_vertically() {
        let d = doc(
            ViewBox::new(0.0, 0.0, 20.0, 10.0),
            vec![path_shape(vec![PathCommand::abs(PathOp::Move { to: Point::new(0.0, 0.0) }),
                PathCommand::abs(PathOp::Line { to: Point::new(20.0, 10.0) })])],
        );
        let n = normalize(&d, 224).unwrap();
        let pts = path_points(&n);
        assert_eq!(pts[0], Point::new(0.0, 56.0));
        assert_eq!(pts[1], Point::new(224.0, 168.0));
    }

    #[test]
    fn relative_commands_become_absolute_before_scaling() {
        let d = doc(
            ViewBox::new(0.0, 0.0, 224.0, 224.0),
            vec![path_shape(vec![
                PathCommand::rel(PathOp::Move { to: Point::new(1.0, 1.0) }),
                PathCommand::rel(PathOp::Line { to: Point::new(2.0, 0.0) }),
            ])],
        );
        let n = normalize(&d, 224).unwrap();
        let mut cmds = Vec::new();
        n.visit_shapes(&mut |_, s| {
            if let Geometry::Path { commands } = &s.geometry {
                cmds = commands.clone();
            }
        });
        assert_eq!(
            cmds,
            vec![
                PathCommand::abs(PathOp::Move { to: Point::new(1.0, 1.0) }),
                PathCommand::abs(PathOp::Line { to: Point::new(3.0, 1.0) }),
            ]
        );
    }

    #[test]
    fn group_transforms_fold_into_geometry() {
        let d = doc(
            ViewBox::new(0.0, 0.0, 224.0, 224.0),
            vec![Node::Group(Group {
                transform: AffineTransform::translate(10.0, 0.0),
                children: vec![Node::Shape(Shape {
                    paint: Paint::default(),
                    geometry: Geometry::Circle { cx: 1.0, cy: 2.0, r: 3.0 },
                })],
            })],
        );
        let n = normalize(&d, 224).unwrap();
        match &n.nodes[0] {
            Node::Group(g) => {
                assert!(g.transform.is_identity());
                match &g.children[0] {
                    Node::Shape(s) => assert_eq!(
                        s.geometry,
                        Geometry::Circle { cx: 11.0, cy: 2.0, r: 3.0 }
                    ),
                    other => panic!("expected shape, got {other:?}"),
                }
            }
            other => panic!("expected group, got {other:?}"),
        }
    }

    #[test]
    fn stroke_width_scales_with_frame() {
        let d = doc(
            ViewBox::new(0.0, 0.0, 10.0, 10.0),
            vec![Node::Shape(Shape {
                paint: Paint { stroke: Some(Rgb::BLACK), stroke_width: 1.0, ..Paint::default() },
                geometry: Geometry::Line { p1: Point::new(0.0, 0.0), p2: Point::new(10.0, 0.0) },
            })],
        );
        let n = normalize(&d, 224).unwrap();
        let mut w = 0.0;
        n.visit_shapes(&mut |_, s| w = s.paint.stroke_width);
        assert!((w - 22.4).abs() < 1e-12);
    }

    #[test]
    fn width_height_fallback_resolves() {
        let d = SvgDocument {
            view_box: None,
            width: Some(10.0),
            height: Some(5.0),
            nodes: vec![path_shape(vec![
                PathCommand::abs(PathOp::Move { to: Point::new(0.0, 0.0) }),
                PathCommand::abs(PathOp::Line { to: Point::new(10.0, 5.0) }),
            ])],
        };
        let n = normalize(&d, 224).unwrap();
        let pts = path_points(&n);
        assert_eq!(pts[0], Point::new(0.0, 56.0));
    }

    #[test]
    fn no_size_errors() {
        let d = SvgDocument {
            view_box: None,
            width: None,
            height: None,
            nodes: vec![],
        };
        assert_eq!(normalize(&d, 224), Err(NormalizeError::NoResolvableSize));
    }

    #[test]
    fn normalize_is_idempotent() {
        let d = doc(
            ViewBox::new(-5.0, 3.0, 40.0, 25.0),
            vec![
                Node::Group(Group {
                    transform: AffineTransform::rotate_deg_about(30.0, 10.0, 10.0),
                    children: vec![
                        Node::Shape(Shape {
                            paint: Paint::default(),
                            geometry: Geometry::Rect {
                                x: 1.0,
                                y: 1.0,
                                width: 8.0,
                                height: 6.0,
                                rx: 1.0,
                                ry: 1.0,
                            },
                        }),
                        path_shape(vec![
                            PathCommand::rel(PathOp::Move { to: Point::new(2.0, 2.0) }),
                            PathCommand::rel(PathOp::Cubic {
                                c1: Point::new(1.0, 0.0),
                                c2: Point::new(2.0, 1.0),
                                to: Point::new(3.0, 3.0),
                            }),
                            PathCommand::abs(PathOp::SmoothCubic {
                                c2: Point::new(9.0, 9.0),
                                to: Point::new(12.0, 7.0),
                            }),
                            PathCommand::abs(PathOp::Close),
                        ]),
                    ],
                }),
                Node::Shape(Shape {
                    paint: Paint::default(),
                    geometry: Geometry::Ellipse { cx: 20.0, cy: 12.0, rx: 6.0, ry: 3.0 },
                }),
            ],
        );
        let once = normalize(&d, 224).unwrap();
        let twice = normalize(&once, 224).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn simplify_strips_fills_and_forces_hairline_stroke() {
        let d = doc(
            ViewBox::new(0.0, 0.0, 224.0, 224.0),
            vec![Node::Shape(Shape {
                paint: Paint { fill: Some(Rgb::new(255, 0, 0)), ..Paint::default() },
                geometry: Geometry::Rect {
                    x: 10.0,
                    y: 10.0,
                    width: 50.0,
                    height: 30.0,
                    rx: 0.0,
                    ry: 0.0,
                },
            })],
        );
        let s = simplify(&d);
        let mut seen = 0;
        s.visit_shapes(&mut |_, shape| {
            seen += 1;
            assert_eq!(shape.paint.fill, None);
            assert_eq!(shape.paint.stroke, Some(Rgb::BLACK));
            assert_eq!(shape.paint.stroke_width, 1.0);
            assert!(matches!(shape.geometry, Geometry::Path { .. }));
        });
        assert_eq!(seen, 1);
        assert_eq!(simplify(&s), s);
    }

    #[test]
    fn simplify_preserves_quad_geometry_exactly() {
        let quad = vec![
            PathCommand::abs(PathOp::Move { to: Point::new(0.0, 0.0) }),
            PathCommand::abs(PathOp::Quad { c: Point::new(50.0, 100.0), to: Point::new(100.0, 0.0) }),
        ];
        let d = doc(ViewBox::new(0.0, 0.0, 224.0, 224.0), vec![path_shape(quad.clone())]);
        let s = simplify(&d);
        let mut cubic_cmds = Vec::new();
        s.visit_shapes(&mut |_, shape| {
            if let Geometry::Path { commands } = &shape.geometry {
                cubic_cmds = commands.clone();
            }
        });
        // Flatten both versions very finely; every point of one polyline
        // must lie within 1e-9 of the other (degree elevation is exact).
        let a = flatten_commands(&quad, 1e-6);
        let b = flatten_commands(&cubic_cmds, 1e-6);
        for (pa, pb) in [(&a, &b), (&b, &a)] {
            for p in &pa[0].points {
                let best = pb[0]
                    .points
                    .windows(2)
                    .map(|w| dist_to_segment(*p, w[0], w[1]))
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-9, "deviation {best}");
            }
        }
    }

    fn dist_to_segment(p: Point, a: Point, b: Point) -> f64 {
        let ab = b - a;
        let len_sq = ab.dot(ab);
        if len_sq == 0.0 {
            return p.distance(a);
        }
        let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
        p.distance(a + ab * t)
    }
}

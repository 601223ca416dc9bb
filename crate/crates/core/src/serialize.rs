//! Document tree to SVG text.
//!
//! Output is byte-deterministic: fixed attribute order per element
//! (geometry, then paint, then transform), no inter-element whitespace,
//! and numbers printed with the shortest decimal form that round-trips
//! to the same f64. Attributes matching their defaults are omitted, so
//! re-parsing reconstructs a structurally equal document.

use std::fmt::Write;

use crate::geometry::{AffineTransform, Point};
use crate::model::{FillRule, Geometry, Node, Paint, PathCommand, PathOp, Rgb, SvgDocument};

pub fn serialize(doc: &SvgDocument) -> String {
    let mut out = String::new();
    out.push_str(r#"<svg xmlns="http://www.w3.org/2000/svg""#);
    if let Some(vb) = &doc.view_box {
        let _ = write!(
            out,
            r#" viewBox="{} {} {} {}""#,
            num(vb.min_x),
            num(vb.min_y),
            num(vb.width),
            num(vb.height)
        );
    }
    if let Some(w) = doc.width {
        let _ = write!(out, r#" width="{}""#, num(w));
    }
    if let Some(h) = doc.height {
        let _ = write!(out, r#" height="{}""#, num(h));
    }
    out.push('>');
    for node in &doc.nodes {
        write_node(&mut out, node);
    }
    out.push_str("</svg>");
    out
}

/// Shortest decimal representation that parses back to the same f64.
pub fn num(v: f64) -> String {
    debug_assert!(v.is_finite());
    format!("{v}")
}

pub fn path_data_string(commands: &[PathCommand]) -> String {
    let mut out = String::new();
    for (i, cmd) in commands.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let letter = match cmd.op {
            PathOp::Move { .. } => 'M',
            PathOp::Line { .. } => 'L',
            PathOp::HLine { .. } => 'H',
            PathOp::VLine { .. } => 'V',
            PathOp::Cubic { .. } => 'C',
            PathOp::SmoothCubic { .. } => 'S',
            PathOp::Quad { .. } => 'Q',
            PathOp::SmoothQuad { .. } => 'T',
            PathOp::Arc { .. } => 'A',
            PathOp::Close => 'Z',
        };
        out.push(if cmd.relative { letter.to_ascii_lowercase() } else { letter });
        match &cmd.op {
            PathOp::Move { to } | PathOp::Line { to } | PathOp::SmoothQuad { to } => {
                push_point(&mut out, to);
            }
            PathOp::HLine { x } => out.push_str(&num(*x)),
            PathOp::VLine { y } => out.push_str(&num(*y)),
            PathOp::Cubic { c1, c2, to } => {
                push_point(&mut out, c1);
                out.push(' ');
                push_point(&mut out, c2);
                out.push(' ');
                push_point(&mut out, to);
            }
            PathOp::SmoothCubic { c2, to } | PathOp::Quad { c: c2, to } => {
                push_point(&mut out, c2);
                out.push(' ');
                push_point(&mut out, to);
            }
            PathOp::Arc { rx, ry, x_rotation, large_arc, sweep, to } => {
                let _ = write!(
                    out,
                    "{} {} {} {} {} ",
                    num(*rx),
                    num(*ry),
                    num(*x_rotation),
                    u8::from(*large_arc),
                    u8::from(*sweep)
                );
                push_point(&mut out, to);
            }
            PathOp::Close => {}
        }
    }
    out
}

fn push_point(out: &mut String, p: &Point) {
    let _ = write!(out, "{} {}", num(p.x), num(p.y));
}

fn write_node(out: &mut String, node: &Node) {
    match node {
        Node::Group(g) => {
            out.push_str("<g");
            write_transform(out, &g.transform);
            if g.children.is_empty() {
                out.push_str("/>");
            } else {
                out.push('>');
                for child in &g.children {
                    write_node(out, child);
                }
                out.push_str("</g>");
            }
        }
        Node::Shape(shape) => {
            match &shape.geometry {
                Geometry::Path { commands } => {
                    let _ = write!(out, r#"<path d="{}""#, path_data_string(commands));
                }
                Geometry::Rect { x, y, width, height, rx, ry } => {
                    out.push_str("<rect");
                    opt_attr(out, "x", *x, 0.0);
                    opt_attr(out, "y", *y, 0.0);
                    attr(out, "width", *width);
                    attr(out, "height", *height);
                    // The parser's lone-radius rule makes emitting only one
                    // of rx/ry lossy, so both appear whenever either is set.
                    if *rx != 0.0 || *ry != 0.0 {
                        attr(out, "rx", *rx);
                        attr(out, "ry", *ry);
                    }
                }
                Geometry::Circle { cx, cy, r } => {
                    out.push_str("<circle");
                    opt_attr(out, "cx", *cx, 0.0);
                    opt_attr(out, "cy", *cy, 0.0);
                    attr(out, "r", *r);
                }
                Geometry::Ellipse { cx, cy, rx, ry } => {
                    out.push_str("<ellipse");
                    opt_attr(out, "cx", *cx, 0.0);
                    opt_attr(out, "cy", *cy, 0.0);
                    attr(out, "rx", *rx);
                    attr(out, "ry", *ry);
                }
                Geometry::Line { p1, p2 } => {
                    out.push_str("<line");
                    attr(out, "x1", p1.x);
                    attr(out, "y1", p1.y);
                    attr(out, "x2", p2.x);
                    attr(out, "y2", p2.y);
                }
                Geometry::Polyline { points } => {
                    out.push_str("<polyline");
                    points_attr(out, points);
                }
                Geometry::Polygon { points } => {
                    out.push_str("<polygon");
                    points_attr(out, points);
                }
            }
            write_paint(out, &shape.paint);
            out.push_str("/>");
        }
    }
}

fn attr(out: &mut String, name: &str, v: f64) {
    let _ = write!(out, r#" {name}="{}""#, num(v));
}

fn opt_attr(out: &mut String, name: &str, v: f64, default: f64) {
    if v != default {
        attr(out, name, v);
    }
}

fn points_attr(out: &mut String, points: &[Point]) {
    out.push_str(r#" points=""#);
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{},{}", num(p.x), num(p.y));
    }
    out.push('"');
}

fn write_paint(out: &mut String, paint: &Paint) {
    match paint.fill {
        Some(c) if c == Rgb::BLACK => {}
        Some(c) => {
            let _ = write!(out, r#" fill="{}""#, c.hex());
        }
        None => out.push_str(r#" fill="none""#),
    }
    if paint.fill_rule == FillRule::EvenOdd {
        out.push_str(r#" fill-rule="evenodd""#);
    }
    if let Some(c) = paint.stroke {
        let _ = write!(out, r#" stroke="{}""#, c.hex());
    }
    if paint.stroke_width != 1.0 {
        let _ = write!(out, r#" stroke-width="{}""#, num(paint.stroke_width));
    }
}

fn write_transform(out: &mut String, t: &AffineTransform) {
    if !t.is_identity() {
        let _ = write!(
            out,
            r#" transform="matrix({} {} {} {} {} {})""#,
            num(t.a),
            num(t.b),
            num(t.c),
            num(t.d),
            num(t.e),
            num(t.f)
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Group, Shape, ViewBox};
    use crate::parse::parse_svg;

    fn doc_with(nodes: Vec<Node>) -> SvgDocument {
        SvgDocument {
            view_box: Some(ViewBox::new(0.0, 0.0, 224.0, 224.0)),
            width: None,
            height: None,
            nodes,
        }
    }

    #[test]
    fn empty_document_golden() {
        let text = serialize(&doc_with(vec![]));
        assert_eq!(
            text,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 224 224"></svg>"#
        );
    }

    #[test]
    fn fill_hex_golden() {
        let shape = Shape {
            paint: Paint { fill: Some(Rgb { r: 18, g: 52, b: 86 }), ..Paint::default() },
            geometry: Geometry::Rect { x: 0.0, y: 0.0, width: 1.0, height: 2.0, rx: 0.0, ry: 0.0 },
        };
        let text = serialize(&doc_with(vec![Node::Shape(shape)]));
        assert!(text.contains(r##"<rect width="1" height="2" fill="#123456"/>"##), "{text}");
    }

    #[test]
    fn path_data_formatting() {
        let cmds = crate::parse::parse_path_data("M0 0 l1.5 -2 H3 v4 C1 2 3 4 5 6 A10 10 0 0 1 20 0 Z")
            .unwrap();
        assert_eq!(
            path_data_string(&cmds),
            "M0 0 l1.5 -2 H3 v4 C1 2 3 4 5 6 A10 10 0 0 1 20 0 Z"
        );
    }

    #[test]
    fn default_paint_emits_nothing() {
        let shape = Shape {
            paint: Paint::default(),
            geometry: Geometry::Circle { cx: 5.0, cy: 5.0, r: 2.0 },
        };
        let text = serialize(&doc_with(vec![Node::Shape(shape)]));
        assert!(text.contains(r#"<circle cx="5" cy="5" r="2"/>"#), "{text}");
    }

    #[test]
    fn none_fill_and_stroke_emit() {
        let shape = Shape {
            paint: Paint {
                fill: None,
                stroke: Some(Rgb::BLACK),
                stroke_width: 2.0,
                fill_rule: FillRule::EvenOdd,
            },
            geometry: Geometry::Path { commands: vec![] },
        };
        let text = serialize(&doc_with(vec![Node::Shape(shape)]));
        assert!(
            text.contains(
                r##"<path d="" fill="none" fill-rule="evenodd" stroke="#000000" stroke-width="2"/>"##
            ),
            "{text}"
        );
    }

    #[test]
    fn group_transform_as_matrix() {
        let g = Group {
            transform: AffineTransform::translate(3.0, 4.0),
            children: vec![Node::Group(Group {
                transform: AffineTransform::IDENTITY,
                children: vec![],
            })],
        };
        let text = serialize(&doc_with(vec![Node::Group(g)]));
        assert!(text.contains(r#"<g transform="matrix(1 0 0 1 3 4)"><g/></g>"#), "{text}");
    }

    #[test]
    fn shortest_round_trip_numbers() {
        assert_eq!(num(0.1), "0.1");
        assert_eq!(num(1.0 / 3.0), "0.3333333333333333");
        assert_eq!(num(224.0), "224");
        assert_eq!(num(-0.0), "-0");
        for &v in &[0.1, 1.0 / 3.0, 1e-8, 123456.789, f64::MIN_POSITIVE] {
            let printed = num(v);
            assert_eq!(printed.parse::<f64>().unwrap(), v, "{printed}");
        }
    }

    #[test]
    fn manual_round_trips() {
        let sources = [
            r#"<svg viewBox="0 0 10 10"><path d="M0 0 L10 0"/></svg>"#,
            r##"<svg viewBox="0 0 24 24" width="48" height="24"><g transform="rotate(45)"><rect x="1" y="2" width="3" height="4" rx="1" ry="2" fill="#336699"/></g></svg>"##,
            r#"<svg><polyline points="0,0 1,1 2,0" fill="none" stroke="red"/><polygon points="5,5 6,6 7,5"/></svg>"#,
            r#"<svg><ellipse cx="3" cy="4" rx="5" ry="6" fill-rule="evenodd"/><line x1="1" y1="2" x2="3" y2="4" stroke="lime" stroke-width="0.5"/></svg>"#,
            r#"<svg><path d="m1 1 l2 0 h3 v-4 c1 2 3 4 5 6 s1 1 2 2 q0.5 0.5 1 1 t2 2 a5 5 30 1 0 4 4 z"/></svg>"#,
        ];
        for src in sources {
            let doc = parse_svg(src).unwrap();
            let text = serialize(&doc);
            let doc2 = parse_svg(&text).unwrap();
            assert_eq!(doc, doc2, "round-trip changed structure for {src}\n→ {text}");
            // Second serialization is byte-identical.
            assert_eq!(text, serialize(&doc2));
        }
    }

    #[test]
    fn rect_radii_round_trip_with_one_zero() {
        let shape = Shape {
            paint: Paint::default(),
            geometry: Geometry::Rect { x: 0.0, y: 0.0, width: 8.0, height: 8.0, rx: 0.0, ry: 3.0 },
        };
        let doc = doc_with(vec![Node::Shape(shape)]);
        let text = serialize(&doc);
        assert_eq!(parse_svg(&text).unwrap(), doc, "{text}");
    }

    #[test]
    fn empty_group_round_trips() {
        let doc = doc_with(vec![Node::Group(Group {
            transform: AffineTransform::IDENTITY,
            children: vec![],
        })]);
        let text = serialize(&doc);
        assert_eq!(parse_svg(&text).unwrap(), doc, "{text}");
    }
}

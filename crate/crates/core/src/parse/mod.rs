//! SVG text to document tree.
//!
//! Supported subset: `svg, g, path, rect, circle, ellipse, line, polyline,
//! polygon` with `fill, stroke, stroke-width, fill-rule, transform, viewBox,
//! width, height, opacity` and `style` limited to the four paint properties.
//! Unsupported elements are skipped with a warning; unknown attributes are
//! ignored silently. Opacity is flattened into paint by compositing colors
//! onto white, so the document model has no opacity field.

mod path_data;
mod value;
pub(crate) mod xml;

pub use path_data::{longest_valid_prefix, parse_path_data, PathDataError};

use std::borrow::Cow;

use crate::geometry::{AffineTransform, Point};
use crate::model::{
    FillRule, Geometry, Group, Issue, Node, Paint, Rgb, Shape, SvgDocument, ViewBox,
};
use xml::{Attr, Event, ScanError, StartTag, Tokenizer};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed XML at byte {offset}: {message}")]
    MalformedXml { offset: usize, message: String },
    #[error("malformed path data in command {command_index} at byte {offset}: {message}")]
    MalformedPathData { command_index: usize, offset: usize, message: String },
}

impl From<ScanError<'_>> for ParseError {
    fn from(e: ScanError<'_>) -> ParseError {
        ParseError::MalformedXml { offset: e.offset(), message: e.message() }
    }
}

pub fn parse_svg(text: &str) -> Result<SvgDocument, ParseError> {
    parse_svg_with_issues(text).map(|(doc, _)| doc)
}

/// Like [`parse_svg`] but also returns the non-fatal issues encountered:
/// skipped elements, unparseable attribute values, unknown colors.
pub fn parse_svg_with_issues(text: &str) -> Result<(SvgDocument, Vec<Issue>), ParseError> {
    let root_at = xml::find_svg_tag(text).ok_or_else(|| ParseError::MalformedXml {
        offset: 0,
        message: "no <svg> root element found".to_string(),
    })?;
    let mut parser = Parser { issues: Vec::new() };
    let doc = parser.run(text, root_at)?;
    Ok((doc, parser.issues))
}

/// Inheritable presentation state, resolved at each shape.
#[derive(Clone, Copy)]
struct PaintCtx {
    fill: Option<Rgb>,
    stroke: Option<Rgb>,
    stroke_width: f64,
    fill_rule: FillRule,
    /// Cumulative opacity product down the tree.
    opacity: f64,
}

impl PaintCtx {
    const ROOT: PaintCtx = PaintCtx {
        fill: Some(Rgb::BLACK),
        stroke: None,
        stroke_width: 1.0,
        fill_rule: FillRule::NonZero,
        opacity: 1.0,
    };

    fn resolve(&self) -> Paint {
        Paint {
            fill: self.fill.map(|c| c.over_white(self.opacity)),
            stroke: self.stroke.map(|c| c.over_white(self.opacity)),
            stroke_width: self.stroke_width,
            fill_rule: self.fill_rule,
        }
    }
}

enum Frame<'a> {
    Root { children: Vec<Node>, ctx: PaintCtx, transform: AffineTransform },
    Group { transform: AffineTransform, children: Vec<Node>, ctx: PaintCtx },
    /// A subtree whose content is ignored: an unsupported element, or
    /// children of a shape element. `warn_children` is set on shape frames
    /// so each direct child gets a warning; deeper descendants stay silent.
    Ignore { name: &'a str, warn_children: bool },
}

impl Frame<'_> {
    fn name(&self) -> &str {
        match self {
            Frame::Root { .. } => "svg",
            Frame::Group { .. } => "g",
            Frame::Ignore { name, .. } => name,
        }
    }
}

const SHAPE_NAMES: [&str; 7] =
    ["path", "rect", "circle", "ellipse", "line", "polyline", "polygon"];

struct Parser {
    issues: Vec<Issue>,
}

impl Parser {
    fn warn(&mut self, message: impl Into<String>, offset: usize) {
        self.issues.push(Issue::warning(message, offset));
    }

    fn run(&mut self, text: &str, root_at: usize) -> Result<SvgDocument, ParseError> {
        let mut tok = Tokenizer::new(text, root_at);
        let root_tag = match tok.next_event()? {
            Event::Start(tag) => tag,
            _ => unreachable!("find_svg_tag located a start tag"),
        };
        debug_assert_eq!(root_tag.name, "svg");

        let view_box = self.root_view_box(&root_tag);
        let width = self.root_length(&root_tag, "width");
        let height = self.root_length(&root_tag, "height");
        let mut ctx = PaintCtx::ROOT;
        self.apply_paint_attrs(&mut ctx, &root_tag);
        let transform = self.transform_attr(&root_tag);

        let mut doc = SvgDocument { view_box, width, height, nodes: Vec::new() };
        if root_tag.self_closing {
            return Ok(doc);
        }

        let mut stack: Vec<Frame> = vec![Frame::Root { children: Vec::new(), ctx, transform }];
        loop {
            match tok.next_event()? {
                Event::Start(tag) => self.on_start(tag, &mut stack)?,
                Event::End { name, start } => {
                    let top = stack.pop().expect("root frame closes the loop");
                    if top.name() != name {
                        return Err(ParseError::MalformedXml {
                            offset: start,
                            message: format!(
                                "end tag </{name}> does not match open <{}>",
                                top.name()
                            ),
                        });
                    }
                    match top {
                        Frame::Root { children, transform, .. } => {
                            doc.nodes = finish_root(children, transform);
                            return Ok(doc);
                        }
                        Frame::Group { transform, children, .. } => {
                            let node = Node::Group(Group { transform, children });
                            push_child(&mut stack, node);
                        }
                        Frame::Ignore { .. } => {}
                    }
                }
                Event::Text | Event::Misc => {}
                Event::Eof => {
                    return Err(ParseError::MalformedXml {
                        offset: text.len(),
                        message: format!(
                            "unexpected end of input with {} unclosed element(s)",
                            stack.len()
                        ),
                    });
                }
            }
        }
    }

    fn on_start<'a>(&mut self, tag: StartTag<'a>, stack: &mut Vec<Frame<'a>>) -> Result<(), ParseError> {
        if let Some(Frame::Ignore { warn_children, .. }) = stack.last() {
            if *warn_children {
                self.warn(format!("element <{}> inside a shape skipped", tag.name), tag.start);
            }
            if !tag.self_closing {
                stack.push(Frame::Ignore { name: tag.name, warn_children: false });
            }
            return Ok(());
        }
        let parent_ctx = match stack.last() {
            Some(Frame::Root { ctx, .. }) | Some(Frame::Group { ctx, .. }) => *ctx,
            _ => unreachable!(),
        };
        if tag.name == "g" {
            let mut ctx = parent_ctx;
            self.apply_paint_attrs(&mut ctx, &tag);
            let transform = self.transform_attr(&tag);
            if tag.self_closing {
                push_child(stack, Node::Group(Group { transform, children: Vec::new() }));
            } else {
                stack.push(Frame::Group { transform, children: Vec::new(), ctx });
            }
            return Ok(());
        }
        if SHAPE_NAMES.contains(&tag.name) {
            let mut ctx = parent_ctx;
            self.apply_paint_attrs(&mut ctx, &tag);
            let transform = self.transform_attr(&tag);
            let geometry = self.build_geometry(&tag)?;
            let shape = Node::Shape(Shape { paint: ctx.resolve(), geometry });
            let node = if transform.is_identity() {
                shape
            } else {
                Node::Group(Group { transform, children: vec![shape] })
            };
            push_child(stack, node);
            if !tag.self_closing {
                // Children of shapes are not part of the subset.
                stack.push(Frame::Ignore { name: tag.name, warn_children: true });
            }
            return Ok(());
        }
        self.warn(format!("unsupported element <{}> skipped", tag.name), tag.start);
        if !tag.self_closing {
            stack.push(Frame::Ignore { name: tag.name, warn_children: false });
        }
        Ok(())
    }

    fn build_geometry(&mut self, tag: &StartTag) -> Result<Geometry, ParseError> {
        Ok(match tag.name {
            "path" => {
                let commands = match find_attr(tag, "d") {
                    None => Vec::new(),
                    Some(d) => parse_path_data(&d.value).map_err(|e| {
                        // Offsets into decoded values line up with the raw
                        // text unless entities shifted them; then the value
                        // start is the best anchor available.
                        let base = d.value_span.start;
                        let offset = match &d.value {
                            Cow::Borrowed(_) => base + e.offset,
                            Cow::Owned(_) => base,
                        };
                        ParseError::MalformedPathData {
                            command_index: e.command_index,
                            offset,
                            message: e.message,
                        }
                    })?,
                };
                Geometry::Path { commands }
            }
            "rect" => {
                let x = self.num_attr(tag, "x", 0.0);
                let y = self.num_attr(tag, "y", 0.0);
                let width = self.nonneg_attr(tag, "width", 0.0);
                let height = self.nonneg_attr(tag, "height", 0.0);
                let rx_raw = self.opt_nonneg_attr(tag, "rx");
                let ry_raw = self.opt_nonneg_attr(tag, "ry");
                // A lone corner radius applies to both axes.
                let (rx, ry) = match (rx_raw, ry_raw) {
                    (None, None) => (0.0, 0.0),
                    (Some(v), None) | (None, Some(v)) => (v, v),
                    (Some(rx), Some(ry)) => (rx, ry),
                };
                Geometry::Rect { x, y, width, height, rx, ry }
            }
            "circle" => Geometry::Circle {
                cx: self.num_attr(tag, "cx", 0.0),
                cy: self.num_attr(tag, "cy", 0.0),
                r: self.nonneg_attr(tag, "r", 0.0),
            },
            "ellipse" => Geometry::Ellipse {
                cx: self.num_attr(tag, "cx", 0.0),
                cy: self.num_attr(tag, "cy", 0.0),
                rx: self.nonneg_attr(tag, "rx", 0.0),
                ry: self.nonneg_attr(tag, "ry", 0.0),
            },
            "line" => Geometry::Line {
                p1: Point::new(self.num_attr(tag, "x1", 0.0), self.num_attr(tag, "y1", 0.0)),
                p2: Point::new(self.num_attr(tag, "x2", 0.0), self.num_attr(tag, "y2", 0.0)),
            },
            "polyline" | "polygon" => {
                let points = match find_attr(tag, "points") {
                    None => Vec::new(),
                    Some(attr) => match value::parse_points(&attr.value) {
                        Some((points, odd)) => {
                            if odd {
                                self.warn(
                                    format!("odd number of coordinates in <{}> points", tag.name),
                                    attr.value_span.start,
                                );
                            }
                            points
                        }
                        None => {
                            self.warn(
                                format!("unparseable points list on <{}>", tag.name),
                                attr.value_span.start,
                            );
                            Vec::new()
                        }
                    },
                };
                if tag.name == "polyline" {
                    Geometry::Polyline { points }
                } else {
                    Geometry::Polygon { points }
                }
            }
            _ => unreachable!("caller dispatches only shape names"),
        })
    }

    fn apply_paint_attrs(&mut self, ctx: &mut PaintCtx, tag: &StartTag) {
        for attr in &tag.attrs {
            if attr.name == "style" {
                continue;
            }
            self.apply_paint_property(ctx, attr.name, &attr.value, attr.value_span.start);
        }
        // style wins over presentation attributes.
        if let Some(style) = find_attr(tag, "style") {
            let offset = style.value_span.start;
            for (prop, val) in value::parse_style(&style.value) {
                if matches!(prop, "fill" | "stroke" | "stroke-width" | "fill-rule") {
                    self.apply_paint_property(ctx, prop, val, offset);
                }
            }
        }
    }

    fn apply_paint_property(&mut self, ctx: &mut PaintCtx, name: &str, value: &str, offset: usize) {
        match name {
            "fill" => match value::parse_color(value) {
                Ok(c) => ctx.fill = c,
                Err(()) => {
                    self.warn(format!("unknown fill color `{value}`, using black"), offset);
                    ctx.fill = Some(Rgb::BLACK);
                }
            },
            "stroke" => match value::parse_color(value) {
                Ok(c) => ctx.stroke = c,
                Err(()) => {
                    self.warn(format!("unknown stroke color `{value}`, using black"), offset);
                    ctx.stroke = Some(Rgb::BLACK);
                }
            },
            "stroke-width" => match value::parse_length(value) {
                Some(w) if w >= 0.0 => ctx.stroke_width = w,
                Some(_) => {
                    self.warn("negative stroke-width, using 0", offset);
                    ctx.stroke_width = 0.0;
                }
                None => self.warn(format!("unparseable stroke-width `{value}`"), offset),
            },
            "fill-rule" => match value.trim() {
                "nonzero" => ctx.fill_rule = FillRule::NonZero,
                "evenodd" => ctx.fill_rule = FillRule::EvenOdd,
                other => self.warn(format!("unknown fill-rule `{other}`"), offset),
            },
            "opacity" => match value::parse_number(value) {
                Some(v) => ctx.opacity *= v.clamp(0.0, 1.0),
                None => self.warn(format!("unparseable opacity `{value}`"), offset),
            },
            _ => {}
        }
    }

    fn transform_attr(&mut self, tag: &StartTag) -> AffineTransform {
        match find_attr(tag, "transform") {
            None => AffineTransform::IDENTITY,
            Some(attr) => match value::parse_transform_list(&attr.value) {
                Ok(t) => t,
                Err(msg) => {
                    self.warn(
                        format!("ignoring transform: {msg}"),
                        attr.value_span.start,
                    );
                    AffineTransform::IDENTITY
                }
            },
        }
    }

    fn root_view_box(&mut self, tag: &StartTag) -> Option<ViewBox> {
        let attr = find_attr(tag, "viewBox")?;
        let vb = value::parse_view_box(&attr.value);
        if vb.is_none() {
            self.warn(
                format!("unparseable viewBox `{}`", attr.value),
                attr.value_span.start,
            );
        }
        vb
    }

    fn root_length(&mut self, tag: &StartTag, name: &str) -> Option<f64> {
        let attr = find_attr(tag, name)?;
        match value::parse_length(&attr.value) {
            Some(v) if v > 0.0 => Some(v),
            _ => {
                self.warn(
                    format!("ignoring {name}=`{}` (not a positive px length)", attr.value),
                    attr.value_span.start,
                );
                None
            }
        }
    }

    fn num_attr(&mut self, tag: &StartTag, name: &str, default: f64) -> f64 {
        match find_attr(tag, name) {
            None => default,
            Some(attr) => match value::parse_length(&attr.value) {
                Some(v) => v,
                None => {
                    self.warn(
                        format!("unparseable {name}=`{}` on <{}>", attr.value, tag.name),
                        attr.value_span.start,
                    );
                    default
                }
            },
        }
    }

    fn nonneg_attr(&mut self, tag: &StartTag, name: &str, default: f64) -> f64 {
        let v = self.num_attr(tag, name, default);
        if v < 0.0 {
            if let Some(attr) = find_attr(tag, name) {
                self.warn(
                    format!("negative {name} on <{}>, using 0", tag.name),
                    attr.value_span.start,
                );
            }
            return 0.0;
        }
        v
    }

    fn opt_nonneg_attr(&mut self, tag: &StartTag, name: &str) -> Option<f64> {
        find_attr(tag, name)?;
        Some(self.nonneg_attr(tag, name, 0.0))
    }
}

/// Last occurrence wins, matching how browsers treat duplicate attributes.
fn find_attr<'t, 'a>(tag: &'t StartTag<'a>, name: &str) -> Option<&'t Attr<'a>> {
    tag.attrs.iter().rev().find(|a| a.name == name)
}

fn push_child(stack: &mut [Frame], node: Node) {
    match stack.last_mut() {
        Some(Frame::Root { children, .. }) | Some(Frame::Group { children, .. }) => {
            children.push(node)
        }
        _ => unreachable!("shapes and groups always have a live parent"),
    }
}

/// A transform on the root element wraps all content in one group.
fn finish_root(children: Vec<Node>, transform: AffineTransform) -> Vec<Node> {
    if transform.is_identity() {
        children
    } else {
        vec![Node::Group(Group { transform, children })]
    }
}

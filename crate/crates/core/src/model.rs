//! Document model.
//!
//! A parsed SVG is a viewport plus a tree of groups and shapes. Paint is
//! resolved at parse time (inheritance and opacity flattening happen there),
//! so every shape carries its own complete [`Paint`] and groups carry only a
//! transform. All numeric fields are finite; parsing rejects or drops
//! anything that is not.

use serde::Serialize;

use crate::geometry::{AffineTransform, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const BLACK: Rgb = Rgb::new(0, 0, 0);
    pub const WHITE: Rgb = Rgb::new(255, 255, 255);

    pub const fn new(r: u8, g: u8, b: u8) -> Rgb {
        Rgb { r, g, b }
    }

    pub fn hex(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }

    /// Alpha-composites this color over white, the only backdrop the
    /// pipeline uses.
    pub fn over_white(&self, opacity: f64) -> Rgb {
        if opacity >= 1.0 {
            return *self;
        }
        let op = opacity.clamp(0.0, 1.0);
        let blend = |c: u8| -> u8 { (op * c as f64 + (1.0 - op) * 255.0).round() as u8 };
        Rgb::new(blend(self.r), blend(self.g), blend(self.b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FillRule {
    #[default]
    NonZero,
    EvenOdd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Paint {
    /// `None` means `fill="none"`.
    pub fill: Option<Rgb>,
    pub stroke: Option<Rgb>,
    pub stroke_width: f64,
    pub fill_rule: FillRule,
}

impl Default for Paint {
    fn default() -> Paint {
        Paint {
            fill: Some(Rgb::BLACK),
            stroke: None,
            stroke_width: 1.0,
            fill_rule: FillRule::NonZero,
        }
    }
}

/// One path command. Coordinates are interpreted relative to the current
/// point when [`PathCommand::relative`] is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathOp {
    Move { to: Point },
    Line { to: Point },
    HLine { x: f64 },
    VLine { y: f64 },
    Cubic { c1: Point, c2: Point, to: Point },
    SmoothCubic { c2: Point, to: Point },
    Quad { c: Point, to: Point },
    SmoothQuad { to: Point },
    Arc { rx: f64, ry: f64, x_rotation: f64, large_arc: bool, sweep: bool, to: Point },
    Close,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathCommand {
    pub relative: bool,
    pub op: PathOp,
}

impl PathCommand {
    pub fn abs(op: PathOp) -> PathCommand {
        PathCommand { relative: false, op }
    }

    pub fn rel(op: PathOp) -> PathCommand {
        PathCommand { relative: true, op }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Path { commands: Vec<PathCommand> },
    Rect { x: f64, y: f64, width: f64, height: f64, rx: f64, ry: f64 },
    Circle { cx: f64, cy: f64, r: f64 },
    Ellipse { cx: f64, cy: f64, rx: f64, ry: f64 },
    Line { p1: Point, p2: Point },
    Polyline { points: Vec<Point> },
    Polygon { points: Vec<Point> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shape {
    pub paint: Paint,
    pub geometry: Geometry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub transform: AffineTransform,
    pub children: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Group(Group),
    Shape(Shape),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewBox {
    pub min_x: f64,
    pub min_y: f64,
    pub width: f64,
    pub height: f64,
}

impl ViewBox {
    pub fn new(min_x: f64, min_y: f64, width: f64, height: f64) -> ViewBox {
        ViewBox { min_x, min_y, width, height }
    }

    pub fn max_side(&self) -> f64 {
        self.width.max(self.height)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SvgDocument {
    pub view_box: Option<ViewBox>,
    pub width: Option<f64>,
    pub height: Option<f64>,
    pub nodes: Vec<Node>,
}

impl SvgDocument {
    /// Viewport used for geometry resolution: the explicit viewBox, else a
    /// box at the origin sized by the width/height attributes.
    pub fn resolved_view_box(&self) -> Option<ViewBox> {
        if let Some(vb) = self.view_box {
            return Some(vb);
        }
        match (self.width, self.height) {
            (Some(w), Some(h)) if w > 0.0 && h > 0.0 => Some(ViewBox::new(0.0, 0.0, w, h)),
            _ => None,
        }
    }

    /// Visits every shape in document (paint) order with the composed
    /// transform of its enclosing groups.
    pub fn visit_shapes<F: FnMut(&AffineTransform, &Shape)>(&self, f: &mut F) {
        fn walk<F: FnMut(&AffineTransform, &Shape)>(
            nodes: &[Node],
            t: &AffineTransform,
            f: &mut F,
        ) {
            for node in nodes {
                match node {
                    Node::Shape(s) => f(t, s),
                    Node::Group(g) => walk(&g.children, &t.mul(&g.transform), f),
                }
            }
        }
        walk(&self.nodes, &AffineTransform::IDENTITY, f);
    }

    /// Visits every shape mutably, passing its pre-order index. Group
    /// transforms are not composed here; mutating passes run on normalized
    /// documents where groups are identity.
    pub fn visit_shapes_mut<F: FnMut(usize, &mut Shape)>(&mut self, f: &mut F) {
        fn walk<F: FnMut(usize, &mut Shape)>(nodes: &mut [Node], next: &mut usize, f: &mut F) {
            for node in nodes {
                match node {
                    Node::Shape(s) => {
                        f(*next, s);
                        *next += 1;
                    }
                    Node::Group(g) => walk(&mut g.children, next, f),
                }
            }
        }
        let mut next = 0;
        walk(&mut self.nodes, &mut next, f);
    }

    pub fn shape_count(&self) -> usize {
        let mut n = 0;
        self.visit_shapes(&mut |_, _| n += 1);
        n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Issue {
    pub severity: Severity,
    pub message: String,
    /// Byte offset into the input text the issue refers to.
    pub offset: usize,
}

impl Issue {
    pub fn warning(message: impl Into<String>, offset: usize) -> Issue {
        Issue { severity: Severity::Warning, message: message.into(), offset }
    }

    pub fn error(message: impl Into<String>, offset: usize) -> Issue {
        Issue { severity: Severity::Error, message: message.into(), offset }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    /// True when the text parses into a drawable document.
    pub compilable: bool,
    /// True when repair had to change the text to make it parse.
    pub repaired: bool,
    pub issues: Vec<Issue>,
}

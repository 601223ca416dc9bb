//! Seeded random documents spanning the whole model surface.
//!
//! Shared by round-trip, metric, and augmentation tests, so it is gated
//! behind the `testgen` feature rather than `cfg(test)` alone. Generated
//! documents stay inside the domain that survives a serialize/parse cycle:
//! finite numbers, non-negative stroke widths, positive viewBox sides, and
//! path data that starts with a move.

use crate::geometry::{AffineTransform, Point};
use crate::model::{
    FillRule, Geometry, Group, Node, Paint, PathCommand, PathOp, Rgb, Shape, SvgDocument, ViewBox,
};
use crate::rng::{stream, SplitMix64};

pub struct DocGen {
    rng: SplitMix64,
    origin: Point,
    canvas: f64,
}

impl DocGen {
    pub fn new(seed: u64) -> DocGen {
        DocGen { rng: SplitMix64::new(seed), origin: Point::new(0.0, 0.0), canvas: 224.0 }
    }

    fn below(&mut self, n: u64) -> u64 {
        self.rng.next_below(n)
    }

    /// Uniform in [lo, hi], quantized to 1/16 so serialized text stays short.
    fn quant(&mut self, lo: f64, hi: f64) -> f64 {
        let steps = ((hi - lo) * 16.0).round().max(1.0) as u64;
        lo + self.below(steps + 1) as f64 / 16.0
    }

    fn coord_x(&mut self) -> f64 {
        let pad = self.canvas / 8.0;
        self.quant(self.origin.x - pad, self.origin.x + self.canvas + pad)
    }

    fn coord_y(&mut self) -> f64 {
        let pad = self.canvas / 8.0;
        self.quant(self.origin.y - pad, self.origin.y + self.canvas + pad)
    }

    fn point(&mut self) -> Point {
        Point::new(self.coord_x(), self.coord_y())
    }

    fn size(&mut self) -> f64 {
        self.quant(0.5, self.canvas / 2.0)
    }

    fn color(&mut self) -> Rgb {
        Rgb::new(self.below(256) as u8, self.below(256) as u8, self.below(256) as u8)
    }

    fn paint(&mut self) -> Paint {
        let fill = match self.below(8) {
            0 => None,
            1..=3 => Some(Rgb::BLACK),
            _ => Some(self.color()),
        };
        let stroke = if self.below(3) == 0 { Some(self.color()) } else { None };
        let stroke_width = match self.below(4) {
            0 => self.quant(0.0, 8.0),
            _ => 1.0,
        };
        let fill_rule = if self.below(4) == 0 { FillRule::EvenOdd } else { FillRule::NonZero };
        Paint { fill, stroke, stroke_width, fill_rule }
    }

    fn path_op(&mut self) -> PathOp {
        match self.below(9) {
            0 => PathOp::Move { to: self.point() },
            1 => PathOp::Line { to: self.point() },
            2 => PathOp::HLine { x: self.coord_x() },
            3 => PathOp::VLine { y: self.coord_y() },
            4 => PathOp::Cubic { c1: self.point(), c2: self.point(), to: self.point() },
            5 => PathOp::SmoothCubic { c2: self.point(), to: self.point() },
            6 => PathOp::Quad { c: self.point(), to: self.point() },
            7 => PathOp::SmoothQuad { to: self.point() },
            _ => PathOp::Arc {
                rx: self.quant(1.0, self.canvas / 4.0),
                ry: self.quant(1.0, self.canvas / 4.0),
                x_rotation: self.quant(-90.0, 90.0),
                large_arc: self.below(2) == 0,
                sweep: self.below(2) == 0,
                to: self.point(),
            },
        }
    }

    fn command(&mut self, op: PathOp) -> PathCommand {
        if self.below(3) == 0 {
            PathCommand::rel(op)
        } else {
            PathCommand::abs(op)
        }
    }

    fn path_commands(&mut self) -> Vec<PathCommand> {
        let first = PathOp::Move { to: self.point() };
        let mut cmds = vec![self.command(first)];
        for _ in 0..1 + self.below(9) {
            let op = self.path_op();
            cmds.push(self.command(op));
        }
        if self.below(2) == 0 {
            cmds.push(self.command(PathOp::Close));
        }
        cmds
    }

    fn points(&mut self, min: u64) -> Vec<Point> {
        (0..min + self.below(6)).map(|_| self.point()).collect()
    }

    fn geometry(&mut self) -> Geometry {
        match self.below(12) {
            0..=2 => Geometry::Path { commands: self.path_commands() },
            3..=4 => {
                let (rx, ry) = match self.below(3) {
                    0 => (0.0, 0.0),
                    1 => {
                        let r = self.quant(0.5, self.canvas / 16.0);
                        (r, r)
                    }
                    _ => (self.quant(0.0, self.canvas / 16.0), self.quant(0.5, self.canvas / 16.0)),
                };
                Geometry::Rect {
                    x: self.coord_x(),
                    y: self.coord_y(),
                    width: self.size(),
                    height: self.size(),
                    rx,
                    ry,
                }
            }
            5..=6 => {
                // cx = 0 sometimes, to exercise default-value omission.
                let cx = if self.below(8) == 0 { 0.0 } else { self.coord_x() };
                Geometry::Circle { cx, cy: self.coord_y(), r: self.size() / 2.0 }
            }
            7 => Geometry::Ellipse {
                cx: self.coord_x(),
                cy: self.coord_y(),
                rx: self.size() / 2.0,
                ry: self.size() / 2.0,
            },
            8 => Geometry::Line { p1: self.point(), p2: self.point() },
            9 => Geometry::Polyline { points: self.points(2) },
            _ => Geometry::Polygon { points: self.points(3) },
        }
    }

    fn transform(&mut self) -> AffineTransform {
        let center_x = self.origin.x + self.canvas / 2.0;
        let center_y = self.origin.y + self.canvas / 2.0;
        match self.below(8) {
            0..=2 => AffineTransform::IDENTITY,
            3 => {
                let range = self.canvas / 8.0;
                AffineTransform::translate(
                    self.quant(-range, range),
                    self.quant(-range, range),
                )
            }
            4 => {
                let s = self.quant(0.5, 1.5).max(0.25);
                AffineTransform::scale(s, s)
            }
            5 => AffineTransform::rotate_deg_about(
                self.quant(-180.0, 180.0),
                center_x,
                center_y,
            ),
            6 => AffineTransform::scale(self.quant(0.5, 1.5).max(0.25), self.quant(0.5, 1.5).max(0.25)),
            _ => AffineTransform::new(
                self.quant(0.5, 1.5).max(0.25),
                self.quant(-0.25, 0.25),
                self.quant(-0.25, 0.25),
                self.quant(0.5, 1.5).max(0.25),
                self.quant(-16.0, 16.0),
                self.quant(-16.0, 16.0),
            ),
        }
    }

    fn shape(&mut self) -> Shape {
        Shape { paint: self.paint(), geometry: self.geometry() }
    }

    fn node(&mut self, depth: u32) -> Node {
        if depth < 2 && self.below(4) == 0 {
            let transform = self.transform();
            let children = (0..self.below(4)).map(|_| self.node(depth + 1)).collect();
            Node::Group(Group { transform, children })
        } else {
            Node::Shape(self.shape())
        }
    }

    pub fn document(&mut self) -> SvgDocument {
        let view_box = if self.below(8) == 0 {
            let w = self.quant(16.0, 512.0).max(1.0);
            let h = self.quant(16.0, 512.0).max(1.0);
            ViewBox::new(self.quant(-64.0, 64.0), self.quant(-64.0, 64.0), w, h)
        } else {
            ViewBox::new(0.0, 0.0, 224.0, 224.0)
        };
        self.origin = Point::new(view_box.min_x, view_box.min_y);
        self.canvas = view_box.max_side();
        let (width, height) = if self.below(4) == 0 {
            (Some(view_box.width), Some(view_box.height))
        } else {
            (None, None)
        };
        let nodes = (0..1 + self.below(8)).map(|_| self.node(0)).collect();
        SvgDocument { view_box: Some(view_box), width, height, nodes }
    }
}

/// The i-th document of a seeded family. Independent of generation order.
pub fn document(seed: u64, index: u64) -> SvgDocument {
    DocGen::new(stream(seed, &[index])).document()
}

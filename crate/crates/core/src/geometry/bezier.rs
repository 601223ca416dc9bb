//! Cubic Bezier curves, degree elevation, and elliptical arc conversion.

use super::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicBezier {
    pub p0: Point,
    pub p1: Point,
    pub p2: Point,
    pub p3: Point,
}

const MAX_FLATTEN_DEPTH: u32 = 24;

impl CubicBezier {
    pub fn new(p0: Point, p1: Point, p2: Point, p3: Point) -> CubicBezier {
        CubicBezier { p0, p1, p2, p3 }
    }

    /// Straight segment as a degenerate cubic with controls on the chord.
    pub fn line(p0: Point, p3: Point) -> CubicBezier {
        CubicBezier::new(p0, p0.lerp(p3, 1.0 / 3.0), p0.lerp(p3, 2.0 / 3.0), p3)
    }

    pub fn eval(&self, t: f64) -> Point {
        let u = 1.0 - t;
        let w0 = u * u * u;
        let w1 = 3.0 * u * u * t;
        let w2 = 3.0 * u * t * t;
        let w3 = t * t * t;
        Point::new(
            w0 * self.p0.x + w1 * self.p1.x + w2 * self.p2.x + w3 * self.p3.x,
            w0 * self.p0.y + w1 * self.p1.y + w2 * self.p2.y + w3 * self.p3.y,
        )
    }

    /// de Casteljau subdivision at parameter `t`.
    pub fn split(&self, t: f64) -> (CubicBezier, CubicBezier) {
        let p01 = self.p0.lerp(self.p1, t);
        let p12 = self.p1.lerp(self.p2, t);
        let p23 = self.p2.lerp(self.p3, t);
        let p012 = p01.lerp(p12, t);
        let p123 = p12.lerp(p23, t);
        let mid = p012.lerp(p123, t);
        (
            CubicBezier::new(self.p0, p01, p012, mid),
            CubicBezier::new(mid, p123, p23, self.p3),
        )
    }

    /// True when both interior controls lie within `tol` of the chord
    /// segment. The curve lives in the control hull, so this bounds its
    /// deviation from the chord.
    fn flat_enough(&self, tol: f64) -> bool {
        let t2 = tol * tol;
        dist_sq_to_segment(self.p1, self.p0, self.p3) <= t2
            && dist_sq_to_segment(self.p2, self.p0, self.p3) <= t2
    }

    /// Appends the flattened polyline, excluding `p0` (the caller's current
    /// point), including `p3`.
    pub fn flatten_into(&self, tol: f64, out: &mut Vec<Point>) {
        fn rec(c: &CubicBezier, tol: f64, depth: u32, out: &mut Vec<Point>) {
            if depth >= MAX_FLATTEN_DEPTH || c.flat_enough(tol) {
                out.push(c.p3);
                return;
            }
            let (l, r) = c.split(0.5);
            rec(&l, tol, depth + 1, out);
            rec(&r, tol, depth + 1, out);
        }
        rec(self, tol.max(1e-9), 0, out);
    }

    pub fn flatten(&self, tol: f64) -> Vec<Point> {
        let mut pts = vec![self.p0];
        self.flatten_into(tol, &mut pts);
        pts
    }

    /// Like [`flatten`](Self::flatten) but records the curve parameter of
    /// every output point. Subdivision keeps each emitted point an exact
    /// curve point, so `eval(t)` reproduces it to rounding error.
    pub fn flatten_with_params(&self, tol: f64) -> Vec<(f64, Point)> {
        fn rec(
            c: &CubicBezier,
            t0: f64,
            t1: f64,
            tol: f64,
            depth: u32,
            out: &mut Vec<(f64, Point)>,
        ) {
            if depth >= MAX_FLATTEN_DEPTH || c.flat_enough(tol) {
                out.push((t1, c.p3));
                return;
            }
            let tm = (t0 + t1) / 2.0;
            let (l, r) = c.split(0.5);
            rec(&l, t0, tm, tol, depth + 1, out);
            rec(&r, tm, t1, tol, depth + 1, out);
        }
        let mut pts = vec![(0.0, self.p0)];
        rec(self, 0.0, 1.0, tol.max(1e-9), 0, &mut pts);
        pts
    }
}

fn dist_sq_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len_sq = ab.dot(ab);
    if len_sq == 0.0 {
        return p.distance_sq(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.distance_sq(a + ab * t)
}

/// Exact degree elevation of a quadratic Bezier.
pub fn quad_to_cubic(p0: Point, c: Point, p2: Point) -> CubicBezier {
    let c1 = p0 + (c - p0) * (2.0 / 3.0);
    let c2 = p2 + (c - p2) * (2.0 / 3.0);
    CubicBezier::new(p0, c1, c2, p2)
}

/// Converts an SVG elliptical arc (endpoint parameterization) to cubic
/// segments spanning at most a quarter turn each.
///
/// Coincident endpoints draw nothing (empty result); a zero radius
/// degenerates to a straight line, returned as one line-shaped cubic.
pub fn arc_to_cubics(
    start: Point,
    rx: f64,
    ry: f64,
    x_rotation_deg: f64,
    large_arc: bool,
    sweep: bool,
    end: Point,
) -> Vec<CubicBezier> {
    if start == end {
        return Vec::new();
    }
    let mut rx = rx.abs();
    let mut ry = ry.abs();
    if rx == 0.0 || ry == 0.0 {
        return vec![CubicBezier::line(start, end)];
    }

    let phi = x_rotation_deg.to_radians();
    let (sin_phi, cos_phi) = phi.sin_cos();

    // Midpoint form: rotate the chord into the ellipse frame.
    let hx = (start.x - end.x) / 2.0;
    let hy = (start.y - end.y) / 2.0;
    let x1p = cos_phi * hx + sin_phi * hy;
    let y1p = -sin_phi * hx + cos_phi * hy;

    // Radii too small to span the chord get scaled up to the limit case.
    let lambda = (x1p * x1p) / (rx * rx) + (y1p * y1p) / (ry * ry);
    if lambda > 1.0 {
        let s = lambda.sqrt();
        rx *= s;
        ry *= s;
    }

    let rx_sq = rx * rx;
    let ry_sq = ry * ry;
    let num = rx_sq * ry_sq - rx_sq * y1p * y1p - ry_sq * x1p * x1p;
    let den = rx_sq * y1p * y1p + ry_sq * x1p * x1p;
    let mut coef = (num.max(0.0) / den).sqrt();
    if large_arc == sweep {
        coef = -coef;
    }
    let cxp = coef * rx * y1p / ry;
    let cyp = -coef * ry * x1p / rx;

    let mx = (start.x + end.x) / 2.0;
    let my = (start.y + end.y) / 2.0;
    let cx = cos_phi * cxp - sin_phi * cyp + mx;
    let cy = sin_phi * cxp + cos_phi * cyp + my;

    let angle = |ux: f64, uy: f64, vx: f64, vy: f64| -> f64 {
        (ux * vy - uy * vx).atan2(ux * vx + uy * vy)
    };
    let ux = (x1p - cxp) / rx;
    let uy = (y1p - cyp) / ry;
    let vx = (-x1p - cxp) / rx;
    let vy = (-y1p - cyp) / ry;
    let theta1 = angle(1.0, 0.0, ux, uy);
    let mut delta = angle(ux, uy, vx, vy);
    if !sweep && delta > 0.0 {
        delta -= std::f64::consts::TAU;
    } else if sweep && delta < 0.0 {
        delta += std::f64::consts::TAU;
    }

    let n_segs = (delta.abs() / std::f64::consts::FRAC_PI_2).ceil().max(1.0) as usize;
    let seg_delta = delta / n_segs as f64;
    // Tangent length for a cubic approximating an arc of sweep `seg_delta`.
    let alpha = 4.0 / 3.0 * (seg_delta / 4.0).tan();

    let ellipse_point = |theta: f64| -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(
            cx + rx * c * cos_phi - ry * s * sin_phi,
            cy + rx * c * sin_phi + ry * s * cos_phi,
        )
    };
    let ellipse_tangent = |theta: f64| -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(-rx * s * cos_phi - ry * c * sin_phi, -rx * s * sin_phi + ry * c * cos_phi)
    };

    let mut out = Vec::with_capacity(n_segs);
    let mut p_start = start;
    for i in 0..n_segs {
        let ta = theta1 + seg_delta * i as f64;
        let tb = ta + seg_delta;
        // Pin the shared endpoints so chains stay watertight.
        let p_end = if i + 1 == n_segs { end } else { ellipse_point(tb) };
        let c1 = p_start + ellipse_tangent(ta) * alpha;
        let c2 = p_end - ellipse_tangent(tb) * alpha;
        out.push(CubicBezier::new(p_start, c1, c2, p_end));
        p_start = p_end;
    }
    out
}

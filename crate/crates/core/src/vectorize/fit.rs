//! Closed-polygon simplification and cubic Bézier fitting.

use crate::geometry::Point;
use crate::model::{PathCommand, PathOp};

use super::contour::Contour;
use super::VectorizeConfig;

fn dist_sq_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.distance_sq(a);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.distance_sq(a.lerp(b, t))
}

/// Ramer-Douglas-Peucker over an open chain; keeps endpoints, returns the
/// surviving points including both endpoints.
fn rdp(pts: &[Point], epsilon: f64, out: &mut Vec<Point>) {
    fn recurse(pts: &[Point], epsilon: f64, out: &mut Vec<Point>) {
        if pts.len() <= 2 {
            return;
        }
        let (a, b) = (pts[0], pts[pts.len() - 1]);
        let mut best = 0.0;
        let mut best_i = 0;
        for (i, &p) in pts.iter().enumerate().skip(1).take(pts.len() - 2) {
            let d = dist_sq_to_segment(p, a, b);
            if d > best {
                best = d;
                best_i = i;
            }
        }
        if best > epsilon * epsilon {
            recurse(&pts[..=best_i], epsilon, out);
            out.push(pts[best_i]);
            recurse(&pts[best_i..], epsilon, out);
        }
    }
    out.clear();
    out.push(pts[0]);
    recurse(pts, epsilon, out);
    out.push(pts[pts.len() - 1]);
}

/// Simplifies a closed loop: splits it at its two mutually farthest points
/// and runs RDP on each half, so the loop has stable anchors. Every
/// discarded point lies within `epsilon` of the output outline; the result
/// keeps at least 3 points.
pub fn simplify_polygon(contour: &Contour, epsilon: f64) -> Contour {
    let pts = &contour.points;
    let n = pts.len();
    if n <= 3 {
        return contour.clone();
    }
    let (mut ai, mut bi, mut best) = (0, 0, -1.0);
    for i in 0..n {
        for j in i + 1..n {
            let d = pts[i].distance_sq(pts[j]);
            if d > best {
                best = d;
                ai = i;
                bi = j;
            }
        }
    }
    let first: Vec<Point> = (ai..=bi).map(|i| pts[i]).collect();
    let second: Vec<Point> = (bi..=ai + n).map(|i| pts[i % n]).collect();
    let mut half1 = Vec::new();
    let mut half2 = Vec::new();
    rdp(&first, epsilon, &mut half1);
    rdp(&second, epsilon, &mut half2);
    let mut points = half1;
    points.extend_from_slice(&half2[1..half2.len() - 1]);
    if points.len() < 3 {
        // Fully collapsed loop: keep the farthest pair plus the point with
        // the largest deviation from their chord, so triangles and slivers
        // survive any epsilon unchanged in shape.
        let (a, b) = (pts[ai], pts[bi]);
        let extra = pts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != ai && i != bi)
            .max_by(|(_, p), (_, q)| {
                dist_sq_to_segment(**p, a, b)
                    .partial_cmp(&dist_sq_to_segment(**q, a, b))
                    .unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        let mut idx = [ai, bi, extra];
        idx.sort_unstable();
        points = idx.iter().map(|&i| pts[i]).collect();
    }
    Contour { points, is_hole: contour.is_hole }
}

fn eval_cubic(b: &[Point; 4], t: f64) -> Point {
    let s = 1.0 - t;
    b[0] * (s * s * s)
        + b[1] * (3.0 * s * s * t)
        + b[2] * (3.0 * s * t * t)
        + b[3] * (t * t * t)
}

fn cubic_deriv1(b: &[Point; 4], t: f64) -> Point {
    let s = 1.0 - t;
    (b[1] - b[0]) * (3.0 * s * s) + (b[2] - b[1]) * (6.0 * s * t) + (b[3] - b[2]) * (3.0 * t * t)
}

fn cubic_deriv2(b: &[Point; 4], t: f64) -> Point {
    let s = 1.0 - t;
    (b[2] - b[1] * 2.0 + b[0]) * (6.0 * s) + (b[3] - b[2] * 2.0 + b[1]) * (6.0 * t)
}

fn normalize(v: Point) -> Point {
    let len = v.dot(v).sqrt();
    if len == 0.0 {
        Point::new(0.0, 0.0)
    } else {
        v * (1.0 / len)
    }
}

/// Least-squares cubic through fixed endpoints with fixed tangent
/// directions; chord-length parameterization with Newton refinement and
/// recursive splitting until the squared vertex error is within budget.
struct BezierFitter<'a> {
    pts: &'a [Point],
    max_err_sq: f64,
    out: Vec<[Point; 4]>,
}

const MAX_NEWTON_ITERS: usize = 4;

impl<'a> BezierFitter<'a> {
    fn fit(pts: &'a [Point], t_start: Point, t_end: Point, max_err_sq: f64) -> Vec<[Point; 4]> {
        let mut f = BezierFitter { pts, max_err_sq, out: Vec::new() };
        f.fit_range(0, pts.len() - 1, t_start, t_end);
        f.out
    }

    fn chord_params(&self, lo: usize, hi: usize) -> Vec<f64> {
        let mut u = vec![0.0; hi - lo + 1];
        for i in lo + 1..=hi {
            u[i - lo] = u[i - lo - 1] + self.pts[i].distance_sq(self.pts[i - 1]).sqrt();
        }
        let total = u[hi - lo];
        if total > 0.0 {
            for v in u.iter_mut() {
                *v /= total;
            }
        }
        u
    }

    fn fit_range(&mut self, lo: usize, hi: usize, t_start: Point, t_end: Point) {
        if hi - lo == 1 {
            self.out.push(line_as_cubic(self.pts[lo], self.pts[hi]));
            return;
        }
        let mut u = self.chord_params(lo, hi);
        let mut bez = self.generate(lo, hi, &u, t_start, t_end);
        let (mut err, mut split) = self.max_error(lo, hi, &bez, &u);
        if err <= self.max_err_sq {
            self.out.push(bez);
            return;
        }
        // Worth refining only while the error is in reach of a better
        // parameterization.
        if err <= self.max_err_sq * 16.0 {
            for _ in 0..MAX_NEWTON_ITERS {
                for (i, v) in u.iter_mut().enumerate() {
                    *v = newton_step(&bez, self.pts[lo + i], *v);
                }
                for i in 1..u.len() {
                    // A non-monotonic reparameterization means the fit is
                    // unusable; splitting handles it.
                    if u[i] < u[i - 1] {
                        u = self.chord_params(lo, hi);
                        break;
                    }
                }
                bez = self.generate(lo, hi, &u, t_start, t_end);
                let (e, s) = self.max_error(lo, hi, &bez, &u);
                err = e;
                split = s;
                if err <= self.max_err_sq {
                    self.out.push(bez);
                    return;
                }
            }
        }
        let split = split.clamp(lo + 1, hi - 1);
        let center = self.center_tangent(split);
        self.fit_range(lo, split, t_start, center);
        self.fit_range(split, hi, center * -1.0, t_end);
    }

    /// Closed-form least squares for the two inner control point distances
    /// along the endpoint tangents.
    fn generate(&self, lo: usize, hi: usize, u: &[f64], t1: Point, t2: Point) -> [Point; 4] {
        let (p0, p3) = (self.pts[lo], self.pts[hi]);
        let mut c = [[0.0f64; 2]; 2];
        let mut x = [0.0f64; 2];
        for (i, &ui) in u.iter().enumerate() {
            let s = 1.0 - ui;
            let b1 = 3.0 * s * s * ui;
            let b2 = 3.0 * s * ui * ui;
            let a1 = t1 * b1;
            let a2 = t2 * b2;
            c[0][0] += a1.dot(a1);
            c[0][1] += a1.dot(a2);
            c[1][1] += a2.dot(a2);
            let base = p0 * (s * s * s + b1) + p3 * (ui * ui * ui + b2);
            let tmp = self.pts[lo + i] - base;
            x[0] += a1.dot(tmp);
            x[1] += a2.dot(tmp);
        }
        c[1][0] = c[0][1];
        let det_c = c[0][0] * c[1][1] - c[0][1] * c[1][0];
        let (mut alpha1, mut alpha2) = (0.0, 0.0);
        if det_c.abs() > 1e-12 {
            alpha1 = (x[0] * c[1][1] - x[1] * c[0][1]) / det_c;
            alpha2 = (c[0][0] * x[1] - c[1][0] * x[0]) / det_c;
        }
        let seg_len = p0.distance_sq(p3).sqrt();
        let eps = 1e-6 * seg_len;
        if alpha1 <= eps || alpha2 <= eps {
            // Degenerate system: fall back to uniform thirds.
            alpha1 = seg_len / 3.0;
            alpha2 = alpha1;
        }
        [p0, p0 + t1 * alpha1, p3 + t2 * alpha2, p3]
    }

    /// Worst squared deviation between curve and polyline. Checked at the
    /// data params and at intermediate params against the polyline segment,
    /// so a curve cannot bulge away between sparse samples.
    fn max_error(&self, lo: usize, hi: usize, bez: &[Point; 4], u: &[f64]) -> (f64, usize) {
        let mut worst = 0.0;
        let mut at = (lo + hi) / 2;
        for (i, &ui) in u.iter().enumerate() {
            let d = eval_cubic(bez, ui).distance_sq(self.pts[lo + i]);
            if d > worst {
                worst = d;
                at = lo + i;
            }
            if i + 1 == u.len() {
                continue;
            }
            let (a, b) = (self.pts[lo + i], self.pts[lo + i + 1]);
            for step in 1..4 {
                let um = ui + (u[i + 1] - ui) * step as f64 / 4.0;
                let d = dist_sq_to_segment(eval_cubic(bez, um), a, b);
                if d > worst {
                    worst = d;
                    at = lo + i + 1;
                }
            }
        }
        (worst, at)
    }

    fn center_tangent(&self, i: usize) -> Point {
        let prev = self.pts[i - 1];
        let next = self.pts[i + 1];
        normalize(prev - next)
    }
}

fn newton_step(bez: &[Point; 4], p: Point, u: f64) -> f64 {
    let q = eval_cubic(bez, u) - p;
    let d1 = cubic_deriv1(bez, u);
    let d2 = cubic_deriv2(bez, u);
    let denom = d1.dot(d1) + q.dot(d2);
    if denom.abs() < 1e-12 {
        return u;
    }
    (u - q.dot(d1) / denom).clamp(0.0, 1.0)
}

fn line_as_cubic(a: Point, b: Point) -> [Point; 4] {
    [a, a.lerp(b, 1.0 / 3.0), a.lerp(b, 2.0 / 3.0), b]
}

fn is_line(bez: &[Point; 4]) -> bool {
    bez[1] == bez[0].lerp(bez[3], 1.0 / 3.0) && bez[2] == bez[0].lerp(bez[3], 2.0 / 3.0)
}

/// Converts a simplified closed polygon to path commands. Vertices whose
/// turn angle exceeds the corner threshold become fixed anchors; the chains
/// between anchors are fitted with cubics (straight chains emit lines).
/// Output is `Move`, then `Cubic`/`Line` segments, then `Close`.
pub fn fit_beziers(polygon: &Contour, config: &VectorizeConfig) -> Vec<PathCommand> {
    let pts = &polygon.points;
    let n = pts.len();
    assert!(n >= 3, "fit_beziers needs a closed polygon");
    let threshold_cos = (config.corner_angle_deg.to_radians()).cos();
    let mut corners: Vec<usize> = Vec::new();
    for i in 0..n {
        let a = normalize(pts[i] - pts[(i + n - 1) % n]);
        let b = normalize(pts[(i + 1) % n] - pts[i]);
        // turn angle > threshold <=> cos(turn) < cos(threshold)
        if a.dot(b) < threshold_cos {
            corners.push(i);
        }
    }

    let mut segments: Vec<[Point; 4]> = Vec::new();
    if corners.is_empty() {
        // Smooth closed loop: fit the whole cycle anchored at point 0 with
        // a shared tangent so the seam stays smooth.
        let chain: Vec<Point> = pts.iter().copied().chain([pts[0]]).collect();
        let t = normalize(pts[1] - pts[n - 1]);
        segments.extend(BezierFitter::fit(&chain, t, t * -1.0, config.fit_error));
    } else {
        for (k, &c0) in corners.iter().enumerate() {
            let c1 = corners[(k + 1) % corners.len()];
            let span = if c1 > c0 { c1 - c0 } else { c1 + n - c0 };
            let chain: Vec<Point> = (c0..=c0 + span).map(|i| pts[i % n]).collect();
            if chain.len() == 2 || chain_is_straight(&chain) {
                segments.push(line_as_cubic(chain[0], chain[chain.len() - 1]));
                continue;
            }
            let t1 = normalize(chain[1] - chain[0]);
            let t2 = normalize(chain[chain.len() - 2] - chain[chain.len() - 1]);
            segments.extend(BezierFitter::fit(&chain, t1, t2, config.fit_error));
        }
    }

    let mut out = Vec::with_capacity(segments.len() + 2);
    out.push(PathCommand::abs(PathOp::Move { to: segments[0][0] }));
    for seg in &segments {
        if is_line(seg) {
            out.push(PathCommand::abs(PathOp::Line { to: seg[3] }));
        } else {
            out.push(PathCommand::abs(PathOp::Cubic { c1: seg[1], c2: seg[2], to: seg[3] }));
        }
    }
    out.push(PathCommand::abs(PathOp::Close));
    out
}

fn chain_is_straight(chain: &[Point]) -> bool {
    let (a, b) = (chain[0], chain[chain.len() - 1]);
    chain[1..chain.len() - 1]
        .iter()
        .all(|&p| dist_sq_to_segment(p, a, b) < 1e-18)
}

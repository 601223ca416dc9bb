//! Binary masks and boundary tracing on the pixel-corner lattice.

use crate::geometry::Point;

use super::VectorizeError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub width: usize,
    pub height: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Mask {
        Mask { width, height, bits: vec![false; width * height] }
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    fn at(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return false;
        }
        self.bits[y as usize * self.width + x as usize]
    }
}

/// A closed boundary loop on pixel corners. Outer boundaries have positive
/// shoelace area in image coordinates; holes are negative.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub points: Vec<Point>,
    pub is_hole: bool,
}

impl Contour {
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }
}

pub fn signed_area(pts: &[Point]) -> f64 {
    let mut a = 0.0;
    for i in 0..pts.len() {
        let p = pts[i];
        let q = pts[(i + 1) % pts.len()];
        a += p.cross(q);
    }
    a / 2.0
}

const DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Crack following: every exposed pixel edge becomes a directed segment
/// with the foreground on its right (screen sense, y down); stitching the
/// segments yields one outer loop per connected region and one loop per
/// hole, with opposite orientations. The union of all loops under even-odd
/// filling reproduces the mask exactly.
pub fn trace_contours(mask: &Mask) -> Result<Vec<Contour>, VectorizeError> {
    let (w, h) = (mask.width as i64, mask.height as i64);
    let corners_w = (w + 1) as usize;
    // outgoing[corner][dir] marks an unconsumed directed edge.
    let corner_id = |x: i64, y: i64| (y as usize) * corners_w + x as usize;
    let mut outgoing = vec![[false; 4]; corners_w * (h as usize + 1)];

    for y in 0..h {
        for x in 0..w {
            if !mask.at(x, y) {
                continue;
            }
            if !mask.at(x, y - 1) {
                outgoing[corner_id(x, y)][0] = true; // top edge, +x
            }
            if !mask.at(x + 1, y) {
                outgoing[corner_id(x + 1, y)][1] = true; // right edge, +y
            }
            if !mask.at(x, y + 1) {
                outgoing[corner_id(x + 1, y + 1)][2] = true; // bottom, -x
            }
            if !mask.at(x - 1, y) {
                outgoing[corner_id(x, y + 1)][3] = true; // left edge, -y
            }
        }
    }
    if outgoing.iter().all(|d| !d.iter().any(|&b| b)) {
        return Err(VectorizeError::EmptyMask);
    }

    let mut contours = Vec::new();
    for start_corner in 0..outgoing.len() {
        for start_dir in 0..4 {
            if !outgoing[start_corner][start_dir] {
                continue;
            }
            let mut loop_pts: Vec<(i64, i64)> = Vec::new();
            let mut cx = (start_corner % corners_w) as i64;
            let mut cy = (start_corner / corners_w) as i64;
            let mut dir = start_dir;
            loop {
                outgoing[corner_id(cx, cy)][dir] = false;
                loop_pts.push((cx, cy));
                cx += DIRS[dir].0;
                cy += DIRS[dir].1;
                // Prefer the right turn, then straight, then left: hugs the
                // region at saddle corners so loops never self-cross. Every
                // corner has equal in and out degree, so the walk can only
                // run out of edges back at the start corner.
                let here = &outgoing[corner_id(cx, cy)];
                let next_dir = [(dir + 1) % 4, dir, (dir + 3) % 4]
                    .into_iter()
                    .find(|&d| here[d]);
                match next_dir {
                    Some(d) => dir = d,
                    None => break,
                }
            }
            debug_assert_eq!((cx, cy), ((start_corner % corners_w) as i64, (start_corner / corners_w) as i64));
            let points = collapse_collinear(&loop_pts);
            let is_hole = signed_area(&points) < 0.0;
            contours.push(Contour { points, is_hole });
        }
    }
    Ok(contours)
}

/// Drops interior points of straight runs (all segments are axis-aligned,
/// so a point is redundant when its neighbors share its x or its y).
fn collapse_collinear(pts: &[(i64, i64)]) -> Vec<Point> {
    let n = pts.len();
    let mut out = Vec::new();
    for i in 0..n {
        let prev = pts[(i + n - 1) % n];
        let cur = pts[i];
        let next = pts[(i + 1) % n];
        let straight = (prev.0 == cur.0 && cur.0 == next.0) || (prev.1 == cur.1 && cur.1 == next.1);
        if !straight {
            out.push(Point::new(cur.0 as f64, cur.1 as f64));
        }
    }
    out
}

/// Even-odd refill of a contour set at pixel centers; the oracle for
/// tracing exactness.
pub fn refill(contours: &[Contour], width: usize, height: usize) -> Mask {
    let mut mask = Mask::new(width, height);
    for y in 0..height {
        let cy = y as f64 + 0.5;
        let mut crossings: Vec<f64> = Vec::new();
        for c in contours {
            let n = c.points.len();
            for i in 0..n {
                let a = c.points[i];
                let b = c.points[(i + 1) % n];
                if a.y == b.y {
                    continue;
                }
                let (ymin, ymax) = (a.y.min(b.y), a.y.max(b.y));
                if ymin <= cy && cy < ymax {
                    crossings.push(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
                }
            }
        }
        crossings.sort_by(|p, q| p.partial_cmp(q).unwrap());
        for pair in crossings.chunks_exact(2) {
            let x0 = (pair[0] - 0.5).ceil().max(0.0) as usize;
            let x1 = ((pair[1] - 0.5).ceil().max(0.0) as usize).min(width);
            for x in x0..x1 {
                mask.set(x, y, true);
            }
        }
    }
    mask
}

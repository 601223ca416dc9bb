//! Chamfer distance over outline point samples.

use crate::geometry::{sample_points, GeometryError, Point};
use crate::model::SvgDocument;

use super::MetricError;

/// Symmetric Chamfer distance: the mean squared nearest-neighbor distance
/// from a into b, plus the same from b into a.
pub fn chamfer(a: &SvgDocument, b: &SvgDocument, step: f64) -> Result<f64, MetricError> {
    let from_err = |e: GeometryError| match e {
        GeometryError::EmptyGeometry => MetricError::EmptyGeometry,
    };
    let pa = sample_points(a, step).map_err(from_err)?;
    let pb = sample_points(b, step).map_err(from_err)?;
    debug_assert_eq!(pa.frame, pb.frame, "documents sampled in different frames");
    Ok(chamfer_points(&pa.points, &pb.points))
}

/// Point-set form of the distance. Both sets must be non-empty.
pub fn chamfer_points(a: &[Point], b: &[Point]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "point sets must be non-empty");
    directional(a, b) + directional(b, a)
}

fn directional(from: &[Point], to: &[Point]) -> f64 {
    let tree = KdTree::build(to.to_vec());
    let sum: f64 = from.iter().map(|&p| tree.nearest_sq(p)).sum();
    sum / from.len() as f64
}

/// Static 2-d tree: the point slice is reordered so each subrange's median
/// (on the depth's axis) sits at its midpoint.
pub struct KdTree {
    pts: Vec<Point>,
}

impl KdTree {
    pub fn build(mut pts: Vec<Point>) -> KdTree {
        fn split(s: &mut [Point], axis: usize) {
            if s.len() < 2 {
                return;
            }
            let mid = s.len() / 2;
            let key = |p: &Point| if axis == 0 { p.x } else { p.y };
            s.select_nth_unstable_by(mid, |a, b| key(a).partial_cmp(&key(b)).unwrap());
            split(&mut s[..mid], axis ^ 1);
            let upper = mid + 1;
            split(&mut s[upper..], axis ^ 1);
        }
        split(&mut pts, 0);
        KdTree { pts }
    }

    /// Squared distance to the nearest stored point.
    pub fn nearest_sq(&self, q: Point) -> f64 {
        assert!(!self.pts.is_empty(), "empty tree");
        let mut best = f64::INFINITY;
        self.search(&self.pts, 0, q, &mut best);
        best
    }

    fn search(&self, s: &[Point], axis: usize, q: Point, best: &mut f64) {
        if s.is_empty() {
            return;
        }
        let mid = s.len() / 2;
        let node = s[mid];
        let d = q.distance_sq(node);
        if d < *best {
            *best = d;
        }
        let gap = if axis == 0 { q.x - node.x } else { q.y - node.y };
        let (near, far) = if gap < 0.0 {
            (&s[..mid], &s[mid + 1..])
        } else {
            (&s[mid + 1..], &s[..mid])
        };
        self.search(near, axis ^ 1, q, best);
        if gap * gap < *best {
            self.search(far, axis ^ 1, q, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Geometry, Node, Paint, Shape, ViewBox};

    fn brute_nearest_sq(q: Point, pts: &[Point]) -> f64 {
        pts.iter().map(|&p| q.distance_sq(p)).fold(f64::INFINITY, f64::min)
    }

    fn lcg_points(seed: u64, n: usize, scale: f64) -> Vec<Point> {
        let mut x = seed | 1;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (x >> 11) as f64 / (1u64 << 53) as f64 * scale
        };
        (0..n).map(|_| Point::new(next(), next())).collect()
    }

    #[test]
    fn single_point_pair() {
        assert_eq!(chamfer_points(&[Point::ZERO], &[Point::new(3.0, 4.0)]), 50.0);
    }

    #[test]
    fn asymmetric_sizes_average_per_direction() {
        let a = [Point::ZERO, Point::new(1.0, 0.0)];
        let b = [Point::ZERO];
        assert_eq!(chamfer_points(&a, &b), 0.5);
        assert_eq!(chamfer_points(&b, &a), 0.5);
    }

    #[test]
    fn self_distance_is_zero() {
        let pts = lcg_points(7, 100, 224.0);
        assert_eq!(chamfer_points(&pts, &pts), 0.0);
    }

    #[test]
    fn tree_matches_brute_force() {
        for seed in [1u64, 2, 3] {
            let stored = lcg_points(seed, 500, 224.0);
            let queries = lcg_points(seed.wrapping_mul(99991), 200, 260.0);
            let tree = KdTree::build(stored.clone());
            for q in queries {
                let got = tree.nearest_sq(q);
                let want = brute_nearest_sq(q, &stored);
                assert!(
                    (got - want).abs() <= 1e-9 * want.max(1.0),
                    "query {q:?}: tree {got}, brute {want}"
                );
            }
        }
    }

    #[test]
    fn chamfer_points_matches_brute_force_definition() {
        let a = lcg_points(11, 300, 224.0);
        let b = lcg_points(12, 450, 224.0);
        let dir = |from: &[Point], to: &[Point]| {
            from.iter().map(|&p| brute_nearest_sq(p, to)).sum::<f64>() / from.len() as f64
        };
        let want = dir(&a, &b) + dir(&b, &a);
        let got = chamfer_points(&a, &b);
        assert!((got - want).abs() <= 1e-9 * want.max(1.0));
    }

    #[test]
    fn symmetry() {
        let a = lcg_points(5, 120, 224.0);
        let b = lcg_points(6, 80, 224.0);
        let ab = chamfer_points(&a, &b);
        let ba = chamfer_points(&b, &a);
        assert!((ab - ba).abs() <= 1e-9 * ab.max(1.0));
    }

    #[test]
    fn duplicate_points_are_fine() {
        let a = vec![Point::new(1.0, 1.0); 50];
        let b = vec![Point::new(4.0, 5.0); 3];
        assert_eq!(chamfer_points(&a, &b), 50.0);
    }

    fn square_doc(origin: f64) -> SvgDocument {
        SvgDocument {
            view_box: Some(ViewBox::new(0.0, 0.0, 224.0, 224.0)),
            nodes: vec![Node::Shape(Shape {
                paint: Paint::default(),
                geometry: Geometry::Rect {
                    x: origin,
                    y: 100.0,
                    width: 10.0,
                    height: 10.0,
                    rx: 0.0,
                    ry: 0.0,
                },
            })],
            ..SvgDocument::default()
        }
    }

    #[test]
    fn document_self_distance_is_zero() {
        let d = square_doc(10.0);
        assert_eq!(chamfer(&d, &d, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn translation_beyond_diameter_increases_distance() {
        let base = square_doc(10.0);
        // Squares 10 units wide; offsets past the diameter.
        let mut prev = 0.0;
        for offset in [30.0, 60.0, 120.0] {
            let cd = chamfer(&base, &square_doc(10.0 + offset), 2.0).unwrap();
            assert!(cd > prev, "offset {offset}: {cd} not > {prev}");
            prev = cd;
        }
    }

    #[test]
    fn empty_document_errors() {
        let empty = SvgDocument {
            view_box: Some(ViewBox::new(0.0, 0.0, 224.0, 224.0)),
            ..SvgDocument::default()
        };
        assert!(matches!(
            chamfer(&empty, &square_doc(10.0), 2.0),
            Err(MetricError::EmptyGeometry)
        ));
        assert!(matches!(
            chamfer(&square_doc(10.0), &empty, 2.0),
            Err(MetricError::EmptyGeometry)
        ));
    }
}

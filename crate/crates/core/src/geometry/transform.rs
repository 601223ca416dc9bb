//! 2D affine transforms in SVG matrix form.

use crate::model::ViewBox;

use super::Point;

/// Maps `(x, y)` to `(a*x + c*y + e, b*x + d*y + f)`, matching the SVG
/// `matrix(a b c d e f)` convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineTransform {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl Default for AffineTransform {
    fn default() -> AffineTransform {
        AffineTransform::IDENTITY
    }
}

impl AffineTransform {
    pub const IDENTITY: AffineTransform =
        AffineTransform { a: 1.0, b: 0.0, c: 0.0, d: 1.0, e: 0.0, f: 0.0 };

    pub const fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> AffineTransform {
        AffineTransform { a, b, c, d, e, f }
    }

    pub fn translate(tx: f64, ty: f64) -> AffineTransform {
        AffineTransform::new(1.0, 0.0, 0.0, 1.0, tx, ty)
    }

    pub fn scale(sx: f64, sy: f64) -> AffineTransform {
        AffineTransform::new(sx, 0.0, 0.0, sy, 0.0, 0.0)
    }

    pub fn rotate_deg(angle_deg: f64) -> AffineTransform {
        let (s, c) = angle_deg.to_radians().sin_cos();
        AffineTransform::new(c, s, -s, c, 0.0, 0.0)
    }

    pub fn rotate_deg_about(angle_deg: f64, cx: f64, cy: f64) -> AffineTransform {
        AffineTransform::translate(cx, cy)
            .mul(&AffineTransform::rotate_deg(angle_deg))
            .mul(&AffineTransform::translate(-cx, -cy))
    }

    /// Uniform scale-and-center of `vb` into the square `[0, target]^2`.
    pub fn letterbox(vb: &ViewBox, target: f64) -> AffineTransform {
        let s = target / vb.max_side();
        let dx = (target - s * vb.width) / 2.0;
        let dy = (target - s * vb.height) / 2.0;
        AffineTransform::new(s, 0.0, 0.0, s, dx - s * vb.min_x, dy - s * vb.min_y)
    }

    /// Composition: `self.mul(rhs)` applies `rhs` first, then `self`.
    pub fn mul(&self, rhs: &AffineTransform) -> AffineTransform {
        AffineTransform {
            a: self.a * rhs.a + self.c * rhs.b,
            b: self.b * rhs.a + self.d * rhs.b,
            c: self.a * rhs.c + self.c * rhs.d,
            d: self.b * rhs.c + self.d * rhs.d,
            e: self.a * rhs.e + self.c * rhs.f + self.e,
            f: self.b * rhs.e + self.d * rhs.f + self.f,
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(self.a * p.x + self.c * p.y + self.e, self.b * p.x + self.d * p.y + self.f)
    }

    /// Applies only the linear part, for direction vectors and relative
    /// coordinates.
    pub fn apply_vector(&self, v: Point) -> Point {
        Point::new(self.a * v.x + self.c * v.y, self.b * v.x + self.d * v.y)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineTransform::IDENTITY
    }

    /// Axis-aligned positive scaling plus translation. Rects, circles, and
    /// ellipses survive such transforms without lowering to paths.
    pub fn is_axis_aligned_scale(&self) -> bool {
        self.b == 0.0 && self.c == 0.0 && self.a > 0.0 && self.d > 0.0
    }

    /// Rotation plus uniform scaling plus translation, orientation
    /// preserving. Arcs survive such transforms analytically.
    pub fn is_direct_similarity(&self) -> bool {
        self.a == self.d && self.b == -self.c && self.det() > 0.0
    }

    /// Scale factor of a direct similarity.
    pub fn similarity_scale(&self) -> f64 {
        (self.a * self.a + self.b * self.b).sqrt()
    }

    /// Rotation angle of a direct similarity, in degrees.
    pub fn similarity_rotation_deg(&self) -> f64 {
        self.b.atan2(self.a).to_degrees()
    }

    /// Area-mean scale factor, used to scale stroke widths under arbitrary
    /// affine maps.
    pub fn mean_scale(&self) -> f64 {
        self.det().abs().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(p: Point, q: Point) -> bool {
        p.distance(q) < 1e-12
    }

    #[test]
    fn composition_applies_right_hand_side_first() {
        let t = AffineTransform::translate(1.0, 2.0).mul(&AffineTransform::scale(3.0, 3.0));
        // Scale first, translate second.
        assert_eq!(t.apply(Point::new(1.0, 1.0)), Point::new(4.0, 5.0));
    }

    #[test]
    fn rotation_about_point_fixes_it() {
        let t = AffineTransform::rotate_deg_about(37.0, 5.0, 7.0);
        assert!(close(t.apply(Point::new(5.0, 7.0)), Point::new(5.0, 7.0)));
        assert!(t.is_direct_similarity());
        assert!((t.similarity_scale() - 1.0).abs() < 1e-12);
        assert!((t.similarity_rotation_deg() - 37.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_by_90_lands_on_axes() {
        let t = AffineTransform::rotate_deg(90.0);
        let p = t.apply(Point::new(1.0, 0.0));
        assert!(close(p, Point::new(0.0, 1.0)));
    }

    #[test]
    fn similarity_closed_under_composition() {
        let t = AffineTransform::rotate_deg(31.0)
            .mul(&AffineTransform::scale(2.0, 2.0))
            .mul(&AffineTransform::rotate_deg(-7.0));
        assert!(t.is_direct_similarity());
        assert!((t.similarity_scale() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn axis_aligned_detection() {
        assert!(AffineTransform::scale(2.0, 3.0).is_axis_aligned_scale());
        assert!(AffineTransform::translate(4.0, 5.0).is_axis_aligned_scale());
        assert!(!AffineTransform::rotate_deg(10.0).is_axis_aligned_scale());
        assert!(!AffineTransform::scale(-1.0, 1.0).is_axis_aligned_scale());
    }

    #[test]
    fn letterbox_centers_wide_box() {
        let vb = ViewBox::new(0.0, 0.0, 20.0, 10.0);
        let t = AffineTransform::letterbox(&vb, 224.0);
        assert_eq!(t.apply(Point::new(0.0, 0.0)), Point::new(0.0, 56.0));
        assert_eq!(t.apply(Point::new(20.0, 10.0)), Point::new(224.0, 168.0));
        assert!((t.similarity_scale() - 11.2).abs() < 1e-12);
    }

    #[test]
    fn letterbox_is_identity_for_matching_square() {
        let vb = ViewBox::new(0.0, 0.0, 224.0, 224.0);
        let t = AffineTransform::letterbox(&vb, 224.0);
        assert!(t.is_identity());
    }

    #[test]
    fn inverse_like_roundtrip_via_det() {
        let t = AffineTransform::new(2.0, 1.0, -1.0, 3.0, 4.0, 5.0);
        assert_eq!(t.det(), 7.0);
        assert!((t.mean_scale() - 7.0f64.sqrt()).abs() < 1e-15);
    }
}

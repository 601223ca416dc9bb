//! Classic 2D gradient noise with a seeded permutation table.

use crate::rng::SplitMix64;

use super::Point;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Unit gradient directions: axes and diagonals.
const GRADS: [(f64, f64); 8] = [
    (1.0, 0.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (SQRT_HALF, SQRT_HALF),
    (-SQRT_HALF, SQRT_HALF),
    (SQRT_HALF, -SQRT_HALF),
    (-SQRT_HALF, -SQRT_HALF),
];

/// Seeded noise field. Values are 0 at integer lattice points, C1-smooth
/// everywhere, and bounded by [-1, 1].
pub struct Perlin2 {
    perm: [u8; 512],
}

impl Perlin2 {
    pub fn new(seed: u64) -> Perlin2 {
        let mut table: [u8; 256] = std::array::from_fn(|i| i as u8);
        SplitMix64::new(seed).shuffle(&mut table);
        let mut perm = [0u8; 512];
        perm[..256].copy_from_slice(&table);
        perm[256..].copy_from_slice(&table);
        Perlin2 { perm }
    }

    fn grad(&self, xi: i64, yi: i64) -> (f64, f64) {
        let xw = (xi.rem_euclid(256)) as usize;
        let yw = (yi.rem_euclid(256)) as usize;
        let h = self.perm[self.perm[xw] as usize + yw];
        GRADS[(h & 7) as usize]
    }

    pub fn get(&self, x: f64, y: f64) -> f64 {
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = x - x0;
        let fy = y - y0;
        let xi = x0 as i64;
        let yi = y0 as i64;

        let dot = |gx: i64, gy: i64, dx: f64, dy: f64| -> f64 {
            let (gxv, gyv) = self.grad(gx, gy);
            gxv * dx + gyv * dy
        };
        let n00 = dot(xi, yi, fx, fy);
        let n10 = dot(xi + 1, yi, fx - 1.0, fy);
        let n01 = dot(xi, yi + 1, fx, fy - 1.0);
        let n11 = dot(xi + 1, yi + 1, fx - 1.0, fy - 1.0);

        let u = fade(fx);
        let v = fade(fy);
        let nx0 = n00 + u * (n10 - n00);
        let nx1 = n01 + u * (n11 - n01);
        nx0 + v * (nx1 - nx0)
    }

    pub fn get_point(&self, p: Point) -> f64 {
        self.get(p.x, p.y)
    }
}

/// Quintic fade 6t^5 - 15t^4 + 10t^3: zero first and second derivative at
/// cell boundaries.
fn fade(t: f64) -> f64 {
    t * t * t * (t * (t * 6.0 - 15.0) + 10.0)
}

/// One-off evaluation. Builds the permutation table on every call; loops
/// should construct a [`Perlin2`] once instead.
pub fn perlin2(x: f64, y: f64, seed: u64) -> f64 {
    Perlin2::new(seed).get(x, y)
}

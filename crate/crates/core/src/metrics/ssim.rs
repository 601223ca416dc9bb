//! Structural similarity on luma with an 11x11 Gaussian window.

use crate::raster::RasterImage;

use super::MetricError;

pub const WINDOW: usize = 11;
pub const SIGMA: f64 = 1.5;
const C1: f64 = 0.01 * 0.01;
const C2: f64 = 0.03 * 0.03;

/// Mean SSIM over all fully-interior (valid) windows. Inputs must have
/// identical dimensions with both sides at least the window size.
pub fn ssim(a: &RasterImage, b: &RasterImage) -> Result<f64, MetricError> {
    if (a.width, a.height) != (b.width, b.height) {
        return Err(MetricError::DimensionMismatch {
            a: (a.width, a.height),
            b: (b.width, b.height),
        });
    }
    let side = a.width.min(a.height);
    if side < WINDOW {
        return Err(MetricError::TooSmall { side, need: WINDOW });
    }
    let (w, h) = (a.width, a.height);
    let x = luma(a);
    let y = luma(b);
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(&y).map(|(u, v)| u * v).collect();

    let kernel = gaussian_kernel();
    let mu_x = convolve_valid(&x, w, h, &kernel);
    let mu_y = convolve_valid(&y, w, h, &kernel);
    let e_xx = convolve_valid(&xx, w, h, &kernel);
    let e_yy = convolve_valid(&yy, w, h, &kernel);
    let e_xy = convolve_valid(&xy, w, h, &kernel);

    let mut sum = 0.0;
    for i in 0..mu_x.len() {
        let (mx, my) = (mu_x[i], mu_y[i]);
        let var_x = e_xx[i] - mx * mx;
        let var_y = e_yy[i] - my * my;
        let cov = e_xy[i] - mx * my;
        sum += ((2.0 * mx * my + C1) * (2.0 * cov + C2))
            / ((mx * mx + my * my + C1) * (var_x + var_y + C2));
    }
    Ok(sum / mu_x.len() as f64)
}

pub fn luma(img: &RasterImage) -> Vec<f64> {
    img.pixels
        .chunks_exact(3)
        .map(|p| 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2])
        .collect()
}

pub fn gaussian_kernel() -> [f64; WINDOW] {
    let mut k = [0.0; WINDOW];
    let mid = (WINDOW / 2) as f64;
    for (i, v) in k.iter_mut().enumerate() {
        let d = i as f64 - mid;
        *v = (-d * d / (2.0 * SIGMA * SIGMA)).exp();
    }
    let total: f64 = k.iter().sum();
    for v in &mut k {
        *v /= total;
    }
    k
}

/// Separable valid-mode convolution with a symmetric 1-d kernel applied to
/// rows then columns. Output is (w-WINDOW+1) x (h-WINDOW+1).
fn convolve_valid(data: &[f64], w: usize, h: usize, kernel: &[f64; WINDOW]) -> Vec<f64> {
    let ow = w - WINDOW + 1;
    let oh = h - WINDOW + 1;
    let mut rows = vec![0.0; ow * h];
    for y in 0..h {
        for x in 0..ow {
            let mut acc = 0.0;
            for (i, &k) in kernel.iter().enumerate() {
                acc += k * data[y * w + x + i];
            }
            rows[y * ow + x] = acc;
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            let mut acc = 0.0;
            for (i, &k) in kernel.iter().enumerate() {
                acc += k * rows[(y + i) * ow + x];
            }
            out[y * ow + x] = acc;
        }
    }
    out
}

//! Image file codecs: binary PPM (read/write) and PNG (read only).

use std::io::Cursor;
use std::path::Path;

use thiserror::Error;

use super::RasterImage;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("malformed ppm: {0}")]
    MalformedPpm(String),
    #[error("malformed png: {0}")]
    MalformedPng(String),
    #[error("unsupported png: {0}")]
    UnsupportedPng(String),
    #[error("unsupported image extension: {0:?}")]
    UnsupportedExtension(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Binary P6, maxval 255, channel bytes `round(v * 255)`.
pub fn write_ppm(img: &RasterImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend(img.pixels.iter().map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8));
    out
}

pub fn read_ppm(bytes: &[u8]) -> Result<RasterImage, ImageError> {
    let bad = |msg: &str| ImageError::MalformedPpm(msg.to_string());
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(bad("magic is not P6"));
    }
    let mut pos = 2;
    let width = header_int(bytes, &mut pos)?;
    let height = header_int(bytes, &mut pos)?;
    let maxval = header_int(bytes, &mut pos)?;
    if maxval != 255 {
        return Err(bad("maxval must be 255"));
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(bad("missing whitespace after maxval")),
    }
    let need = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| bad("dimensions overflow"))?;
    let payload = bytes
        .get(pos..pos + need)
        .ok_or_else(|| bad("payload shorter than width*height*3"))?;
    let pixels = payload.iter().map(|&b| b as f64 / 255.0).collect();
    Ok(RasterImage { width, height, pixels })
}

/// Reads one whitespace/comment-separated decimal from a PPM header.
fn header_int(bytes: &[u8], pos: &mut usize) -> Result<usize, ImageError> {
    loop {
        match bytes.get(*pos) {
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(b'#') => {
                while !matches!(bytes.get(*pos), None | Some(b'\n')) {
                    *pos += 1;
                }
            }
            _ => break,
        }
    }
    let start = *pos;
    while matches!(bytes.get(*pos), Some(b) if b.is_ascii_digit()) {
        *pos += 1;
    }
    if *pos == start {
        return Err(ImageError::MalformedPpm("expected a header integer".to_string()));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .unwrap()
        .parse()
        .map_err(|_| ImageError::MalformedPpm("header integer overflow".to_string()))
}

/// Decodes an 8-bit non-interlaced PNG. Palette and sub-8-bit grays are
/// expanded; alpha is composited onto white.
pub fn read_png(bytes: &[u8]) -> Result<RasterImage, ImageError> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader =
        decoder.read_info().map_err(|e| ImageError::MalformedPng(e.to_string()))?;
    let info = reader.info();
    if info.interlaced {
        return Err(ImageError::UnsupportedPng("interlaced".to_string()));
    }
    if info.bit_depth == png::BitDepth::Sixteen {
        return Err(ImageError::UnsupportedPng("16-bit depth".to_string()));
    }
    let mut buf = vec![0; reader.output_buffer_size()];
    let frame =
        reader.next_frame(&mut buf).map_err(|e| ImageError::MalformedPng(e.to_string()))?;
    let data = &buf[..frame.buffer_size()];
    let width = frame.width as usize;
    let height = frame.height as usize;
    let n = width * height;
    let mut pixels = Vec::with_capacity(n * 3);
    let byte = |b: u8| b as f64 / 255.0;
    // Compositing onto white: out = a*c + (1 - a).
    match frame.color_type {
        png::ColorType::Rgb => {
            pixels.extend(data.iter().map(|&b| byte(b)));
        }
        png::ColorType::Rgba => {
            for px in data.chunks_exact(4) {
                let a = byte(px[3]);
                for &c in &px[..3] {
                    pixels.push(a * byte(c) + (1.0 - a));
                }
            }
        }
        png::ColorType::Grayscale => {
            for &g in data {
                let v = byte(g);
                pixels.extend_from_slice(&[v, v, v]);
            }
        }
        png::ColorType::GrayscaleAlpha => {
            for px in data.chunks_exact(2) {
                let a = byte(px[1]);
                let v = a * byte(px[0]) + (1.0 - a);
                pixels.extend_from_slice(&[v, v, v]);
            }
        }
        png::ColorType::Indexed => {
            return Err(ImageError::UnsupportedPng("palette not expanded".to_string()));
        }
    }
    if pixels.len() != n * 3 {
        return Err(ImageError::MalformedPng("pixel count mismatch".to_string()));
    }
    Ok(RasterImage { width, height, pixels })
}

/// Loads an image file, choosing the codec by extension (.ppm or .png).
pub fn read_image(path: &Path) -> Result<RasterImage, ImageError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .unwrap_or_default();
    let bytes = std::fs::read(path)?;
    match ext.as_str() {
        "ppm" => read_ppm(&bytes),
        "png" => read_png(&bytes),
        other => Err(ImageError::UnsupportedExtension(other.to_string())),
    }
}

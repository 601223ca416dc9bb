//! SVG toolkit: parse, repair, normalize, rasterize, augment, vectorize,
//! and score SVG documents against raster images.
//!
//! The crate is organized around a small immutable document model
//! ([`model::SvgDocument`]). Everything else is pure functions over it:
//!
//! - [`parse`] / [`serialize`] — text to model and back, byte-deterministic.
//! - [`repair`] — turn truncated or broken SVG text into parseable text.
//! - [`lower`] / [`normalize`] — shape primitives to paths, viewport fitting,
//!   and the stroke-only simplification used for line-art test sets.
//! - [`geometry`] — curve math: arc/quad conversion, flattening, arc-length
//!   sampling, affine transforms, gradient noise.
//! - [`raster`] — deterministic CPU scanline rasterizer plus PPM/PNG input.
//! - [`metrics`] — MSE, SSIM, and Chamfer distance with report aggregation.
//! - [`augment`] — seeded SVG-code augmentations (rotation, color noise,
//!   control point noise).
//! - [`vectorize`] — rule-based image-to-SVG baseline (color quantization,
//!   contour tracing, polygon simplification, Bezier fitting).
//! - [`harness`] — dataset manifests, dedup/filter/split, and batch scoring.
//! - [`corpus`] — small built-in set of flat-color icons used by tests and
//!   benchmarks.

pub mod augment;
pub mod corpus;
pub mod geometry;
pub mod harness;
pub mod lower;
pub mod metrics;
pub mod model;
pub mod normalize;
pub mod parse;
pub mod raster;
pub mod repair;
pub mod rng;
pub mod serialize;
#[cfg(any(test, feature = "testgen"))]
pub mod testgen;
pub mod vectorize;

pub use model::{
    FillRule, Node, Paint, PathCommand, PathOp, Rgb, SvgDocument, ValidationReport, ViewBox,
};
pub use parse::{parse_svg, ParseError};
pub use raster::{rasterize, RasterImage};
pub use repair::{repair, validate};
pub use serialize::serialize;

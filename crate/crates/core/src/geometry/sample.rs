//! Arc-length point sampling along document outlines.

use crate::lower::geometry_to_commands;
use crate::model::{Geometry, PathCommand, SvgDocument};

use super::path::{flatten_commands, transform_commands, Subpath};
use super::{GeometryError, Point, PointSet};

/// Samples outline points at arc-length multiples of `step`, plus the
/// final endpoint of every subpath. Shapes contribute their outlines;
/// fills are ignored. Flattening tolerance is `step / 4`.
pub fn sample_points(doc: &SvgDocument, step: f64) -> Result<PointSet, GeometryError> {
    assert!(step > 0.0 && step.is_finite(), "step must be positive");
    let frame = doc.resolved_view_box().map(|vb| vb.max_side()).unwrap_or(224.0);
    let tolerance = step / 4.0;
    let mut points = Vec::new();
    doc.visit_shapes(&mut |t, shape| {
        let commands: Vec<PathCommand> = match &shape.geometry {
            Geometry::Path { commands } => {
                if commands.is_empty() {
                    return;
                }
                commands.clone()
            }
            other => match geometry_to_commands(other) {
                Some(cmds) => cmds,
                None => return,
            },
        };
        let commands =
            if t.is_identity() { commands } else { transform_commands(t, &commands) };
        for sub in flatten_commands(&commands, tolerance) {
            sample_subpath(&sub, step, &mut points);
        }
    });
    if points.is_empty() {
        return Err(GeometryError::EmptyGeometry);
    }
    Ok(PointSet { points, frame })
}

fn sample_subpath(sub: &Subpath, step: f64, out: &mut Vec<Point>) {
    let pts = &sub.points;
    if pts.len() < 2 {
        return;
    }
    let total: f64 = pts.windows(2).map(|w| w[0].distance(w[1])).sum();
    if total <= 0.0 {
        return;
    }
    let mut k: u64 = 0;
    let mut acc = 0.0;
    let start = out.len();
    for w in pts.windows(2) {
        let len = w[0].distance(w[1]);
        // Thresholds are recomputed as k*step rather than accumulated, so
        // they carry no additive drift.
        while k as f64 * step <= acc + len {
            let threshold = k as f64 * step;
            if len > 0.0 {
                out.push(w[0].lerp(w[1], (threshold - acc) / len));
            } else {
                out.push(w[0]);
            }
            k += 1;
        }
        acc += len;
    }
    let end = *pts.last().unwrap();
    if out.len() == start || *out.last().unwrap() != end {
        out.push(end);
    }
}

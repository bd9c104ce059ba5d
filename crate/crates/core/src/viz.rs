//! Diagnostic renderings: ground truth vs detection overlays and the polar
//! absolute-error map.

use serde::{Deserialize, Serialize};

use crate::metrics::AssignmentResult;
use crate::model::{stroke_closed_polyline, DiskDetection, ImageRGB};

pub const GT_COLOR: [u8; 3] = [0, 255, 0];
pub const DET_COLOR: [u8; 3] = [255, 0, 0];
pub const UNMATCHED_COLOR: [u8; 3] = [255, 255, 255];
pub const CANVAS_COLOR: [u8; 3] = [0, 0, 0];
pub const STROKE_PX: f64 = 2.0;

fn paint_curves(out: &mut ImageRGB, det: &DiskDetection, color: [u8; 3]) {
    let (w, h) = (out.width(), out.height());
    for ring in det.rings() {
        let stroke = stroke_closed_polyline(&ring.points(), STROKE_PX, w, h);
        for y in 0..h {
            for x in 0..w {
                if *stroke.get(x, y) {
                    out.put_pixel(x, y, color);
                }
            }
        }
    }
}

/// Ground-truth rings in green with detections drawn over them in red.
pub fn overlay(image: &ImageRGB, gt: &DiskDetection, det: &DiskDetection) -> ImageRGB {
    let mut out = image.clone();
    paint_curves(&mut out, gt, GT_COLOR);
    paint_curves(&mut out, det, DET_COLOR);
    out
}

/// Linear red (no error) to blue (`scale_max`) color.
pub fn error_color(error: f64, scale_max: f64) -> [u8; 3] {
    let t = (error / scale_max).clamp(0.0, 1.0);
    [
        (255.0 * (1.0 - t)).round() as u8,
        0,
        (255.0 * t).round() as u8,
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingErrorSummary {
    pub gt: usize,
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_abs_error: Option<f64>,
}

/// Sidecar describing an error map's color scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorMapSidecar {
    /// Error, in pixels, rendered as pure blue.
    pub scale_max_px: f64,
    pub rings: Vec<RingErrorSummary>,
}

/// Concentric bands, one per ground-truth ring (innermost at the center).
/// Matched bands are colored per ray by absolute radial error; unmatched
/// ones are white. The color scale tops out at the largest matched error,
/// at least 1 px.
pub fn polar_error_map(
    assignment: &AssignmentResult,
    gt: &DiskDetection,
    canvas: usize,
) -> (ImageRGB, ErrorMapSidecar) {
    let canvas = canvas.max(1);
    let n_rings = gt.rings().len();
    let theta = gt.theta();
    let scale_max = assignment
        .pairs
        .iter()
        .flat_map(|p| p.errors.iter().copied())
        .fold(1.0f64, f64::max);

    let mut img = ImageRGB::filled(canvas, canvas, CANVAS_COLOR).expect("canvas is non-empty");
    if n_rings > 0 {
        let center = canvas as f64 / 2.0;
        let outer = 0.95 * center;
        let band = outer / (n_rings + 1) as f64;
        let pairs: Vec<Option<&[f64]>> = (0..n_rings)
            .map(|g| assignment.pair_for_gt(g).map(|p| p.errors.as_slice()))
            .collect();
        for y in 0..canvas {
            for x in 0..canvas {
                let dx = x as f64 + 0.5 - center;
                let dy = y as f64 + 0.5 - center;
                let r = (dx * dx + dy * dy).sqrt();
                let k = (r / band).floor() as usize;
                if k == 0 || k > n_rings {
                    continue;
                }
                let color = match pairs[k - 1] {
                    None => UNMATCHED_COLOR,
                    Some(errors) => {
                        let angle = dy.atan2(dx).rem_euclid(std::f64::consts::TAU);
                        let j = (angle / std::f64::consts::TAU * theta as f64).round() as usize % theta;
                        error_color(errors[j], scale_max)
                    }
                };
                img.put_pixel(x, y, color);
            }
        }
    }
    let rings = (0..n_rings)
        .map(|g| {
            let pair = assignment.pair_for_gt(g);
            RingErrorSummary {
                gt: g,
                matched: pair.is_some(),
                mean_abs_error: pair.map(|p| p.mean_error()),
            }
        })
        .collect();
    (
        img,
        ErrorMapSidecar {
            scale_max_px: scale_max,
            rings,
        },
    )
}

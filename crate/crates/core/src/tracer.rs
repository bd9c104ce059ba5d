//! Iterative next-boundary tracing from a given pith outwards.
//!
//! Each iteration samples a polar strip just outside the current boundary,
//! asks a [`BoundaryScorer`] where the next boundary is, and appends the
//! resulting curve. Tracing stops once most rays report background or
//! leave the disk mask.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DiskDetection, Mask, RingCurve, DEFAULT_THETA};
use crate::resample::{sample_polar_strip_masked, StripSource};
use crate::scorer::BoundaryScorer;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    /// Rays per curve.
    pub theta: usize,
    /// Minimum radial samples per strip.
    pub n_samples: usize,
    /// Upper bound on the radial spacing between strip samples, in pixels.
    /// Wide strips get more than `n_samples` samples to respect it.
    pub max_sample_spacing: f64,
    /// Strip width as a multiple of the previous ring width.
    pub width_factor: f64,
    /// Automatic widths below this are considered too small.
    pub min_auto_width: f64,
    /// Fallback strip width as a fraction of the longest image side.
    pub floor_fraction: f64,
    /// Fraction of rays voting background (or leaving the mask) that ends the trace.
    pub stop_fraction: f64,
    pub max_rings: usize,
    /// Minimum outward advance per ray per iteration, in pixels.
    pub min_step: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            theta: DEFAULT_THETA,
            n_samples: 64,
            max_sample_spacing: 1.0,
            width_factor: 2.0,
            min_auto_width: 16.0,
            floor_fraction: 0.25,
            stop_fraction: 0.5,
            max_rings: 80,
            min_step: 1.0,
        }
    }
}

impl TraceConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("max_sample_spacing", self.max_sample_spacing),
            ("width_factor", self.width_factor),
            ("min_auto_width", self.min_auto_width),
            ("min_step", self.min_step),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [
            ("floor_fraction", self.floor_fraction),
            ("stop_fraction", self.stop_fraction),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::validation(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        if self.theta < 8 {
            return Err(Error::validation(format!("theta must be at least 8, got {}", self.theta)));
        }
        if self.n_samples < 2 {
            return Err(Error::validation("n_samples must be at least 2"));
        }
        if self.max_rings == 0 {
            return Err(Error::validation("max_rings must be positive"));
        }
        Ok(())
    }
}

/// Strip width for the next iteration: `width_factor × prev_ring_width`,
/// replaced by `floor_fraction × image_longest` when there is no previous
/// ring or the automatic width is below `min_auto_width`.
pub fn estimate_patch_width(prev_ring_width: Option<f64>, image_longest: usize, cfg: &TraceConfig) -> f64 {
    let floor = cfg.floor_fraction * image_longest as f64;
    match prev_ring_width.map(|w| cfg.width_factor * w) {
        Some(auto) if auto >= cfg.min_auto_width => auto,
        _ => floor,
    }
}

/// Why a trace ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Background,
    MaskExit,
    MaxRings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceOutcome {
    pub detection: DiskDetection,
    /// Mean scorer confidence of each traced ring.
    pub confidence: Vec<f64>,
    pub stop: StopReason,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn mean_gap(outer: &RingCurve, inner: &RingCurve) -> f64 {
    let sum: f64 = outer
        .radii()
        .iter()
        .zip(inner.radii())
        .map(|(a, b)| a - b)
        .sum();
    sum / outer.theta() as f64
}

/// Traces rings outward from `pith` until background, a mask exit, or
/// `max_rings`.
pub fn trace_rings<S, B>(
    image: &S,
    pith: &RingCurve,
    mask: &Mask,
    scorer: &B,
    cfg: &TraceConfig,
) -> Result<TraceOutcome>
where
    S: StripSource + Sync,
    B: BoundaryScorer + ?Sized,
{
    resume_trace(image, pith, Vec::new(), mask, scorer, cfg)
}

/// Continues a trace whose first rings are already known (for instance
/// after manual correction). The given rings are kept verbatim and count
/// towards `max_rings`; their confidence is reported as NaN.
pub fn resume_trace<S, B>(
    image: &S,
    pith: &RingCurve,
    rings: Vec<RingCurve>,
    mask: &Mask,
    scorer: &B,
    cfg: &TraceConfig,
) -> Result<TraceOutcome>
where
    S: StripSource + Sync,
    B: BoundaryScorer + ?Sized,
{
    cfg.validate()?;
    if image.dims() != mask.dims() {
        return Err(Error::validation(format!(
            "image is {}x{} but mask is {}x{}",
            image.dims().0,
            image.dims().1,
            mask.width(),
            mask.height()
        )));
    }
    let pith = pith.resample(pith.origin(), cfg.theta)?;
    if let Some(j) = (0..pith.theta()).find(|&j| !mask.contains_point(pith.point(j))) {
        let p = pith.point(j);
        return Err(Error::validation(format!(
            "pith point on ray {j} at ({:.2}, {:.2}) lies outside the mask",
            p[0], p[1]
        )));
    }
    let rings = rings
        .iter()
        .map(|r| r.resample(pith.origin(), cfg.theta))
        .collect::<Result<Vec<_>>>()?;
    let mut confidence = vec![f64::NAN; rings.len()];
    // validates monotonicity of the seeded rings
    let mut detection = DiskDetection::new(pith.clone(), rings)?;
    let mut rings = detection.rings().to_vec();

    let (w, h) = image.dims();
    let longest = w.max(h);
    let theta = cfg.theta;
    let quorum = cfg.stop_fraction * theta as f64;

    let stop = loop {
        if rings.len() >= cfg.max_rings {
            break StopReason::MaxRings;
        }
        let current = rings.last().unwrap_or(&pith);
        let prev_width = rings.last().map(|last| {
            let inner = if rings.len() >= 2 { &rings[rings.len() - 2] } else { &pith };
            mean_gap(last, inner)
        });
        let width = estimate_patch_width(prev_width, longest, cfg);
        let n_samples = cfg
            .n_samples
            .max((width / cfg.max_sample_spacing).ceil() as usize + 1);
        let strip = sample_polar_strip_masked(image, Some(mask), current, width, n_samples)?;
        let pred = scorer.score(&strip).map_err(|e| Error::Scorer {
            ring: rings.len(),
            source: Box::new(e),
        })?;
        if pred.offsets.len() != theta || pred.background.len() != theta || pred.confidence.len() != theta {
            return Err(Error::Scorer {
                ring: rings.len(),
                source: Box::new(Error::validation(format!(
                    "prediction has {} offsets for {theta} rays",
                    pred.offsets.len()
                ))),
            });
        }
        if let Some(j) = pred.offsets.iter().position(|o| !o.is_finite()) {
            return Err(Error::Scorer {
                ring: rings.len(),
                source: Box::new(Error::validation(format!("non-finite offset on ray {j}"))),
            });
        }

        let stopped: Vec<bool> = (0..theta)
            .map(|j| pred.background[j] || 2 * strip.out_of_bounds_count(j) > n_samples)
            .collect();
        let votes = stopped.iter().filter(|&&s| s).count();
        if votes as f64 >= quorum {
            break StopReason::Background;
        }

        let mut live: Vec<f64> = (0..theta)
            .filter(|&j| !stopped[j])
            .map(|j| pred.offsets[j])
            .collect();
        let fill = median(&mut live);
        let radii: Vec<f64> = (0..theta)
            .map(|j| {
                let offset = if stopped[j] { fill } else { pred.offsets[j] };
                current.radii()[j] + offset.min(width).max(cfg.min_step)
            })
            .collect();
        let next = RingCurve::new(pith.origin(), radii)?;
        let exits = (0..theta).filter(|&j| !mask.contains_point(next.point(j))).count();
        if exits as f64 >= quorum {
            break StopReason::MaskExit;
        }
        let live_conf: Vec<f64> = (0..theta)
            .filter(|&j| !stopped[j])
            .map(|j| pred.confidence[j])
            .collect();
        confidence.push(live_conf.iter().sum::<f64>() / live_conf.len() as f64);
        rings.push(next);
    };

    detection = DiskDetection::new(pith, rings)?;
    Ok(TraceOutcome {
        detection,
        confidence,
        stop,
    })
}

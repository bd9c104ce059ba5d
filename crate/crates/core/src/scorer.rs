//! Boundary scorers: given a polar strip, predict how far out along each ray
//! the next ring boundary lies and whether the ray has left the wood.
//!
//! [`BoundaryScorer`] is the seam where a trained next-boundary network
//! plugs in. Two implementations ship with the crate: a classical radial
//! gradient detector ([`GradientScorer`]) and a reader for precomputed
//! per-class probability maps ([`MapScorer`]).

use crate::error::{Error, Result};
use crate::model::{PixelClass, ProbabilityMaps};
use crate::resample::{bilinear, PolarStrip};

pub const DEFAULT_MIN_OFFSET_PX: f64 = 3.0;
pub const DEFAULT_SMOOTH_SIGMA: f64 = 1.0;
pub const DEFAULT_PEAK_FRACTION: f64 = 0.5;
pub const DEFAULT_MAP_THRESHOLD: f32 = 0.5;
/// Gradient magnitudes below this (8-bit intensity units) count as flat.
const FLAT_EPSILON: f64 = 1e-3;
const MEDIAN_WINDOW: usize = 5;

/// Per-ray output of a scorer.
#[derive(Debug, Clone, PartialEq)]
pub struct ScorerPrediction {
    /// Radial distance from the strip base to the next boundary, in `[0, L]`.
    pub offsets: Vec<f64>,
    /// Ray reached background before any boundary.
    pub background: Vec<bool>,
    /// In `[0, 1]`; for background rays this is the confidence of the
    /// background call.
    pub confidence: Vec<f64>,
}

pub trait BoundaryScorer: Sync {
    fn score(&self, strip: &PolarStrip) -> Result<ScorerPrediction>;
}

impl<F> BoundaryScorer for F
where
    F: Fn(&PolarStrip) -> Result<ScorerPrediction> + Sync,
{
    fn score(&self, strip: &PolarStrip) -> Result<ScorerPrediction> {
        self(strip)
    }
}

/// Radial-gradient boundary detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientScorer {
    /// Boundaries closer than this to the base are ignored.
    pub min_offset_px: f64,
    /// Gaussian smoothing along each ray, in samples. 0 disables it.
    pub smooth_sigma: f64,
    /// A gradient peak counts when it reaches this fraction of the ray's
    /// strongest one; the innermost such peak is the next boundary.
    pub peak_fraction: f64,
}

impl Default for GradientScorer {
    fn default() -> Self {
        Self {
            min_offset_px: DEFAULT_MIN_OFFSET_PX,
            smooth_sigma: DEFAULT_SMOOTH_SIGMA,
            peak_fraction: DEFAULT_PEAK_FRACTION,
        }
    }
}

impl BoundaryScorer for GradientScorer {
    fn score(&self, strip: &PolarStrip) -> Result<ScorerPrediction> {
        gradient_scorer(strip, self)
    }
}

fn gaussian_smooth(values: &[f64], valid: &[bool], sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return values.to_vec();
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let kernel: Vec<f64> = (-radius..=radius)
        .map(|k| (-(k * k) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let n = values.len() as isize;
    (0..n)
        .map(|s| {
            if !valid[s as usize] {
                return 0.0;
            }
            let (mut acc, mut norm) = (0.0, 0.0);
            for k in -radius..=radius {
                let t = s + k;
                if t >= 0 && t < n && valid[t as usize] {
                    let w = kernel[(k + radius) as usize];
                    acc += w * values[t as usize];
                    norm += w;
                }
            }
            acc / norm
        })
        .collect()
}

/// Index of the innermost local maximum of `score` at or above `threshold`,
/// restricted to `candidate` samples.
fn first_peak(score: &[f64], candidate: &[bool], threshold: f64) -> Option<usize> {
    let mut s = (0..score.len()).find(|&s| candidate[s] && score[s] >= threshold)?;
    while s + 1 < score.len() && candidate[s + 1] && score[s + 1] > score[s] {
        s += 1;
    }
    Some(s)
}

fn argmax(score: &[f64], candidate: &[bool]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in 0..score.len() {
        if candidate[s] && best.is_none_or(|b| score[s] > score[b]) {
            best = Some(s);
        }
    }
    best
}

/// Parabolic sub-sample refinement of a peak, in samples.
fn refine_peak(score: &[f64], candidate: &[bool], s: usize) -> f64 {
    if s == 0 || s + 1 >= score.len() || !candidate[s - 1] || !candidate[s + 1] {
        return s as f64;
    }
    let (l, c, r) = (score[s - 1], score[s], score[s + 1]);
    let denom = l - 2.0 * c + r;
    if denom >= 0.0 {
        return s as f64;
    }
    s as f64 + (0.5 * (l - r) / denom).clamp(-0.5, 0.5)
}

fn circular_median(values: &[f64], window: usize) -> Vec<f64> {
    let n = values.len();
    let half = window / 2;
    if n < window {
        return values.to_vec();
    }
    let mut buf = Vec::with_capacity(window);
    (0..n)
        .map(|j| {
            buf.clear();
            buf.extend((0..window).map(|k| values[(j + n + k - half) % n]));
            buf.sort_by(f64::total_cmp);
            buf[half]
        })
        .collect()
}

fn majority(count: usize, total: usize) -> bool {
    2 * count > total
}

/// Samples lying at least `min_offset_px` beyond the strip base.
fn candidate_mask(strip: &PolarStrip, min_offset_px: f64) -> Vec<bool> {
    let spacing = strip.sample_spacing();
    (0..strip.n_samples())
        .map(|s| s as f64 * spacing >= min_offset_px - 1e-9)
        .collect()
}

/// Classical next-boundary detector on luminance.
///
/// Per ray: Gaussian smoothing along the ray over in-bounds samples, central
/// differences, then the innermost peak of `|d/dr|` that reaches
/// `peak_fraction` of the ray maximum. Rays whose samples are mostly out of
/// bounds are background. Boundary radii get a 5-ray circular median. Rays
/// with no gradient at all fall back to `min_offset_px` with zero
/// confidence.
pub fn gradient_scorer(strip: &PolarStrip, params: &GradientScorer) -> Result<ScorerPrediction> {
    let n = strip.n_samples();
    if n < 4 {
        return Err(Error::validation(format!(
            "gradient scorer needs at least 4 radial samples, got {n}"
        )));
    }
    let theta = strip.theta();
    let spacing = strip.sample_spacing();
    let in_window = candidate_mask(strip, params.min_offset_px);

    let mut magnitude: Vec<Vec<f64>> = Vec::with_capacity(theta);
    let mut candidates: Vec<Vec<bool>> = Vec::with_capacity(theta);
    let mut background = Vec::with_capacity(theta);
    for j in 0..theta {
        let valid: Vec<bool> = (0..n).map(|s| !strip.is_out_of_bounds(j, s)).collect();
        let raw: Vec<f64> = strip.ray_intensity(j).into_iter().map(f64::from).collect();
        let smooth = gaussian_smooth(&raw, &valid, params.smooth_sigma);
        let mut mag = vec![0.0; n];
        let mut cand = vec![false; n];
        for s in 1..n - 1 {
            if valid[s - 1] && valid[s] && valid[s + 1] {
                mag[s] = 0.5 * (smooth[s + 1] - smooth[s - 1]).abs();
                cand[s] = in_window[s];
            }
        }
        magnitude.push(mag);
        candidates.push(cand);
        background.push(majority(strip.out_of_bounds_count(j), n));
    }

    let ray_max: Vec<f64> = magnitude
        .iter()
        .zip(&candidates)
        .map(|(m, c)| {
            m.iter()
                .zip(c)
                .filter(|(_, &c)| c)
                .map(|(v, _)| *v)
                .fold(0.0, f64::max)
        })
        .collect();
    let strip_max = ray_max.iter().copied().fold(0.0, f64::max);

    let mut offsets = Vec::with_capacity(theta);
    let mut confidence = Vec::with_capacity(theta);
    for j in 0..theta {
        let (mag, cand) = (&magnitude[j], &candidates[j]);
        let peak = if ray_max[j] > FLAT_EPSILON {
            first_peak(mag, cand, params.peak_fraction * ray_max[j])
        } else {
            None
        };
        match peak {
            Some(s) => {
                let pos = refine_peak(mag, cand, s) * spacing;
                offsets.push(pos.clamp(0.0, strip.width_px()));
                confidence.push(mag[s] / strip_max);
            }
            None => {
                offsets.push(params.min_offset_px.clamp(0.0, strip.width_px()));
                confidence.push(0.0);
            }
        }
        if background[j] {
            confidence[j] = strip.out_of_bounds_count(j) as f64 / n as f64;
        }
    }

    // filter the boundary positions, not the offsets: per-ray wobble of the
    // base curve must be corrected by the next offset, not smoothed away
    let base = strip.base().radii();
    let absolute: Vec<f64> = base.iter().zip(&offsets).map(|(r, o)| r + o).collect();
    let offsets = circular_median(&absolute, MEDIAN_WINDOW)
        .iter()
        .zip(base)
        .map(|(a, r)| (a - r).clamp(0.0, strip.width_px()))
        .collect();
    Ok(ScorerPrediction {
        offsets,
        background,
        confidence,
    })
}

/// Scorer that reads precomputed class probability maps.
#[derive(Debug, Clone)]
pub struct MapScorer {
    pub maps: ProbabilityMaps,
    pub min_offset_px: f64,
    pub threshold: f32,
}

impl MapScorer {
    pub fn new(maps: ProbabilityMaps) -> Self {
        Self {
            maps,
            min_offset_px: DEFAULT_MIN_OFFSET_PX,
            threshold: DEFAULT_MAP_THRESHOLD,
        }
    }
}

impl BoundaryScorer for MapScorer {
    fn score(&self, strip: &PolarStrip) -> Result<ScorerPrediction> {
        map_scorer_with(strip, &self.maps, self.min_offset_px, self.threshold)
    }
}

/// Next boundary from a boundary-probability map: the innermost local
/// maximum above 0.5, else the strongest response. Background when the
/// background probability exceeds 0.5 on most samples of the ray.
pub fn map_scorer(strip: &PolarStrip, maps: &ProbabilityMaps) -> Result<ScorerPrediction> {
    map_scorer_with(strip, maps, DEFAULT_MIN_OFFSET_PX, DEFAULT_MAP_THRESHOLD)
}

pub fn map_scorer_with(
    strip: &PolarStrip,
    maps: &ProbabilityMaps,
    min_offset_px: f64,
    threshold: f32,
) -> Result<ScorerPrediction> {
    if (maps.width(), maps.height()) != strip.source_dims() {
        return Err(Error::validation(format!(
            "probability maps are {}x{} but the strip was sampled from {}x{}",
            maps.width(),
            maps.height(),
            strip.source_dims().0,
            strip.source_dims().1
        )));
    }
    let boundary = maps.plane(PixelClass::Boundary);
    let bg = maps.plane(PixelClass::Background);
    let n = strip.n_samples();
    let theta = strip.theta();
    let spacing = strip.sample_spacing();
    let in_window = candidate_mask(strip, min_offset_px);

    let mut out = ScorerPrediction {
        offsets: Vec::with_capacity(theta),
        background: Vec::with_capacity(theta),
        confidence: Vec::with_capacity(theta),
    };
    let mut v = [0.0f32];
    for j in 0..theta {
        let mut prob = vec![0.0f64; n];
        let mut cand = vec![false; n];
        let mut bg_votes = 0;
        for s in 0..n {
            if strip.is_out_of_bounds(j, s) {
                continue;
            }
            let p = strip.position(j, s);
            bilinear(boundary, p, &mut v);
            prob[s] = v[0] as f64;
            cand[s] = in_window[s];
            bilinear(bg, p, &mut v);
            if v[0] > 0.5 {
                bg_votes += 1;
            }
        }
        let background = majority(bg_votes, n);
        let chosen = first_peak(&prob, &cand, threshold as f64)
            .filter(|&s| prob[s] > threshold as f64)
            .or_else(|| argmax(&prob, &cand));
        match chosen {
            Some(s) => {
                let pos = refine_peak(&prob, &cand, s) * spacing;
                out.offsets.push(pos.clamp(0.0, strip.width_px()));
                out.confidence.push(prob[s].clamp(0.0, 1.0));
            }
            None => {
                out.offsets.push(min_offset_px.clamp(0.0, strip.width_px()));
                out.confidence.push(0.0);
            }
        }
        if background {
            let c = out.confidence.len() - 1;
            out.confidence[c] = bg_votes as f64 / n as f64;
        }
        out.background.push(background);
    }
    Ok(out)
}

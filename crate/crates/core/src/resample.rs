//! Lanczos resizing to a fixed longest side and polar strip sampling.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{luma, ray_direction, Grid, ImageRGB, Mask, Point, RingCurve};

/// Working resolution of the longest image side.
pub const DEFAULT_TARGET: usize = 1500;
/// Lanczos window half-width.
pub const DEFAULT_LANCZOS_A: u32 = 3;

/// `sinc(x)·sinc(x/a)` inside `|x| < a`, zero outside. Exactly zero at
/// nonzero integers.
pub fn lanczos_kernel(x: f64, a: u32) -> f64 {
    let a = a.max(1) as f64;
    let ax = x.abs();
    if ax >= a {
        return 0.0;
    }
    if ax == 0.0 {
        return 1.0;
    }
    if ax.fract() == 0.0 {
        return 0.0;
    }
    let px = std::f64::consts::PI * x;
    (px.sin() / px) * ((px / a).sin() / (px / a))
}

/// Output size for a resize that maps the longest side onto `target`.
/// The other side is rounded half away from zero, minimum 1.
pub fn target_dims(width: usize, height: usize, target: usize) -> (usize, usize) {
    let longest = width.max(height) as f64;
    let scale = |v: usize| ((v as f64 * target as f64 / longest).round() as usize).max(1);
    if width >= height {
        (target, scale(height))
    } else {
        (scale(width), target)
    }
}

/// Scale factor applied to coordinates by [`resize_longest`] along x and y.
pub fn resize_factors(width: usize, height: usize, target: usize) -> (f64, f64) {
    let (w, h) = target_dims(width, height, target);
    (w as f64 / width as f64, h as f64 / height as f64)
}

/// Aspect-preserving separable Lanczos resize so the longest side equals
/// `target`. Border taps replicate edge pixels; weights are normalized per
/// output pixel.
pub fn resize_longest(image: &ImageRGB, target: usize, a: u32) -> Result<ImageRGB> {
    if target == 0 {
        return Err(Error::validation("resize target must be at least 1"));
    }
    let (w, h) = (image.width(), image.height());
    let (nw, nh) = target_dims(w, h, target);
    let data = resize_interleaved(image.data(), w, h, 3, nw, nh, a);
    let bytes = data
        .into_iter()
        .map(|v| v.round().clamp(0.0, 255.0) as u8)
        .collect();
    ImageRGB::new(nw, nh, bytes)
}

struct Taps {
    index: Vec<usize>,
    weight: Vec<f32>,
}

fn compute_taps(in_len: usize, out_len: usize, a: u32) -> Vec<Taps> {
    let scale = in_len as f64 / out_len as f64;
    let filter_scale = scale.max(1.0);
    let support = a.max(1) as f64 * filter_scale;
    (0..out_len)
        .map(|i| {
            let center = (i as f64 + 0.5) * scale;
            let lo = (center - support).floor() as i64;
            let hi = (center + support).ceil() as i64;
            let mut index = Vec::with_capacity((hi - lo + 1) as usize);
            let mut weight = Vec::with_capacity(index.capacity());
            let mut sum = 0.0;
            for j in lo..=hi {
                let w = lanczos_kernel((j as f64 + 0.5 - center) / filter_scale, a);
                if w == 0.0 {
                    continue;
                }
                index.push(j.clamp(0, in_len as i64 - 1) as usize);
                weight.push(w);
                sum += w;
            }
            Taps {
                index,
                weight: weight.into_iter().map(|w| (w / sum) as f32).collect(),
            }
        })
        .collect()
}

fn resize_interleaved(
    src: &[u8],
    w: usize,
    h: usize,
    channels: usize,
    nw: usize,
    nh: usize,
    a: u32,
) -> Vec<f32> {
    let htaps = compute_taps(w, nw, a);
    let vtaps = compute_taps(h, nh, a);

    let mut tmp = vec![0.0f32; nw * h * channels];
    tmp.par_chunks_mut(nw * channels)
        .enumerate()
        .for_each(|(y, row)| {
            let src_row = &src[y * w * channels..(y + 1) * w * channels];
            for (x, taps) in htaps.iter().enumerate() {
                for c in 0..channels {
                    let mut acc = 0.0f32;
                    for (&i, &wt) in taps.index.iter().zip(&taps.weight) {
                        acc += wt * src_row[i * channels + c] as f32;
                    }
                    row[x * channels + c] = acc;
                }
            }
        });

    let mut out = vec![0.0f32; nw * nh * channels];
    out.par_chunks_mut(nw * channels)
        .enumerate()
        .for_each(|(y, row)| {
            let taps = &vtaps[y];
            for (k, v) in row.iter_mut().enumerate() {
                let mut acc = 0.0f32;
                for (&i, &wt) in taps.index.iter().zip(&taps.weight) {
                    acc += wt * tmp[i * nw * channels + k];
                }
                *v = acc;
            }
        });
    out
}

/// Nearest-neighbour resize for label rasters, same size rule as
/// [`resize_longest`].
pub fn resize_longest_nearest<T: Clone + Send + Sync>(grid: &Grid<T>, target: usize) -> Result<Grid<T>> {
    if target == 0 {
        return Err(Error::validation("resize target must be at least 1"));
    }
    let (w, h) = grid.dims();
    let (nw, nh) = target_dims(w, h, target);
    Ok(resize_nearest(grid, nw, nh))
}

pub fn resize_nearest<T: Clone>(grid: &Grid<T>, nw: usize, nh: usize) -> Grid<T> {
    let (w, h) = grid.dims();
    let map = |i: usize, n_in: usize, n_out: usize| {
        (((i as f64 + 0.5) * n_in as f64 / n_out as f64).floor() as usize).min(n_in - 1)
    };
    let xs: Vec<usize> = (0..nw).map(|x| map(x, w, nw)).collect();
    let mut data = Vec::with_capacity(nw * nh);
    for y in 0..nh {
        let sy = map(y, h, nh);
        data.extend(xs.iter().map(|&sx| grid.get(sx, sy).clone()));
    }
    Grid::from_vec(nw, nh, data).expect("dimensions are consistent")
}

/// Anything a polar strip can be sampled from.
pub trait StripSource {
    fn dims(&self) -> (usize, usize);
    fn channels(&self) -> usize;
    /// Channel `c` of pixel `(x, y)` as a float.
    fn texel(&self, x: usize, y: usize, c: usize) -> f32;
}

impl StripSource for ImageRGB {
    fn dims(&self) -> (usize, usize) {
        (self.width(), self.height())
    }
    fn channels(&self) -> usize {
        3
    }
    fn texel(&self, x: usize, y: usize, c: usize) -> f32 {
        self.data()[(y * self.width() + x) * 3 + c] as f32
    }
}

impl StripSource for Grid<f32> {
    fn dims(&self) -> (usize, usize) {
        Grid::dims(self)
    }
    fn channels(&self) -> usize {
        1
    }
    fn texel(&self, x: usize, y: usize, _c: usize) -> f32 {
        *self.get(x, y)
    }
}

/// Bilinear interpolation at a continuous position under the pixel-center
/// convention. Returns `false` (and zeros) when `p` is off the raster.
pub fn bilinear<S: StripSource + ?Sized>(src: &S, p: Point, out: &mut [f32]) -> bool {
    let (w, h) = src.dims();
    if !(p[0] >= 0.0 && p[1] >= 0.0 && p[0] <= w as f64 && p[1] <= h as f64) {
        out.iter_mut().for_each(|v| *v = 0.0);
        return false;
    }
    let u = p[0] - 0.5;
    let v = p[1] - 0.5;
    let (fu, fv) = (u.floor(), v.floor());
    let (tx, ty) = (u - fu, v - fv);
    let clampi = |i: f64, n: usize| (i.max(0.0) as usize).min(n - 1);
    let (x0, x1) = (clampi(fu, w), clampi(fu + 1.0, w));
    let (y0, y1) = (clampi(fv, h), clampi(fv + 1.0, h));
    // f64 accumulation keeps the result independent of axis order up to
    // the final rounding, so rotated images sample identically
    let taps = [
        (x0, y0, (1.0 - tx) * (1.0 - ty)),
        (x1, y0, tx * (1.0 - ty)),
        (x0, y1, (1.0 - tx) * ty),
        (x1, y1, tx * ty),
    ];
    for (c, o) in out.iter_mut().enumerate() {
        let acc: f64 = taps.iter().map(|&(x, y, wt)| src.texel(x, y, c) as f64 * wt).sum();
        *o = acc as f32;
    }
    true
}

/// Rectangular resampling of the band between a base curve and the base
/// pushed `width_px` outward. Sample `s` of ray `j` sits at
/// `origin + dir(j)·(r_j + s·width_px/(S−1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarStrip {
    base: RingCurve,
    width_px: f64,
    n_samples: usize,
    channels: usize,
    source_dims: (usize, usize),
    values: Vec<f32>,
    out_of_bounds: Vec<bool>,
}

impl PolarStrip {
    pub fn base(&self) -> &RingCurve {
        &self.base
    }

    pub fn width_px(&self) -> f64 {
        self.width_px
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn theta(&self) -> usize {
        self.base.theta()
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Size of the raster the strip was sampled from.
    pub fn source_dims(&self) -> (usize, usize) {
        self.source_dims
    }

    /// Radial spacing between consecutive samples, in pixels.
    pub fn sample_spacing(&self) -> f64 {
        self.width_px / (self.n_samples - 1) as f64
    }

    pub fn position(&self, j: usize, s: usize) -> Point {
        strip_position(&self.base, j, s as f64 * self.sample_spacing())
    }

    pub fn value(&self, j: usize, s: usize) -> &[f32] {
        let i = (s * self.theta() + j) * self.channels;
        &self.values[i..i + self.channels]
    }

    pub fn is_out_of_bounds(&self, j: usize, s: usize) -> bool {
        self.out_of_bounds[s * self.theta() + j]
    }

    /// Number of flagged samples on ray `j`.
    pub fn out_of_bounds_count(&self, j: usize) -> usize {
        (0..self.n_samples)
            .filter(|&s| self.is_out_of_bounds(j, s))
            .count()
    }

    /// Luminance (or the single channel) of every sample on ray `j`.
    pub fn ray_intensity(&self, j: usize) -> Vec<f32> {
        (0..self.n_samples)
            .map(|s| {
                let v = self.value(j, s);
                match v.len() {
                    3 => luma(v[0], v[1], v[2]),
                    _ => v[0],
                }
            })
            .collect()
    }
}

fn strip_position(base: &RingCurve, j: usize, offset: f64) -> Point {
    let d = ray_direction(j, base.theta());
    let o = base.origin();
    let r = base.radii()[j] + offset;
    [o[0] + r * d[0], o[1] + r * d[1]]
}

/// Samples a polar strip with bilinear interpolation. Off-raster samples are
/// zero and flagged.
pub fn sample_polar_strip<S: StripSource + Sync>(
    source: &S,
    base: &RingCurve,
    width_px: f64,
    n_samples: usize,
) -> Result<PolarStrip> {
    sample_polar_strip_masked(source, None, base, width_px, n_samples)
}

/// As [`sample_polar_strip`], additionally flagging (and zeroing) samples
/// that fall outside `mask`.
pub fn sample_polar_strip_masked<S: StripSource + Sync>(
    source: &S,
    mask: Option<&Mask>,
    base: &RingCurve,
    width_px: f64,
    n_samples: usize,
) -> Result<PolarStrip> {
    if !(width_px.is_finite() && width_px > 0.0) {
        return Err(Error::validation(format!(
            "strip width must be positive, got {width_px}"
        )));
    }
    if n_samples < 2 {
        return Err(Error::validation(format!(
            "strip needs at least 2 radial samples, got {n_samples}"
        )));
    }
    if let Some(m) = mask {
        if m.dims() != source.dims() {
            return Err(Error::validation("mask and image dimensions differ"));
        }
    }
    // RingCurve already guarantees finite radii, but the origin plus radius
    // can still overflow to infinity.
    if base.points().iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(Error::validation("base curve has non-finite points"));
    }
    let theta = base.theta();
    let channels = source.channels();
    let spacing = width_px / (n_samples - 1) as f64;
    let mut values = vec![0.0f32; n_samples * theta * channels];
    let mut out_of_bounds = vec![false; n_samples * theta];
    values
        .par_chunks_mut(theta * channels)
        .zip(out_of_bounds.par_chunks_mut(theta))
        .enumerate()
        .for_each(|(s, (vrow, orow))| {
            for j in 0..theta {
                let p = strip_position(base, j, s as f64 * spacing);
                let out = &mut vrow[j * channels..(j + 1) * channels];
                let inside = bilinear(source, p, out) && mask.is_none_or(|m| m.contains_point(p));
                if !inside {
                    out.iter_mut().for_each(|v| *v = 0.0);
                }
                orow[j] = !inside;
            }
        });
    Ok(PolarStrip {
        base: base.clone(),
        width_px,
        n_samples,
        channels,
        source_dims: source.dims(),
        values,
        out_of_bounds,
    })
}

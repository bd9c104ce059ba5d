//! Raster and curve types shared by every stage of the pipeline.
//!
//! Conventions used throughout the crate:
//!
//! * Pixel `(x, y)` covers the unit square centered at `(x + 0.5, y + 0.5)`;
//!   the pixel containing a continuous point `p` is `(floor(p.x), floor(p.y))`.
//! * Ray `j` of a curve with `Θ` rays points along angle `2πj/Θ`, measured in
//!   image coordinates (x to the right, y down).
//! * Rasters are stored row-major.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of rays per curve.
pub const DEFAULT_THETA: usize = 360;

/// A sub-pixel point in image space, `[x, y]`.
pub type Point = [f64; 2];

/// 8-bit RGB image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRGB {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ImageRGB {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::validation(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height * 3 {
            return Err(Error::validation(format!(
                "image data length {} does not match {width}x{height}x3",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        let data = rgb
            .iter()
            .copied()
            .cycle()
            .take(width * height * 3)
            .collect();
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn put_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    /// Rec. 601 luminance plane.
    pub fn luminance(&self) -> Grid<f32> {
        let data = self
            .data
            .chunks_exact(3)
            .map(|p| luma(p[0] as f32, p[1] as f32, p[2] as f32))
            .collect();
        Grid {
            width: self.width,
            height: self.height,
            data,
        }
    }
}

#[inline]
pub(crate) fn luma(r: f32, g: f32, b: f32) -> f32 {
    0.299 * r + 0.587 * g + 0.114 * b
}

/// A generic single-channel raster.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }
}

impl<T> Grid<T> {
    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::validation(format!(
                "raster dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::validation(format!(
                "raster data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &T {
        &self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        self.data[y * self.width + x] = value;
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Grid<U> {
        Grid {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// Disk mask, `true` inside the wood.
pub type Mask = Grid<bool>;

/// Instance map: 0 = background, 1 = pith, k + 1 = k-th ring region.
pub type InstanceMap = Grid<u32>;

/// Semantic class map with the four annotation categories.
pub type ClassMap = Grid<PixelClass>;

impl Mask {
    /// Mask lookup at a continuous position; anything off the raster is outside.
    pub fn contains_point(&self, p: Point) -> bool {
        if !(p[0] >= 0.0 && p[1] >= 0.0) {
            return false;
        }
        let (x, y) = (p[0].floor() as usize, p[1].floor() as usize);
        x < self.width && y < self.height && *self.get(x, y)
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&m| m).count()
    }
}

impl InstanceMap {
    /// Checks that the positive ids present are exactly `1..=K`.
    pub fn validate_contiguous(&self) -> Result<u32> {
        let max = self.data.iter().copied().max().unwrap_or(0);
        let mut seen = vec![false; max as usize + 1];
        for &id in &self.data {
            seen[id as usize] = true;
        }
        if let Some(missing) = (1..=max as usize).find(|&k| !seen[k]) {
            return Err(Error::validation(format!(
                "instance ids are not contiguous: id {missing} missing below max {max}"
            )));
        }
        Ok(max)
    }
}

/// The four annotation categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum PixelClass {
    Background = 0,
    Ring = 1,
    Boundary = 2,
    Pith = 3,
}

impl PixelClass {
    pub const ALL: [PixelClass; 4] = [
        PixelClass::Background,
        PixelClass::Ring,
        PixelClass::Boundary,
        PixelClass::Pith,
    ];

    pub fn from_u8(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Self::Background),
            1 => Ok(Self::Ring),
            2 => Ok(Self::Boundary),
            3 => Ok(Self::Pith),
            other => Err(Error::validation(format!(
                "class label {other} is not in {{0,1,2,3}}"
            ))),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Per-pixel class probabilities, one plane per [`PixelClass`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMaps {
    width: usize,
    height: usize,
    planes: [Grid<f32>; 4],
}

impl ProbabilityMaps {
    /// Builds maps from four planes ordered background, ring, boundary, pith.
    /// Per-pixel sums must be 1 within `tolerance`.
    pub fn new(planes: [Grid<f32>; 4], tolerance: f64) -> Result<Self> {
        let (width, height) = planes[0].dims();
        if planes.iter().any(|p| p.dims() != (width, height)) {
            return Err(Error::validation("probability planes differ in size"));
        }
        for i in 0..width * height {
            let mut sum = 0.0f64;
            for plane in &planes {
                let v = plane.data[i];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::validation(format!(
                        "probability {v} at pixel {i} outside [0, 1]"
                    )));
                }
                sum += v as f64;
            }
            if (sum - 1.0).abs() > tolerance {
                return Err(Error::validation(format!(
                    "class probabilities at ({}, {}) sum to {sum}, expected 1 within {tolerance}",
                    i % width,
                    i / width
                )));
            }
        }
        Ok(Self {
            width,
            height,
            planes,
        })
    }

    /// One-hot maps derived from a class map.
    pub fn one_hot(classes: &ClassMap) -> Self {
        let planes = PixelClass::ALL.map(|c| classes.map(|&k| if k == c { 1.0 } else { 0.0 }));
        Self {
            width: classes.width,
            height: classes.height,
            planes,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn plane(&self, class: PixelClass) -> &Grid<f32> {
        &self.planes[class.index()]
    }
}

/// Unit direction of ray `j` out of `theta`.
///
/// When `theta` is a multiple of four the direction is built from the first
/// quadrant by exact quarter-turn rotations, so `ray_direction(j + theta/4)`
/// is exactly `ray_direction(j)` rotated by 90°.
pub fn ray_direction(j: usize, theta: usize) -> [f64; 2] {
    let j = j % theta;
    if theta.is_multiple_of(4) {
        let quarter = theta / 4;
        let angle = std::f64::consts::TAU * (j % quarter) as f64 / theta as f64;
        let (s, c) = angle.sin_cos();
        match j / quarter {
            0 => [c, s],
            1 => [-s, c],
            2 => [-c, -s],
            _ => [s, -c],
        }
    } else {
        let angle = std::f64::consts::TAU * j as f64 / theta as f64;
        let (s, c) = angle.sin_cos();
        [c, s]
    }
}

/// A closed star-shaped curve: one radius per uniformly spaced ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RingCurve {
    origin: Point,
    radii: Vec<f64>,
}

impl RingCurve {
    pub fn new(origin: Point, radii: Vec<f64>) -> Result<Self> {
        if !(origin[0].is_finite() && origin[1].is_finite()) {
            return Err(Error::validation("curve origin must be finite"));
        }
        if radii.len() < 3 {
            return Err(Error::validation(format!(
                "curve needs at least 3 rays, got {}",
                radii.len()
            )));
        }
        if let Some((j, r)) = radii
            .iter()
            .enumerate()
            .find(|(_, r)| !(r.is_finite() && **r > 0.0))
        {
            return Err(Error::validation(format!(
                "curve radius at ray {j} must be finite and positive, got {r}"
            )));
        }
        Ok(Self { origin, radii })
    }

    pub fn circle(origin: Point, radius: f64, theta: usize) -> Result<Self> {
        Self::new(origin, vec![radius; theta])
    }

    /// Casts `theta` rays from `origin` and keeps the farthest crossing of
    /// each with the closed polygon.
    pub fn from_polygon(polygon: &[Point], origin: Point, theta: usize) -> Result<Self> {
        if polygon.len() < 3 {
            return Err(Error::validation("polygon needs at least 3 vertices"));
        }
        let mut radii = Vec::with_capacity(theta);
        for j in 0..theta {
            let d = ray_direction(j, theta);
            let r = ray_polygon_distance(origin, d, polygon).ok_or_else(|| {
                Error::validation(format!(
                    "ray {j} from ({:.3}, {:.3}) does not cross the polygon",
                    origin[0], origin[1]
                ))
            })?;
            radii.push(r);
        }
        Self::new(origin, radii)
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn theta(&self) -> usize {
        self.radii.len()
    }

    pub fn point(&self, j: usize) -> Point {
        let d = ray_direction(j, self.theta());
        let r = self.radii[j % self.theta()];
        [self.origin[0] + r * d[0], self.origin[1] + r * d[1]]
    }

    pub fn points(&self) -> Vec<Point> {
        (0..self.theta()).map(|j| self.point(j)).collect()
    }

    pub fn mean_radius(&self) -> f64 {
        self.radii.iter().sum::<f64>() / self.theta() as f64
    }

    /// Re-expresses the curve on a different ray fan. A no-op clone if the
    /// fan is unchanged.
    pub fn resample(&self, origin: Point, theta: usize) -> Result<Self> {
        if origin == self.origin && theta == self.theta() {
            return Ok(self.clone());
        }
        Self::from_polygon(&self.points(), origin, theta)
    }

    /// Same curve with every radius offset by `delta`.
    pub fn offset(&self, delta: f64) -> Result<Self> {
        Self::new(self.origin, self.radii.iter().map(|r| r + delta).collect())
    }
}

/// Distance along the ray `origin + t·dir` to its farthest crossing with a
/// closed polygon, if any.
fn ray_polygon_distance(origin: Point, dir: [f64; 2], polygon: &[Point]) -> Option<f64> {
    let mut best: Option<f64> = None;
    let n = polygon.len();
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        let e = [b[0] - a[0], b[1] - a[1]];
        let denom = cross(dir, e);
        if denom.abs() < 1e-12 {
            continue;
        }
        let ao = [a[0] - origin[0], a[1] - origin[1]];
        let t = cross(ao, e) / denom;
        let u = cross(ao, dir) / denom;
        if t > 0.0 && (-1e-9..=1.0 + 1e-9).contains(&u) {
            best = Some(best.map_or(t, |b: f64| b.max(t)));
        }
    }
    best
}

#[inline]
fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Shoelace area of the curve's polygon, always non-negative.
pub fn curve_enclosed_area(curve: &RingCurve) -> f64 {
    polygon_area(&curve.points()).abs()
}

/// Signed shoelace area (positive for counter-clockwise in y-up axes).
pub fn polygon_area(polygon: &[Point]) -> f64 {
    let n = polygon.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let a = polygon[i];
            let b = polygon[(i + 1) % n];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum();
    twice / 2.0
}

/// Area centroid of a simple polygon; falls back to the vertex mean for
/// degenerate (zero-area) input.
pub fn polygon_centroid(polygon: &[Point]) -> Point {
    let n = polygon.len();
    let area = polygon_area(polygon);
    if area.abs() < 1e-12 {
        let inv = 1.0 / n as f64;
        return polygon
            .iter()
            .fold([0.0, 0.0], |acc, p| [acc[0] + p[0] * inv, acc[1] + p[1] * inv]);
    }
    let mut c = [0.0, 0.0];
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        let w = a[0] * b[1] - b[0] * a[1];
        c[0] += (a[0] + b[0]) * w;
        c[1] += (a[1] + b[1]) * w;
    }
    [c[0] / (6.0 * area), c[1] / (6.0 * area)]
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(p: Point, polygon: &[Point]) -> bool {
    let n = polygon.len();
    let mut inside = false;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Even-odd scanline fill evaluated at pixel centers. A pixel is set exactly
/// when [`point_in_polygon`] holds for its center.
pub fn fill_polygon(polygon: &[Point], width: usize, height: usize) -> Mask {
    let mut out = Grid::filled(width, height, false);
    let n = polygon.len();
    let mut xs = Vec::new();
    for y in 0..height {
        let yc = y as f64 + 0.5;
        xs.clear();
        for i in 0..n {
            let a = polygon[i];
            let b = polygon[(i + 1) % n];
            if (a[1] > yc) != (b[1] > yc) {
                xs.push(a[0] + (yc - a[1]) * (b[0] - a[0]) / (b[1] - a[1]));
            }
        }
        xs.sort_by(f64::total_cmp);
        for span in xs.chunks_exact(2) {
            // centers xc with span[0] <= xc < span[1]
            let start = (span[0] - 0.5).ceil().max(0.0);
            let end = (span[1] - 0.5).ceil().min(width as f64);
            let (start, end) = (start as usize, end.max(0.0) as usize);
            for x in start..end {
                out.set(x, y, true);
            }
        }
    }
    out
}

/// 8-connected pixel trace of the closed polyline through the curve's ray
/// points, clipped to `width × height`. Sorted, without duplicates.
pub fn rasterize_curve(curve: &RingCurve, width: usize, height: usize) -> Vec<(usize, usize)> {
    rasterize_closed_polyline(&curve.points(), width, height)
}

pub fn rasterize_closed_polyline(
    points: &[Point],
    width: usize,
    height: usize,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let n = points.len();
    for i in 0..n {
        let Some((a, b)) = clip_segment(points[i], points[(i + 1) % n], width, height) else {
            continue;
        };
        bresenham(
            (a[0].floor() as i64, a[1].floor() as i64),
            (b[0].floor() as i64, b[1].floor() as i64),
            |x, y| {
                if x >= 0 && y >= 0 && (x as usize) < width && (y as usize) < height {
                    out.push((x as usize, y as usize));
                }
            },
        );
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Liang–Barsky clip against the raster extent padded by one pixel. Returns
/// `None` when the segment misses it entirely.
fn clip_segment(a: Point, b: Point, width: usize, height: usize) -> Option<(Point, Point)> {
    let (xmin, ymin) = (-1.0, -1.0);
    let (xmax, ymax) = (width as f64 + 1.0, height as f64 + 1.0);
    let d = [b[0] - a[0], b[1] - a[1]];
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [
        (-d[0], a[0] - xmin),
        (d[0], xmax - a[0]),
        (-d[1], a[1] - ymin),
        (d[1], ymax - a[1]),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
            if t0 > t1 {
                return None;
            }
        }
    }
    let lerp = |t: f64| [a[0] + t * d[0], a[1] + t * d[1]];
    Some((lerp(t0), lerp(t1)))
}

fn bresenham(from: (i64, i64), to: (i64, i64), mut plot: impl FnMut(i64, i64)) {
    let (mut x, mut y) = from;
    let dx = (to.0 - x).abs();
    let dy = -(to.1 - y).abs();
    let sx = if x < to.0 { 1 } else { -1 };
    let sy = if y < to.1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        plot(x, y);
        if (x, y) == to {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

/// Pixels whose centers lie within `width_px / 2` of the closed polyline.
pub fn stroke_closed_polyline(points: &[Point], width_px: f64, width: usize, height: usize) -> Mask {
    let mut out = Grid::filled(width, height, false);
    stroke_into(&mut out, points, width_px);
    out
}

pub(crate) fn stroke_into(out: &mut Mask, points: &[Point], width_px: f64) {
    let half = width_px / 2.0;
    let (w, h) = out.dims();
    let n = points.len();
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        let x0 = (a[0].min(b[0]) - half - 0.5).floor().max(0.0);
        let x1 = (a[0].max(b[0]) + half - 0.5).ceil().min(w as f64 - 1.0);
        let y0 = (a[1].min(b[1]) - half - 0.5).floor().max(0.0);
        let y1 = (a[1].max(b[1]) + half - 0.5).ceil().min(h as f64 - 1.0);
        if x0 > x1 || y0 > y1 {
            continue;
        }
        for y in y0 as usize..=y1 as usize {
            for x in x0 as usize..=x1 as usize {
                let c = [x as f64 + 0.5, y as f64 + 0.5];
                if point_segment_distance(c, a, b) <= half {
                    out.set(x, y, true);
                }
            }
        }
    }
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = [a[0] + t * ab[0] - p[0], a[1] + t * ab[1] - p[1]];
    (q[0] * q[0] + q[1] * q[1]).sqrt()
}

/// Pith curve plus rings ordered inner to outer, all on one ray fan.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskDetection {
    pith: RingCurve,
    rings: Vec<RingCurve>,
}

impl DiskDetection {
    /// Validates the shared ray fan and per-ray outward monotonicity.
    pub fn new(pith: RingCurve, rings: Vec<RingCurve>) -> Result<Self> {
        let mut prev = &pith;
        for (k, ring) in rings.iter().enumerate() {
            if ring.origin() != pith.origin() || ring.theta() != pith.theta() {
                return Err(Error::validation(format!(
                    "ring {k} does not share the pith's origin and ray count"
                )));
            }
            if let Some(j) = (0..ring.theta()).find(|&j| ring.radii[j] < prev.radii[j]) {
                return Err(Error::validation(format!(
                    "ring {k} moves inward on ray {j}: {} < {}",
                    ring.radii[j], prev.radii[j]
                )));
            }
            prev = ring;
        }
        Ok(Self { pith, rings })
    }

    pub fn pith(&self) -> &RingCurve {
        &self.pith
    }

    pub fn rings(&self) -> &[RingCurve] {
        &self.rings
    }

    pub fn origin(&self) -> Point {
        self.pith.origin()
    }

    pub fn theta(&self) -> usize {
        self.pith.theta()
    }

    /// Re-expresses every curve on another ray fan.
    pub fn resample(&self, origin: Point, theta: usize) -> Result<Self> {
        let pith = self.pith.resample(origin, theta)?;
        let rings = self
            .rings
            .iter()
            .map(|r| r.resample(origin, theta))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pith, rings)
    }
}

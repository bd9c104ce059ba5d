//! Deterministic synthetic cross-sections with exact ground truth.
//!
//! Rings are circles whose centers are jittered around the pith. Each ring
//! is rendered as light earlywood darkening into latewood, so the boundary
//! is the sharp dark-to-light step where the next ring starts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::labels::Annotation;
use crate::model::{ray_direction, Grid, ImageRGB, Mask, Point, DEFAULT_THETA};

/// Mask margin beyond the outermost ring.
pub const MASK_MARGIN_PX: f64 = 5.0;

const WOOD: [f32; 3] = [222.0, 184.0, 135.0];
const PITH_TONE: f32 = 0.93;
const OUTSIDE: [f32; 3] = [38.0, 38.0, 44.0];
const TEXTURE_AMPLITUDE: f64 = 0.03;
const LATEWOOD_START: f64 = 0.55;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    /// Side of the square image.
    pub size: usize,
    pub n_rings: usize,
    /// Pith radius.
    pub base_radius: f64,
    /// Radial distance between consecutive ring boundaries.
    pub ring_gap: f64,
    /// Ring center jitter radius as a fraction of `ring_gap`, in `[0, 0.5)`.
    pub eccentricity: f64,
    /// Latewood darkening, in `[0, 1]`.
    pub ring_contrast: f64,
    /// Additive Gaussian noise as a fraction of full scale, in `[0, 1]`.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SynthConfig {
    /// Pith at 4% of the image side; rings fill the disk out to 45%.
    pub fn new(size: usize, n_rings: usize, seed: u64) -> Self {
        let base_radius = 0.04 * size as f64;
        let ring_gap = (0.45 * size as f64 - base_radius) / n_rings.max(1) as f64;
        Self {
            size,
            n_rings,
            base_radius,
            ring_gap,
            eccentricity: 0.0,
            ring_contrast: 0.5,
            noise_sigma: 0.0,
            seed,
        }
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn with_eccentricity(mut self, ecc: f64) -> Self {
        self.eccentricity = ecc;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rings == 0 {
            return Err(Error::validation("synthetic disk needs at least one ring"));
        }
        if self.size < 16 {
            return Err(Error::validation(format!("image size {} is too small", self.size)));
        }
        if !(self.base_radius > 0.0 && self.ring_gap > 0.0) {
            return Err(Error::validation("base radius and ring gap must be positive"));
        }
        if !(0.0..0.5).contains(&self.eccentricity) {
            return Err(Error::validation(format!(
                "eccentricity must lie in [0, 0.5), got {}",
                self.eccentricity
            )));
        }
        if !(0.0..=1.0).contains(&self.ring_contrast) || !(0.0..=1.0).contains(&self.noise_sigma) {
            return Err(Error::validation("ring contrast and noise sigma must lie in [0, 1]"));
        }
        let reach = self.base_radius
            + self.n_rings as f64 * self.ring_gap
            + self.eccentricity * self.ring_gap
            + MASK_MARGIN_PX;
        if reach > self.size as f64 / 2.0 {
            return Err(Error::validation(format!(
                "rings reach {reach:.1} px from the center but the image half-size is {}",
                self.size as f64 / 2.0
            )));
        }
        Ok(())
    }
}

/// A circular boundary with its own center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    fn distance(&self, p: Point) -> f64 {
        ((p[0] - self.center[0]).powi(2) + (p[1] - self.center[1]).powi(2)).sqrt()
    }

    /// Distance along ray `j` from `origin` (inside the circle) to the circle.
    fn ray_hit(&self, origin: Point, j: usize, theta: usize) -> f64 {
        let u = ray_direction(j, theta);
        let e = [self.center[0] - origin[0], self.center[1] - origin[1]];
        let ue = u[0] * e[0] + u[1] * e[1];
        let e2 = e[0] * e[0] + e[1] * e[1];
        ue + (ue * ue - e2 + self.radius * self.radius).sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticDisk {
    pub image: ImageRGB,
    pub mask: Mask,
    pub annotation: Annotation,
    /// Pith followed by the ring boundaries, inner to outer.
    pub boundaries: Vec<Circle>,
}

impl SyntheticDisk {
    pub fn center(&self) -> Point {
        self.boundaries[0].center
    }
}

/// Renders a synthetic disk. Bit-identical for identical configs.
pub fn generate_disk(cfg: &SynthConfig) -> Result<SyntheticDisk> {
    cfg.validate()?;
    let size = cfg.size;
    let c = [size as f64 / 2.0, size as f64 / 2.0];

    // geometry and texture use stream 0, pixel noise stream 1, so the
    // ground truth does not depend on the noise level
    let mut geo = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut boundaries = vec![Circle {
        center: c,
        radius: cfg.base_radius,
    }];
    for k in 1..=cfg.n_rings {
        let angle = geo.random::<f64>() * std::f64::consts::TAU;
        let r = cfg.eccentricity * cfg.ring_gap * geo.random::<f64>().sqrt();
        boundaries.push(Circle {
            center: [c[0] + r * angle.cos(), c[1] + r * angle.sin()],
            radius: cfg.base_radius + k as f64 * cfg.ring_gap,
        });
    }
    let texture_freq = 40.0 + (geo.random::<f64>() * 20.0).floor();
    let texture_phase = geo.random::<f64>() * std::f64::consts::TAU;

    let outer = *boundaries.last().unwrap();
    let contrast = cfg.ring_contrast;
    let shade = |p: Point| -> [f32; 3] {
        if outer.distance(p) > outer.radius + MASK_MARGIN_PX {
            return OUTSIDE;
        }
        let dp = boundaries[0].distance(p);
        let angle = (p[1] - c[1]).atan2(p[0] - c[0]);
        let texture = 1.0 + TEXTURE_AMPLITUDE * (texture_freq * angle + texture_phase).sin();
        let tone = if dp < boundaries[0].radius {
            PITH_TONE as f64
        } else {
            match (1..boundaries.len()).find(|&k| boundaries[k].distance(p) < boundaries[k].radius) {
                Some(k) => {
                    let inner = boundaries[k - 1];
                    let d_in = (inner.distance(p) - inner.radius).max(0.0);
                    let d_out = boundaries[k].radius - boundaries[k].distance(p);
                    let t = d_in / (d_in + d_out);
                    1.0 - contrast * smoothstep(LATEWOOD_START, 1.0, t)
                }
                None => 1.0,
            }
        } * texture;
        WOOD.map(|v| v * tone as f32)
    };

    let mut rgb = vec![0.0f32; size * size * 3];
    rgb.par_chunks_mut(size * 3).enumerate().for_each(|(y, row)| {
        for x in 0..size {
            let v = shade([x as f64 + 0.5, y as f64 + 0.5]);
            row[x * 3..x * 3 + 3].copy_from_slice(&v);
        }
    });

    if cfg.noise_sigma > 0.0 {
        let mut noise_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        noise_rng.set_stream(1);
        let normal = Normal::new(0.0f32, (cfg.noise_sigma * 255.0) as f32).expect("sigma is finite");
        for v in &mut rgb {
            *v += normal.sample(&mut noise_rng);
        }
    }
    let data = rgb.into_iter().map(|v| v.round().clamp(0.0, 255.0) as u8).collect();
    let image = ImageRGB::new(size, size, data)?;

    let mask_data = (0..size * size)
        .map(|i| {
            let p = [(i % size) as f64 + 0.5, (i / size) as f64 + 0.5];
            outer.distance(p) <= outer.radius + MASK_MARGIN_PX
        })
        .collect();
    let mask = Grid::from_vec(size, size, mask_data)?;

    let polygon = |b: &Circle| -> Vec<Point> {
        (0..DEFAULT_THETA)
            .map(|j| {
                let r = b.ray_hit(c, j, DEFAULT_THETA);
                let u = ray_direction(j, DEFAULT_THETA);
                [c[0] + r * u[0], c[1] + r * u[1]]
            })
            .collect()
    };
    let annotation = Annotation {
        image_name: format!("synth_{}", cfg.seed),
        width: size,
        height: size,
        pith: polygon(&boundaries[0]),
        rings: boundaries[1..].iter().map(polygon).collect(),
        confidence: None,
    };

    Ok(SyntheticDisk {
        image,
        mask,
        annotation,
        boundaries,
    })
}

fn smoothstep(edge0: f64, edge1: f64, x: f64) -> f64 {
    let t = ((x - edge0) / (edge1 - edge0)).clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

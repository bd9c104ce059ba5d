//! Inject a +10 px error into the first traced ring and resume tracing.
//!
//! The tracer only ever steps outward from the previous curve, so with a
//! scorer that predicts a ring-width step the error is carried into every
//! later ring. The gradient scorer re-locks onto the next true edge.

use ringtrace::resample::PolarStrip;
use ringtrace::scorer::{GradientScorer, ScorerPrediction};
use ringtrace::synth::{generate_disk, SynthConfig, SyntheticDisk};
use ringtrace::tracer::{resume_trace, TraceConfig};
use ringtrace::DiskDetection;

/// Mean absolute radial error of each ring after the perturbed one.
fn later_errors(det: &DiskDetection, gt: &DiskDetection) -> Vec<f64> {
    (1..gt.rings().len().min(det.rings().len()))
        .map(|k| {
            let (d, g) = (det.rings()[k].radii(), gt.rings()[k].radii());
            d.iter().zip(g).map(|(a, b)| (a - b).abs()).sum::<f64>() / d.len() as f64
        })
        .collect()
}

pub fn perturbed_trace<B: ringtrace::scorer::BoundaryScorer>(
    disk: &SyntheticDisk,
    scorer: &B,
) -> ringtrace::Result<(DiskDetection, DiskDetection)> {
    let gt = disk.annotation.to_detection(360)?;
    let seed = gt.rings()[0].offset(10.0)?;
    let cfg = TraceConfig {
        max_rings: gt.rings().len(),
        ..TraceConfig::default()
    };
    let out = resume_trace(&disk.image, gt.pith(), vec![seed], &disk.mask, scorer, &cfg)?;
    Ok((out.detection, gt))
}

pub fn run() -> ringtrace::Result<Vec<f64>> {
    let cfg = SynthConfig::new(1500, 8, 1).with_noise(0.02).with_eccentricity(0.1);
    let disk = generate_disk(&cfg)?;

    let gap = cfg.ring_gap;
    let step = move |strip: &PolarStrip| -> ringtrace::Result<ScorerPrediction> {
        Ok(ScorerPrediction {
            offsets: vec![gap; strip.theta()],
            background: vec![false; strip.theta()],
            confidence: vec![1.0; strip.theta()],
        })
    };
    let (det, gt) = perturbed_trace(&disk, &step)?;
    let carried = later_errors(&det, &gt);
    println!("ring-width steps:  {:.1?}", carried);

    let (det, gt) = perturbed_trace(&disk, &GradientScorer::default())?;
    println!("gradient scorer:   {:.1?}", later_errors(&det, &gt));
    Ok(carried)
}

#[allow(dead_code)]
fn main() -> ringtrace::Result<()> {
    run().map(|_| ())
}

//! Trace from class probability maps instead of raw intensity. One-hot maps
//! rasterized from the ground truth stand in for a segmentation network.

use ringtrace::labels::rasterize_classmap;
use ringtrace::metrics::{assign_rings, precision_recall_fscore, AssignParams};
use ringtrace::scorer::MapScorer;
use ringtrace::synth::{generate_disk, SynthConfig};
use ringtrace::tracer::{trace_rings, TraceConfig};
use ringtrace::ProbabilityMaps;

pub fn run() -> ringtrace::Result<f64> {
    let disk = generate_disk(&SynthConfig::new(500, 5, 8))?;
    let classes = rasterize_classmap(&disk.annotation, &disk.mask, 3.0)?;
    let scorer = MapScorer::new(ProbabilityMaps::one_hot(&classes));

    let gt = disk.annotation.to_detection(360)?;
    // the maps carry no intensity, so the strip source is the boundary plane
    let source = scorer.maps.plane(ringtrace::PixelClass::Boundary).clone();
    let out = trace_rings(&source, gt.pith(), &disk.mask, &scorer, &TraceConfig::default())?;
    let a = assign_rings(&out.detection, &gt, AssignParams::default())?;
    let (p, r, f) = precision_recall_fscore(&a);
    println!("{} rings traced, stop {:?}; P {p:.1} R {r:.1} F {f:.1}", out.detection.rings().len(), out.stop);
    Ok(f)
}

#[allow(dead_code)]
fn main() -> ringtrace::Result<()> {
    run().map(|_| ())
}

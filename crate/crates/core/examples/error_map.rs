//! Overlay and polar error map for a detection with one badly placed ring.

use std::path::PathBuf;

use ringtrace::io;
use ringtrace::metrics::{assign_rings, AssignParams};
use ringtrace::synth::{generate_disk, SynthConfig};
use ringtrace::viz::{overlay, polar_error_map};
use ringtrace::DiskDetection;

pub fn run() -> ringtrace::Result<PathBuf> {
    let disk = generate_disk(&SynthConfig::new(400, 4, 5))?;
    let gt = disk.annotation.to_detection(360)?;

    // shift the third ring outward by 6 px on the right half of the disk
    let mut rings = gt.rings().to_vec();
    let radii: Vec<f64> = rings[2]
        .radii()
        .iter()
        .enumerate()
        .map(|(j, &r)| if !(90..270).contains(&j) { r + 6.0 } else { r })
        .collect();
    rings[2] = ringtrace::RingCurve::new(gt.origin(), radii)?;
    let det = DiskDetection::new(gt.pith().clone(), rings)?;

    let a = assign_rings(&det, &gt, AssignParams::default())?;
    let (map, sidecar) = polar_error_map(&a, &gt, 256);
    let dir = std::env::temp_dir().join("ringtrace-error-map");
    io::create_dir(&dir)?;
    io::write_rgb(&dir.join("overlay.png"), &overlay(&disk.image, &gt, &det))?;
    io::write_rgb(&dir.join("errmap.png"), &map)?;
    io::write_json(&dir.join("errmap.json"), &sidecar)?;
    for ring in &sidecar.rings {
        println!("ring {}: matched {} mean error {:?}", ring.gt, ring.matched, ring.mean_abs_error);
    }
    println!("scale tops out at {:.1} px; files in {}", sidecar.scale_max_px, dir.display());
    Ok(dir)
}

#[allow(dead_code)]
fn main() -> ringtrace::Result<()> {
    run().map(|_| ())
}

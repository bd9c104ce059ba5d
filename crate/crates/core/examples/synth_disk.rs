//! Render a synthetic disk and write the image, mask and annotation triple.

use std::path::PathBuf;

use ringtrace::io;
use ringtrace::labels::rasterize_instancemap;
use ringtrace::synth::{generate_disk, SynthConfig};

pub fn run() -> ringtrace::Result<PathBuf> {
    let cfg = SynthConfig::new(600, 6, 42).with_noise(0.02).with_eccentricity(0.2);
    let disk = generate_disk(&cfg)?;

    let dir = std::env::temp_dir().join("ringtrace-synth-disk");
    io::create_dir(&dir)?;
    let stem = &disk.annotation.image_name;
    io::write_rgb(&dir.join(format!("{stem}.png")), &disk.image)?;
    io::write_mask(&dir.join(format!("{stem}.mask.png")), &disk.mask)?;
    io::write_annotation(&dir.join(format!("{stem}.json")), &disk.annotation)?;

    let instances = rasterize_instancemap(&disk.annotation, &disk.mask)?;
    println!(
        "{stem}: {} rings, gap {:.1} px, {} instances, {} mask pixels -> {}",
        disk.annotation.rings.len(),
        cfg.ring_gap,
        instances.validate_contiguous()?,
        disk.mask.count(),
        dir.display()
    );
    Ok(dir)
}

#[allow(dead_code)]
fn main() -> ringtrace::Result<()> {
    run().map(|_| ())
}

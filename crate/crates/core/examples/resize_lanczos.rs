//! Lanczos resize to a 1500 px longest side, with the annotation scaled to
//! match.

use ringtrace::labels::scale_annotation;
use ringtrace::resample::{lanczos_kernel, resize_factors, resize_longest, target_dims};
use ringtrace::synth::{generate_disk, SynthConfig};

pub fn run() -> ringtrace::Result<(usize, usize)> {
    println!(
        "L(0) = {}, L(1) = {}, L(0.5) = {:.6}",
        lanczos_kernel(0.0, 3),
        lanczos_kernel(1.0, 3),
        lanczos_kernel(0.5, 3)
    );
    println!("3500x2000 -> {:?}", target_dims(3500, 2000, 1500));

    let disk = generate_disk(&SynthConfig::new(900, 4, 3))?;
    let big = resize_longest(&disk.image, 1500, 3)?;
    let (fx, _) = resize_factors(900, 900, 1500);
    let ann = scale_annotation(&disk.annotation, fx)?;
    println!(
        "{}x{} -> {}x{}; pith centroid {:?} -> {:?}",
        disk.image.width(),
        disk.image.height(),
        big.width(),
        big.height(),
        disk.annotation.pith_center(),
        ann.pith_center()
    );
    Ok((big.width(), big.height()))
}

#[allow(dead_code)]
fn main() -> ringtrace::Result<()> {
    run().map(|_| ())
}

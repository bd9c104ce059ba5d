//! Unwrap the annulus outside a circle into a polar strip and find the
//! next intensity edge along each ray.

use ringtrace::resample::sample_polar_strip;
use ringtrace::scorer::{gradient_scorer, GradientScorer};
use ringtrace::{ImageRGB, RingCurve};

pub fn run() -> ringtrace::Result<f64> {
    // dark disk of radius 40 on a light background
    let mut img = ImageRGB::filled(160, 160, [220, 220, 220])?;
    for y in 0..160 {
        for x in 0..160 {
            let (dx, dy) = (x as f64 + 0.5 - 80.0, y as f64 + 0.5 - 80.0);
            if dx.hypot(dy) < 40.0 {
                img.put_pixel(x, y, [60, 50, 40]);
            }
        }
    }
    let base = RingCurve::circle([80.0, 80.0], 25.0, 72)?;
    let strip = sample_polar_strip(&img, &base, 30.0, 61)?;
    println!(
        "strip: {} rays x {} samples, {:.2} px apart",
        strip.theta(),
        strip.n_samples(),
        strip.sample_spacing()
    );
    let ray0: Vec<String> = strip.ray_intensity(0).iter().step_by(6).map(|v| format!("{v:.0}")).collect();
    println!("ray 0 luminance every 3 px: {}", ray0.join(" "));

    let pred = gradient_scorer(&strip, &GradientScorer::default())?;
    let mean = pred.offsets.iter().sum::<f64>() / pred.offsets.len() as f64;
    println!("mean edge offset {mean:.2} px (expected 15)");
    Ok(mean)
}

#[allow(dead_code)]
fn main() -> ringtrace::Result<()> {
    run().map(|_| ())
}

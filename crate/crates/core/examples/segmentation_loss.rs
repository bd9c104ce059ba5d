//! Weighted cross-entropy plus Dice loss on a tiny class map, for a perfect
//! and a hedging prediction.

use ringtrace::metrics::{segmentation_loss, LossWeights};
use ringtrace::{Grid, PixelClass, ProbabilityMaps};

pub fn run() -> ringtrace::Result<(f64, f64)> {
    use PixelClass::*;
    let gt = Grid::from_vec(4, 1, vec![Background, Ring, Boundary, Pith])?;
    let weights = LossWeights::default();

    let perfect = segmentation_loss(&ProbabilityMaps::one_hot(&gt), &gt, &weights)?;

    let uniform = Grid::filled(4, 1, 0.25f32);
    let hedge = ProbabilityMaps::new(
        [uniform.clone(), uniform.clone(), uniform.clone(), uniform],
        1e-6,
    )?;
    let hedging = segmentation_loss(&hedge, &gt, &weights)?;

    println!("weights {weights:?}");
    println!("one-hot prediction: {perfect:.2e}");
    println!("uniform prediction: {hedging:.4}");
    Ok((perfect, hedging))
}

#[allow(dead_code)]
fn main() -> ringtrace::Result<()> {
    run().map(|_| ())
}

//! Ring matching and the instance metrics on a hand-made detection:
//! one ring is missed and one spurious ring is added.

use ringtrace::metrics::{
    adapted_rand_error, assign_rings, mean_average_recall, precision_recall_fscore, AssignParams,
};
use ringtrace::{labels, Annotation, DiskDetection, Grid, RingCurve};

fn disk(radii: &[f64]) -> ringtrace::Result<DiskDetection> {
    let o = [120.0, 120.0];
    let rings = radii
        .iter()
        .map(|&r| RingCurve::circle(o, r, 360))
        .collect::<ringtrace::Result<_>>()?;
    DiskDetection::new(RingCurve::circle(o, 8.0, 360)?, rings)
}

pub fn run() -> ringtrace::Result<(f64, f64, f64)> {
    let gt = disk(&[30.0, 55.0, 80.0, 105.0])?;
    let det = disk(&[31.0, 54.0, 62.0, 106.0])?;

    let a = assign_rings(&det, &gt, AssignParams::default())?;
    for p in &a.pairs {
        println!("gt {} <- det {}  mean error {:.2} px", p.gt, p.det, p.mean_error());
    }
    println!("unmatched gt {:?}, unmatched det {:?}", a.unmatched_gt, a.unmatched_det);
    let (p, r, f) = precision_recall_fscore(&a);
    println!("P {p:.1}  R {r:.1}  F {f:.1}");

    let to_map = |d: &DiskDetection| {
        let ann = Annotation::from_detection(d, "demo", 240, 240, None);
        let mask = Grid::filled(240, 240, true);
        labels::rasterize_instancemap(&ann, &mask)
    };
    let (gm, dm) = (to_map(&gt)?, to_map(&det)?);
    let arand = adapted_rand_error(&dm, &gm)?;
    let mar = mean_average_recall(&dm, &gm)?;
    println!("mAR {mar:.3}  ARAND {arand:.3}");
    Ok((f, mar, arand))
}

#[allow(dead_code)]
fn main() -> ringtrace::Result<()> {
    run().map(|_| ())
}

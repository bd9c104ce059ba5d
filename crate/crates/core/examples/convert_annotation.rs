//! Ingest an annotation document and rasterize it into training labels.

use ringtrace::labels::{ingest_annotation, rasterize_classmap, rasterize_instancemap, DEFAULT_BOUNDARY_WIDTH};
use ringtrace::{Grid, PixelClass};

const DOC: &str = r#"{
  "image": "square_disk",
  "width": 64,
  "height": 64,
  "pith": [[28, 28], [36, 28], [36, 36], [28, 36]],
  "rings": [
    [[8, 8], [56, 8], [56, 56], [8, 56]],
    [[18, 18], [46, 18], [46, 46], [18, 46], [18, 46]]
  ]
}"#;

pub fn run() -> ringtrace::Result<[usize; 4]> {
    // rings arrive out of order and with a repeated vertex; ingestion fixes both
    let ann = ingest_annotation(DOC)?;
    ann.validate_nesting()?;
    let mask = Grid::filled(64, 64, true);

    let classes = rasterize_classmap(&ann, &mask, DEFAULT_BOUNDARY_WIDTH)?;
    let mut counts = [0usize; 4];
    for c in classes.data() {
        counts[c.index()] += 1;
    }
    for c in PixelClass::ALL {
        println!("{c:?}: {} px", counts[c.index()]);
    }

    let instances = rasterize_instancemap(&ann, &mask)?;
    println!("{} instances; row 32: {:?}", instances.validate_contiguous()?, &instances.data()[32 * 64..33 * 64]);
    Ok(counts)
}

#[allow(dead_code)]
fn main() -> ringtrace::Result<()> {
    run().map(|_| ())
}

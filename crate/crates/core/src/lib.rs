//! Tree-ring delineation on disk cross-section images.
//!
//! Starting from a known pith, the tracer repeatedly unwraps the annulus just
//! outside the current boundary into a polar strip, asks a
//! [`BoundaryScorer`](scorer::BoundaryScorer) where the next boundary lies
//! along each ray, and appends that curve. Around that loop sit PNG/JSON
//! I/O, annotation rasterization, Lanczos resizing, a synthetic disk
//! generator, the ring matching and segmentation metrics, and diagnostic
//! renderings. The `ringtrace` binary exposes it all as subcommands.
//!
//! ```
//! use ringtrace::{synth, tracer, scorer::GradientScorer, metrics};
//!
//! let disk = synth::generate_disk(&synth::SynthConfig::new(300, 3, 7)).unwrap();
//! let gt = disk.annotation.to_detection(360).unwrap();
//! let out = tracer::trace_rings(
//!     &disk.image,
//!     gt.pith(),
//!     &disk.mask,
//!     &GradientScorer::default(),
//!     &tracer::TraceConfig::default(),
//! )
//! .unwrap();
//! let a = metrics::assign_rings(&out.detection, &gt, Default::default()).unwrap();
//! assert_eq!(a.true_positives(), 3);
//! ```

pub mod cli;
pub mod error;
pub mod io;
pub mod labels;
pub mod metrics;
pub mod model;
pub mod resample;
pub mod scorer;
pub mod synth;
pub mod tracer;
pub mod viz;

pub use error::{Error, Result};
pub use labels::Annotation;
pub use model::{DiskDetection, Grid, ImageRGB, InstanceMap, Mask, PixelClass, ProbabilityMaps, RingCurve};

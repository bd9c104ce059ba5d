//! Ring annotations: JSON ingestion, conversion to class and instance maps,
//! and rescaling alongside resized images.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    fill_polygon, point_in_polygon, polygon_area, polygon_centroid, stroke_into, ClassMap,
    DiskDetection, Grid, InstanceMap, Mask, PixelClass, Point, RingCurve,
};

/// Default boundary stroke at the working resolution.
pub const DEFAULT_BOUNDARY_WIDTH: f64 = 3.0;

/// On-disk annotation / detection document.
///
/// ```json
/// {"image": "disk", "width": 1500, "height": 1500,
///  "pith": [[x, y], ...], "rings": [[[x, y], ...], ...]}
/// ```
///
/// Detection files use the same layout with an optional per-ring
/// `confidence` array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationDocument {
    pub image: String,
    pub width: usize,
    pub height: usize,
    pub pith: Vec<Point>,
    pub rings: Vec<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<Vec<f64>>,
}

/// Validated annotation: pith polygon plus ring polygons sorted inner to
/// outer by enclosed area.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotation {
    pub image_name: String,
    pub width: usize,
    pub height: usize,
    pub pith: Vec<Point>,
    pub rings: Vec<Vec<Point>>,
    /// Per-ring confidences carried by detection documents, aligned with `rings`.
    pub confidence: Option<Vec<f64>>,
}

/// Parses and validates an annotation JSON document.
pub fn ingest_annotation(json: &str) -> Result<Annotation> {
    let doc: AnnotationDocument = serde_json::from_str(json)?;
    Annotation::from_document(doc)
}

fn clean_polygon(poly: &[Point], what: &str) -> Result<Vec<Point>> {
    if let Some(p) = poly.iter().find(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(Error::validation(format!("{what}: non-finite vertex {p:?}")));
    }
    let mut out: Vec<Point> = Vec::with_capacity(poly.len());
    for &p in poly {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    if out.len() < 3 {
        return Err(Error::validation(format!(
            "{what}: polygon has {} distinct vertices, need at least 3",
            out.len()
        )));
    }
    Ok(out)
}

impl Annotation {
    pub fn from_document(doc: AnnotationDocument) -> Result<Self> {
        if doc.width == 0 || doc.height == 0 {
            return Err(Error::validation(format!(
                "annotation dimensions must be positive, got {}x{}",
                doc.width, doc.height
            )));
        }
        let pith = clean_polygon(&doc.pith, "pith")?;
        let mut rings = doc
            .rings
            .iter()
            .enumerate()
            .map(|(k, r)| clean_polygon(r, &format!("rings[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        if let Some(c) = &doc.confidence {
            if c.len() != rings.len() {
                return Err(Error::validation(format!(
                    "confidence has {} entries for {} rings",
                    c.len(),
                    rings.len()
                )));
            }
        }
        let mut order: Vec<usize> = (0..rings.len()).collect();
        let areas: Vec<f64> = rings.iter().map(|r| polygon_area(r).abs()).collect();
        order.sort_by(|&a, &b| areas[a].total_cmp(&areas[b]).then(a.cmp(&b)));
        let confidence = doc
            .confidence
            .map(|c| order.iter().map(|&i| c[i]).collect::<Vec<_>>());
        let mut sorted = Vec::with_capacity(rings.len());
        for &i in &order {
            sorted.push(std::mem::take(&mut rings[i]));
        }
        Ok(Self {
            image_name: doc.image,
            width: doc.width,
            height: doc.height,
            pith,
            rings: sorted,
            confidence,
        })
    }

    pub fn to_document(&self) -> AnnotationDocument {
        AnnotationDocument {
            image: self.image_name.clone(),
            width: self.width,
            height: self.height,
            pith: self.pith.clone(),
            rings: self.rings.clone(),
            confidence: self.confidence.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("annotation serializes")
    }

    /// Origin used when the annotation is turned into ray-fan curves.
    pub fn pith_center(&self) -> Point {
        polygon_centroid(&self.pith)
    }

    /// Curve representation centered on the pith centroid.
    pub fn to_detection(&self, theta: usize) -> Result<DiskDetection> {
        self.to_detection_from(self.pith_center(), theta)
    }

    pub fn to_detection_from(&self, origin: Point, theta: usize) -> Result<DiskDetection> {
        let pith = RingCurve::from_polygon(&self.pith, origin, theta)?;
        let rings = self
            .rings
            .iter()
            .map(|r| RingCurve::from_polygon(r, origin, theta))
            .collect::<Result<Vec<_>>>()?;
        DiskDetection::new(pith, rings)
    }

    /// Polygon view of a detection.
    pub fn from_detection(
        det: &DiskDetection,
        image_name: impl Into<String>,
        width: usize,
        height: usize,
        confidence: Option<Vec<f64>>,
    ) -> Self {
        Self {
            image_name: image_name.into(),
            width,
            height,
            pith: det.pith().points(),
            rings: det.rings().iter().map(|r| r.points()).collect(),
            confidence,
        }
    }

    /// Checks that every polygon contains the previous one's vertices.
    pub fn validate_nesting(&self) -> Result<()> {
        let mut inner: (Option<usize>, &Vec<Point>) = (None, &self.pith);
        for (k, ring) in self.rings.iter().enumerate() {
            if let Some(v) = inner.1.iter().find(|&&v| !point_in_polygon(v, ring)) {
                let what = match inner.0 {
                    None => "pith".to_string(),
                    Some(i) => format!("rings[{i}]"),
                };
                return Err(Error::validation(format!(
                    "rings are not nested: {what} vertex {v:?} lies outside rings[{k}]"
                )));
            }
            inner = (Some(k), ring);
        }
        Ok(())
    }
}

fn check_dims(ann: &Annotation, mask: &Mask) -> Result<()> {
    if (ann.width, ann.height) != mask.dims() {
        return Err(Error::validation(format!(
            "annotation is {}x{} but mask is {}x{}",
            ann.width,
            ann.height,
            mask.width(),
            mask.height()
        )));
    }
    Ok(())
}

/// Four-class raster: background outside the mask; otherwise boundary near
/// any ring polyline, pith inside the pith polygon, ring elsewhere.
pub fn rasterize_classmap(ann: &Annotation, mask: &Mask, boundary_width: f64) -> Result<ClassMap> {
    check_dims(ann, mask)?;
    if boundary_width.is_nan() || boundary_width < 1.0 {
        return Err(Error::validation(format!(
            "boundary width must be at least 1 px, got {boundary_width}"
        )));
    }
    let (w, h) = mask.dims();
    let pith = fill_polygon(&ann.pith, w, h);
    let mut boundary = Grid::filled(w, h, false);
    for ring in &ann.rings {
        stroke_into(&mut boundary, ring, boundary_width);
    }
    let data = (0..w * h)
        .map(|i| {
            if !mask.data()[i] {
                PixelClass::Background
            } else if boundary.data()[i] {
                PixelClass::Boundary
            } else if pith.data()[i] {
                PixelClass::Pith
            } else {
                PixelClass::Ring
            }
        })
        .collect();
    Grid::from_vec(w, h, data)
}

/// Instance ids: pith = 1, the region between ring k−1 and ring k is k + 1
/// (rings 1-based), everything outside the outermost ring or the mask is 0.
pub fn rasterize_instancemap(ann: &Annotation, mask: &Mask) -> Result<InstanceMap> {
    check_dims(ann, mask)?;
    ann.validate_nesting()?;
    let (w, h) = mask.dims();
    let k_total = ann.rings.len() as u32;
    let mut depth = vec![0u32; w * h];
    for ring in &ann.rings {
        let fill = fill_polygon(ring, w, h);
        for (d, &inside) in depth.iter_mut().zip(fill.data()) {
            *d += inside as u32;
        }
    }
    let pith = fill_polygon(&ann.pith, w, h);
    let data = (0..w * h)
        .map(|i| {
            if !mask.data()[i] {
                0
            } else if pith.data()[i] {
                1
            } else if depth[i] == 0 {
                0
            } else {
                k_total - depth[i] + 2
            }
        })
        .collect();
    Grid::from_vec(w, h, data)
}

/// Multiplies every coordinate by `factor`; dimensions are rounded half away
/// from zero, minimum 1.
pub fn scale_annotation(ann: &Annotation, factor: f64) -> Result<Annotation> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(Error::validation(format!("scale factor must be positive, got {factor}")));
    }
    let scale_poly = |p: &Vec<Point>| p.iter().map(|v| [v[0] * factor, v[1] * factor]).collect();
    let dim = |v: usize| ((v as f64 * factor).round() as usize).max(1);
    Ok(Annotation {
        image_name: ann.image_name.clone(),
        width: dim(ann.width),
        height: dim(ann.height),
        pith: scale_poly(&ann.pith),
        rings: ann.rings.iter().map(scale_poly).collect(),
        confidence: ann.confidence.clone(),
    })
}

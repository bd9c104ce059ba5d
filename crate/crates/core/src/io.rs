//! PNG and JSON file formats.
//!
//! * images: 8-bit RGB PNG
//! * masks: 8-bit grayscale PNG, nonzero = inside the disk
//! * class maps: 8-bit grayscale PNG with values {0, 1, 2, 3}
//! * instance maps: 16-bit grayscale PNG
//! * probability maps: one 16-bit grayscale PNG per class,
//!   `<stem>.{bg,ring,boundary,pith}.png`, value / 65535 = probability

use std::path::{Path, PathBuf};

use image::{GrayImage, ImageBuffer, Luma, RgbImage};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::labels::{ingest_annotation, Annotation};
use crate::model::{ClassMap, Grid, ImageRGB, InstanceMap, Mask, PixelClass, ProbabilityMaps};

/// Tolerance on per-pixel probability sums after 16-bit dequantization.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-2;

pub const CLASS_SUFFIXES: [&str; 4] = ["bg", "ring", "boundary", "pith"];

fn image_err(path: &Path) -> impl FnOnce(image::ImageError) -> Error + '_ {
    move |source| Error::Image {
        path: path.to_path_buf(),
        source,
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_rgb(path: &Path) -> Result<ImageRGB> {
    let img = image::open(path).map_err(image_err(path))?.to_rgb8();
    let (w, h) = img.dimensions();
    ImageRGB::new(w as usize, h as usize, img.into_raw())
}

pub fn write_rgb(path: &Path, image: &ImageRGB) -> Result<()> {
    let buf = RgbImage::from_raw(image.width() as u32, image.height() as u32, image.data().to_vec())
        .expect("buffer matches dimensions");
    buf.save(path).map_err(image_err(path))
}

fn read_luma8(path: &Path) -> Result<Grid<u8>> {
    let img = image::open(path).map_err(image_err(path))?.to_luma8();
    let (w, h) = img.dimensions();
    Grid::from_vec(w as usize, h as usize, img.into_raw())
}

fn write_luma8(path: &Path, grid: &Grid<u8>) -> Result<()> {
    let buf = GrayImage::from_raw(grid.width() as u32, grid.height() as u32, grid.data().to_vec())
        .expect("buffer matches dimensions");
    buf.save(path).map_err(image_err(path))
}

fn read_luma16(path: &Path) -> Result<Grid<u16>> {
    let img = image::open(path).map_err(image_err(path))?.to_luma16();
    let (w, h) = img.dimensions();
    Grid::from_vec(w as usize, h as usize, img.into_raw())
}

fn write_luma16(path: &Path, grid: &Grid<u16>) -> Result<()> {
    let buf: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_raw(grid.width() as u32, grid.height() as u32, grid.data().to_vec())
            .expect("buffer matches dimensions");
    buf.save(path).map_err(image_err(path))
}

pub fn read_mask(path: &Path) -> Result<Mask> {
    Ok(read_luma8(path)?.map(|&v| v != 0))
}

pub fn write_mask(path: &Path, mask: &Mask) -> Result<()> {
    write_luma8(path, &mask.map(|&m| if m { 255 } else { 0 }))
}

pub fn read_classmap(path: &Path) -> Result<ClassMap> {
    let raw = read_luma8(path)?;
    let (w, h) = raw.dims();
    let data = raw
        .into_vec()
        .into_iter()
        .map(PixelClass::from_u8)
        .collect::<Result<Vec<_>>>()?;
    Grid::from_vec(w, h, data)
}

pub fn write_classmap(path: &Path, classes: &ClassMap) -> Result<()> {
    write_luma8(path, &classes.map(|&c| c as u8))
}

pub fn read_instancemap(path: &Path) -> Result<InstanceMap> {
    Ok(read_luma16(path)?.map(|&v| v as u32))
}

pub fn write_instancemap(path: &Path, map: &InstanceMap) -> Result<()> {
    if let Some(&v) = map.data().iter().find(|&&v| v > u16::MAX as u32) {
        return Err(Error::validation(format!("instance id {v} does not fit in 16 bits")));
    }
    write_luma16(path, &map.map(|&v| v as u16))
}

/// Path of one class plane for a probability-map stem.
pub fn probability_path(stem: &Path, class: PixelClass) -> PathBuf {
    let mut s = stem.as_os_str().to_os_string();
    s.push(format!(".{}.png", CLASS_SUFFIXES[class.index()]));
    PathBuf::from(s)
}

pub fn read_probability_maps(stem: &Path) -> Result<ProbabilityMaps> {
    let planes = PixelClass::ALL
        .iter()
        .map(|&c| {
            let path = probability_path(stem, c);
            Ok(read_luma16(&path)?.map(|&v| v as f32 / 65535.0))
        })
        .collect::<Result<Vec<_>>>()?;
    let planes: [Grid<f32>; 4] = planes.try_into().expect("four classes");
    ProbabilityMaps::new(planes, PROBABILITY_SUM_TOLERANCE)
}

pub fn write_probability_maps(stem: &Path, maps: &ProbabilityMaps) -> Result<()> {
    for c in PixelClass::ALL {
        let q = maps
            .plane(c)
            .map(|&p| (p.clamp(0.0, 1.0) * 65535.0).round() as u16);
        write_luma16(&probability_path(stem, c), &q)?;
    }
    Ok(())
}

pub fn read_annotation(path: &Path) -> Result<Annotation> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    ingest_annotation(&text)
}

pub fn write_annotation(path: &Path, ann: &Annotation) -> Result<()> {
    write_text(path, &ann.to_json())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(io_err(path))
}

pub fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rasters_round_trip_through_png() {
        let dir = tempfile::tempdir().unwrap();
        let inst = Grid::from_vec(3, 2, vec![0u32, 1, 2, 300, 65535, 7]).unwrap();
        let p = dir.path().join("i.png");
        write_instancemap(&p, &inst).unwrap();
        assert_eq!(read_instancemap(&p).unwrap(), inst);
        assert!(write_instancemap(&p, &Grid::from_vec(1, 1, vec![70000u32]).unwrap()).is_err());

        let classes = Grid::from_vec(2, 2, PixelClass::ALL.to_vec()).unwrap();
        let p = dir.path().join("c.png");
        write_classmap(&p, &classes).unwrap();
        assert_eq!(read_classmap(&p).unwrap(), classes);

        let bad = Grid::from_vec(1, 1, vec![9u8]).unwrap();
        write_luma8(&p, &bad).unwrap();
        assert!(read_classmap(&p).unwrap_err().is_validation());
    }

    #[test]
    fn probability_maps_validate_sums() {
        let dir = tempfile::tempdir().unwrap();
        let stem = dir.path().join("disk");
        let classes = Grid::from_vec(2, 1, vec![PixelClass::Ring, PixelClass::Pith]).unwrap();
        let maps = ProbabilityMaps::one_hot(&classes);
        write_probability_maps(&stem, &maps).unwrap();
        assert!(probability_path(&stem, PixelClass::Background).ends_with("disk.bg.png"));
        assert_eq!(read_probability_maps(&stem).unwrap(), maps);

        let half = Grid::filled(2, 1, 32768u16);
        write_luma16(&probability_path(&stem, PixelClass::Ring), &half).unwrap();
        assert!(read_probability_maps(&stem).unwrap_err().is_validation());
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = read_annotation(Path::new("/nonexistent/a.json")).unwrap_err();
        assert!(!err.is_validation());
        let err = read_rgb(Path::new("/nonexistent/a.png")).unwrap_err();
        assert!(!err.is_validation());
    }
}

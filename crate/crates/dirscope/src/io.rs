//! Raster decoding and encoding.

use std::fs;
use std::path::{Path, PathBuf};

use dirscope_core::image::to_grayscale;
use dirscope_core::{GrayImage, RgbImage};
use image::{DynamicImage, ImageFormat, Luma, Rgb};

use crate::error::{AppError, AppResult};

/// Decoded pixels at their stored orientation, scaled to [0, 255].
#[derive(Debug, Clone, PartialEq)]
pub enum Raster {
    Gray(GrayImage),
    Rgb(RgbImage),
}

impl Raster {
    pub fn into_gray(self) -> GrayImage {
        match self {
            Raster::Gray(g) => g,
            Raster::Rgb(c) => to_grayscale(&c),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            Raster::Gray(g) => g.dims(),
            Raster::Rgb(c) => (c.width(), c.height()),
        }
    }
}

fn decode_error(path: &Path, e: impl std::fmt::Display) -> AppError {
    AppError::data(format!("{}: {e}", path.display()))
}

/// Loads a PNG, binary PGM/PPM or baseline JPEG. 16-bit samples are mapped
/// by `v / 257`; alpha is dropped. Exif orientation is not applied.
pub fn load_raster(path: &Path) -> AppResult<Raster> {
    let bytes = fs::read(path).map_err(|e| decode_error(path, e))?;
    decode_raster(&bytes).map_err(|e| decode_error(path, e))
}

pub fn decode_raster(bytes: &[u8]) -> Result<Raster, image::ImageError> {
    let img = image::load_from_memory(bytes)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    Ok(match img {
        DynamicImage::ImageLuma8(b) => Raster::Gray(gray(w, h, b.into_raw().into_iter().map(f64::from))),
        DynamicImage::ImageLumaA8(_) => Raster::Gray(gray(w, h, img.to_luma8().into_raw().into_iter().map(f64::from))),
        DynamicImage::ImageLuma16(_) | DynamicImage::ImageLumaA16(_) => Raster::Gray(gray(
            w,
            h,
            img.to_luma16().into_raw().into_iter().map(|v| v as f64 / 257.0),
        )),
        DynamicImage::ImageRgb16(_) | DynamicImage::ImageRgba16(_) => {
            let raw: Vec<f64> = img
                .to_rgb16()
                .into_raw()
                .into_iter()
                .map(|v| v as f64 / 257.0)
                .collect();
            Raster::Rgb(RgbImage::from_interleaved(w, h, &raw).expect("decoder dimensions"))
        }
        other => {
            let raw: Vec<f64> = other.to_rgb8().into_raw().into_iter().map(f64::from).collect();
            Raster::Rgb(RgbImage::from_interleaved(w, h, &raw).expect("decoder dimensions"))
        }
    })
}

fn gray(w: usize, h: usize, samples: impl Iterator<Item = f64>) -> GrayImage {
    GrayImage::new(w, h, samples.collect()).expect("decoder dimensions")
}

/// Loads any supported raster as luminance.
pub fn load_gray(path: &Path) -> AppResult<GrayImage> {
    Ok(load_raster(path)?.into_gray())
}

fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

fn gray_buffer(img: &GrayImage) -> image::ImageBuffer<Luma<u8>, Vec<u8>> {
    let raw = img.samples().iter().map(|&v| to_u8(v)).collect();
    image::ImageBuffer::from_raw(img.width() as u32, img.height() as u32, raw).expect("buffer size")
}

fn save(path: &Path, img: DynamicImage, format: ImageFormat) -> AppResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    }
    img.save_with_format(path, format)
        .map_err(|e| AppError::data(format!("{}: {e}", path.display())))
}

/// Binary 8-bit PGM of the rounded, clamped samples.
pub fn save_pgm(path: &Path, img: &GrayImage) -> AppResult<()> {
    save(path, DynamicImage::ImageLuma8(gray_buffer(img)), ImageFormat::Pnm)
}

/// 8-bit grayscale PNG of the rounded, clamped samples.
pub fn save_png_gray(path: &Path, img: &GrayImage) -> AppResult<()> {
    save(path, DynamicImage::ImageLuma8(gray_buffer(img)), ImageFormat::Png)
}

/// Min-max normalizes to 0..=255. Constant inputs map to 0.
pub fn normalize_minmax(img: &GrayImage) -> GrayImage {
    let (lo, hi) = img.min_max();
    let span = hi - lo;
    img.map(|v| if span > 0.0 { (v - lo) / span * 255.0 } else { 0.0 })
}

/// Clips to the [q, 1-q] quantile range, then stretches to 0..=255.
pub fn contrast_stretch(img: &GrayImage, q: f64) -> GrayImage {
    let lo = dirscope_core::stats::quantile(img.samples(), q);
    let hi = dirscope_core::stats::quantile(img.samples(), 1.0 - q);
    let span = hi - lo;
    img.map(|v| {
        if span > 0.0 {
            ((v - lo) / span).clamp(0.0, 1.0) * 255.0
        } else {
            0.0
        }
    })
}

/// Blue-white-red map symmetric about zero, scaled by the largest magnitude.
pub fn save_diverging_png(path: &Path, m: &GrayImage, cell: usize) -> AppResult<()> {
    let peak = m.samples().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let (w, h) = m.dims();
    let buf = image::ImageBuffer::from_fn((w * cell) as u32, (h * cell) as u32, |x, y| {
        let v = m.get(x as usize / cell, y as usize / cell);
        let t = if peak > 0.0 { (v / peak).clamp(-1.0, 1.0) } else { 0.0 };
        let fade = to_u8(255.0 * (1.0 - t.abs()));
        if t >= 0.0 {
            Rgb([255, fade, fade])
        } else {
            Rgb([fade, fade, 255])
        }
    });
    save(path, DynamicImage::ImageRgb8(buf), ImageFormat::Png)
}

/// Files directly inside `dir` (or below it with `recursive`) whose
/// extension is a supported raster format, sorted by path.
pub fn list_images(dir: &Path, recursive: bool) -> AppResult<Vec<PathBuf>> {
    let mut out = Vec::new();
    walk(dir, recursive, &mut out)?;
    out.sort();
    Ok(out)
}

const EXTENSIONS: [&str; 6] = ["png", "pgm", "ppm", "pnm", "jpg", "jpeg"];

fn walk(dir: &Path, recursive: bool, out: &mut Vec<PathBuf>) -> AppResult<()> {
    let entries = fs::read_dir(dir).map_err(|e| AppError::io(dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| AppError::io(dir, e))?.path();
        if path.is_dir() {
            if recursive {
                walk(&path, recursive, out)?;
            }
        } else if path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
        {
            out.push(path);
        }
    }
    Ok(())
}

/// Expands directories in `inputs` into their image files, keeping files
/// as given.
pub fn expand_inputs(inputs: &[PathBuf], recursive: bool) -> AppResult<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            out.extend(list_images(p, recursive)?);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

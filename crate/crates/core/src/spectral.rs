//! Noise residuals and centered power spectra.

use alloc::format;

use crate::border::reflect;
use crate::error::{invalid, Error, Result};
use crate::fft::Fft2;
use crate::image::GrayImage;

/// Image minus its denoised version; same shape as the source.
pub type Residual = GrayImage;

pub const DEFAULT_SIGMA: f64 = 2.0;

/// Locally adaptive Wiener filter over a `window x window` neighborhood:
/// `m + max(v - sigma^2, 0) / max(v, sigma^2) * (x - m)` with local mean `m`
/// and local variance `v`.
pub fn denoise_wiener(img: &GrayImage, sigma: f64, window: usize) -> Result<GrayImage> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    if window % 2 == 0 || window < 3 {
        return Err(invalid(format!("window must be odd and >= 3, got {window}")));
    }
    let (w, h) = img.dims();
    if w == 0 || h == 0 {
        return Err(Error::Empty);
    }
    let noise = sigma * sigma;
    let r = (window / 2) as isize;
    let count = (window * window) as f64;
    let s = img.samples();
    let mut out = alloc::vec![0.0; w * h];
    let mut patch = alloc::vec![0.0; window * window];
    for y in 0..h {
        for x in 0..w {
            let mut i = 0;
            for dy in -r..=r {
                let row = reflect(y as isize + dy, h) * w;
                for dx in -r..=r {
                    patch[i] = s[row + reflect(x as isize + dx, w)];
                    i += 1;
                }
            }
            let m = patch.iter().sum::<f64>() / count;
            let v = patch.iter().map(|p| (p - m) * (p - m)).sum::<f64>() / count;
            let gain = if v > noise { (v - noise) / v } else { 0.0 };
            out[y * w + x] = m + gain * (s[y * w + x] - m);
        }
    }
    Ok(GrayImage::from_raw(w, h, out))
}

/// `img - denoise_wiener(img, sigma, 3)`.
pub fn residual(img: &GrayImage, sigma: f64) -> Result<Residual> {
    let d = denoise_wiener(img, sigma, 3)?;
    img.sub(&d)
}

/// Running mean of equally sized planes, folded in insertion order.
#[derive(Debug, Clone, Default)]
pub struct MeanAccumulator {
    sum: Option<GrayImage>,
    count: usize,
}

impl MeanAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, plane: &GrayImage) -> Result<()> {
        match &mut self.sum {
            None => self.sum = Some(plane.clone()),
            Some(acc) => {
                acc.require_dims(plane.dims())?;
                for (a, b) in acc.samples_mut().iter_mut().zip(plane.samples()) {
                    *a += b;
                }
            }
        }
        self.count += 1;
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn finish(self) -> Result<GrayImage> {
        let n = self.count as f64;
        self.sum.map(|s| s.scale(1.0 / n)).ok_or(Error::Empty)
    }
}

/// Mean residual of `images`, accumulated sequentially in the given order.
pub fn mean_residual<'a, I>(images: I, sigma: f64) -> Result<Residual>
where
    I: IntoIterator<Item = &'a GrayImage>,
{
    let mut acc = MeanAccumulator::new();
    for img in images {
        acc.push(&residual(img, sigma)?)?;
    }
    acc.finish()
}

/// Centered power spectrum. Zero frequency sits at `(width / 2, height / 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumImage {
    pub data: GrayImage,
    pub log_scaled: bool,
}

impl SpectrumImage {
    /// Value at signed frequency `(fx, fy)`.
    pub fn at(&self, fx: isize, fy: isize) -> f64 {
        let (w, h) = self.data.dims();
        let x = (fx + (w / 2) as isize).rem_euclid(w as isize) as usize;
        let y = (fy + (h / 2) as isize).rem_euclid(h as isize) as usize;
        self.data.get(x, y)
    }
}

/// `|FFT2(m - mean(m))|^2`, shifted so that zero frequency is centered, and
/// optionally mapped through `log(1 + P)` for display.
pub fn power_spectrum(m: &GrayImage, log_scale: bool) -> SpectrumImage {
    let (w, h) = m.dims();
    let mean = m.mean();
    let centered = m.map(|v| v - mean);
    let spec = Fft2::new(w, h).forward_real(&centered);
    let (cx, cy) = (w / 2, h / 2);
    let mut data = alloc::vec![0.0; w * h];
    for ky in 0..h {
        let y = (ky + cy) % h;
        for kx in 0..w {
            let x = (kx + cx) % w;
            let p = spec[ky * w + kx].norm_sqr();
            data[y * w + x] = if log_scale { libm::log1p(p) } else { p };
        }
    }
    SpectrumImage {
        data: GrayImage::from_raw(w, h, data),
        log_scaled: log_scale,
    }
}

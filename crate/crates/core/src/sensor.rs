//! Sensor-side artifacts: frame-stack profiles and linear-pattern extraction.
//!
//! The linear pattern is what fingerprint cleaning removes from an averaged
//! noise residual: row and column means per color-filter sub-lattice, plus
//! spectral peaks that stand out from a flat noise floor.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::directionality::{pyramid_score, ScoreMode};
use crate::error::invalid;
use crate::fft::Fft2;
use crate::image::center_crop_square;
use crate::spectral::{mean_residual, MeanAccumulator};
use crate::{Error, GrayImage, Result};

/// Bayer color-filter period.
pub const CFA_PERIOD: usize = 2;

/// Equally sized frames from one source, in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameStack {
    frames: Vec<GrayImage>,
    pub source: String,
}

impl FrameStack {
    pub fn new(frames: Vec<GrayImage>, source: impl Into<String>) -> Result<Self> {
        let first = frames.first().ok_or(Error::Empty)?;
        let dims = first.dims();
        for f in &frames[1..] {
            f.require_dims(dims)?;
        }
        Ok(Self {
            frames,
            source: source.into(),
        })
    }

    pub fn frames(&self) -> &[GrayImage] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.frames[0].dims()
    }

    pub fn transpose(&self) -> Self {
        Self {
            frames: self.frames.iter().map(GrayImage::transpose).collect(),
            source: self.source.clone(),
        }
    }
}

/// Elementwise mean, summed in frame order.
pub fn average_frames(stack: &FrameStack) -> Result<GrayImage> {
    let mut acc = MeanAccumulator::new();
    for f in stack.frames() {
        acc.push(f)?;
    }
    acc.finish()
}

/// Mean of each column.
pub fn column_profile(frame: &GrayImage) -> Vec<f64> {
    let (w, h) = frame.dims();
    let mut out = alloc::vec![0.0; w];
    for y in 0..h {
        for (o, v) in out.iter_mut().zip(frame.row(y)) {
            *o += v;
        }
    }
    out.iter_mut().for_each(|o| *o /= h as f64);
    out
}

/// Mean of each row.
pub fn row_profile(frame: &GrayImage) -> Vec<f64> {
    let w = frame.width() as f64;
    (0..frame.height())
        .map(|y| frame.row(y).iter().sum::<f64>() / w)
        .collect()
}

/// Removes column means and then row means, separately on each of the
/// `period x period` sub-lattices.
pub fn zero_mean_cfa(m: &GrayImage, period: usize) -> Result<GrayImage> {
    let (w, h) = m.dims();
    if period == 0 || w % period != 0 || h % period != 0 || w == 0 || h == 0 {
        return Err(invalid(format!("{w}x{h} is not divisible by the CFA period {period}")));
    }
    let mut out = m.clone();
    let (sw, sh) = (w / period, h / period);
    for oy in 0..period {
        for ox in 0..period {
            for sx in 0..sw {
                let x = ox + sx * period;
                let mean = (0..sh).map(|sy| out.get(x, oy + sy * period)).sum::<f64>() / sh as f64;
                for sy in 0..sh {
                    let y = oy + sy * period;
                    out.set(x, y, out.get(x, y) - mean);
                }
            }
            for sy in 0..sh {
                let y = oy + sy * period;
                let mean = (0..sw).map(|sx| out.get(ox + sx * period, y)).sum::<f64>() / sw as f64;
                for sx in 0..sw {
                    let x = ox + sx * period;
                    out.set(x, y, out.get(x, y) - mean);
                }
            }
        }
    }
    Ok(out)
}

/// Noise-like component of `m` in the Fourier domain.
///
/// Coefficients are normalized so that white noise of variance `sigma^2` has
/// mean power `sigma^2`. Each coefficient is scaled by
/// `sigma^2 / (max(v - sigma^2, 0) + sigma^2)` where `v` is the mean power
/// over its circular 3x3 frequency neighborhood, DC excluded. Flat
/// regions of the spectrum pass; isolated peaks are suppressed and end up in
/// `m - wiener_fourier(m)`. DC passes unchanged.
pub fn wiener_fourier(m: &GrayImage, sigma: f64) -> Result<GrayImage> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    let (w, h) = m.dims();
    if w == 0 || h == 0 {
        return Err(Error::Empty);
    }
    let fft = Fft2::new(w, h);
    let mut spec = fft.forward_real(m);
    let n = (w * h) as f64;
    let power: Vec<f64> = spec.iter().map(|c| c.norm_sqr() / n).collect();
    let noise = sigma * sigma;
    let mut gains = alloc::vec![1.0; w * h];
    for ky in 0..h {
        for kx in 0..w {
            if kx == 0 && ky == 0 {
                continue;
            }
            let (mut sum, mut count) = (0.0, 0usize);
            for dy in [h - 1, 0, 1] {
                let y = (ky + dy) % h;
                for dx in [w - 1, 0, 1] {
                    let x = (kx + dx) % w;
                    if x == 0 && y == 0 {
                        continue;
                    }
                    sum += power[y * w + x];
                    count += 1;
                }
            }
            let v = sum / count as f64;
            gains[ky * w + kx] = noise / ((v - noise).max(0.0) + noise);
        }
    }
    for (c, g) in spec.iter_mut().zip(&gains) {
        *c *= Complex64::new(*g, 0.0);
    }
    fft.inverse(&mut spec);
    Ok(GrayImage::from_fn(w, h, |x, y| spec[y * w + x].re))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearPattern {
    /// `avg_residual - fingerprint`.
    pub pattern: GrayImage,
    pub fingerprint: GrayImage,
    pub avg_residual: GrayImage,
    /// Pyramid directionality of the center square of `pattern`.
    pub d_score: f64,
}

/// Cleaned fingerprint of an averaged residual: CFA zero-meaning, then the
/// noise-like Fourier component with `sigma` set to the zero-meaned
/// residual's standard deviation.
pub fn clean_fingerprint(avg_residual: &GrayImage) -> Result<GrayImage> {
    let zm = zero_mean_cfa(avg_residual, CFA_PERIOD)?;
    let n = zm.area() as f64;
    let sigma = libm::sqrt(zm.samples().iter().map(|v| v * v).sum::<f64>() / n);
    if sigma == 0.0 {
        return Ok(zm);
    }
    wiener_fourier(&zm, sigma)
}

/// Linear pattern of an already averaged residual.
pub fn linear_pattern_from_residual(avg_residual: GrayImage) -> Result<LinearPattern> {
    let fingerprint = clean_fingerprint(&avg_residual)?;
    let pattern = avg_residual.sub(&fingerprint)?;
    let d_score = pyramid_score(&center_crop_square(&pattern)?, ScoreMode::Sum)?.d;
    Ok(LinearPattern {
        pattern,
        fingerprint,
        avg_residual,
        d_score,
    })
}

/// Averages the frames' noise residuals (denoiser noise level
/// `sigma_resid`) and splits the average into fingerprint and pattern.
pub fn linear_pattern(stack: &FrameStack, sigma_resid: f64) -> Result<LinearPattern> {
    if stack.len() < 2 {
        return Err(invalid("linear pattern needs at least two frames"));
    }
    linear_pattern_from_residual(mean_residual(stack.frames(), sigma_resid)?)
}

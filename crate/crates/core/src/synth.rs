//! Symmetric synthetic test images and controlled anisotropic transforms.
//!
//! A generated image is a sum of separable cosine products sharing one
//! frequency on both axes plus white Gaussian noise. The deterministic part is
//! transpose-symmetric by construction, so its expected directionality is
//! zero. Smoothing or resampling along a single axis then adds directionality
//! with a known sign.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::border::reflect;
use crate::error::{invalid, Result};
use crate::image::{Axis, GrayImage};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub size: usize,
    pub n_components: usize,
    /// Inclusive-exclusive amplitude interval `[lo, hi)`; `lo == hi` is allowed.
    pub amplitude_range: (f64, f64),
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    /// Calibration defaults: four components with amplitudes in `[5, 40)`
    /// and noise sigma 5 keep both detectors away from saturation.
    fn default() -> Self {
        Self {
            size: 512,
            n_components: 4,
            amplitude_range: (5.0, 40.0),
            noise_sigma: 5.0,
            seed: 0,
        }
    }
}

impl SynthParams {
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.size < 32 {
            return Err(invalid(format!("synthetic size must be >= 32, got {}", self.size)));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(invalid("noise_sigma must be finite and >= 0"));
        }
        let (lo, hi) = self.amplitude_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(invalid("amplitude range must satisfy lo <= hi"));
        }
        Ok(())
    }
}

/// Component frequencies are drawn uniformly from `1..=MAX_CYCLES` whole
/// cycles per image side, so every component is periodic on the grid.
pub const MAX_CYCLES: u32 = 8;

/// Per-image seed of corpus member `index`.
pub fn corpus_seed(base: u64, index: u64) -> u64 {
    base.wrapping_add(index)
}

/// One isotropic synthetic image; identical seeds give identical samples.
pub fn gen_symmetric(params: &SynthParams) -> Result<GrayImage> {
    params.validate()?;
    let n = params.size;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (lo, hi) = params.amplitude_range;

    let mut base = alloc::vec![128.0f64; n * n];
    let mut table = alloc::vec![0.0f64; n];
    for _ in 0..params.n_components {
        let amp = if hi > lo { rng.random_range(lo..hi) } else { lo };
        let f = rng.random_range(1..=MAX_CYCLES) as f64;
        for (i, t) in table.iter_mut().enumerate() {
            *t = libm::cos(2.0 * PI * f * i as f64 / n as f64);
        }
        for y in 0..n {
            let ty = table[y];
            for (x, v) in base[y * n..(y + 1) * n].iter_mut().enumerate() {
                // amp * (ty * tx) is bitwise symmetric in x and y
                *v += amp * (ty * table[x]);
            }
        }
    }
    if params.noise_sigma > 0.0 {
        let normal = Normal::new(0.0, params.noise_sigma).map_err(|_| invalid("noise_sigma"))?;
        for v in base.iter_mut() {
            *v += normal.sample(&mut rng);
        }
    }
    for v in base.iter_mut() {
        *v = v.clamp(0.0, 255.0);
    }
    Ok(GrayImage::from_raw(n, n, base))
}

/// Symmetric Hann window of length `k` (end points are zero), scaled to unit sum.
pub fn hanning(k: usize) -> Vec<f64> {
    if k == 1 {
        return alloc::vec![1.0];
    }
    let w: Vec<f64> = (0..k)
        .map(|i| 0.5 - 0.5 * libm::cos(2.0 * PI * i as f64 / (k - 1) as f64))
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

/// Convolves every line along `axis` with `kernel` (origin at `len / 2`),
/// reflecting at the borders.
pub(crate) fn convolve_axis(img: &GrayImage, axis: Axis, kernel: &[f64]) -> GrayImage {
    let (w, h) = img.dims();
    let half = (kernel.len() / 2) as isize;
    let mut out = alloc::vec![0.0; w * h];
    match axis {
        Axis::Horizontal => {
            let klen = kernel.len();
            let mut padded = alloc::vec![0.0; w + klen];
            for y in 0..h {
                let row = img.row(y);
                for (i, p) in padded.iter_mut().enumerate() {
                    *p = row[reflect(i as isize - half, w)];
                }
                for (x, o) in out[y * w..(y + 1) * w].iter_mut().enumerate() {
                    *o = kernel.iter().zip(&padded[x..x + klen]).map(|(k, v)| k * v).sum();
                }
            }
        }
        Axis::Vertical => {
            for y in 0..h {
                for (t, &kv) in kernel.iter().enumerate() {
                    let src = img.row(reflect(y as isize + t as isize - half, h));
                    for (o, &s) in out[y * w..(y + 1) * w].iter_mut().zip(src) {
                        *o += kv * s;
                    }
                }
            }
        }
    }
    GrayImage::from_raw(w, h, out)
}

/// Hann-window smoothing along one axis.
pub fn smooth_directional(img: &GrayImage, axis: Axis, k: usize) -> Result<GrayImage> {
    let min = img.width().min(img.height());
    if k < 2 || k >= min {
        return Err(invalid(format!("window length {k} must satisfy 2 <= k < {min}")));
    }
    Ok(convolve_axis(img, axis, &hanning(k)))
}

const LANCZOS_A: f64 = 3.0;

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        libm::sin(px) / px
    }
}

fn lanczos(x: f64) -> f64 {
    if x.abs() < LANCZOS_A {
        sinc(x) * sinc(x / LANCZOS_A)
    } else {
        0.0
    }
}

/// Lanczos-3 resampling weights from `in_len` to `out_len` samples. When
/// shrinking, the kernel is stretched by the reduction factor
/// (antialiasing). Taps that fall outside the line are dropped and the
/// remaining weights renormalized.
struct Resampler {
    /// Per output sample: first input index and normalized weights.
    taps: Vec<(usize, Vec<f64>)>,
}

impl Resampler {
    fn new(in_len: usize, out_len: usize) -> Self {
        let scale = out_len as f64 / in_len as f64;
        let stretch = if scale < 1.0 { 1.0 / scale } else { 1.0 };
        let support = LANCZOS_A * stretch;
        let taps = (0..out_len)
            .map(|i| {
                let center = (i as f64 + 0.5) / scale - 0.5;
                let first = libm::ceil(center - support).max(0.0) as usize;
                let last = (libm::floor(center + support) as isize).min(in_len as isize - 1);
                let mut w: Vec<f64> = (first as isize..=last)
                    .map(|j| lanczos((j as f64 - center) / stretch))
                    .collect();
                let sum: f64 = w.iter().sum();
                if sum != 0.0 {
                    for v in w.iter_mut() {
                        *v /= sum;
                    }
                }
                (first, w)
            })
            .collect();
        Self { taps }
    }

    fn line(&self, src: &[f64], dst: &mut [f64]) {
        for (d, (first, w)) in dst.iter_mut().zip(&self.taps) {
            *d = w.iter().zip(&src[*first..]).map(|(a, b)| a * b).sum();
        }
    }
}

fn resample_axis(img: &GrayImage, axis: Axis, out_len: usize) -> GrayImage {
    let (w, h) = img.dims();
    match axis {
        Axis::Horizontal => {
            let r = Resampler::new(w, out_len);
            let mut data = alloc::vec![0.0; out_len * h];
            for (y, dst) in data.chunks_exact_mut(out_len).enumerate() {
                r.line(img.row(y), dst);
            }
            GrayImage::from_raw(out_len, h, data)
        }
        Axis::Vertical => {
            let r = Resampler::new(h, out_len);
            let mut out = alloc::vec![0.0; w * out_len];
            for (dst, (first, wts)) in out.chunks_exact_mut(w).zip(&r.taps) {
                // same accumulation order as the horizontal path
                let mut acc = alloc::vec![0.0; w];
                for (j, &wt) in wts.iter().enumerate() {
                    for (a, &s) in acc.iter_mut().zip(img.row(first + j)) {
                        *a += wt * s;
                    }
                }
                dst.copy_from_slice(&acc);
            }
            GrayImage::from_raw(w, out_len, out)
        }
    }
}

/// Downscales along one axis by `s` with Lanczos-3, then upscales back to
/// the original size with the same kernel. The other axis is untouched.
pub fn rescale_directional(img: &GrayImage, axis: Axis, s: f64) -> Result<GrayImage> {
    let len = match axis {
        Axis::Horizontal => img.width(),
        Axis::Vertical => img.height(),
    };
    if !(s > 0.0 && s <= 1.0) {
        return Err(invalid(format!("scale factor must lie in (0, 1], got {s}")));
    }
    let small = libm::round(len as f64 * s) as usize;
    if small < 8 {
        return Err(invalid(format!("downscaled length {small} is below the minimum of 8")));
    }
    let down = resample_axis(img, axis, small);
    Ok(resample_axis(&down, axis, len))
}

/// A named anisotropic condition of the detector-validation protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    None,
    Smooth { axis: Axis, k: usize },
    Rescale { axis: Axis, s: f64 },
}

impl Transform {
    pub fn apply(&self, img: &GrayImage) -> Result<GrayImage> {
        match *self {
            Transform::None => Ok(img.clone()),
            Transform::Smooth { axis, k } => smooth_directional(img, axis, k),
            Transform::Rescale { axis, s } => rescale_directional(img, axis, s),
        }
    }

    /// The same transform along the other axis.
    pub fn mirrored(&self) -> Transform {
        match *self {
            Transform::None => Transform::None,
            Transform::Smooth { axis, k } => Transform::Smooth { axis: axis.other(), k },
            Transform::Rescale { axis, s } => Transform::Rescale { axis: axis.other(), s },
        }
    }

    /// The thirteen conditions of the validation protocol: unprocessed,
    /// smoothing with k in {5, 10, 20} and rescaling with s in {1/2, 1/4, 1/8},
    /// each along both axes.
    pub fn protocol() -> Vec<Transform> {
        let mut v = alloc::vec![Transform::None];
        for axis in [Axis::Horizontal, Axis::Vertical] {
            for k in [5, 10, 20] {
                v.push(Transform::Smooth { axis, k });
            }
            for s in [0.5, 0.25, 0.125] {
                v.push(Transform::Rescale { axis, s });
            }
        }
        v
    }
}

impl core::fmt::Display for Transform {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let ax = |a: Axis| match a {
            Axis::Horizontal => "h",
            Axis::Vertical => "v",
        };
        match *self {
            Transform::None => write!(f, "none"),
            Transform::Smooth { axis, k } => write!(f, "smooth-{}:{k}", ax(axis)),
            Transform::Rescale { axis, s } => write!(f, "downscale-{}:{s}", ax(axis)),
        }
    }
}

impl core::str::FromStr for Transform {
    type Err = crate::Error;

    /// Parses the [`Display`](core::fmt::Display) form, e.g. `smooth-h:5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || invalid(alloc::format!("unknown transform `{s}`"));
        if s == "none" {
            return Ok(Transform::None);
        }
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        let (name, ax) = kind.rsplit_once('-').ok_or_else(bad)?;
        let axis = match ax {
            "h" => Axis::Horizontal,
            "v" => Axis::Vertical,
            _ => return Err(bad()),
        };
        match name {
            "smooth" => Ok(Transform::Smooth {
                axis,
                k: value.parse().map_err(|_| bad())?,
            }),
            "downscale" => Ok(Transform::Rescale {
                axis,
                s: value.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

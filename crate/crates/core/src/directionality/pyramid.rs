//! Frequency-domain steerable pyramid.
//!
//! Frequencies are normalized so that Nyquist is 1. Radial masks are
//! raised-cosine transitions one octave wide in `log2 r`; the angular masks
//! are `sqrt(c) cos^(K-1)(theta - pi b / K)`, which tile the circle exactly in
//! squared magnitude. Between scales the low-pass spectrum is cropped to its
//! central half, so frequency coordinates keep their original units.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{DirectionalityScore, PyramidConfig, ScoreMode};
use crate::error::Result;
use crate::fft::{signed_freq, Complex64, Fft2};
use crate::image::GrayImage;

/// High-pass transition: 0 for `t <= -1`, 1 for `t >= 0`.
fn hi_mask(t: f64) -> f64 {
    if t <= -1.0 {
        0.0
    } else if t >= 0.0 {
        1.0
    } else {
        libm::cos(PI / 2.0 * -t)
    }
}

/// Complementary low-pass transition, `hi^2 + lo^2 = 1`.
fn lo_mask(t: f64) -> f64 {
    if t <= -1.0 {
        1.0
    } else if t >= 0.0 {
        0.0
    } else {
        libm::sin(PI / 2.0 * -t)
    }
}

fn angular_const(k: usize) -> f64 {
    let order = k - 1;
    let mut p = 1.0;
    for j in 1..=order {
        p *= (2 * j) as f64 / (2 * j - 1) as f64;
    }
    p / k as f64
}

fn powi(x: f64, n: usize) -> f64 {
    let mut r = 1.0;
    for _ in 0..n {
        r *= x;
    }
    r
}

/// Angle masks for a pyramid with `k` orientations.
#[derive(Debug, Clone, Copy)]
struct Angular {
    k: usize,
    amp: f64,
}

impl Angular {
    fn new(k: usize) -> Self {
        Self {
            k,
            amp: libm::sqrt(angular_const(k)),
        }
    }

    fn center(&self, band: usize) -> f64 {
        PI * band as f64 / self.k as f64
    }

    fn mask(&self, theta: f64, band: usize) -> f64 {
        self.amp * powi(libm::cos(theta - self.center(band)), self.k - 1)
    }

    /// `(-i)^(K-1)`, which makes the bands of a real image real.
    fn phase(&self) -> Complex64 {
        match (self.k - 1) % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        }
    }
}

/// Log-radius and angle of bin `(kx, ky)` of an `m x m` spectrum cropped out
/// of an `n x n` one. `None` at DC.
fn polar(kx: usize, ky: usize, m: usize, n: usize) -> Option<(f64, f64)> {
    let fx = 2.0 * signed_freq(kx, m) as f64 / n as f64;
    let fy = 2.0 * signed_freq(ky, m) as f64 / n as f64;
    if fx == 0.0 && fy == 0.0 {
        return None;
    }
    Some((libm::log2(libm::sqrt(fx * fx + fy * fy)), libm::atan2(fy, fx)))
}

/// Whether signed frequency `f` survives the crop to `m` bins.
fn in_crop(f: isize, m: usize) -> bool {
    let lo = -((m / 2) as isize);
    let hi = m.div_ceil(2) as isize - 1;
    (lo..=hi).contains(&f)
}

fn level_sizes(n: usize, scales: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(scales + 1);
    let mut m = n;
    for _ in 0..=scales {
        v.push(m);
        m = m.div_ceil(2);
    }
    v
}

fn check_input(img: &GrayImage, cfg: &PyramidConfig) -> Result<()> {
    cfg.validate()?;
    img.require_square()?;
    img.require_min(cfg.min_size())
}

/// Full decomposition of a square image.
#[derive(Debug, Clone)]
pub struct PyramidDecomposition {
    size: usize,
    config: PyramidConfig,
    /// Side length of each scale's bands.
    level_sizes: Vec<usize>,
    /// `bands[s * K + b]`, row-major.
    bands: Vec<Vec<Complex64>>,
    highpass: Vec<Complex64>,
    lowpass: Vec<Complex64>,
}

impl PyramidDecomposition {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn scales(&self) -> usize {
        self.config.scales
    }

    pub fn orientations(&self) -> usize {
        self.config.orientations
    }

    /// Center angle of each orientation band, in `[0, pi)`.
    pub fn center_angles(&self) -> Vec<f64> {
        let a = Angular::new(self.config.orientations);
        (0..self.config.orientations).map(|b| a.center(b)).collect()
    }

    /// Side length of the bands at `scale`.
    pub fn band_size(&self, scale: usize) -> usize {
        self.level_sizes[scale]
    }

    pub fn band(&self, scale: usize, orientation: usize) -> &[Complex64] {
        &self.bands[scale * self.config.orientations + orientation]
    }

    /// Sum of squared coefficient magnitudes.
    pub fn band_energy(&self, scale: usize, orientation: usize) -> f64 {
        self.band(scale, orientation).iter().map(|c| c.norm_sqr()).sum()
    }

    /// Initial high-pass residual, full size.
    pub fn highpass(&self) -> &[Complex64] {
        &self.highpass
    }

    /// Final low-pass residual, side [`Self::lowpass_size`].
    pub fn lowpass(&self) -> &[Complex64] {
        &self.lowpass
    }

    pub fn lowpass_size(&self) -> usize {
        self.level_sizes[self.config.scales]
    }

    pub fn score(&self, mode: ScoreMode) -> DirectionalityScore {
        let v = self.config.vertical_band();
        let energies: Vec<(f64, f64)> = (0..self.config.scales)
            .map(|s| (self.band_energy(s, 0), self.band_energy(s, v)))
            .collect();
        DirectionalityScore::from_energies(&energies, self.size * self.size, mode)
    }
}

/// Decomposes a square image into `S` scales of `K` oriented bands plus the
/// high-pass and low-pass residuals.
pub fn build_pyramid(img: &GrayImage, config: PyramidConfig) -> Result<PyramidDecomposition> {
    check_input(img, &config)?;
    let n = img.width();
    let sizes = level_sizes(n, config.scales);
    let ang = Angular::new(config.orientations);
    let k = config.orientations;

    let spectrum = Fft2::new(n, n).forward_real(img);
    let mut high = spectrum.clone();
    let mut low = spectrum;
    for ky in 0..n {
        for kx in 0..n {
            let i = ky * n + kx;
            let (h, l) = match polar(kx, ky, n, n) {
                Some((t, _)) => (hi_mask(t), lo_mask(t)),
                None => (0.0, 1.0),
            };
            high[i] *= h;
            low[i] *= l;
        }
    }
    Fft2::new(n, n).inverse(&mut high);

    let mut bands = Vec::with_capacity(config.scales * k);
    for s in 0..config.scales {
        let m = sizes[s];
        let plan = Fft2::new(m, m);
        let shift = (s + 1) as f64;
        let coords: Vec<Option<(f64, f64)>> = (0..m * m).map(|i| polar(i % m, i / m, m, n)).collect();
        for b in 0..k {
            let mut band: Vec<Complex64> = low
                .iter()
                .zip(&coords)
                .map(|(&v, c)| match *c {
                    Some((t, theta)) => v * (hi_mask(t + shift) * ang.mask(theta, b)) * ang.phase(),
                    None => Complex64::new(0.0, 0.0),
                })
                .collect();
            plan.inverse(&mut band);
            bands.push(band);
        }
        let next = sizes[s + 1];
        let mut cropped = alloc::vec![Complex64::new(0.0, 0.0); next * next];
        for ky in 0..next {
            let fy = signed_freq(ky, next);
            let sy = fy.rem_euclid(m as isize) as usize;
            for kx in 0..next {
                let fx = signed_freq(kx, next);
                let sx = fx.rem_euclid(m as isize) as usize;
                let l = match polar(kx, ky, next, n) {
                    Some((t, _)) => lo_mask(t + shift),
                    None => 1.0,
                };
                cropped[ky * next + kx] = low[sy * m + sx] * l;
            }
        }
        low = cropped;
    }
    let last = sizes[config.scales];
    Fft2::new(last, last).inverse(&mut low);

    Ok(PyramidDecomposition {
        size: n,
        config,
        level_sizes: sizes,
        bands,
        highpass: high,
        lowpass: low,
    })
}

/// Fast scorer for a fixed image size.
///
/// Only the energies of the two axis-centered bands enter the score, and by
/// Parseval they are weighted sums of the image power spectrum. The weights
/// are precomputed once per size, so scoring costs a single real 2-D FFT.
/// The scorer is immutable and can be shared between threads.
#[derive(Debug, Clone)]
pub struct PyramidScorer {
    size: usize,
    config: PyramidConfig,
    plan: Fft2,
    /// Per scale: (horizontal weights, vertical weights) over the half
    /// spectrum, already divided by the squared band side length.
    weights: Vec<(Vec<f64>, Vec<f64>)>,
}

impl PyramidScorer {
    pub fn new(size: usize, config: PyramidConfig) -> Result<Self> {
        config.validate()?;
        let probe = GrayImage::filled(size, size, 0.0);
        probe.require_min(config.min_size())?;
        let n = size;
        let sizes = level_sizes(n, config.scales);
        let ang = Angular::new(config.orientations);
        let vb = config.vertical_band();
        let plan = Fft2::new(n, n);
        let hw = plan.half_width();

        // full-grid weight of one band, evaluated in original coordinates
        let full_weight = |kx: usize, ky: usize, s: usize, band: usize| -> f64 {
            let fx = signed_freq(kx, n);
            let fy = signed_freq(ky, n);
            if !(in_crop(fx, sizes[s]) && in_crop(fy, sizes[s])) {
                return 0.0;
            }
            let Some((t, theta)) = polar(kx, ky, n, n) else {
                return 0.0;
            };
            let mut g = lo_mask(t);
            for j in 0..s {
                g *= lo_mask(t + (j + 1) as f64);
            }
            g *= hi_mask(t + (s + 1) as f64) * ang.mask(theta, band);
            g * g
        };

        let mut weights = Vec::with_capacity(config.scales);
        for s in 0..config.scales {
            let norm = 1.0 / (sizes[s] * sizes[s]) as f64;
            let mut wh = alloc::vec![0.0; hw * n];
            let mut wv = alloc::vec![0.0; hw * n];
            for ky in 0..n {
                for kx in 0..hw {
                    let mut h = full_weight(kx, ky, s, 0);
                    let mut v = full_weight(kx, ky, s, vb);
                    // fold the conjugate partner from the omitted half
                    let partner_x = (n - kx) % n;
                    if partner_x >= hw {
                        let py = (n - ky) % n;
                        h += full_weight(partner_x, py, s, 0);
                        v += full_weight(partner_x, py, s, vb);
                    }
                    wh[ky * hw + kx] = h * norm;
                    wv[ky * hw + kx] = v * norm;
                }
            }
            weights.push((wh, wv));
        }
        Ok(Self {
            size,
            config,
            plan,
            weights,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn config(&self) -> PyramidConfig {
        self.config
    }

    /// Horizontal and vertical band energies per scale.
    pub fn energies(&self, img: &GrayImage) -> Result<Vec<(f64, f64)>> {
        check_input(img, &self.config)?;
        img.require_dims((self.size, self.size))?;
        let power = self.plan.half_power_real(img.samples());
        Ok(self
            .weights
            .iter()
            .map(|(wh, wv)| {
                let mut eh = 0.0;
                let mut ev = 0.0;
                for ((p, a), b) in power.iter().zip(wh).zip(wv) {
                    eh += p * a;
                    ev += p * b;
                }
                (eh, ev)
            })
            .collect())
    }

    pub fn score(&self, img: &GrayImage, mode: ScoreMode) -> Result<DirectionalityScore> {
        let e = self.energies(img)?;
        Ok(DirectionalityScore::from_energies(&e, self.size * self.size, mode))
    }
}

/// Steerable-pyramid directionality score with the default configuration
/// (2 scales, 16 orientations).
pub fn pyramid_score(img: &GrayImage, mode: ScoreMode) -> Result<DirectionalityScore> {
    check_input(img, &PyramidConfig::default())?;
    PyramidScorer::new(img.width(), PyramidConfig::default())?.score(img, mode)
}

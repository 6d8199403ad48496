//! Discrete Fourier transforms of arbitrary length.
//!
//! Power-of-two lengths use an iterative radix-2 transform; every other
//! length goes through Bluestein's chirp-z reformulation on top of it.
//! Forward transforms are unnormalized, inverse transforms divide by the
//! length, matching the usual `fft`/`ifft` pair.

use alloc::vec::Vec;
use core::f64::consts::PI;

pub use num_complex::Complex64;

use crate::image::GrayImage;

#[derive(Debug, Clone)]
struct Radix2 {
    n: usize,
    /// `exp(-2 pi i k / n)` for `k < n / 2`.
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
}

impl Radix2 {
    fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let twiddles = (0..n / 2).map(|k| expi(-2.0 * PI * k as f64 / n as f64)).collect();
        let bits = n.trailing_zeros();
        let bitrev = (0..n as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Self { n, twiddles, bitrev }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n {
            let j = self.bitrev[i] as usize;
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * step];
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Trivial,
    Radix2(Radix2),
    Bluestein {
        inner: Radix2,
        /// `exp(-pi i k^2 / n)`
        chirp: Vec<Complex64>,
        /// Transformed conjugate chirp filter of length `inner.n`.
        filter: Vec<Complex64>,
    },
}

/// A reusable one-dimensional transform plan.
#[derive(Debug, Clone)]
pub struct Fft {
    n: usize,
    kind: Kind,
}

impl Fft {
    pub fn new(n: usize) -> Self {
        let kind = if n <= 1 {
            Kind::Trivial
        } else if n.is_power_of_two() {
            Kind::Radix2(Radix2::new(n))
        } else {
            let m = (2 * n - 1).next_power_of_two();
            let inner = Radix2::new(m);
            let chirp: Vec<Complex64> = (0..n)
                .map(|k| {
                    // k^2 mod 2n keeps the phase argument small.
                    let k2 = ((k as u128 * k as u128) % (2 * n as u128)) as f64;
                    expi(-PI * k2 / n as f64)
                })
                .collect();
            let mut filter = alloc::vec![Complex64::new(0.0, 0.0); m];
            filter[0] = chirp[0].conj();
            for k in 1..n {
                filter[k] = chirp[k].conj();
                filter[m - k] = chirp[k].conj();
            }
            inner.forward(&mut filter);
            Kind::Bluestein { inner, chirp, filter }
        };
        Self { n, kind }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n, "buffer length does not match plan");
        match &self.kind {
            Kind::Trivial => {}
            Kind::Radix2(r) => r.forward(buf),
            Kind::Bluestein { inner, chirp, filter } => {
                let m = inner.n;
                let mut work = alloc::vec![Complex64::new(0.0, 0.0); m];
                for k in 0..self.n {
                    work[k] = buf[k] * chirp[k];
                }
                inner.forward(&mut work);
                for (w, f) in work.iter_mut().zip(filter) {
                    *w = (*w * f).conj();
                }
                // inverse of the convolution via the conjugation identity
                inner.forward(&mut work);
                let scale = 1.0 / m as f64;
                for k in 0..self.n {
                    buf[k] = work[k].conj() * scale * chirp[k];
                }
            }
        }
    }

    /// Normalized inverse transform.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        for v in buf.iter_mut() {
            *v = v.conj();
        }
        self.forward(buf);
        let scale = 1.0 / self.n.max(1) as f64;
        for v in buf.iter_mut() {
            *v = v.conj() * scale;
        }
    }
}

/// Plan for row-major 2-D transforms of a fixed `width x height`.
#[derive(Debug, Clone)]
pub struct Fft2 {
    width: usize,
    height: usize,
    rows: Fft,
    cols: Fft,
}

impl Fft2 {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            rows: Fft::new(width),
            cols: Fft::new(height),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.apply(buf, false);
    }

    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.apply(buf, true);
    }

    fn apply(&self, buf: &mut [Complex64], inverse: bool) {
        let (w, h) = (self.width, self.height);
        assert_eq!(buf.len(), w * h, "buffer length does not match plan");
        for row in buf.chunks_exact_mut(w) {
            if inverse {
                self.rows.inverse(row);
            } else {
                self.rows.forward(row);
            }
        }
        let mut col = alloc::vec![Complex64::new(0.0, 0.0); h];
        for x in 0..w {
            for y in 0..h {
                col[y] = buf[y * w + x];
            }
            if inverse {
                self.cols.inverse(&mut col);
            } else {
                self.cols.forward(&mut col);
            }
            for y in 0..h {
                buf[y * w + x] = col[y];
            }
        }
    }

    /// Forward transform of a real image.
    pub fn forward_real(&self, img: &GrayImage) -> Vec<Complex64> {
        assert_eq!(img.dims(), (self.width, self.height));
        let mut buf: Vec<Complex64> = img.samples().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }

    /// Width of the half spectrum returned by [`Fft2::half_power_real`].
    pub fn half_width(&self) -> usize {
        self.width / 2 + 1
    }

    /// `|X|^2` of a real image on the non-negative horizontal frequencies
    /// `kx in 0..=width/2`, row-major with [`Fft2::half_width`] columns. The
    /// remaining bins follow from `|X(kx, ky)| = |X(-kx, -ky)|`.
    ///
    /// Two image rows are packed into one complex row transform, and only the
    /// kept columns are transformed, which roughly halves the work of
    /// [`Fft2::forward_real`].
    pub fn half_power_real(&self, samples: &[f64]) -> Vec<f64> {
        let (w, h) = (self.width, self.height);
        assert_eq!(samples.len(), w * h, "buffer length does not match plan");
        let hw = self.half_width();
        let mut half = alloc::vec![Complex64::new(0.0, 0.0); hw * h];
        let mut z = alloc::vec![Complex64::new(0.0, 0.0); w];
        let mut y = 0;
        while y < h {
            let pair = y + 1 < h;
            let a = &samples[y * w..(y + 1) * w];
            if pair {
                let b = &samples[(y + 1) * w..(y + 2) * w];
                for (zi, (&re, &im)) in z.iter_mut().zip(a.iter().zip(b)) {
                    *zi = Complex64::new(re, im);
                }
            } else {
                for (zi, &re) in z.iter_mut().zip(a) {
                    *zi = Complex64::new(re, 0.0);
                }
            }
            self.rows.forward(&mut z);
            for k in 0..hw {
                let zk = z[k];
                let zn = z[(w - k) % w].conj();
                if pair {
                    half[y * hw + k] = (zk + zn) * 0.5;
                    // (zk - zn) / 2i
                    let d = (zk - zn) * 0.5;
                    half[(y + 1) * hw + k] = Complex64::new(d.im, -d.re);
                } else {
                    half[y * hw + k] = zk;
                }
            }
            y += 2;
        }
        let mut col = alloc::vec![Complex64::new(0.0, 0.0); h];
        let mut out = alloc::vec![0.0; hw * h];
        for k in 0..hw {
            for (y, c) in col.iter_mut().enumerate() {
                *c = half[y * hw + k];
            }
            self.cols.forward(&mut col);
            for (y, c) in col.iter().enumerate() {
                out[y * hw + k] = c.norm_sqr();
            }
        }
        out
    }
}

/// Signed frequency of DFT bin `k` for a transform of length `n`
/// (`k < n/2` maps to itself, the rest wrap to negative frequencies).
#[inline]
pub fn signed_freq(k: usize, n: usize) -> isize {
    if k < n.div_ceil(2) {
        k as isize
    } else {
        k as isize - n as isize
    }
}

#[inline]
pub(crate) fn expi(theta: f64) -> Complex64 {
    let (s, c) = libm::sincos(theta);
    Complex64::new(c, s)
}

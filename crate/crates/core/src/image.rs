//! Sample containers and exact, resampling-free orientation transforms.
//!
//! Quarter rotations are counter-clockwise throughout the crate: [`OrientOp::Rot90`]
//! turns the top-right corner into the top-left corner.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// Image axis. `Horizontal` runs along x (columns), `Vertical` along y (rows).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Horizontal,
    Vertical,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }
}

/// Row-major matrix of real samples.
///
/// Used for luminance images (nominally in `[0, 255]`) as well as for signed
/// derived planes such as noise residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::BufferSize {
                width,
                height,
                expected: width * height,
                got: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self {
            width,
            height,
            data: alloc::vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    /// Internal constructor for buffers already known to have the right size.
    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self { width, height, data }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    pub fn samples(&self) -> &[f64] {
        &self.data
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GrayImage {
        GrayImage::from_raw(self.width, self.height, self.data.iter().map(|&v| f(v)).collect())
    }

    /// Elementwise `self - other`.
    pub fn sub(&self, other: &GrayImage) -> Result<GrayImage> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &GrayImage) -> Result<GrayImage> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn zip_with(&self, other: &GrayImage, f: impl Fn(f64, f64) -> f64) -> Result<GrayImage> {
        self.require_dims(other.dims())?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(GrayImage::from_raw(self.width, self.height, data))
    }

    pub fn scale(&self, c: f64) -> GrayImage {
        self.map(|v| v * c)
    }

    pub fn mean(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Rounds every sample to the nearest integer (ties away from zero).
    pub fn rounded(&self) -> GrayImage {
        self.map(libm::round)
    }

    pub fn transpose(&self) -> GrayImage {
        orient(self, OrientOp::Transpose)
    }

    pub(crate) fn require_dims(&self, dims: (usize, usize)) -> Result<()> {
        if self.dims() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                got: self.dims(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_min(&self, min: usize) -> Result<()> {
        if self.width < min || self.height < min {
            return Err(Error::TooSmall {
                width: self.width,
                height: self.height,
                min,
            });
        }
        Ok(())
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.width != self.height {
            return Err(Error::NotSquare {
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }
}

/// Three equally sized channel planes with samples in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    r: GrayImage,
    g: GrayImage,
    b: GrayImage,
}

impl RgbImage {
    pub fn new(r: GrayImage, g: GrayImage, b: GrayImage) -> Result<Self> {
        g.require_dims(r.dims())?;
        b.require_dims(r.dims())?;
        Ok(Self { r, g, b })
    }

    /// Builds from interleaved `RGBRGB...` samples.
    pub fn from_interleaved(width: usize, height: usize, rgb: &[f64]) -> Result<Self> {
        if rgb.len() != width * height * 3 {
            return Err(Error::BufferSize {
                width,
                height,
                expected: width * height * 3,
                got: rgb.len(),
            });
        }
        let plane = |c: usize| GrayImage::new(width, height, rgb.iter().skip(c).step_by(3).copied().collect());
        Self::new(plane(0)?, plane(1)?, plane(2)?)
    }

    pub fn width(&self) -> usize {
        self.r.width()
    }

    pub fn height(&self) -> usize {
        self.r.height()
    }

    pub fn channels(&self) -> [&GrayImage; 3] {
        [&self.r, &self.g, &self.b]
    }
}

/// Rec. 601 luma, `Y = 0.299 R + 0.587 G + 0.114 B`, unrounded.
///
/// Evaluated as `G + 0.299 (R - G) + 0.114 (B - G)` so gray pixels map to
/// themselves exactly.
pub fn to_grayscale(img: &RgbImage) -> GrayImage {
    let data = img
        .r
        .samples()
        .iter()
        .zip(img.g.samples())
        .zip(img.b.samples())
        .map(|((&r, &g), &b)| (g + 0.299 * (r - g) + 0.114 * (b - g)).clamp(0.0, 255.0))
        .collect();
    GrayImage::from_raw(img.width(), img.height(), data)
}

/// Largest centered square. For odd size differences the window sits one
/// sample closer to the top-left corner.
pub fn center_crop_square(img: &GrayImage) -> Result<GrayImage> {
    img.require_min(16)?;
    let s = img.width().min(img.height());
    let x0 = (img.width() - s) / 2;
    let y0 = (img.height() - s) / 2;
    Ok(crop(img, x0, y0, s, s))
}

pub(crate) fn crop(img: &GrayImage, x0: usize, y0: usize, w: usize, h: usize) -> GrayImage {
    let mut data = Vec::with_capacity(w * h);
    for y in y0..y0 + h {
        data.extend_from_slice(&img.row(y)[x0..x0 + w]);
    }
    GrayImage::from_raw(w, h, data)
}

/// Exact sample permutations. Rotations are counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrientOp {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipH,
    FlipV,
    Transpose,
}

impl OrientOp {
    pub const ALL: [OrientOp; 7] = [
        OrientOp::Identity,
        OrientOp::Rot90,
        OrientOp::Rot180,
        OrientOp::Rot270,
        OrientOp::FlipH,
        OrientOp::FlipV,
        OrientOp::Transpose,
    ];

    pub fn inverse(self) -> OrientOp {
        match self {
            OrientOp::Rot90 => OrientOp::Rot270,
            OrientOp::Rot270 => OrientOp::Rot90,
            other => other,
        }
    }

    /// Whether the op exchanges the roles of the two axes.
    pub fn swaps_axes(self) -> bool {
        matches!(self, OrientOp::Rot90 | OrientOp::Rot270 | OrientOp::Transpose)
    }
}

pub fn orient(img: &GrayImage, op: OrientOp) -> GrayImage {
    let (w, h) = img.dims();
    let (ow, oh) = if op.swaps_axes() { (h, w) } else { (w, h) };
    // Source coordinate for each output coordinate.
    let src = |x: usize, y: usize| -> (usize, usize) {
        match op {
            OrientOp::Identity => (x, y),
            OrientOp::Rot90 => (w - 1 - y, x),
            OrientOp::Rot180 => (w - 1 - x, h - 1 - y),
            OrientOp::Rot270 => (y, h - 1 - x),
            OrientOp::FlipH => (w - 1 - x, y),
            OrientOp::FlipV => (x, h - 1 - y),
            OrientOp::Transpose => (y, x),
        }
    };
    GrayImage::from_fn(ow, oh, |x, y| {
        let (sx, sy) = src(x, y);
        img.get(sx, sy)
    })
}

/// EXIF orientation tag value (1..=8).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation8(u8);

impl Orientation8 {
    pub fn new(code: u8) -> Result<Self> {
        if (1..=8).contains(&code) {
            Ok(Self(code))
        } else {
            Err(invalid(alloc::format!("EXIF orientation must be 1..=8, got {code}")))
        }
    }

    pub fn code(self) -> u8 {
        self.0
    }

    /// Ops that bring stored samples into display orientation, applied in order.
    pub fn display_ops(self) -> &'static [OrientOp] {
        match self.0 {
            1 => &[],
            2 => &[OrientOp::FlipH],
            3 => &[OrientOp::Rot180],
            4 => &[OrientOp::FlipV],
            5 => &[OrientOp::Transpose],
            6 => &[OrientOp::Rot270],
            7 => &[OrientOp::Transpose, OrientOp::Rot180],
            _ => &[OrientOp::Rot90],
        }
    }

    pub fn to_display(self, img: &GrayImage) -> GrayImage {
        self.display_ops().iter().fold(img.clone(), |acc, &op| orient(&acc, op))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ramp(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| (y * w + x) as f64)
    }

    #[test]
    fn grayscale_values() {
        let px = |r: f64, g: f64, b: f64| {
            let one = |v| GrayImage::filled(1, 1, v);
            to_grayscale(&RgbImage::new(one(r), one(g), one(b)).unwrap()).get(0, 0)
        };
        assert_eq!(px(255.0, 255.0, 255.0), 255.0);
        assert!((px(255.0, 0.0, 0.0) - 76.245).abs() < 1e-12);
        for g in [0.0, 1.0, 17.5, 128.0, 254.999] {
            assert_eq!(px(g, g, g), g);
        }
    }

    #[test]
    fn crop_offsets() {
        let sq = ramp(512, 512);
        assert_eq!(center_crop_square(&sq).unwrap(), sq);

        let odd = ramp(513, 512);
        let c = center_crop_square(&odd).unwrap();
        assert_eq!(c.dims(), (512, 512));
        assert_eq!(c.get(0, 0), odd.get(0, 0));
        assert_eq!(c.get(511, 0), odd.get(511, 0));

        let wide = ramp(1024, 512);
        let c = center_crop_square(&wide).unwrap();
        assert_eq!(c.get(0, 3), wide.get(256, 3));
        assert_eq!(c.get(511, 3), wide.get(767, 3));

        assert!(matches!(center_crop_square(&ramp(40, 15)), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn rot90_is_counter_clockwise() {
        // 3 wide, 2 tall:  0 1 2 / 3 4 5
        let img = ramp(3, 2);
        let r = orient(&img, OrientOp::Rot90);
        assert_eq!(r.dims(), (2, 3));
        // top-right sample becomes top-left
        assert_eq!(r.samples(), &[2.0, 5.0, 1.0, 4.0, 0.0, 3.0]);
    }

    #[test]
    fn transpose_is_flip_then_rotate() {
        // Enumerated on a 3x3 pattern: flip_h first, then rot90.
        let img = ramp(3, 3);
        let t = orient(&img, OrientOp::Transpose);
        assert_eq!(t.samples(), &[0.0, 3.0, 6.0, 1.0, 4.0, 7.0, 2.0, 5.0, 8.0]);
        let composed = orient(&orient(&img, OrientOp::FlipH), OrientOp::Rot90);
        assert_eq!(composed, t);
    }

    #[test]
    fn rot90_group() {
        let img = ramp(5, 3);
        let mut r = img.clone();
        for _ in 0..4 {
            r = orient(&r, OrientOp::Rot90);
        }
        assert_eq!(r, img);
        assert_eq!(orient(&img, OrientOp::Identity), img);
        assert_eq!(
            orient(&orient(&img, OrientOp::Rot90), OrientOp::Rot90),
            orient(&img, OrientOp::Rot180)
        );
    }

    #[test]
    fn exif_display_ops() {
        // Orientation 6 stores the image rotated 90 degrees counter-clockwise.
        let upright = ramp(4, 3);
        let stored = orient(&upright, OrientOp::Rot90);
        assert_eq!(Orientation8::new(6).unwrap().to_display(&stored), upright);
        let stored = orient(&upright, OrientOp::Rot270);
        assert_eq!(Orientation8::new(8).unwrap().to_display(&stored), upright);
        assert!(Orientation8::new(0).is_err());
        assert!(Orientation8::new(9).is_err());
    }

    #[test]
    fn rejects_bad_buffers() {
        assert!(matches!(
            GrayImage::new(2, 2, alloc::vec![0.0; 3]),
            Err(Error::BufferSize { .. })
        ));
        assert_eq!(
            GrayImage::new(1, 2, alloc::vec![0.0, f64::NAN]),
            Err(Error::NonFinite(1))
        );
    }

    fn arb_image() -> impl Strategy<Value = GrayImage> {
        (1usize..9, 1usize..9).prop_flat_map(|(w, h)| {
            proptest::collection::vec(0.0f64..255.0, w * h).prop_map(move |d| GrayImage::new(w, h, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn orient_inverse_is_identity(img in arb_image(), i in 0usize..7) {
            let op = OrientOp::ALL[i];
            prop_assert_eq!(orient(&orient(&img, op), op.inverse()), img);
        }

        #[test]
        fn crop_commutes_with_rotation(w in 16usize..40, dh in 0usize..10, seed in any::<u64>()) {
            // equal parity of both dimensions
            let h = w + 2 * dh;
            let img = GrayImage::from_fn(w, h, |x, y| ((x * 31 + y * 17) as u64 ^ seed) as f64 % 251.0);
            let a = center_crop_square(&orient(&img, OrientOp::Rot90)).unwrap();
            let b = orient(&center_crop_square(&img).unwrap(), OrientOp::Rot90);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn grayscale_in_range(r in 0.0f64..=255.0, g in 0.0f64..=255.0, b in 0.0f64..=255.0) {
            let one = |v| GrayImage::filled(1, 1, v);
            let y = to_grayscale(&RgbImage::new(one(r), one(g), one(b)).unwrap()).get(0, 0);
            prop_assert!((0.0..=255.0).contains(&y));
        }
    }
}

//! Forward DCT paths of the reference JPEG library, their rounding artifacts,
//! and the legacy integer chroma downsampler.
//!
//! Coefficients use the JPEG normalization
//! `F(u,v) = 1/4 C(u) C(v) sum f(x,y) cos((2x+1)u pi/16) cos((2y+1)v pi/16)`,
//! which is orthonormal in two dimensions: a constant block `c` has DC `8c`.
//! Arrays are indexed `[row][col]`, so `F[v][u]` holds vertical frequency `v`
//! and horizontal frequency `u`.

mod aan;
mod chroma;
pub mod constants;
mod experiment;
mod islow;

use core::f64::consts::{FRAC_1_SQRT_2, PI};
use core::fmt;
use core::str::FromStr;

pub use chroma::{
    subsample_chroma, wrinkle_experiment, wrinkle_experiment_with, Arithmetic, ChromaMode, WrinkleReport,
};
pub use experiment::{
    chunk_plan, random_symmetric_block, rounding_experiment, ArtifactReport, DiffAccumulator, CHUNK_BLOCKS,
};

use crate::error::invalid;
use crate::Result;

/// 8x8 samples in 0..=255.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PixelBlock(pub [[u8; 8]; 8]);

impl PixelBlock {
    pub fn filled(v: u8) -> Self {
        Self([[v; 8]; 8])
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut b = [[0u8; 8]; 8];
        for (y, row) in b.iter_mut().enumerate() {
            for (x, v) in row.iter_mut().enumerate() {
                *v = f(x, y);
            }
        }
        Self(b)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|x, y| self.0[x][y])
    }

    /// Sample at column `x`, row `y`, shifted to -128..=127.
    #[inline]
    pub fn shifted(&self, x: usize, y: usize) -> i32 {
        self.0[y][x] as i32 - 128
    }
}

/// 8x8 DCT coefficients in the JPEG normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffBlock(pub [[f64; 8]; 8]);

impl CoeffBlock {
    pub const ZERO: CoeffBlock = CoeffBlock([[0.0; 8]; 8]);

    pub fn get(&self, v: usize, u: usize) -> f64 {
        self.0[v][u]
    }

    pub fn transpose(&self) -> Self {
        let mut t = [[0.0; 8]; 8];
        for (v, row) in t.iter_mut().enumerate() {
            for (u, c) in row.iter_mut().enumerate() {
                *c = self.0[u][v];
            }
        }
        Self(t)
    }

    pub fn sub(&self, other: &CoeffBlock) -> Self {
        let mut d = self.0;
        for (row, orow) in d.iter_mut().zip(other.0.iter()) {
            for (c, o) in row.iter_mut().zip(orow) {
                *c -= o;
            }
        }
        Self(d)
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut d = self.0;
        d.iter_mut().flatten().for_each(|c| *c *= k);
        Self(d)
    }

    pub fn energy(&self) -> f64 {
        self.0.iter().flatten().map(|c| c * c).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, c| m.max(c.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DctMethod {
    /// Accurate integer LLM transform, 13-bit constants.
    Islow,
    /// Fast integer AAN transform, 8-bit constants.
    Ifast,
    /// AAN transform in single precision.
    Float,
}

impl DctMethod {
    pub const ALL: [DctMethod; 3] = [DctMethod::Islow, DctMethod::Ifast, DctMethod::Float];

    pub fn name(self) -> &'static str {
        match self {
            DctMethod::Islow => "islow",
            DctMethod::Ifast => "ifast",
            DctMethod::Float => "float",
        }
    }
}

impl fmt::Display for DctMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DctMethod {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "islow" => Ok(DctMethod::Islow),
            "ifast" => Ok(DctMethod::Ifast),
            "float" => Ok(DctMethod::Float),
            _ => Err(invalid(alloc::format!("unknown DCT method `{s}`"))),
        }
    }
}

#[inline]
fn norm(k: usize) -> f64 {
    if k == 0 {
        FRAC_1_SQRT_2
    } else {
        1.0
    }
}

/// `basis()[k][x] = C(k)/2 * cos((2x+1) k pi / 16)`; orthonormal rows.
fn basis() -> [[f64; 8]; 8] {
    let mut b = [[0.0; 8]; 8];
    for (k, row) in b.iter_mut().enumerate() {
        for (x, c) in row.iter_mut().enumerate() {
            *c = 0.5 * norm(k) * libm::cos((2 * x + 1) as f64 * k as f64 * PI / 16.0);
        }
    }
    b
}

/// Direct evaluation of the 2-D definition in binary64: each coefficient is a
/// 64-term sum. No-rounding oracle for the fixed-point paths.
pub fn fdct_reference(b: &PixelBlock) -> CoeffBlock {
    let cos = basis();
    let mut out = [[0.0; 8]; 8];
    for (v, row) in out.iter_mut().enumerate() {
        for (u, c) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for y in 0..8 {
                for x in 0..8 {
                    acc += b.shifted(x, y) as f64 * cos[u][x] * cos[v][y];
                }
            }
            *c = acc;
        }
    }
    CoeffBlock(out)
}

/// Exact inverse of [`fdct_reference`] (without the level shift).
pub fn idct_reference(c: &CoeffBlock) -> [[f64; 8]; 8] {
    let cos = basis();
    let mut out = [[0.0; 8]; 8];
    for (y, row) in out.iter_mut().enumerate() {
        for (x, s) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for v in 0..8 {
                for u in 0..8 {
                    acc += c.0[v][u] * cos[u][x] * cos[v][y];
                }
            }
            *s = acc;
        }
    }
    out
}

/// Forward DCT through one of the library paths, normalized to the
/// [`fdct_reference`] convention.
pub fn fdct(b: &PixelBlock, method: DctMethod) -> CoeffBlock {
    let mut out = [[0.0; 8]; 8];
    match method {
        DctMethod::Islow | DctMethod::Ifast => {
            let raw = fdct_raw(b, method);
            for (v, row) in out.iter_mut().enumerate() {
                for (u, c) in row.iter_mut().enumerate() {
                    let k = raw[v * 8 + u] as f64;
                    *c = match method {
                        DctMethod::Islow => k / 8.0,
                        _ => k / (8.0 * aan::aan_scale(u) * aan::aan_scale(v)),
                    };
                }
            }
        }
        DctMethod::Float => {
            let mut d = [0f32; 64];
            for y in 0..8 {
                for x in 0..8 {
                    d[y * 8 + x] = b.shifted(x, y) as f32;
                }
            }
            aan::fdct_float(&mut d);
            for (v, row) in out.iter_mut().enumerate() {
                for (u, c) in row.iter_mut().enumerate() {
                    *c = d[v * 8 + u] as f64 / (8.0 * aan::aan_scale(u) * aan::aan_scale(v));
                }
            }
        }
    }
    CoeffBlock(out)
}

/// Unnormalized integer output of a fixed-point path, row-major. Panics on
/// [`DctMethod::Float`].
pub fn fdct_raw(b: &PixelBlock, method: DctMethod) -> [i32; 64] {
    let mut d = [0i32; 64];
    for y in 0..8 {
        for x in 0..8 {
            d[y * 8 + x] = b.shifted(x, y);
        }
    }
    match method {
        DctMethod::Islow => islow::fdct_islow(&mut d),
        DctMethod::Ifast => aan::fdct_ifast(&mut d),
        DctMethod::Float => panic!("fdct_raw is defined for the integer paths only"),
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_block(rng: &mut ChaCha8Rng) -> PixelBlock {
        PixelBlock::from_fn(|_, _| rng.random())
    }

    /// Literal textbook formula with the cosines evaluated inline.
    fn textbook(b: &PixelBlock) -> [[f64; 8]; 8] {
        let mut out = [[0.0; 8]; 8];
        for v in 0..8 {
            for u in 0..8 {
                let cu = if u == 0 { 1.0 / libm::sqrt(2.0) } else { 1.0 };
                let cv = if v == 0 { 1.0 / libm::sqrt(2.0) } else { 1.0 };
                let mut s = 0.0;
                for y in 0..8 {
                    for x in 0..8 {
                        s += (b.0[y][x] as f64 - 128.0)
                            * libm::cos((2.0 * x as f64 + 1.0) * u as f64 * PI / 16.0)
                            * libm::cos((2.0 * y as f64 + 1.0) * v as f64 * PI / 16.0);
                    }
                }
                out[v][u] = 0.25 * cu * cv * s;
            }
        }
        out
    }

    #[test]
    fn constant_blocks() {
        for c in [0u8, 1, 77, 128, 255] {
            let b = PixelBlock::filled(c);
            let dc = 8.0 * (c as f64 - 128.0);
            let r = fdct_reference(&b);
            assert!((r.0[0][0] - dc).abs() < 1e-9);
            for m in DctMethod::ALL {
                let f = fdct(&b, m);
                assert!((f.0[0][0] - dc).abs() < 1e-3, "{m} {c}");
                for (k, v) in f.0.iter().flatten().enumerate().skip(1) {
                    if m == DctMethod::Islow {
                        assert_eq!(*v, 0.0, "islow AC {k} for {c}");
                    } else {
                        assert!(v.abs() < 1e-3);
                    }
                }
            }
        }
        assert!((fdct_reference(&PixelBlock::filled(0)).0[0][0] + 1024.0).abs() < 1e-9);
    }

    #[test]
    fn reference_matches_textbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let b = random_block(&mut rng);
            let r = fdct_reference(&b);
            let t = textbook(&b);
            for v in 0..8 {
                for u in 0..8 {
                    assert!((r.0[v][u] - t[v][u]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn basis_pattern_gives_one_coefficient() {
        // Rounding to integers leaks a little energy into other coefficients.
        for (v0, u0) in [(0, 3), (2, 5), (7, 7), (4, 0)] {
            let cos = basis();
            let b = PixelBlock::from_fn(|x, y| {
                let p = 128.0 + 100.0 * cos[u0][x] * cos[v0][y] * 4.0;
                libm::round(p) as u8
            });
            let r = fdct_reference(&b);
            let target = r.0[v0][u0].abs();
            let others = r.energy() - target * target;
            assert!(target > 390.0 && others < 16.0, "({v0},{u0}): {target} {others}");
        }
    }

    #[test]
    fn inverse_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let b = random_block(&mut rng);
        let back = idct_reference(&fdct_reference(&b));
        for y in 0..8 {
            for x in 0..8 {
                assert!((back[y][x] - b.shifted(x, y) as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn float_path_is_accurate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let b = random_block(&mut rng);
            let d = fdct(&b, DctMethod::Float).sub(&fdct_reference(&b));
            assert!(d.max_abs() < 1e-3, "{}", d.max_abs());
        }
    }

    #[test]
    fn integer_paths_are_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let b = random_block(&mut rng);
            let r = fdct_reference(&b);
            assert!(fdct(&b, DctMethod::Islow).sub(&r).max_abs() < 0.2);
            // 8-bit constants: errors of a few units on noise blocks.
            assert!(fdct(&b, DctMethod::Ifast).sub(&r).max_abs() < 8.0);
        }
    }

    #[test]
    fn method_names_roundtrip() {
        for m in DctMethod::ALL {
            assert_eq!(m.name().parse::<DctMethod>().unwrap(), m);
        }
        assert!("fast".parse::<DctMethod>().is_err());
    }

    proptest! {
        #[test]
        fn reference_parseval_and_transpose(seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = random_block(&mut rng);
            let r = fdct_reference(&b);
            let e: f64 = (0..8).flat_map(|y| (0..8).map(move |x| (y, x)))
                .map(|(y, x)| (b.shifted(x, y) as f64).powi(2)).sum();
            prop_assert!((r.energy() - e).abs() <= 1e-9 * e.max(1.0));
            let t = fdct_reference(&b.transpose());
            prop_assert!(t.sub(&r.transpose()).max_abs() < 1e-9);
        }

        #[test]
        fn integer_paths_are_deterministic(seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = random_block(&mut rng);
            for m in [DctMethod::Islow, DctMethod::Ifast] {
                prop_assert_eq!(fdct_raw(&b, m), fdct_raw(&b.clone(), m));
            }
        }
    }
}

//! Box-filter chroma downsampling, in the legacy integer form and exactly.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::invalid;
use crate::spectral::{power_spectrum, MeanAccumulator, SpectrumImage};
use crate::{Error, GrayImage, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChromaMode {
    /// Halves the width.
    S422,
    /// Halves both dimensions.
    S420,
    /// Halves the height.
    S440,
}

impl ChromaMode {
    pub const ALL: [ChromaMode; 3] = [ChromaMode::S422, ChromaMode::S420, ChromaMode::S440];

    fn factors(self) -> (usize, usize) {
        match self {
            ChromaMode::S422 => (2, 1),
            ChromaMode::S420 => (2, 2),
            ChromaMode::S440 => (1, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChromaMode::S422 => "422",
            ChromaMode::S420 => "420",
            ChromaMode::S440 => "440",
        }
    }
}

impl fmt::Display for ChromaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChromaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim_start_matches("s").replace(':', "").as_str() {
            "422" => Ok(ChromaMode::S422),
            "420" => Ok(ChromaMode::S420),
            "440" => Ok(ChromaMode::S440),
            _ => Err(invalid(format!("unknown chroma mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arithmetic {
    /// `(sum + bias) >> shift` on 8-bit samples, bias alternating 1, 2.
    LegacyInt,
    /// Real-valued box average.
    Exact,
}

/// Downsamples `channel` by 2 along the axes of `mode`.
///
/// The legacy path rounds inputs to integers in 0..=255. Its bias starts at 1
/// and alternates per output column (per output row for 4:4:0), restarting on
/// every line.
pub fn subsample_chroma(channel: &GrayImage, mode: ChromaMode, arithmetic: Arithmetic) -> Result<GrayImage> {
    let (w, h) = channel.dims();
    let (fx, fy) = mode.factors();
    if w % fx != 0 || h % fy != 0 || w == 0 || h == 0 {
        return Err(invalid(format!(
            "{w}x{h} channel has an odd dimension along a subsampled axis of {mode}"
        )));
    }
    let (ow, oh) = (w / fx, h / fy);
    let n = (fx * fy) as f64;
    let shift = (fx * fy).trailing_zeros();
    let sample = |x: usize, y: usize| -> f64 {
        match arithmetic {
            Arithmetic::Exact => channel.get(x, y),
            Arithmetic::LegacyInt => libm::round(channel.get(x, y)).clamp(0.0, 255.0),
        }
    };
    Ok(GrayImage::from_fn(ow, oh, |x, y| {
        let mut sum = 0.0;
        for dy in 0..fy {
            for dx in 0..fx {
                sum += sample(x * fx + dx, y * fy + dy);
            }
        }
        match arithmetic {
            Arithmetic::Exact => sum / n,
            Arithmetic::LegacyInt => {
                let phase = if mode == ChromaMode::S440 { y } else { x };
                let bias = 1 + (phase & 1) as u32;
                ((sum as u32 + bias) >> shift) as f64
            }
        }
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WrinkleReport {
    pub mode: ChromaMode,
    /// Mean of `lhs - rhs` over the corpus.
    pub mean_diff: GrayImage,
    /// Mean over rows of each output column.
    pub col_profile: Vec<f64>,
    /// Mean over columns of each output row.
    pub row_profile: Vec<f64>,
    /// Linear power spectrum of `mean_diff`.
    pub spectrum: SpectrumImage,
}

impl WrinkleReport {
    /// Signed frequency of the spectral maximum, zero frequency excluded.
    pub fn peak(&self) -> (isize, isize) {
        let (w, h) = self.spectrum.data.dims();
        let (cx, cy) = ((w / 2) as isize, (h / 2) as isize);
        let mut best = (0, 0);
        let mut best_p = f64::NEG_INFINITY;
        for y in 0..h {
            for x in 0..w {
                let f = (x as isize - cx, y as isize - cy);
                let p = self.spectrum.data.get(x, y);
                if f != (0, 0) && p > best_p {
                    best_p = p;
                    best = f;
                }
            }
        }
        best
    }

    /// Power at horizontal Nyquist (zero vertical frequency).
    pub fn horizontal_nyquist_power(&self) -> f64 {
        let w = self.spectrum.data.width() as isize;
        self.spectrum.at(-(w / 2), 0)
    }

    /// Power at vertical Nyquist (zero horizontal frequency).
    pub fn vertical_nyquist_power(&self) -> f64 {
        let h = self.spectrum.data.height() as isize;
        self.spectrum.at(0, -(h / 2))
    }
}

/// Mean legacy-minus-exact difference map of a corpus and its spectrum.
pub fn wrinkle_experiment(corpus: &[GrayImage], mode: ChromaMode) -> Result<WrinkleReport> {
    wrinkle_experiment_with(corpus, mode, Arithmetic::LegacyInt, Arithmetic::Exact)
}

/// As [`wrinkle_experiment`] for an arbitrary pair of arithmetics.
pub fn wrinkle_experiment_with(
    corpus: &[GrayImage],
    mode: ChromaMode,
    lhs: Arithmetic,
    rhs: Arithmetic,
) -> Result<WrinkleReport> {
    let first = corpus.first().ok_or(Error::Empty)?;
    let mut acc = MeanAccumulator::new();
    for c in corpus {
        c.require_dims(first.dims())?;
        let a = subsample_chroma(c, mode, lhs)?;
        let b = subsample_chroma(c, mode, rhs)?;
        acc.push(&a.sub(&b)?)?;
    }
    let mean_diff = acc.finish()?;
    let (w, h) = mean_diff.dims();
    let col_profile = (0..w)
        .map(|x| (0..h).map(|y| mean_diff.get(x, y)).sum::<f64>() / h as f64)
        .collect();
    let row_profile = (0..h)
        .map(|y| mean_diff.row(y).iter().sum::<f64>() / w as f64)
        .collect();
    Ok(WrinkleReport {
        mode,
        spectrum: power_spectrum(&mean_diff, false),
        mean_diff,
        col_profile,
        row_profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_channel(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |_, _| rng.random_range(0..=255u32) as f64)
    }

    /// Expected `floor((a + b + bias) / 2) - (a + b) / 2` over all byte pairs.
    fn pair_oracle(bias: u32) -> f64 {
        let mut counts = [0u64; 511];
        for a in 0..256 {
            for b in 0..256 {
                counts[a + b] += 1;
            }
        }
        let total: u64 = counts.iter().sum();
        counts
            .iter()
            .enumerate()
            .map(|(s, &c)| c as f64 * (((s as u32 + bias) / 2) as f64 - s as f64 / 2.0))
            .sum::<f64>()
            / total as f64
    }

    #[test]
    fn oracle_values() {
        assert!((pair_oracle(1) - 0.25).abs() < 1e-12);
        assert!((pair_oracle(2) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn constant_channels() {
        for v in 0..=255u32 {
            let c = GrayImage::filled(8, 4, v as f64);
            let e = subsample_chroma(&c, ChromaMode::S422, Arithmetic::Exact).unwrap();
            assert!(e.samples().iter().all(|&s| s == v as f64));
            let l = subsample_chroma(&c, ChromaMode::S422, Arithmetic::LegacyInt).unwrap();
            for y in 0..4 {
                for x in 0..4 {
                    assert_eq!(l.get(x, y), (v + (x as u32 & 1)) as f64);
                }
            }
            let l = subsample_chroma(&c, ChromaMode::S420, Arithmetic::LegacyInt).unwrap();
            assert!(l.samples().iter().all(|&s| s == v as f64));
        }
    }

    #[test]
    fn legacy_formula() {
        let c = GrayImage::new(4, 2, alloc::vec![1.0, 2.0, 3.0, 4.0, 10.0, 20.0, 30.0, 41.0]).unwrap();
        let l = subsample_chroma(&c, ChromaMode::S422, Arithmetic::LegacyInt).unwrap();
        assert_eq!(l.samples(), &[2.0, 4.0, 15.0, 36.0]);
        let l = subsample_chroma(&c, ChromaMode::S420, Arithmetic::LegacyInt).unwrap();
        assert_eq!(
            l.samples(),
            &[
                (1 + 2 + 10 + 20 + 1) as f64 / 4.0 - 0.5,
                ((3 + 4 + 30 + 41 + 2) / 4) as f64
            ]
        );
        let l = subsample_chroma(&c, ChromaMode::S440, Arithmetic::LegacyInt).unwrap();
        assert_eq!(l.samples(), &[6.0, 11.0, 17.0, 23.0]);
    }

    #[test]
    fn odd_dimensions_are_rejected() {
        let c = GrayImage::filled(5, 4, 0.0);
        assert!(subsample_chroma(&c, ChromaMode::S422, Arithmetic::Exact).is_err());
        assert!(subsample_chroma(&c, ChromaMode::S440, Arithmetic::Exact).is_ok());
        let c = GrayImage::filled(4, 5, 0.0);
        assert!(subsample_chroma(&c, ChromaMode::S420, Arithmetic::LegacyInt).is_err());
    }

    #[test]
    fn modes_mirror_under_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = random_channel(&mut rng, 10, 6);
        for a in [Arithmetic::Exact, Arithmetic::LegacyInt] {
            let h = subsample_chroma(&c, ChromaMode::S422, a).unwrap();
            let v = subsample_chroma(&c.transpose(), ChromaMode::S440, a).unwrap();
            assert_eq!(h.transpose(), v);
        }
    }

    #[test]
    fn column_bias_alternates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let corpus: Vec<_> = (0..40).map(|_| random_channel(&mut rng, 64, 64)).collect();
        let r = wrinkle_experiment(&corpus, ChromaMode::S422).unwrap();
        for (x, p) in r.col_profile.iter().enumerate() {
            let want = if x % 2 == 0 { pair_oracle(1) } else { pair_oracle(2) };
            assert!((p - want).abs() < 0.02, "column {x}: {p}");
        }
        let (w, _) = r.mean_diff.dims();
        assert_eq!(r.peak(), (-(w as isize / 2), 0));
        assert!(r.horizontal_nyquist_power() > 1e3 * r.vertical_nyquist_power());

        let r = wrinkle_experiment(&corpus, ChromaMode::S440).unwrap();
        let (_, h) = r.mean_diff.dims();
        assert_eq!(r.peak(), (0, -(h as isize / 2)));

        let r = wrinkle_experiment(&corpus, ChromaMode::S420).unwrap();
        for (x, p) in r.col_profile.iter().enumerate() {
            let want = if x % 2 == 0 { -0.125 } else { 0.125 };
            assert!((p - want).abs() < 0.02, "column {x}: {p}");
        }
    }

    #[test]
    fn exact_control_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let corpus: Vec<_> = (0..3).map(|_| random_channel(&mut rng, 16, 8)).collect();
        let r = wrinkle_experiment_with(&corpus, ChromaMode::S422, Arithmetic::Exact, Arithmetic::Exact).unwrap();
        assert!(r.mean_diff.samples().iter().all(|&v| v == 0.0));
        assert!(wrinkle_experiment(&[], ChromaMode::S422).is_err());
        let bad = [GrayImage::filled(8, 8, 0.0), GrayImage::filled(8, 6, 0.0)];
        assert!(wrinkle_experiment(&bad, ChromaMode::S422).is_err());
    }
}

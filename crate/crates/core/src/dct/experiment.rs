//! Mean rounding error of the library DCT paths over random symmetric blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{fdct, fdct_reference, idct_reference, CoeffBlock, DctMethod, PixelBlock};
use crate::error::invalid;
use crate::Result;

/// Blocks per work unit. Each chunk draws from its own ChaCha stream, so the
/// sample set does not depend on how chunks are scheduled.
pub const CHUNK_BLOCKS: usize = 4096;

const FIXED_ONE: f64 = (1u64 << 32) as f64;

/// Uniform block mirrored from its lower triangle, so `X = X^T`.
pub fn random_symmetric_block<R: Rng>(rng: &mut R) -> PixelBlock {
    let mut b = [[0u8; 8]; 8];
    for row in b.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.random();
        }
    }
    for y in 0..8 {
        for x in y + 1..8 {
            b[y][x] = b[x][y];
        }
    }
    PixelBlock(b)
}

/// Per-coefficient sums of differences in 32.32 fixed point. Integer sums make
/// merging associative, so any merge order gives identical results.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffAccumulator {
    sum: [[i128; 8]; 8],
    sum_sq: [[i128; 8]; 8],
    count: u64,
}

impl DiffAccumulator {
    pub fn push(&mut self, diff: &CoeffBlock) {
        for v in 0..8 {
            for u in 0..8 {
                let d = diff.0[v][u];
                self.sum[v][u] += libm::round(d * FIXED_ONE) as i128;
                self.sum_sq[v][u] += libm::round(d * d * FIXED_ONE) as i128;
            }
        }
        self.count += 1;
    }

    pub fn merge(&mut self, other: &DiffAccumulator) {
        for v in 0..8 {
            for u in 0..8 {
                self.sum[v][u] += other.sum[v][u];
                self.sum_sq[v][u] += other.sum_sq[v][u];
            }
        }
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Accumulates chunk `index` of an experiment: `len` blocks from stream
    /// `index` of the generator seeded with `seed`.
    pub fn chunk(seed: u64, index: u64, len: usize, method: DctMethod) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let mut acc = Self::default();
        for _ in 0..len {
            let b = random_symmetric_block(&mut rng);
            acc.push(&fdct(&b, method).sub(&fdct_reference(&b)));
        }
        acc
    }
}

/// Chunk lengths covering `n_blocks`.
pub fn chunk_plan(n_blocks: usize) -> impl Iterator<Item = (u64, usize)> {
    let full = n_blocks / CHUNK_BLOCKS;
    let rest = n_blocks % CHUNK_BLOCKS;
    (0..full)
        .map(|i| (i as u64, CHUNK_BLOCKS))
        .chain((rest > 0).then_some((full as u64, rest)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArtifactReport {
    /// Mean of `fdct(method) - fdct_reference`, DC set to 0.
    pub mean_dct_diff: CoeffBlock,
    /// Exact inverse DCT of `mean_dct_diff`, indexed `[y][x]`.
    pub mean_spatial_diff: [[f64; 8]; 8],
    /// Standard error of each mean entry.
    pub std_error: [[f64; 8]; 8],
    pub method: DctMethod,
    pub n_blocks: usize,
    pub seed: u64,
}

impl ArtifactReport {
    pub fn from_accumulator(acc: &DiffAccumulator, method: DctMethod, seed: u64) -> Result<Self> {
        if acc.count == 0 {
            return Err(crate::Error::Empty);
        }
        let n = acc.count as f64;
        let mut mean = [[0.0; 8]; 8];
        let mut se = [[0.0; 8]; 8];
        for v in 0..8 {
            for u in 0..8 {
                let m = acc.sum[v][u] as f64 / FIXED_ONE / n;
                let sq = acc.sum_sq[v][u] as f64 / FIXED_ONE / n;
                mean[v][u] = m;
                se[v][u] = if acc.count > 1 {
                    libm::sqrt(((sq - m * m) * n / (n - 1.0)).max(0.0) / n)
                } else {
                    0.0
                };
            }
        }
        mean[0][0] = 0.0;
        se[0][0] = 0.0;
        let mean_dct_diff = CoeffBlock(mean);
        Ok(Self {
            mean_spatial_diff: idct_reference(&mean_dct_diff),
            mean_dct_diff,
            std_error: se,
            method,
            n_blocks: acc.count as usize,
            seed,
        })
    }

    /// Largest per-entry standard error.
    pub fn noise_floor(&self) -> f64 {
        self.std_error.iter().flatten().fold(0.0, |m: f64, &s| m.max(s))
    }

    /// Mean of each DCT-domain row, DC excluded.
    pub fn row_means(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (v, o) in out.iter_mut().enumerate() {
            let (s, k) = (0..8)
                .filter(|&u| (v, u) != (0, 0))
                .fold((0.0, 0), |(s, k), u| (s + self.mean_dct_diff.0[v][u], k + 1));
            *o = s / k as f64;
        }
        out
    }

    /// Mean of each DCT-domain column, DC excluded.
    pub fn col_means(&self) -> [f64; 8] {
        let t = Self {
            mean_dct_diff: self.mean_dct_diff.transpose(),
            ..self.clone()
        };
        t.row_means()
    }

    /// Rows whose mean exceeds `k` noise floors in magnitude.
    pub fn biased_rows(&self, k: f64) -> alloc::vec::Vec<usize> {
        let floor = self.noise_floor();
        let rm = self.row_means();
        (0..8).filter(|&v| rm[v].abs() > k * floor).collect()
    }

    /// Mean of each spatial column.
    pub fn spatial_col_means(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (x, o) in out.iter_mut().enumerate() {
            *o = (0..8).map(|y| self.mean_spatial_diff[y][x]).sum::<f64>() / 8.0;
        }
        out
    }

    /// Mean of each spatial row.
    pub fn spatial_row_means(&self) -> [f64; 8] {
        self.mean_spatial_diff.map(|r| r.iter().sum::<f64>() / 8.0)
    }

    /// The `k` spatial columns with the largest `|mean|`, split by sign into
    /// (negative, positive), each sorted by column index.
    pub fn dominant_spatial_columns(&self, k: usize) -> (alloc::vec::Vec<usize>, alloc::vec::Vec<usize>) {
        let c = self.spatial_col_means();
        let mut idx: alloc::vec::Vec<usize> = (0..8).collect();
        idx.sort_by(|&a, &b| c[b].abs().total_cmp(&c[a].abs()));
        idx.truncate(k);
        idx.sort_unstable();
        idx.into_iter().partition(|&x| c[x] < 0.0)
    }

    /// Largest `|M - M^T|` entry of the DCT-domain mean.
    pub fn asymmetry(&self) -> f64 {
        self.mean_dct_diff.sub(&self.mean_dct_diff.transpose()).max_abs()
    }
}

/// Runs `n_blocks` blocks sequentially. The result equals any parallel
/// evaluation of the same chunks merged in any order.
pub fn rounding_experiment(n_blocks: usize, seed: u64, method: DctMethod) -> Result<ArtifactReport> {
    if n_blocks == 0 {
        return Err(invalid("n_blocks must be at least 1"));
    }
    let mut acc = DiffAccumulator::default();
    for (index, len) in chunk_plan(n_blocks) {
        acc.merge(&DiffAccumulator::chunk(seed, index, len, method));
    }
    ArtifactReport::from_accumulator(&acc, method, seed)
}

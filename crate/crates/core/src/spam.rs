//! First-order SPAM co-occurrence features and the symmetrization stress.
//!
//! Residuals are differences of adjacent samples along a scan direction,
//! truncated to `[-T, T]`. Each direction yields a Markov transition matrix
//! `M[v][u] = P(next = u | current = v)`, indexed by residual `+ T`, so the
//! rows are conditional distributions. Opposite directions are averaged.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::invalid;
use crate::{Error, GrayImage, Result};

/// Truncation threshold. `2 * (2T + 1)^2 = 338`.
pub const DEFAULT_T: usize = 6;

/// `(2T+1) x (2T+1)` transition matrix, row-major, rows indexed by the
/// current residual.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    side: usize,
    data: Vec<f64>,
}

impl TransitionMatrix {
    fn zeros(side: usize) -> Self {
        Self {
            side,
            data: alloc::vec![0.0; side * side],
        }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Truncation threshold of this matrix.
    pub fn threshold(&self) -> usize {
        self.side / 2
    }

    /// `P(next = u | current = v)` for residual values in `-T..=T`.
    pub fn prob(&self, current: i32, next: i32) -> f64 {
        let t = self.threshold() as i32;
        self.data[((current + t) as usize) * self.side + (next + t) as usize]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let n = self.side;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c];
            }
        }
        out
    }

    fn average(a: &Self, b: &Self) -> Self {
        Self {
            side: a.side,
            data: a.data.iter().zip(&b.data).map(|(x, y)| (x + y) / 2.0).collect(),
        }
    }

    fn from_counts(side: usize, counts: &[u64]) -> Self {
        let mut m = Self::zeros(side);
        for r in 0..side {
            let row = &counts[r * side..(r + 1) * side];
            let total: u64 = row.iter().sum();
            if total > 0 {
                for (o, &c) in m.data[r * side..(r + 1) * side].iter_mut().zip(row) {
                    *o = c as f64 / total as f64;
                }
            }
        }
        m
    }

    /// Euclidean distance between the flattened matrices.
    pub fn distance(&self, other: &Self) -> f64 {
        libm::sqrt(self.data.iter().zip(&other.data).map(|(a, b)| (a - b) * (a - b)).sum())
    }
}

/// Scan direction as a pixel step `(dx, dy)`; `y` grows downwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanDirection {
    Right,
    Left,
    Down,
    Up,
    DownRight,
    UpLeft,
    UpRight,
    DownLeft,
}

impl ScanDirection {
    pub const ALL: [ScanDirection; 8] = [
        ScanDirection::Right,
        ScanDirection::Left,
        ScanDirection::Down,
        ScanDirection::Up,
        ScanDirection::DownRight,
        ScanDirection::UpLeft,
        ScanDirection::UpRight,
        ScanDirection::DownLeft,
    ];

    pub fn step(self) -> (isize, isize) {
        match self {
            ScanDirection::Right => (1, 0),
            ScanDirection::Left => (-1, 0),
            ScanDirection::Down => (0, 1),
            ScanDirection::Up => (0, -1),
            ScanDirection::DownRight => (1, 1),
            ScanDirection::UpLeft => (-1, -1),
            ScanDirection::UpRight => (1, -1),
            ScanDirection::DownLeft => (-1, 1),
        }
    }
}

/// Transition matrix along one scan direction. Residual at `p` is
/// `I(p) - I(p + step)`, and the chain pairs the residuals at `p` and
/// `p + step`.
pub fn transition_matrix(img: &GrayImage, dir: ScanDirection, t: usize) -> Result<TransitionMatrix> {
    let q = quantize(img)?;
    Ok(transition_from_samples(&q, img.width(), img.height(), dir, t))
}

fn quantize(img: &GrayImage) -> Result<Vec<i32>> {
    img.require_min(3)?;
    img.samples()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v.is_finite() {
                Ok(libm::round(v) as i32)
            } else {
                Err(Error::NonFinite(i))
            }
        })
        .collect()
}

fn transition_from_samples(q: &[i32], w: usize, h: usize, dir: ScanDirection, t: usize) -> TransitionMatrix {
    let side = 2 * t + 1;
    let ti = t as i32;
    let (dx, dy) = dir.step();
    let mut counts = alloc::vec![0u64; side * side];
    // p, p + step and p + 2 step must all lie inside the image.
    let range = |d: isize, n: usize| -> (usize, usize) {
        match d {
            1 => (0, n - 2),
            -1 => (2, n),
            _ => (0, n),
        }
    };
    let (x0, x1) = range(dx, w);
    let (y0, y1) = range(dy, h);
    let at = |x: usize, y: usize, k: isize| -> i32 {
        let xx = (x as isize + k * dx) as usize;
        let yy = (y as isize + k * dy) as usize;
        q[yy * w + xx]
    };
    for y in y0..y1 {
        for x in x0..x1 {
            let (a, b, c) = (at(x, y, 0), at(x, y, 1), at(x, y, 2));
            let cur = (a - b).clamp(-ti, ti) + ti;
            let next = (b - c).clamp(-ti, ti) + ti;
            counts[cur as usize * side + next as usize] += 1;
        }
    }
    TransitionMatrix::from_counts(side, &counts)
}

/// Transition matrices averaged over opposite scan directions.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalSubmodels {
    /// Right and left.
    pub f_h: TransitionMatrix,
    /// Down and up.
    pub f_v: TransitionMatrix,
    /// Down-right and up-left.
    pub f_d1: TransitionMatrix,
    /// Up-right and down-left.
    pub f_d2: TransitionMatrix,
}

impl DirectionalSubmodels {
    pub fn threshold(&self) -> usize {
        self.f_h.threshold()
    }
}

/// Samples are rounded to integers first. Requires both dimensions ≥ 3.
pub fn directional_submodels(img: &GrayImage, t: usize) -> Result<DirectionalSubmodels> {
    if t == 0 {
        return Err(invalid("truncation threshold must be at least 1"));
    }
    let q = quantize(img)?;
    let (w, h) = img.dims();
    let m = |d| transition_from_samples(&q, w, h, d, t);
    use ScanDirection::*;
    Ok(DirectionalSubmodels {
        f_h: TransitionMatrix::average(&m(Right), &m(Left)),
        f_v: TransitionMatrix::average(&m(Down), &m(Up)),
        f_d1: TransitionMatrix::average(&m(DownRight), &m(UpLeft)),
        f_d2: TransitionMatrix::average(&m(UpRight), &m(DownLeft)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpamLayout {
    /// `(F_h + F_v)/2` then `(F_d1 + F_d2)/2`, each row-major.
    Symmetrized,
    /// `F_h`, `F_v`, `F_d1`, `F_d2`, each row-major.
    Directional,
}

impl SpamLayout {
    pub fn len(self, t: usize) -> usize {
        let s = (2 * t + 1) * (2 * t + 1);
        match self {
            SpamLayout::Symmetrized => 2 * s,
            SpamLayout::Directional => 4 * s,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpamLayout::Symmetrized => "sym",
            SpamLayout::Directional => "dir",
        }
    }
}

impl fmt::Display for SpamLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpamLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" | "symmetrized" | "338" => Ok(SpamLayout::Symmetrized),
            "dir" | "directional" | "676" => Ok(SpamLayout::Directional),
            _ => Err(invalid(format!("unknown SPAM layout `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub layout: SpamLayout,
}

impl FeatureVector {
    pub fn from_submodels(m: &DirectionalSubmodels, layout: SpamLayout) -> Self {
        let mut values = Vec::with_capacity(layout.len(m.threshold()));
        match layout {
            SpamLayout::Symmetrized => {
                values.extend(TransitionMatrix::average(&m.f_h, &m.f_v).data);
                values.extend(TransitionMatrix::average(&m.f_d1, &m.f_d2).data);
            }
            SpamLayout::Directional => {
                for f in [&m.f_h, &m.f_v, &m.f_d1, &m.f_d2] {
                    values.extend_from_slice(&f.data);
                }
            }
        }
        Self { values, layout }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// SPAM features with `T = 6`: 338 values symmetrized, 676 directional.
pub fn spam_features(img: &GrayImage, layout: SpamLayout) -> Result<FeatureVector> {
    Ok(FeatureVector::from_submodels(
        &directional_submodels(img, DEFAULT_T)?,
        layout,
    ))
}

/// `||F_h - F_v||_2`: how much the symmetrized features discard.
pub fn stress(img: &GrayImage) -> Result<f64> {
    let m = directional_submodels(img, DEFAULT_T)?;
    Ok(m.f_h.distance(&m.f_v))
}

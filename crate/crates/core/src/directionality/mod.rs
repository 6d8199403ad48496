//! Directionality scores.
//!
//! Both detectors return a signed score: positive when the image holds more
//! energy in its horizontal frequencies (content varying along x, i.e.
//! vertical edges), negative for the opposite. The steerable-pyramid score is
//! the primary detector; the Sobel score is a gradient baseline.

mod pyramid;
mod sobel;

use alloc::vec::Vec;

pub use pyramid::{build_pyramid, pyramid_score, PyramidDecomposition, PyramidScorer};
pub use sobel::sobel_score;

use crate::error::{invalid, Result};

/// How per-scale partial scores are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum ScoreMode {
    /// Sum over scales; range `[-S, S]`.
    #[default]
    Sum,
    /// Mean over scales; range `[-1, 1]`.
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PyramidConfig {
    pub scales: usize,
    pub orientations: usize,
}

impl Default for PyramidConfig {
    fn default() -> Self {
        Self {
            scales: 2,
            orientations: 16,
        }
    }
}

impl PyramidConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scales == 0 || self.scales > 16 {
            return Err(invalid("pyramid needs between 1 and 16 scales"));
        }
        if self.orientations < 4 || self.orientations % 4 != 0 || self.orientations > 64 {
            return Err(invalid("orientation count must be a multiple of 4 between 4 and 64"));
        }
        Ok(())
    }

    /// Smallest admissible side length, `2^(S+2)`.
    pub fn min_size(&self) -> usize {
        1 << (self.scales + 2)
    }

    /// Index of the band centered on the vertical-frequency axis.
    pub fn vertical_band(&self) -> usize {
        self.orientations / 2
    }
}

/// Energies of the two axis-centered bands of one scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleEnergy {
    /// Energy of the band centered on the horizontal-frequency axis.
    pub e_h: f64,
    /// Energy of the band centered on the vertical-frequency axis.
    pub e_v: f64,
    /// `(e_h - e_v) / (e_h + e_v)`, or 0 for an energy-free scale.
    pub partial: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalityScore {
    pub d: f64,
    pub per_scale: Vec<ScaleEnergy>,
    pub mode: ScoreMode,
}

impl DirectionalityScore {
    /// Aggregates per-scale band energies. `area` sets the degenerate-scale
    /// threshold `1e-12 * area`.
    pub fn from_energies(energies: &[(f64, f64)], area: usize, mode: ScoreMode) -> Self {
        let eps = 1e-12 * area as f64;
        let per_scale: Vec<ScaleEnergy> = energies
            .iter()
            .map(|&(e_h, e_v)| {
                let total = e_h + e_v;
                let partial = if total < eps { 0.0 } else { (e_h - e_v) / total };
                ScaleEnergy { e_h, e_v, partial }
            })
            .collect();
        let sum: f64 = per_scale.iter().map(|s| s.partial).sum();
        let d = match mode {
            ScoreMode::Sum => sum,
            ScoreMode::Mean => sum / per_scale.len().max(1) as f64,
        };
        Self { d, per_scale, mode }
    }

    pub fn with_mode(&self, mode: ScoreMode) -> Self {
        let sum: f64 = self.per_scale.iter().map(|s| s.partial).sum();
        let d = match mode {
            ScoreMode::Sum => sum,
            ScoreMode::Mean => sum / self.per_scale.len().max(1) as f64,
        };
        Self {
            d,
            per_scale: self.per_scale.clone(),
            mode,
        }
    }
}

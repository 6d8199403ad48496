//! Subcommand implementations.

mod dct;
mod detect;
mod jpeg;
mod sensor;
mod spectrum;
mod synth;

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex};

use dirscope_core::directionality::{PyramidConfig, PyramidScorer};
use rayon::prelude::*;

use crate::cli::{Command, GlobalArgs};
use crate::error::AppResult;

pub use detect::{run_survey, ImageScore, SurveyConfig, SurveyReport};

pub struct Ctx {
    pub global: GlobalArgs,
}

impl Ctx {
    pub fn out(&self) -> Option<&Path> {
        self.global.out.as_deref()
    }
}

/// Maps in parallel on the current pool; results keep input order, so any
/// reduction over them is independent of the worker count.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

/// Pyramid scorers shared across workers, one per image size.
#[derive(Default)]
pub struct ScorerCache {
    scorers: Mutex<HashMap<usize, Arc<PyramidScorer>>>,
}

impl ScorerCache {
    pub fn get(&self, size: usize) -> AppResult<Arc<PyramidScorer>> {
        if let Some(s) = self.scorers.lock().expect("scorer cache lock").get(&size) {
            return Ok(s.clone());
        }
        let s = Arc::new(PyramidScorer::new(size, PyramidConfig::default())?);
        self.scorers.lock().expect("scorer cache lock").insert(size, s.clone());
        Ok(s)
    }
}

pub fn dispatch(ctx: &Ctx, command: Command) -> AppResult<()> {
    match command {
        Command::Score { paths, detector, mode } => detect::score(ctx, &paths, detector, mode),
        Command::Survey {
            dir,
            kind,
            detector,
            mode,
            bins,
            top_k,
            recursive,
            config,
        } => match kind {
            crate::cli::SurveyKind::Directionality => {
                let cfg = SurveyConfig::resolve(config.as_deref(), detector, mode, bins, top_k, recursive)?;
                detect::survey(ctx, &dir, &cfg)
            }
            crate::cli::SurveyKind::Jpeg => jpeg::survey(ctx, &dir, recursive),
        },
        Command::Spectrum {
            paths,
            png,
            sigma,
            log,
            recursive,
        } => spectrum::spectrum(ctx, &paths, png.as_deref(), sigma, log, recursive),
        Command::Qt {
            paths,
            quality,
            chroma,
            blend,
            symmetrize,
        } => jpeg::qt(ctx, &paths, quality, chroma, blend.as_deref(), symmetrize),
        Command::DctArtifacts { method, blocks, png } => dct::artifacts(ctx, method, blocks, png.as_deref()),
        Command::ChromaWrinkle {
            mode,
            paths,
            count,
            size,
            png,
        } => dct::wrinkle(ctx, mode, &paths, count, size, png.as_deref()),
        Command::Spam { paths, layout } => detect::spam(ctx, &paths, layout),
        Command::Stress { paths } => detect::stress(ctx, &paths),
        Command::LinearPattern {
            dir,
            png,
            sigma,
            recursive,
        } => sensor::linear_pattern(ctx, &dir, png.as_deref(), sigma, recursive),
        Command::ColumnProfile { dir, recursive } => sensor::column_profile(ctx, &dir, recursive),
        Command::Synth {
            count,
            size,
            condition,
            components,
            amp_lo,
            amp_hi,
            noise,
        } => synth::synth(ctx, count, size, &condition, components, (amp_lo, amp_hi), noise),
    }
}

/// Path as written in reports.
pub fn path_label(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

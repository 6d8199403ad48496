//! Frame-stack linear pattern and column profiles.

use std::path::Path;

use dirscope_core::sensor::{
    average_frames, column_profile as col_means, linear_pattern_from_residual, row_profile, FrameStack,
};
use dirscope_core::spectral::{residual, MeanAccumulator};
use dirscope_core::GrayImage;
use serde::{Deserialize, Serialize};

use super::{par_map, Ctx};
use crate::error::{AppError, AppResult};
use crate::io::{contrast_stretch, list_images, load_gray, save_png_gray};
use crate::report::{f6s, write_report, Tabular, F6};

fn load_frames(dir: &Path, recursive: bool) -> AppResult<Vec<GrayImage>> {
    let files = list_images(dir, recursive)?;
    if files.is_empty() {
        return Err(AppError::data(format!("no images in {}", dir.display())));
    }
    let frames = par_map(&files, |p| load_gray(p))
        .into_iter()
        .collect::<AppResult<Vec<_>>>()?;
    let dims = frames[0].dims();
    if let Some((p, f)) = files.iter().zip(&frames).find(|(_, f)| f.dims() != dims) {
        return Err(AppError::data(format!(
            "{}: frame is {}x{}, expected {}x{}",
            p.display(),
            f.width(),
            f.height(),
            dims.0,
            dims.1
        )));
    }
    Ok(frames)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearPatternReport {
    pub n_frames: usize,
    pub width: usize,
    pub height: usize,
    pub sigma: F6,
    /// Pyramid directionality of the pattern; negative means column-wise.
    pub d_score: F6,
    pub pattern_rms: F6,
    pub fingerprint_rms: F6,
    pub column_profile: Vec<F6>,
    pub row_profile: Vec<F6>,
    pub png: Option<String>,
}

impl Tabular for LinearPatternReport {
    fn header(&self) -> Vec<String> {
        [
            "n_frames",
            "width",
            "height",
            "sigma",
            "d_score",
            "pattern_rms",
            "fingerprint_rms",
            "png",
        ]
        .map(String::from)
        .into()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.n_frames.to_string(),
            self.width.to_string(),
            self.height.to_string(),
            self.sigma.to_string(),
            self.d_score.to_string(),
            self.pattern_rms.to_string(),
            self.fingerprint_rms.to_string(),
            self.png.clone().unwrap_or_default(),
        ]]
    }
}

fn rms(m: &GrayImage) -> f64 {
    (m.samples().iter().map(|v| v * v).sum::<f64>() / m.area() as f64).sqrt()
}

pub fn linear_pattern(ctx: &Ctx, dir: &Path, png: Option<&Path>, sigma: f64, recursive: bool) -> AppResult<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(AppError::usage(format!("--sigma must be positive, got {sigma}")));
    }
    let frames = load_frames(dir, recursive)?;
    if frames.len() < 2 {
        return Err(AppError::data("linear pattern needs at least two frames"));
    }
    let residuals = par_map(&frames, |f| residual(f, sigma));
    let mut acc = MeanAccumulator::new();
    for r in residuals {
        acc.push(&r?)?;
    }
    let lp = linear_pattern_from_residual(acc.finish()?)?;
    if let Some(p) = png {
        save_png_gray(p, &contrast_stretch(&lp.pattern, 0.01))?;
    }
    let (w, h) = lp.pattern.dims();
    let report = LinearPatternReport {
        n_frames: frames.len(),
        width: w,
        height: h,
        sigma: F6::new(sigma),
        d_score: F6::new(lp.d_score),
        pattern_rms: F6::new(rms(&lp.pattern)),
        fingerprint_rms: F6::new(rms(&lp.fingerprint)),
        column_profile: f6s(&col_means(&lp.pattern)),
        row_profile: f6s(&row_profile(&lp.pattern)),
        png: png.map(|p| p.to_string_lossy().into_owned()),
    };
    write_report(&report, ctx.global.format, ctx.out())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub n_frames: usize,
    pub column_means: Vec<F6>,
    pub row_means: Vec<F6>,
}

impl Tabular for ProfileReport {
    fn header(&self) -> Vec<String> {
        ["axis", "index", "mean"].map(String::from).into()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let col = self
            .column_means
            .iter()
            .enumerate()
            .map(|(i, v)| vec!["column".into(), i.to_string(), v.to_string()]);
        let row = self
            .row_means
            .iter()
            .enumerate()
            .map(|(i, v)| vec!["row".into(), i.to_string(), v.to_string()]);
        col.chain(row).collect()
    }
}

pub fn column_profile(ctx: &Ctx, dir: &Path, recursive: bool) -> AppResult<()> {
    let frames = load_frames(dir, recursive)?;
    let n = frames.len();
    let avg = average_frames(&FrameStack::new(frames, dir.to_string_lossy())?)?;
    let report = ProfileReport {
        n_frames: n,
        column_means: f6s(&col_means(&avg)),
        row_means: f6s(&row_profile(&avg)),
    };
    write_report(&report, ctx.global.format, ctx.out())
}

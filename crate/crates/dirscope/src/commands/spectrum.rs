//! Mean noise-residual power spectrum.

use std::path::{Path, PathBuf};

use dirscope_core::spectral::{power_spectrum, residual, MeanAccumulator};
use serde::{Deserialize, Serialize};

use super::{par_map, Ctx};
use crate::error::{AppError, AppResult};
use crate::io::{expand_inputs, load_gray, normalize_minmax, save_png_gray};
use crate::report::{write_report, Tabular, F6};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n_images: usize,
    pub width: usize,
    pub height: usize,
    pub sigma: F6,
    pub log_scaled: bool,
    /// Strongest non-zero frequency `(fx, fy)` and its power.
    pub peak_fx: isize,
    pub peak_fy: isize,
    pub peak_power: F6,
    /// Total power on the `fy = 0` and `fx = 0` axes, DC excluded.
    pub horizontal_axis_power: F6,
    pub vertical_axis_power: F6,
    pub png: Option<String>,
}

impl Tabular for SpectrumReport {
    fn header(&self) -> Vec<String> {
        [
            "n_images",
            "width",
            "height",
            "sigma",
            "log_scaled",
            "peak_fx",
            "peak_fy",
            "peak_power",
            "horizontal_axis_power",
            "vertical_axis_power",
            "png",
        ]
        .map(String::from)
        .into()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.n_images.to_string(),
            self.width.to_string(),
            self.height.to_string(),
            self.sigma.to_string(),
            self.log_scaled.to_string(),
            self.peak_fx.to_string(),
            self.peak_fy.to_string(),
            self.peak_power.to_string(),
            self.horizontal_axis_power.to_string(),
            self.vertical_axis_power.to_string(),
            self.png.clone().unwrap_or_default(),
        ]]
    }
}

pub fn spectrum(
    ctx: &Ctx,
    paths: &[PathBuf],
    png: Option<&Path>,
    sigma: f64,
    log: bool,
    recursive: bool,
) -> AppResult<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(AppError::usage(format!("--sigma must be positive, got {sigma}")));
    }
    let files = expand_inputs(paths, recursive)?;
    if files.is_empty() {
        return Err(AppError::data("no images given"));
    }
    let residuals = par_map(&files, |p| -> AppResult<_> {
        let img = load_gray(p)?;
        residual(&img, sigma).map_err(|e| AppError::data(format!("{}: {e}", p.display())))
    });
    let mut acc = MeanAccumulator::new();
    for (p, r) in files.iter().zip(residuals) {
        acc.push(&r?)
            .map_err(|e| AppError::data(format!("{}: {e}", p.display())))?;
    }
    let mean = acc.finish()?;
    let (w, h) = mean.dims();
    let linear = power_spectrum(&mean, false);
    let (cx, cy) = ((w / 2) as isize, (h / 2) as isize);
    let (mut peak, mut peak_p) = ((0, 0), f64::NEG_INFINITY);
    let (mut hp, mut vp) = (0.0, 0.0);
    for y in 0..h {
        for x in 0..w {
            let f = (x as isize - cx, y as isize - cy);
            if f == (0, 0) {
                continue;
            }
            let p = linear.data.get(x, y);
            if p > peak_p {
                peak_p = p;
                peak = f;
            }
            if f.1 == 0 {
                hp += p;
            }
            if f.0 == 0 {
                vp += p;
            }
        }
    }
    if let Some(out) = png {
        let shown = if log {
            power_spectrum(&mean, true).data
        } else {
            linear.data.clone()
        };
        save_png_gray(out, &normalize_minmax(&shown))?;
    }
    let report = SpectrumReport {
        n_images: files.len(),
        width: w,
        height: h,
        sigma: F6::new(sigma),
        log_scaled: log,
        peak_fx: peak.0,
        peak_fy: peak.1,
        peak_power: F6::new(peak_p.max(0.0)),
        horizontal_axis_power: F6::new(hp),
        vertical_axis_power: F6::new(vp),
        png: png.map(|p| p.to_string_lossy().into_owned()),
    };
    write_report(&report, ctx.global.format, ctx.out())
}

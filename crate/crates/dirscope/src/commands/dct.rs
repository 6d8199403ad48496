//! DCT rounding artifacts and legacy chroma downsampling.

use std::path::{Path, PathBuf};

use dirscope_core::dct::{
    chunk_plan, wrinkle_experiment, ArtifactReport, ChromaMode, DctMethod, DiffAccumulator, WrinkleReport,
};
use dirscope_core::GrayImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{par_map, Ctx};
use crate::cli::{ChromaModeArg, DctMethodArg};
use crate::error::{AppError, AppResult};
use crate::io::{expand_inputs, load_raster, normalize_minmax, save_diverging_png, save_png_gray, Raster};
use crate::report::{f6s, write_report, Tabular, F6};

fn method(m: DctMethodArg) -> DctMethod {
    match m {
        DctMethodArg::Islow => DctMethod::Islow,
        DctMethodArg::Ifast => DctMethod::Ifast,
        DctMethodArg::Float => DctMethod::Float,
    }
}

fn matrix(m: &[[f64; 8]; 8]) -> Vec<Vec<F6>> {
    m.iter().map(|r| f6s(r)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DctArtifactsReport {
    pub method: String,
    pub n_blocks: usize,
    pub seed: u64,
    /// `[v][u]`, DC set to 0.
    pub mean_dct_diff: Vec<Vec<F6>>,
    /// `[y][x]`.
    pub mean_spatial_diff: Vec<Vec<F6>>,
    /// Largest per-entry standard error.
    pub noise_floor: F6,
    pub dct_row_means: Vec<F6>,
    pub dct_col_means: Vec<F6>,
    /// Rows whose mean exceeds three noise floors.
    pub biased_rows: Vec<usize>,
    pub spatial_col_means: Vec<F6>,
    /// Largest `|M - M^T|` entry.
    pub asymmetry: F6,
}

impl DctArtifactsReport {
    pub fn new(r: &ArtifactReport) -> Self {
        Self {
            method: r.method.name().into(),
            n_blocks: r.n_blocks,
            seed: r.seed,
            mean_dct_diff: matrix(&r.mean_dct_diff.0),
            mean_spatial_diff: matrix(&r.mean_spatial_diff),
            noise_floor: F6::new(r.noise_floor()),
            dct_row_means: f6s(&r.row_means()),
            dct_col_means: f6s(&r.col_means()),
            biased_rows: r.biased_rows(3.0),
            spatial_col_means: f6s(&r.spatial_col_means()),
            asymmetry: F6::new(r.asymmetry()),
        }
    }
}

impl Tabular for DctArtifactsReport {
    fn header(&self) -> Vec<String> {
        let mut h = vec!["domain".to_string(), "row".to_string()];
        h.extend((0..8).map(|c| format!("c{c}")));
        h
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::new();
        for (domain, m) in [("dct", &self.mean_dct_diff), ("spatial", &self.mean_spatial_diff)] {
            for (i, r) in m.iter().enumerate() {
                let mut row = vec![domain.to_string(), i.to_string()];
                row.extend(r.iter().map(F6::to_string));
                rows.push(row);
            }
        }
        rows
    }
}

/// Runs the experiment chunk-parallel. Chunk sums are integers, so the merge
/// is exact in any order.
pub fn run_artifacts(m: DctMethod, blocks: usize, seed: u64) -> AppResult<ArtifactReport> {
    if blocks == 0 {
        return Err(AppError::usage("--blocks must be at least 1"));
    }
    let plan: Vec<(u64, usize)> = chunk_plan(blocks).collect();
    let mut acc = DiffAccumulator::default();
    for part in par_map(&plan, |&(i, n)| DiffAccumulator::chunk(seed, i, n, m)) {
        acc.merge(&part);
    }
    Ok(ArtifactReport::from_accumulator(&acc, m, seed)?)
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn artifacts(ctx: &Ctx, m: DctMethodArg, blocks: usize, png: Option<&Path>) -> AppResult<()> {
    let r = run_artifacts(method(m), blocks, ctx.global.seed)?;
    if let Some(prefix) = png {
        let dct = GrayImage::from_fn(8, 8, |u, v| r.mean_dct_diff.0[v][u]);
        let spatial = GrayImage::from_fn(8, 8, |x, y| r.mean_spatial_diff[y][x]);
        save_diverging_png(&suffixed(prefix, "_dct.png"), &dct, 32)?;
        save_diverging_png(&suffixed(prefix, "_spatial.png"), &spatial, 32)?;
    }
    write_report(&DctArtifactsReport::new(&r), ctx.global.format, ctx.out())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WrinkleSummary {
    pub mode: String,
    pub n_channels: usize,
    pub width: usize,
    pub height: usize,
    /// Mean legacy-minus-exact error per output column.
    pub col_profile: Vec<F6>,
    /// Mean legacy-minus-exact error per output row.
    pub row_profile: Vec<F6>,
    pub peak_fx: isize,
    pub peak_fy: isize,
    pub horizontal_nyquist_power: F6,
    pub vertical_nyquist_power: F6,
    pub png: Option<String>,
}

impl WrinkleSummary {
    fn new(r: &WrinkleReport, n: usize, png: Option<&Path>) -> Self {
        let (w, h) = r.mean_diff.dims();
        let (fx, fy) = r.peak();
        Self {
            mode: r.mode.name().into(),
            n_channels: n,
            width: w,
            height: h,
            col_profile: f6s(&r.col_profile),
            row_profile: f6s(&r.row_profile),
            peak_fx: fx,
            peak_fy: fy,
            horizontal_nyquist_power: F6::new(r.horizontal_nyquist_power()),
            vertical_nyquist_power: F6::new(r.vertical_nyquist_power()),
            png: png.map(|p| p.to_string_lossy().into_owned()),
        }
    }
}

impl Tabular for WrinkleSummary {
    fn header(&self) -> Vec<String> {
        ["axis", "index", "mean_error"].map(String::from).into()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let col = self
            .col_profile
            .iter()
            .enumerate()
            .map(|(i, v)| vec!["column".into(), i.to_string(), v.to_string()]);
        let row = self
            .row_profile
            .iter()
            .enumerate()
            .map(|(i, v)| vec!["row".into(), i.to_string(), v.to_string()]);
        col.chain(row).collect()
    }
}

/// JFIF Cb of an RGB raster, rounded; gray rasters are used as they are.
/// Odd trailing rows and columns are dropped.
fn chroma_channel(r: Raster) -> GrayImage {
    let c = match r {
        Raster::Gray(g) => g,
        Raster::Rgb(rgb) => {
            let [red, green, blue] = rgb.channels();
            GrayImage::from_fn(rgb.width(), rgb.height(), |x, y| {
                let cb = 128.0 - 0.168736 * red.get(x, y) - 0.331264 * green.get(x, y) + 0.5 * blue.get(x, y);
                cb.round().clamp(0.0, 255.0)
            })
        }
    };
    let (w, h) = (c.width() & !1, c.height() & !1);
    GrayImage::from_fn(w, h, |x, y| c.get(x, y))
}

pub fn wrinkle(
    ctx: &Ctx,
    mode: ChromaModeArg,
    paths: &[PathBuf],
    count: usize,
    size: usize,
    png: Option<&Path>,
) -> AppResult<()> {
    let mode = match mode {
        ChromaModeArg::S422 => ChromaMode::S422,
        ChromaModeArg::S420 => ChromaMode::S420,
        ChromaModeArg::S440 => ChromaMode::S440,
    };
    let corpus: Vec<GrayImage> = if paths.is_empty() {
        if count == 0 || size < 2 || size % 2 != 0 {
            return Err(AppError::usage("--count must be positive and --size even and >= 2"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.global.seed);
        (0..count)
            .map(|_| GrayImage::from_fn(size, size, |_, _| rng.random_range(0..=255u32) as f64))
            .collect()
    } else {
        let files = expand_inputs(paths, false)?;
        par_map(&files, |p| load_raster(p).map(chroma_channel))
            .into_iter()
            .collect::<AppResult<_>>()?
    };
    let r = wrinkle_experiment(&corpus, mode)?;
    if let Some(p) = png {
        let shown = dirscope_core::spectral::power_spectrum(&r.mean_diff, true).data;
        save_png_gray(p, &normalize_minmax(&shown))?;
    }
    write_report(
        &WrinkleSummary::new(&r, corpus.len(), png),
        ctx.global.format,
        ctx.out(),
    )
}

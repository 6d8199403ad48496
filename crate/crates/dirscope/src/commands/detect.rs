//! Directionality scoring, the score survey, SPAM features and stress.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use dirscope_core::directionality::sobel_score;
use dirscope_core::image::center_crop_square;
use dirscope_core::spam::{spam_features, stress as spam_stress, SpamLayout};
use dirscope_core::GrayImage;
use serde::{Deserialize, Serialize};

use super::{par_map, path_label, Ctx, ScorerCache};
use crate::cli::{Detector, LayoutArg, Mode};
use crate::error::{AppError, AppResult};
use crate::io::{expand_inputs, list_images, load_gray};
use crate::report::{f6s, write_report, Tabular, F6};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalePartial {
    pub scale: usize,
    pub e_h: F6,
    pub e_v: F6,
    pub partial: F6,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub path: String,
    pub d: F6,
    pub detector: String,
    /// Aggregation over scales; absent for the Sobel detector.
    pub mode: Option<String>,
    pub per_scale: Vec<ScalePartial>,
}

struct ScoreTable(Vec<ScoreRecord>);

impl Serialize for ScoreTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl Tabular for ScoreTable {
    fn header(&self) -> Vec<String> {
        let scales = self.0.iter().map(|r| r.per_scale.len()).max().unwrap_or(0);
        let mut h: Vec<String> = ["path", "d", "detector", "mode"].map(String::from).into();
        h.extend((0..scales).map(|s| format!("partial_{s}")));
        h
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.0
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.path.clone(),
                    r.d.to_string(),
                    r.detector.clone(),
                    r.mode.clone().unwrap_or_default(),
                ];
                row.extend(r.per_scale.iter().map(|p| p.partial.to_string()));
                row
            })
            .collect()
    }
}

/// Score of the center square of `img`.
pub fn score_image(
    img: &GrayImage,
    detector: Detector,
    mode: Mode,
    cache: &ScorerCache,
) -> AppResult<(f64, Vec<ScalePartial>)> {
    let sq = center_crop_square(img)?;
    match detector {
        Detector::Sobel => Ok((sobel_score(&sq)?, Vec::new())),
        Detector::Pyramid => {
            let s = cache.get(sq.width())?.score(&sq, mode.score_mode())?;
            let parts = s
                .per_scale
                .iter()
                .enumerate()
                .map(|(i, p)| ScalePartial {
                    scale: i,
                    e_h: F6::new(p.e_h),
                    e_v: F6::new(p.e_v),
                    partial: F6::new(p.partial),
                })
                .collect();
            Ok((s.d, parts))
        }
    }
}

fn score_path(p: &Path, detector: Detector, mode: Mode, cache: &ScorerCache) -> AppResult<ScoreRecord> {
    let img = load_gray(p)?;
    let (d, per_scale) =
        score_image(&img, detector, mode, cache).map_err(|e| AppError::data(format!("{}: {e}", p.display())))?;
    Ok(ScoreRecord {
        path: path_label(p),
        d: F6::new(d),
        detector: detector.name().into(),
        mode: (detector == Detector::Pyramid).then(|| mode.name().into()),
        per_scale,
    })
}

pub fn score(ctx: &Ctx, paths: &[PathBuf], detector: Detector, mode: Mode) -> AppResult<()> {
    let paths = expand_inputs(paths, false)?;
    let cache = ScorerCache::default();
    let records = par_map(&paths, |p| score_path(p, detector, mode, &cache))
        .into_iter()
        .collect::<AppResult<Vec<_>>>()?;
    write_report(&ScoreTable(records), ctx.global.format, ctx.out())
}

/// Survey settings, optionally read from a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurveyConfig {
    pub detector: Detector,
    pub mode: Mode,
    pub bins: usize,
    pub thresholds: Vec<f64>,
    pub top_k: usize,
    pub recursive: bool,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        Self {
            detector: Detector::Pyramid,
            mode: Mode::Sum,
            bins: 40,
            thresholds: vec![0.1, 0.25, 0.5, 1.0],
            top_k: 10,
            recursive: false,
        }
    }
}

impl SurveyConfig {
    pub fn resolve(
        file: Option<&Path>,
        detector: Option<Detector>,
        mode: Option<Mode>,
        bins: Option<usize>,
        top_k: Option<usize>,
        recursive: bool,
    ) -> AppResult<Self> {
        let mut cfg = match file {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| AppError::io(p, e))?;
                serde_json::from_str(&text).map_err(|e| AppError::usage(format!("{}: {e}", p.display())))?
            }
            None => SurveyConfig::default(),
        };
        cfg.detector = detector.unwrap_or(cfg.detector);
        cfg.mode = mode.unwrap_or(cfg.mode);
        cfg.bins = bins.unwrap_or(cfg.bins);
        cfg.top_k = top_k.unwrap_or(cfg.top_k);
        cfg.recursive |= recursive;
        if cfg.bins == 0 {
            return Err(AppError::usage("bins must be at least 1"));
        }
        if cfg.thresholds.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(AppError::usage("thresholds must be finite and non-negative"));
        }
        Ok(cfg)
    }
}

impl Serialize for Detector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Detector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "pyramid" => Ok(Detector::Pyramid),
            "sobel" => Ok(Detector::Sobel),
            other => Err(serde::de::Error::custom(format!("unknown detector `{other}`"))),
        }
    }
}

impl Serialize for Mode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Mode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "sum" => Ok(Mode::Sum),
            "mean" => Ok(Mode::Mean),
            other => Err(serde::de::Error::custom(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` edges over [-2, 2]. Scores outside fall into the end bins.
    pub edges: Vec<F6>,
    pub counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageScore {
    pub path: String,
    pub d: F6,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremes {
    /// Most negative scores first (horizontal structure).
    pub negative: Vec<ImageScore>,
    /// Most positive scores first (vertical structure).
    pub positive: Vec<ImageScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileError {
    pub path: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub detector: String,
    pub mode: Option<String>,
    pub n_images: usize,
    pub n_errors: usize,
    pub histogram: Histogram,
    /// Fraction of images with `|d|` above each threshold.
    pub fraction_abs_gt: BTreeMap<String, F6>,
    pub extremes: Extremes,
    pub images: Vec<ImageScore>,
    pub errors: Vec<FileError>,
}

impl Tabular for SurveyReport {
    fn header(&self) -> Vec<String> {
        vec!["path".into(), "d".into()]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.images
            .iter()
            .map(|s| vec![s.path.clone(), s.d.to_string()])
            .collect()
    }
}

fn threshold_key(t: f64) -> String {
    format!("{t}")
}

/// Aggregates per-file results (in the given order) into a report.
pub fn summarize(results: Vec<(String, AppResult<f64>)>, cfg: &SurveyConfig) -> SurveyReport {
    let mut images = Vec::new();
    let mut errors = Vec::new();
    for (path, r) in results {
        match r {
            Ok(d) => images.push(ImageScore { path, d: F6::new(d) }),
            Err(e) => errors.push(FileError {
                path,
                error: e.to_string(),
            }),
        }
    }
    let (lo, hi) = (-2.0, 2.0);
    let width = (hi - lo) / cfg.bins as f64;
    let mut counts = vec![0u64; cfg.bins];
    for s in &images {
        let k = ((s.d.get() - lo) / width).floor();
        counts[(k.max(0.0) as usize).min(cfg.bins - 1)] += 1;
    }
    let edges = (0..=cfg.bins).map(|i| lo + i as f64 * width).collect::<Vec<_>>();
    let n = images.len();
    let fraction_abs_gt = cfg
        .thresholds
        .iter()
        .map(|&t| {
            let c = images.iter().filter(|s| s.d.get().abs() > t).count();
            (
                threshold_key(t),
                F6::new(if n == 0 { 0.0 } else { c as f64 / n as f64 }),
            )
        })
        .collect();
    let ranked = |sign: f64| {
        let mut v: Vec<ImageScore> = images.iter().filter(|s| s.d.get() * sign > 0.0).cloned().collect();
        v.sort_by(|a, b| {
            (b.d.get() * sign)
                .total_cmp(&(a.d.get() * sign))
                .then_with(|| a.path.cmp(&b.path))
        });
        v.truncate(cfg.top_k);
        v
    };
    SurveyReport {
        detector: cfg.detector.name().into(),
        mode: (cfg.detector == Detector::Pyramid).then(|| cfg.mode.name().into()),
        n_images: n,
        n_errors: errors.len(),
        histogram: Histogram {
            edges: f6s(&edges),
            counts,
        },
        fraction_abs_gt,
        extremes: Extremes {
            negative: ranked(-1.0),
            positive: ranked(1.0),
        },
        images,
        errors,
    }
}

/// Scores every image under `dir`. Unreadable or unsuitable files are listed
/// in the report instead of aborting it.
pub fn run_survey(dir: &Path, cfg: &SurveyConfig) -> AppResult<SurveyReport> {
    let paths = list_images(dir, cfg.recursive)?;
    if paths.is_empty() {
        return Err(AppError::data(format!("{}: no images found", dir.display())));
    }
    let cache = ScorerCache::default();
    let results = par_map(&paths, |p| {
        let d = load_gray(p).and_then(|img| score_image(&img, cfg.detector, cfg.mode, &cache).map(|(d, _)| d));
        if let Err(e) = &d {
            log::info!("skipping {}: {e}", p.display());
        }
        (path_label(p), d)
    });
    Ok(summarize(results, cfg))
}

pub fn survey(ctx: &Ctx, dir: &Path, cfg: &SurveyConfig) -> AppResult<()> {
    let report = run_survey(dir, cfg)?;
    write_report(&report, ctx.global.format, ctx.out())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpamRecord {
    pub path: String,
    pub layout: String,
    pub values: Vec<F6>,
}

struct SpamTable(Vec<SpamRecord>);

impl Serialize for SpamTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl Tabular for SpamTable {
    fn header(&self) -> Vec<String> {
        let n = self.0.first().map_or(0, |r| r.values.len());
        let mut h = vec!["path".to_string()];
        h.extend((0..n).map(|i| format!("f{i}")));
        h
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.0
            .iter()
            .map(|r| {
                std::iter::once(r.path.clone())
                    .chain(r.values.iter().map(F6::to_string))
                    .collect()
            })
            .collect()
    }
}

pub fn spam(ctx: &Ctx, paths: &[PathBuf], layout: LayoutArg) -> AppResult<()> {
    let layout = match layout {
        LayoutArg::Sym => SpamLayout::Symmetrized,
        LayoutArg::Dir => SpamLayout::Directional,
    };
    let paths = expand_inputs(paths, false)?;
    let records = par_map(&paths, |p| -> AppResult<SpamRecord> {
        let img = load_gray(p)?;
        let f = spam_features(&img, layout).map_err(|e| AppError::data(format!("{}: {e}", p.display())))?;
        Ok(SpamRecord {
            path: path_label(p),
            layout: layout.name().into(),
            values: f6s(&f.values),
        })
    })
    .into_iter()
    .collect::<AppResult<Vec<_>>>()?;
    write_report(&SpamTable(records), ctx.global.format, ctx.out())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressRecord {
    pub path: String,
    pub stress: F6,
    pub pyramid_score: F6,
}

struct StressTable(Vec<StressRecord>);

impl Serialize for StressTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl Tabular for StressTable {
    fn header(&self) -> Vec<String> {
        ["path", "stress", "pyramid_score"].map(String::from).into()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.0
            .iter()
            .map(|r| vec![r.path.clone(), r.stress.to_string(), r.pyramid_score.to_string()])
            .collect()
    }
}

pub fn stress(ctx: &Ctx, paths: &[PathBuf]) -> AppResult<()> {
    let paths = expand_inputs(paths, false)?;
    let cache = ScorerCache::default();
    let records = par_map(&paths, |p| -> AppResult<StressRecord> {
        let img = load_gray(p)?;
        let label = |e: AppError| AppError::data(format!("{}: {e}", p.display()));
        let s = spam_stress(&img).map_err(|e| label(e.into()))?;
        let (d, _) = score_image(&img, Detector::Pyramid, Mode::Sum, &cache).map_err(label)?;
        Ok(StressRecord {
            path: path_label(p),
            stress: F6::new(s),
            pyramid_score: F6::new(d),
        })
    })
    .into_iter()
    .collect::<AppResult<Vec<_>>>()?;
    write_report(&StressTable(records), ctx.global.format, ctx.out())
}

//! Quantization-table inspection and the JPEG metadata survey.

use std::fs;
use std::path::{Path, PathBuf};

use dirscope_core::jpeg::{
    base_for, blend_qt_with, estimate_quality, parse_jpeg, qt_from_quality, qt_symmetry, symmetrize_qt, Channel,
    JpegSummary, QuantTable,
};
use serde::{Deserialize, Serialize};

use super::{par_map, path_label, Ctx};
use crate::error::{AppError, AppResult};
use crate::io::expand_inputs;
use crate::report::{write_report, Tabular};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRecord {
    /// File path, or the synthesis recipe.
    pub source: String,
    pub table_id: Option<u8>,
    pub channel: String,
    pub symmetrized: bool,
    /// Natural order; row = vertical frequency.
    pub values: [[u8; 8]; 8],
    pub symmetric: bool,
    /// Sum of `|q[i][j] - q[j][i]|` over `i < j`.
    pub asymmetry: u32,
    pub est_quality: u32,
    pub est_distance: u32,
    pub subsampling: Option<String>,
    pub exif_orientation: Option<u8>,
}

fn channel_name(c: Channel) -> &'static str {
    match c {
        Channel::Luma => "luma",
        Channel::Chroma => "chroma",
        Channel::Unknown => "unknown",
    }
}

fn record(
    source: String,
    id: Option<u8>,
    t: &QuantTable,
    summary: Option<&JpegSummary>,
    symmetrized: bool,
) -> TableRecord {
    let sym = qt_symmetry(t);
    let est = estimate_quality(t, &base_for(t.channel));
    TableRecord {
        source,
        table_id: id,
        channel: channel_name(t.channel).into(),
        symmetrized,
        values: *t.values(),
        symmetric: sym.is_symmetric,
        asymmetry: sym.magnitude,
        est_quality: est.qf,
        est_distance: est.distance,
        subsampling: summary.map(|s| s.subsampling_class.label().into()),
        exif_orientation: summary.and_then(|s| s.exif_orientation.map(|o| o.code())),
    }
}

struct QtTable(Vec<TableRecord>);

impl Serialize for QtTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl Tabular for QtTable {
    fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = [
            "source",
            "table_id",
            "channel",
            "symmetrized",
            "symmetric",
            "asymmetry",
            "est_quality",
            "est_distance",
            "subsampling",
            "exif_orientation",
        ]
        .map(String::from)
        .into();
        h.extend((0..64).map(|k| format!("q{}{}", k / 8, k % 8)));
        h
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let opt = |o: Option<String>| o.unwrap_or_default();
        self.0
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.source.clone(),
                    opt(r.table_id.map(|v| v.to_string())),
                    r.channel.clone(),
                    r.symmetrized.to_string(),
                    r.symmetric.to_string(),
                    r.asymmetry.to_string(),
                    r.est_quality.to_string(),
                    r.est_distance.to_string(),
                    opt(r.subsampling.clone()),
                    opt(r.exif_orientation.map(|v| v.to_string())),
                ];
                row.extend(r.values.iter().flatten().map(|v| v.to_string()));
                row
            })
            .collect()
    }
}

fn read_summary(p: &Path) -> AppResult<JpegSummary> {
    let bytes = fs::read(p).map_err(|e| AppError::io(p, e))?;
    parse_jpeg(&bytes).map_err(|e| AppError::data(format!("{}: {e}", p.display())))
}

pub fn qt(
    ctx: &Ctx,
    paths: &[PathBuf],
    quality: Option<u32>,
    chroma: bool,
    blend: Option<&[u32]>,
    symmetrize: bool,
) -> AppResult<()> {
    if paths.is_empty() && quality.is_none() && blend.is_none() {
        return Err(AppError::usage("qt needs JPEG paths, --quality or --blend"));
    }
    let channel = if chroma { Channel::Chroma } else { Channel::Luma };
    let base = base_for(channel);
    let mut tables: Vec<(String, Option<u8>, QuantTable, Option<JpegSummary>)> = Vec::new();
    if let Some(q) = quality {
        let t = qt_from_quality(q, &base).map_err(|e| AppError::usage(e.to_string()))?;
        tables.push((format!("quality:{q}:{}", channel_name(channel)), None, t, None));
    }
    if let Some(b) = blend {
        let &[up, lo] = b else {
            return Err(AppError::usage(format!(
                "--blend takes UPPER,LOWER, got {} values",
                b.len()
            )));
        };
        let t = blend_qt_with(&base, up, lo).map_err(|e| AppError::usage(e.to_string()))?;
        tables.push((format!("blend:{up},{lo}:{}", channel_name(channel)), None, t, None));
    }
    let files = expand_inputs(paths, false)?;
    for (p, summary) in files.iter().zip(par_map(&files, |p| read_summary(p))) {
        let summary = summary?;
        for (id, t) in &summary.quant_tables {
            tables.push((path_label(p), Some(*id), t.clone(), Some(summary.clone())));
        }
    }
    let mut records = Vec::new();
    for (source, id, t, summary) in &tables {
        records.push(record(source.clone(), *id, t, summary.as_ref(), false));
        if symmetrize {
            records.push(record(source.clone(), *id, &symmetrize_qt(t), summary.as_ref(), true));
        }
    }
    write_report(&QtTable(records), ctx.global.format, ctx.out())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JpegSurveyRow {
    pub path: String,
    pub subsampling_class: String,
    pub luma_symmetric: Option<bool>,
    pub chroma_symmetric: Option<bool>,
    pub est_quality: Option<u32>,
    pub exif_orientation: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JpegSurveyReport {
    pub n_files: usize,
    pub n_errors: usize,
    pub rows: Vec<JpegSurveyRow>,
    pub errors: Vec<super::detect::FileError>,
}

impl Tabular for JpegSurveyReport {
    fn header(&self) -> Vec<String> {
        [
            "path",
            "subsampling_class",
            "luma_symmetric",
            "chroma_symmetric",
            "est_quality",
            "exif_orientation",
        ]
        .map(String::from)
        .into()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        fn opt<T: ToString>(o: Option<T>) -> String {
            o.map(|v| v.to_string()).unwrap_or_default()
        }
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.path.clone(),
                    r.subsampling_class.clone(),
                    opt(r.luma_symmetric),
                    opt(r.chroma_symmetric),
                    opt(r.est_quality),
                    opt(r.exif_orientation),
                ]
            })
            .collect()
    }
}

pub fn survey_row(path: String, s: &JpegSummary) -> JpegSurveyRow {
    let luma = s.luma_table();
    JpegSurveyRow {
        path,
        subsampling_class: s.subsampling_class.label().into(),
        luma_symmetric: luma.map(|t| qt_symmetry(t).is_symmetric),
        chroma_symmetric: s.chroma_table().map(|t| qt_symmetry(t).is_symmetric),
        est_quality: luma.map(|t| estimate_quality(t, &QuantTable::standard_luma()).qf),
        exif_orientation: s.exif_orientation.map(|o| o.code()),
    }
}

pub fn survey(ctx: &Ctx, dir: &Path, recursive: bool) -> AppResult<()> {
    let files: Vec<PathBuf> = crate::io::list_images(dir, recursive)?
        .into_iter()
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "jpg" | "jpeg"))
        })
        .collect();
    if files.is_empty() {
        return Err(AppError::data(format!("{}: no JPEG files found", dir.display())));
    }
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (p, r) in files.iter().zip(par_map(&files, |p| read_summary(p))) {
        match r {
            Ok(s) => rows.push(survey_row(path_label(p), &s)),
            Err(e) => errors.push(super::detect::FileError {
                path: path_label(p),
                error: e.to_string(),
            }),
        }
    }
    let report = JpegSurveyReport {
        n_files: files.len(),
        n_errors: errors.len(),
        rows,
        errors,
    };
    write_report(&report, ctx.global.format, ctx.out())
}

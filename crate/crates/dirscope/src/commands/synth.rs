//! Synthetic corpus writer.

use std::fs;

use dirscope_core::synth::{corpus_seed, gen_symmetric, SynthParams, Transform};
use serde::{Deserialize, Serialize};

use super::{par_map, Ctx};
use crate::error::{AppError, AppResult};
use crate::io::save_pgm;
use crate::report::{to_json, write_report, Tabular, F6};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthEntry {
    pub file: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthManifest {
    pub count: usize,
    pub size: usize,
    pub condition: String,
    pub components: usize,
    pub amplitude_range: [F6; 2],
    pub noise_sigma: F6,
    pub base_seed: u64,
    pub images: Vec<SynthEntry>,
}

impl Tabular for SynthManifest {
    fn header(&self) -> Vec<String> {
        ["file", "seed", "condition"].map(String::from).into()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.images
            .iter()
            .map(|e| vec![e.file.clone(), e.seed.to_string(), self.condition.clone()])
            .collect()
    }
}

/// Writes `synth_NNNNN.pgm` files and `manifest.json` into the `--out`
/// directory, then reports the manifest on stdout.
pub fn synth(
    ctx: &Ctx,
    count: usize,
    size: usize,
    condition: &str,
    components: usize,
    amplitude: (f64, f64),
    noise: f64,
) -> AppResult<()> {
    let dir = ctx
        .out()
        .ok_or_else(|| AppError::usage("synth needs --out <DIR> for the generated images"))?;
    let transform: Transform = condition
        .parse()
        .map_err(|e| AppError::usage(format!("--condition: {e}")))?;
    let params = SynthParams {
        size,
        n_components: components,
        amplitude_range: amplitude,
        noise_sigma: noise,
        seed: ctx.global.seed,
    };
    params.validate().map_err(|e| AppError::usage(e.to_string()))?;
    // reject bad parameters before any file is written
    transform
        .apply(&dirscope_core::GrayImage::filled(32, 32, 0.0))
        .map_err(|e| AppError::usage(e.to_string()))?;
    fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;

    let indices: Vec<usize> = (0..count).collect();
    let images = par_map(&indices, |&i| -> AppResult<SynthEntry> {
        let seed = corpus_seed(ctx.global.seed, i as u64);
        let img = transform.apply(&gen_symmetric(&params.with_seed(seed))?)?;
        let file = format!("synth_{i:05}.pgm");
        save_pgm(&dir.join(&file), &img)?;
        Ok(SynthEntry { file, seed })
    })
    .into_iter()
    .collect::<AppResult<Vec<_>>>()?;

    let manifest = SynthManifest {
        count,
        size,
        condition: transform.to_string(),
        components,
        amplitude_range: [F6::new(amplitude.0), F6::new(amplitude.1)],
        noise_sigma: F6::new(noise),
        base_seed: ctx.global.seed,
        images,
    };
    let path = dir.join("manifest.json");
    fs::write(&path, to_json(&manifest)?).map_err(|e| AppError::io(&path, e))?;
    write_report(&manifest, ctx.global.format, None)
}

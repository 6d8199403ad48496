//! Argument grammar and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirscope_core::directionality::ScoreMode;

use crate::commands;
use crate::error::{AppError, AppResult};
use crate::report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "dirscope",
    version,
    about = "Measure image directionality and the pipeline stages that cause it"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Worker threads. Results do not depend on this value.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
    /// Base seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report destination (stdout if absent); output directory for `synth`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Detector {
    Pyramid,
    Sobel,
}

impl Detector {
    pub fn name(self) -> &'static str {
        match self {
            Detector::Pyramid => "pyramid",
            Detector::Sobel => "sobel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sum,
    Mean,
}

impl Mode {
    pub fn score_mode(self) -> ScoreMode {
        match self {
            Mode::Sum => ScoreMode::Sum,
            Mode::Mean => ScoreMode::Mean,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Sum => "sum",
            Mode::Mean => "mean",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurveyKind {
    /// Histogram of directionality scores.
    Directionality,
    /// JPEG metadata table: subsampling, table symmetry, quality, orientation.
    Jpeg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Directionality score of each image (center square crop).
    Score {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Detector::Pyramid)]
        detector: Detector,
        #[arg(long, value_enum, default_value_t = Mode::Sum)]
        mode: Mode,
    },
    /// Survey a directory: score histogram, or JPEG metadata with `--kind jpeg`.
    Survey {
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = SurveyKind::Directionality)]
        kind: SurveyKind,
        #[arg(long, value_enum)]
        detector: Option<Detector>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Histogram bins over [-2, 2].
        #[arg(long)]
        bins: Option<usize>,
        /// Most directional images listed per sign.
        #[arg(long)]
        top_k: Option<usize>,
        #[arg(long)]
        recursive: bool,
        /// JSON file with survey settings; explicit flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Power spectrum of the mean noise residual, written as a PNG heatmap.
    Spectrum {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Heatmap destination.
        #[arg(long)]
        png: Option<PathBuf>,
        /// Denoiser noise level.
        #[arg(long, default_value_t = dirscope_core::spectral::DEFAULT_SIGMA)]
        sigma: f64,
        /// Display `log(1 + P)` instead of `P`.
        #[arg(long)]
        log: bool,
        #[arg(long)]
        recursive: bool,
    },
    /// Quantization tables of JPEG files or synthesized from a quality factor.
    Qt {
        paths: Vec<PathBuf>,
        /// Synthesize the table for this quality factor.
        #[arg(long)]
        quality: Option<u32>,
        /// Use the chrominance base table for `--quality` and `--blend`.
        #[arg(long)]
        chroma: bool,
        /// Blend two quality factors: `UPPER,LOWER`.
        #[arg(long, value_delimiter = ',')]
        blend: Option<Vec<u32>>,
        /// Also report the symmetrized version of every table.
        #[arg(long)]
        symmetrize: bool,
    },
    /// Mean rounding error of a library DCT path over random symmetric blocks.
    DctArtifacts {
        #[arg(long, value_enum)]
        method: DctMethodArg,
        #[arg(long, default_value_t = 100_000)]
        blocks: usize,
        /// Heatmap prefix: writes `<PREFIX>_dct.png` and `<PREFIX>_spatial.png`.
        #[arg(long)]
        png: Option<PathBuf>,
    },
    /// Legacy integer chroma downsampling error profile and spectrum.
    ChromaWrinkle {
        #[arg(long, value_enum)]
        mode: ChromaModeArg,
        /// Images whose Cb channel forms the corpus; random channels if absent.
        paths: Vec<PathBuf>,
        /// Random channels to draw when no images are given.
        #[arg(long, default_value_t = 64)]
        count: usize,
        /// Side of the random channels.
        #[arg(long, default_value_t = 64)]
        size: usize,
        /// Spectrum heatmap destination.
        #[arg(long)]
        png: Option<PathBuf>,
    },
    /// SPAM features, one row per image.
    Spam {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = LayoutArg::Sym)]
        layout: LayoutArg,
    },
    /// SPAM stress and pyramid score per image.
    Stress {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Linear pattern of a frame directory.
    LinearPattern {
        dir: PathBuf,
        /// Contrast-stretched pattern heatmap destination.
        #[arg(long)]
        png: Option<PathBuf>,
        /// Denoiser noise level for the frame residuals.
        #[arg(long, default_value_t = dirscope_core::spectral::DEFAULT_SIGMA)]
        sigma: f64,
        #[arg(long)]
        recursive: bool,
    },
    /// Per-column (and per-row) means of the frame average.
    ColumnProfile {
        dir: PathBuf,
        #[arg(long)]
        recursive: bool,
    },
    /// Write a synthetic transpose-symmetric corpus as PGM plus a manifest.
    Synth {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 512)]
        size: usize,
        /// `none`, `smooth-h:5`, `downscale-v:0.25`, ...
        #[arg(long, default_value = "none")]
        condition: String,
        #[arg(long, default_value_t = 4)]
        components: usize,
        #[arg(long, default_value_t = 5.0)]
        amp_lo: f64,
        #[arg(long, default_value_t = 40.0)]
        amp_hi: f64,
        #[arg(long, default_value_t = 5.0)]
        noise: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DctMethodArg {
    Islow,
    Ifast,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChromaModeArg {
    #[value(name = "422")]
    S422,
    #[value(name = "420")]
    S420,
    #[value(name = "440")]
    S440,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    Sym,
    Dir,
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("DIRSCOPE_LOG", "error");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{}", e.render());
                    1
                }
            };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> AppResult<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.jobs as usize)
        .build()
        .map_err(|e| AppError::data(format!("thread pool: {e}")))?;
    let ctx = commands::Ctx { global: cli.global };
    pool.install(|| commands::dispatch(&ctx, cli.command))
}

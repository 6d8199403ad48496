//! Measurement of image directionality and of the acquisition-pipeline stages
//! that introduce it.
//!
//! The crate is `no_std` (with `alloc`) and performs no IO. File formats,
//! batch drivers and the command-line front end live in the `dirscope`
//! companion crate.
//!
//! Modules:
//! - [`image`]: sample containers and exact orientation transforms.
//! - [`synth`]: symmetric synthetic images and controlled anisotropic filters.
//! - [`directionality`]: steerable-pyramid and Sobel directionality scores.
//! - [`spectral`]: noise residuals and power spectra.
//! - [`jpeg`]: marker-level JPEG metadata parsing and quantization-table algebra.
//! - [`dct`]: the three forward DCT paths of the reference JPEG library,
//!   rounding-artifact experiments and legacy chroma downsampling.
//! - [`spam`]: SPAM co-occurrence features and the symmetrization stress.
//! - [`sensor`]: column profiles and linear-pattern extraction.
#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod border;
pub mod dct;
pub mod directionality;
mod error;
pub mod fft;
pub mod image;
pub mod jpeg;
pub mod sensor;
pub mod spam;
pub mod spectral;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use image::{Axis, GrayImage, OrientOp, Orientation8, RgbImage};

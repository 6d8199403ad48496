//! JPEG metadata parsing and quantization-table algebra.
//!
//! Only the marker layer is read: quantization tables, frame header, the
//! Exif orientation tag. Entropy-coded data is never touched.

mod parse;
mod qt;

use alloc::vec::Vec;

pub use parse::parse_jpeg;
pub use qt::{
    base_for, blend_qt, blend_qt_with, default_subsampling_policy, estimate_quality, qt_from_quality, qt_symmetry,
    symmetrize_qt, QtSymmetry, QualityEstimate, NATURAL_TO_ZIGZAG, STD_CHROMA, STD_LUMA, ZIGZAG_TO_NATURAL,
};

use crate::image::Orientation8;

/// Parse and table errors. Offsets are byte positions in the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JpegError {
    #[error("missing SOI marker at offset 0")]
    MissingSoi,
    #[error("truncated data at offset {offset}: need {needed} more bytes")]
    Truncated { offset: usize, needed: usize },
    #[error("bad segment length {length} at offset {offset}")]
    BadSegmentLength { offset: usize, length: usize },
    #[error("expected a marker at offset {offset}, found byte 0x{byte:02x}")]
    BadMarker { offset: usize, byte: u8 },
    #[error("malformed DQT segment at offset {offset}: {reason}")]
    MalformedDqt { offset: usize, reason: &'static str },
    #[error("quantization value {value} at offset {offset} outside 1..=255")]
    TableValueOutOfRange { offset: usize, value: u16 },
    #[error("malformed frame header at offset {offset}: {reason}")]
    MalformedFrame { offset: usize, reason: &'static str },
    #[error("unsupported frame type 0x{marker:02x} at offset {offset}")]
    UnsupportedFrame { offset: usize, marker: u8 },
    #[error("no frame header before offset {offset}")]
    MissingFrame { offset: usize },
    #[error("quality factor {0} outside 1..=100")]
    QualityOutOfRange(u32),
    #[error("quantization table entry ({row}, {col}) is 0")]
    ZeroEntry { row: usize, col: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Luma,
    Chroma,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableSource {
    Parsed,
    Standard,
    Synthesized,
}

/// 8x8 quantization divisors in natural (row-major) order. Row index is the
/// vertical frequency, column index the horizontal frequency.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantTable {
    q: [[u8; 8]; 8],
    pub channel: Channel,
    pub source: TableSource,
}

impl QuantTable {
    pub fn new(q: [[u8; 8]; 8], channel: Channel, source: TableSource) -> Result<Self, JpegError> {
        for (row, r) in q.iter().enumerate() {
            if let Some(col) = r.iter().position(|&v| v == 0) {
                return Err(JpegError::ZeroEntry { row, col });
            }
        }
        Ok(Self { q, channel, source })
    }

    pub fn standard_luma() -> Self {
        Self {
            q: STD_LUMA,
            channel: Channel::Luma,
            source: TableSource::Standard,
        }
    }

    pub fn standard_chroma() -> Self {
        Self {
            q: STD_CHROMA,
            channel: Channel::Chroma,
            source: TableSource::Standard,
        }
    }

    /// Entry at row `i` (vertical frequency), column `j` (horizontal frequency).
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.q[i][j]
    }

    pub fn values(&self) -> &[[u8; 8]; 8] {
        &self.q
    }

    pub fn transpose(&self) -> Self {
        let mut q = [[0u8; 8]; 8];
        for (i, row) in q.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.q[j][i];
            }
        }
        Self { q, ..self.clone() }
    }

    /// Values in zig-zag order, as stored in a DQT segment.
    pub fn to_zigzag(&self) -> [u8; 64] {
        let mut out = [0u8; 64];
        for (k, o) in out.iter_mut().enumerate() {
            let n = ZIGZAG_TO_NATURAL[k];
            *o = self.q[n / 8][n % 8];
        }
        out
    }

    /// Whether the table equals one of the two standard tables.
    pub fn is_standard(&self) -> bool {
        self.q == STD_LUMA || self.q == STD_CHROMA
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Component {
    pub id: u8,
    pub h: u8,
    pub v: u8,
    /// Quantization table selector.
    pub tq: u8,
}

/// Per-component sampling factors from the frame header.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SamplingFactors {
    pub components: Vec<Component>,
}

impl SamplingFactors {
    /// Factors `(h, v)` for each component, in frame order.
    pub fn from_factors(factors: &[(u8, u8)]) -> Self {
        Self {
            components: factors
                .iter()
                .enumerate()
                .map(|(i, &(h, v))| Component {
                    id: i as u8 + 1,
                    h,
                    v,
                    tq: (i > 0) as u8,
                })
                .collect(),
        }
    }
}

/// Chroma subsampling pattern relative to luma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubsamplingClass {
    S444,
    S422,
    S420,
    S440,
    Other,
}

impl SubsamplingClass {
    pub fn label(self) -> &'static str {
        match self {
            SubsamplingClass::S444 => "4:4:4",
            SubsamplingClass::S422 => "4:2:2",
            SubsamplingClass::S420 => "4:2:0",
            SubsamplingClass::S440 => "4:4:0",
            SubsamplingClass::Other => "other",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Some(match s {
            "4:4:4" | "444" => SubsamplingClass::S444,
            "4:2:2" | "422" => SubsamplingClass::S422,
            "4:2:0" | "420" => SubsamplingClass::S420,
            "4:4:0" | "440" => SubsamplingClass::S440,
            "other" => SubsamplingClass::Other,
            _ => return None,
        })
    }
}

impl core::fmt::Display for SubsamplingClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

/// Classifies the chroma/luma sampling ratios of a three-component frame.
/// Both chroma components must share their factors.
pub fn classify_subsampling(s: &SamplingFactors) -> SubsamplingClass {
    let [y, cb, cr] = match s.components.as_slice() {
        [a, b, c] => [a, b, c],
        _ => return SubsamplingClass::Other,
    };
    if (cb.h, cb.v) != (cr.h, cr.v) {
        return SubsamplingClass::Other;
    }
    let half_h = 2 * cb.h == y.h;
    let full_h = cb.h == y.h;
    let half_v = 2 * cb.v == y.v;
    let full_v = cb.v == y.v;
    match (full_h, half_h, full_v, half_v) {
        (true, _, true, _) => SubsamplingClass::S444,
        (_, true, true, _) => SubsamplingClass::S422,
        (true, _, _, true) => SubsamplingClass::S440,
        (_, true, _, true) => SubsamplingClass::S420,
        _ => SubsamplingClass::Other,
    }
}

/// Marker-level summary of a JPEG file.
#[derive(Debug, Clone, PartialEq)]
pub struct JpegSummary {
    pub width: u16,
    pub height: u16,
    /// Tables in effect at the first scan, by table id.
    pub quant_tables: Vec<(u8, QuantTable)>,
    pub sampling: SamplingFactors,
    pub subsampling_class: SubsamplingClass,
    pub exif_orientation: Option<Orientation8>,
    pub progressive: bool,
}

impl JpegSummary {
    fn table_for(&self, component: usize) -> Option<&QuantTable> {
        let tq = self.sampling.components.get(component)?.tq;
        self.quant_tables.iter().find(|(id, _)| *id == tq).map(|(_, t)| t)
    }

    /// Table used by the first component.
    pub fn luma_table(&self) -> Option<&QuantTable> {
        self.table_for(0)
    }

    /// Table used by the second component, if any.
    pub fn chroma_table(&self) -> Option<&QuantTable> {
        self.table_for(1)
    }
}

use super::{Channel, JpegError, QuantTable, SubsamplingClass, TableSource};

/// Example luminance table of the JPEG standard (Annex K.1).
pub const STD_LUMA: [[u8; 8]; 8] = [
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
];

/// Example chrominance table of the JPEG standard (Annex K.1).
pub const STD_CHROMA: [[u8; 8]; 8] = [
    [17, 18, 24, 47, 99, 99, 99, 99],
    [18, 21, 26, 66, 99, 99, 99, 99],
    [24, 26, 56, 99, 99, 99, 99, 99],
    [47, 66, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
];

/// Natural (row-major) index of the `k`-th coefficient in zig-zag order.
pub const ZIGZAG_TO_NATURAL: [usize; 64] = [
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5, 12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6, 7, 14, 21,
    28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51, 58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54,
    47, 55, 62, 63,
];

/// Zig-zag position of natural index `n`.
pub const NATURAL_TO_ZIGZAG: [usize; 64] = {
    let mut inv = [0usize; 64];
    let mut k = 0;
    while k < 64 {
        inv[ZIGZAG_TO_NATURAL[k]] = k;
        k += 1;
    }
    inv
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QtSymmetry {
    pub is_symmetric: bool,
    /// `sum_{i<j} |q[i][j] - q[j][i]|`
    pub magnitude: u32,
}

pub fn qt_symmetry(t: &QuantTable) -> QtSymmetry {
    let mut magnitude = 0u32;
    for i in 0..8 {
        for j in i + 1..8 {
            magnitude += t.get(i, j).abs_diff(t.get(j, i)) as u32;
        }
    }
    QtSymmetry {
        is_symmetric: magnitude == 0,
        magnitude,
    }
}

fn check_quality(qf: u32) -> Result<(), JpegError> {
    if (1..=100).contains(&qf) {
        Ok(())
    } else {
        Err(JpegError::QualityOutOfRange(qf))
    }
}

/// Scales `base` to quality factor `qf` with the reference library's rule:
/// `scale = 5000 / qf` below 50, `200 - 2 qf` otherwise, then
/// `clamp((q * scale + 50) / 100, 1, 255)` in integer arithmetic.
pub fn qt_from_quality(qf: u32, base: &QuantTable) -> Result<QuantTable, JpegError> {
    check_quality(qf)?;
    let scale = if qf < 50 { 5000 / qf } else { 200 - 2 * qf };
    let mut q = [[0u8; 8]; 8];
    for (i, row) in q.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let s = (base.get(i, j) as u32 * scale + 50) / 100;
            *v = s.clamp(1, 255) as u8;
        }
    }
    Ok(QuantTable {
        q,
        channel: base.channel,
        source: TableSource::Synthesized,
    })
}

fn avg_half_up(a: u8, b: u8) -> u8 {
    (a as u16 + b as u16).div_ceil(2) as u8
}

/// Upper triangle (`i < j`, horizontal-leaning frequencies) from
/// `qf_upper`, lower triangle from `qf_lower`, and the round-half-up mean of
/// both on the diagonal. Uses the standard luminance table as base.
pub fn blend_qt(qf_upper: u32, qf_lower: u32) -> Result<QuantTable, JpegError> {
    blend_qt_with(&QuantTable::standard_luma(), qf_upper, qf_lower)
}

pub fn blend_qt_with(base: &QuantTable, qf_upper: u32, qf_lower: u32) -> Result<QuantTable, JpegError> {
    let up = qt_from_quality(qf_upper, base)?;
    let lo = qt_from_quality(qf_lower, base)?;
    let mut q = [[0u8; 8]; 8];
    for (i, row) in q.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = match i.cmp(&j) {
                core::cmp::Ordering::Less => up.get(i, j),
                core::cmp::Ordering::Greater => lo.get(i, j),
                core::cmp::Ordering::Equal => avg_half_up(up.get(i, j), lo.get(i, j)),
            };
        }
    }
    Ok(QuantTable {
        q,
        channel: base.channel,
        source: TableSource::Synthesized,
    })
}

/// Round-half-up mean of each entry and its transpose.
pub fn symmetrize_qt(t: &QuantTable) -> QuantTable {
    let mut q = [[0u8; 8]; 8];
    for (i, row) in q.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = avg_half_up(t.get(i, j), t.get(j, i)).max(1);
        }
    }
    QuantTable {
        q,
        channel: t.channel,
        source: TableSource::Synthesized,
    }
}

/// Chroma subsampling chosen by quality: none from 90, horizontal only
/// from 80, both directions below.
pub fn default_subsampling_policy(qf: u32) -> Result<SubsamplingClass, JpegError> {
    check_quality(qf)?;
    Ok(match qf {
        90.. => SubsamplingClass::S444,
        80..=89 => SubsamplingClass::S422,
        _ => SubsamplingClass::S420,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QualityEstimate {
    pub qf: u32,
    /// L1 distance to the table synthesized at `qf`; 0 for an exact match.
    pub distance: u32,
}

/// Nearest quality factor by L1 distance to `qt_from_quality(qf, base)`;
/// ties go to the higher factor.
pub fn estimate_quality(t: &QuantTable, base: &QuantTable) -> QualityEstimate {
    let mut best = QualityEstimate {
        qf: 0,
        distance: u32::MAX,
    };
    for qf in 1..=100 {
        let cand = qt_from_quality(qf, base).expect("quality in range");
        let mut d = 0u32;
        for i in 0..8 {
            for j in 0..8 {
                d += t.get(i, j).abs_diff(cand.get(i, j)) as u32;
            }
        }
        if d <= best.distance {
            best = QualityEstimate { qf, distance: d };
        }
    }
    best
}

/// Base table for quality estimation of a table used by `channel`.
pub fn base_for(channel: Channel) -> QuantTable {
    match channel {
        Channel::Chroma => QuantTable::standard_chroma(),
        _ => QuantTable::standard_luma(),
    }
}

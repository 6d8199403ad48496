use alloc::vec::Vec;

use super::qt::ZIGZAG_TO_NATURAL;
use super::{
    classify_subsampling, Channel, Component, JpegError, JpegSummary, QuantTable, SamplingFactors, TableSource,
};
use crate::image::Orientation8;

const SOI: u8 = 0xd8;
const EOI: u8 = 0xd9;
const SOS: u8 = 0xda;
const DQT: u8 = 0xdb;
const APP1: u8 = 0xe1;
const TEM: u8 = 0x01;

struct Frame {
    width: u16,
    height: u16,
    components: Vec<Component>,
    progressive: bool,
}

fn be16(b: &[u8], at: usize) -> u16 {
    u16::from_be_bytes([b[at], b[at + 1]])
}

/// Reads the marker layer of a JPEG stream up to the first scan.
pub fn parse_jpeg(data: &[u8]) -> Result<JpegSummary, JpegError> {
    if data.len() < 2 || data[0] != 0xff || data[1] != SOI {
        return Err(JpegError::MissingSoi);
    }
    let mut tables: [Option<QuantTable>; 4] = [None, None, None, None];
    let mut frame: Option<Frame> = None;
    let mut orientation = None;
    let mut pos = 2;
    loop {
        if pos >= data.len() {
            return Err(JpegError::Truncated { offset: pos, needed: 2 });
        }
        if data[pos] != 0xff {
            return Err(JpegError::BadMarker {
                offset: pos,
                byte: data[pos],
            });
        }
        let marker_at = pos;
        // fill bytes
        while pos < data.len() && data[pos] == 0xff {
            pos += 1;
        }
        if pos >= data.len() {
            return Err(JpegError::Truncated { offset: pos, needed: 1 });
        }
        let marker = data[pos];
        pos += 1;
        match marker {
            0x00 => {
                return Err(JpegError::BadMarker {
                    offset: marker_at,
                    byte: 0,
                })
            }
            TEM | 0xd0..=0xd7 => continue,
            SOI => {
                return Err(JpegError::BadMarker {
                    offset: marker_at,
                    byte: marker,
                })
            }
            EOI => break,
            _ => {}
        }
        if pos + 2 > data.len() {
            return Err(JpegError::Truncated {
                offset: pos,
                needed: pos + 2 - data.len(),
            });
        }
        let length = be16(data, pos) as usize;
        if length < 2 {
            return Err(JpegError::BadSegmentLength { offset: pos, length });
        }
        let end = pos + length;
        if end > data.len() {
            return Err(JpegError::Truncated {
                offset: pos,
                needed: end - data.len(),
            });
        }
        let body = pos + 2;
        let payload = &data[body..end];
        match marker {
            DQT => parse_dqt(payload, body, &mut tables)?,
            0xc0..=0xc2 => {
                if frame.is_some() {
                    return Err(JpegError::MalformedFrame {
                        offset: marker_at,
                        reason: "second frame header",
                    });
                }
                frame = Some(parse_frame(payload, body, marker == 0xc2)?);
            }
            0xc3 | 0xc5..=0xc7 | 0xc9..=0xcb | 0xcd..=0xcf => {
                return Err(JpegError::UnsupportedFrame {
                    offset: marker_at,
                    marker,
                })
            }
            APP1 => {
                if orientation.is_none() {
                    orientation = exif_orientation(payload);
                }
            }
            SOS => {
                if frame.is_none() {
                    return Err(JpegError::MissingFrame { offset: marker_at });
                }
                break;
            }
            _ => {}
        }
        pos = end;
    }
    let frame = frame.ok_or(JpegError::MissingFrame { offset: pos })?;
    let sampling = SamplingFactors {
        components: frame.components,
    };
    let mut quant_tables = Vec::new();
    for (id, t) in tables.into_iter().enumerate() {
        if let Some(mut t) = t {
            let users: Vec<usize> = sampling
                .components
                .iter()
                .enumerate()
                .filter(|(_, c)| c.tq as usize == id)
                .map(|(i, _)| i)
                .collect();
            t.channel = match users.first() {
                Some(0) => Channel::Luma,
                Some(_) => Channel::Chroma,
                None => Channel::Unknown,
            };
            quant_tables.push((id as u8, t));
        }
    }
    Ok(JpegSummary {
        width: frame.width,
        height: frame.height,
        quant_tables,
        subsampling_class: classify_subsampling(&sampling),
        sampling,
        exif_orientation: orientation,
        progressive: frame.progressive,
    })
}

fn parse_dqt(p: &[u8], base: usize, tables: &mut [Option<QuantTable>; 4]) -> Result<(), JpegError> {
    if p.is_empty() {
        return Err(JpegError::MalformedDqt {
            offset: base,
            reason: "empty segment",
        });
    }
    let mut i = 0;
    while i < p.len() {
        let pq = p[i] >> 4;
        let tq = p[i] & 0x0f;
        if pq > 1 {
            return Err(JpegError::MalformedDqt {
                offset: base + i,
                reason: "precision must be 0 or 1",
            });
        }
        if tq > 3 {
            return Err(JpegError::MalformedDqt {
                offset: base + i,
                reason: "table id must be 0..=3",
            });
        }
        let width = if pq == 0 { 1 } else { 2 };
        let start = i + 1;
        if start + 64 * width > p.len() {
            return Err(JpegError::MalformedDqt {
                offset: base + i,
                reason: "table runs past the segment end",
            });
        }
        let mut q = [[0u8; 8]; 8];
        for (k, &n) in ZIGZAG_TO_NATURAL.iter().enumerate() {
            let at = start + k * width;
            let v = if width == 1 { p[at] as u16 } else { be16(p, at) };
            if v == 0 || v > 255 {
                return Err(JpegError::TableValueOutOfRange {
                    offset: base + at,
                    value: v,
                });
            }
            q[n / 8][n % 8] = v as u8;
        }
        tables[tq as usize] = Some(QuantTable {
            q,
            channel: Channel::Unknown,
            source: TableSource::Parsed,
        });
        i = start + 64 * width;
    }
    Ok(())
}

fn parse_frame(p: &[u8], base: usize, progressive: bool) -> Result<Frame, JpegError> {
    let bad = |reason| JpegError::MalformedFrame { offset: base, reason };
    if p.len() < 6 {
        return Err(bad("header shorter than 6 bytes"));
    }
    let height = be16(p, 1);
    let width = be16(p, 3);
    let n = p[5] as usize;
    if n == 0 {
        return Err(bad("no components"));
    }
    if p.len() != 6 + 3 * n {
        return Err(bad("length does not match component count"));
    }
    if width == 0 {
        return Err(bad("zero width"));
    }
    let mut components = Vec::with_capacity(n);
    for c in 0..n {
        let at = 6 + 3 * c;
        let (h, v) = (p[at + 1] >> 4, p[at + 1] & 0x0f);
        if !(1..=4).contains(&h) || !(1..=4).contains(&v) {
            return Err(JpegError::MalformedFrame {
                offset: base + at + 1,
                reason: "sampling factor outside 1..=4",
            });
        }
        let tq = p[at + 2];
        if tq > 3 {
            return Err(JpegError::MalformedFrame {
                offset: base + at + 2,
                reason: "table selector outside 0..=3",
            });
        }
        components.push(Component { id: p[at], h, v, tq });
    }
    Ok(Frame {
        width,
        height,
        components,
        progressive,
    })
}

/// Orientation tag of IFD0 in an APP1 payload. Malformed or missing Exif
/// data yields `None`.
fn exif_orientation(p: &[u8]) -> Option<Orientation8> {
    let tiff = p.strip_prefix(b"Exif\0\0")?;
    let little = match tiff.get(0..2)? {
        b"II" => true,
        b"MM" => false,
        _ => return None,
    };
    let u16_at = |at: usize| -> Option<u16> {
        let b = tiff.get(at..at + 2)?;
        Some(if little {
            u16::from_le_bytes([b[0], b[1]])
        } else {
            u16::from_be_bytes([b[0], b[1]])
        })
    };
    let u32_at = |at: usize| -> Option<u32> {
        let b = tiff.get(at..at + 4)?;
        let a = [b[0], b[1], b[2], b[3]];
        Some(if little {
            u32::from_le_bytes(a)
        } else {
            u32::from_be_bytes(a)
        })
    };
    if u16_at(2)? != 42 {
        return None;
    }
    let ifd = u32_at(4)? as usize;
    let count = u16_at(ifd)? as usize;
    for e in 0..count {
        let at = ifd + 2 + 12 * e;
        if u16_at(at)? == 0x0112 {
            // SHORT, count 1: value sits left-aligned in the value field
            if u16_at(at + 2)? != 3 || u32_at(at + 4)? != 1 {
                return None;
            }
            let v = u16_at(at + 8)?;
            return u8::try_from(v).ok().and_then(|v| Orientation8::new(v).ok());
        }
    }
    None
}

//! Binary order-type databases: fixed-width unsigned coordinate records,
//! concatenated with no header. 16-bit values are little-endian.

use std::path::Path;

use chiro_core::{RationalPoint, RationalPointSet};

use crate::error::{Result, WorkbenchError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Width {
    W8,
    W16,
}

impl Width {
    pub fn bytes(self) -> usize {
        match self {
            Width::W8 => 1,
            Width::W16 => 2,
        }
    }

    /// 8 bits up to 8 points, 16 bits for 9 and 10.
    pub fn default_for(n: usize) -> Result<Width> {
        match n {
            3..=8 => Ok(Width::W8),
            9 | 10 => Ok(Width::W16),
            _ => Err(WorkbenchError::Usage(format!(
                "no default coordinate width for n = {n}; pass --width"
            ))),
        }
    }
}

impl TryFrom<u32> for Width {
    type Error = WorkbenchError;

    fn try_from(bits: u32) -> Result<Width> {
        match bits {
            8 => Ok(Width::W8),
            16 => Ok(Width::W16),
            _ => Err(WorkbenchError::Usage(format!("width must be 8 or 16, got {bits}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderTypeRecord {
    pub index: usize,
    pub points: Vec<(u32, u32)>,
}

impl OrderTypeRecord {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn to_point_set(&self) -> chiro_core::Result<RationalPointSet> {
        let pts = self
            .points
            .iter()
            .map(|&(x, y)| RationalPoint::from_ints(x.into(), y.into()))
            .collect();
        RationalPointSet::new(pts)
    }
}

/// Splits raw bytes into records without any geometric validation.
pub fn parse_order_types(bytes: &[u8], n: usize, width: Width) -> Result<Vec<OrderTypeRecord>> {
    if n == 0 {
        return Err(WorkbenchError::Usage("n must be positive".into()));
    }
    let w = width.bytes();
    let rec = n * 2 * w;
    if !bytes.len().is_multiple_of(rec) {
        return Err(WorkbenchError::MalformedFile(format!(
            "{} bytes is not a multiple of the record size {rec} (n = {n}, {} bit)",
            bytes.len(),
            w * 8
        )));
    }
    let coord = |c: &[u8]| match width {
        Width::W8 => u32::from(c[0]),
        Width::W16 => u32::from(u16::from_le_bytes([c[0], c[1]])),
    };
    Ok(bytes
        .chunks_exact(rec)
        .enumerate()
        .map(|(index, chunk)| OrderTypeRecord {
            index,
            points: chunk
                .chunks_exact(2 * w)
                .map(|p| (coord(&p[..w]), coord(&p[w..])))
                .collect(),
        })
        .collect())
}

/// Inverse of [`parse_order_types`]; coordinates must fit the width.
pub fn write_order_types(records: &[OrderTypeRecord], width: Width) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for r in records {
        for &(x, y) in &r.points {
            for c in [x, y] {
                match width {
                    Width::W8 => out.push(u8::try_from(c).map_err(|_| overflow(r.index, c))?),
                    Width::W16 => {
                        let c = u16::try_from(c).map_err(|_| overflow(r.index, c))?;
                        out.extend_from_slice(&c.to_le_bytes());
                    }
                }
            }
        }
    }
    Ok(out)
}

fn overflow(index: usize, c: u32) -> WorkbenchError {
    WorkbenchError::InvalidRecord {
        index,
        reason: format!("coordinate {c} does not fit the width"),
    }
}

#[derive(Clone, Debug, Default)]
pub struct Ingested {
    pub records: Vec<(OrderTypeRecord, RationalPointSet)>,
    /// Record index and reason for each record dropped in lenient mode.
    pub skipped: Vec<(usize, String)>,
}

/// Parses and validates every record. Collinear records are fatal unless
/// `lenient`, in which case they are skipped and noted.
pub fn ingest(bytes: &[u8], n: usize, width: Width, lenient: bool) -> Result<Ingested> {
    let mut out = Ingested::default();
    for rec in parse_order_types(bytes, n, width)? {
        match rec.to_point_set() {
            Ok(ps) => out.records.push((rec, ps)),
            Err(e) if lenient => out.skipped.push((rec.index, e.to_string())),
            Err(e) => {
                return Err(WorkbenchError::InvalidRecord {
                    index: rec.index,
                    reason: e.to_string(),
                })
            }
        }
    }
    Ok(out)
}

pub fn read_order_types(path: &Path, n: usize, width: Width, lenient: bool) -> Result<Ingested> {
    let bytes = std::fs::read(path).map_err(|source| WorkbenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ingest(&bytes, n, width, lenient)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_records_of_four_points() {
        let bytes: Vec<u8> = [[0, 0, 255, 0, 0, 255, 90, 90], [0, 0, 10, 0, 0, 10, 3, 3], [0, 0, 9, 1, 4, 7, 2, 5]]
            .concat();
        let got = ingest(&bytes, 4, Width::W8, false).unwrap();
        assert_eq!(got.records.len(), 3);
        assert_eq!(got.records[0].0.points[1], (255, 0));
        assert_eq!(write_order_types(&parse_order_types(&bytes, 4, Width::W8).unwrap(), Width::W8).unwrap(), bytes);
    }

    #[test]
    fn truncated_file_is_malformed() {
        let err = parse_order_types(&[0; 15], 4, Width::W8).unwrap_err();
        assert!(matches!(err, WorkbenchError::MalformedFile(_)));
    }

    #[test]
    fn collinear_records_are_fatal_or_skipped() {
        let bytes = [0, 0, 1, 1, 2, 2, 0, 5, 0, 0, 4, 0, 0, 4, 1, 1];
        let err = ingest(&bytes, 4, Width::W8, false).unwrap_err();
        assert!(matches!(err, WorkbenchError::InvalidRecord { index: 0, .. }));
        let got = ingest(&bytes, 4, Width::W8, true).unwrap();
        assert_eq!(got.records.len(), 1);
        assert_eq!(got.records[0].0.index, 1);
        assert_eq!(got.skipped[0].0, 0);
    }

    #[test]
    fn sixteen_bit_is_little_endian() {
        let recs = parse_order_types(&[1, 2, 3, 4, 5, 0, 6, 0, 0, 1, 0, 0], 3, Width::W16).unwrap();
        assert_eq!(recs[0].points, vec![(0x0201, 0x0403), (5, 6), (256, 0)]);
    }
}

//! Binary trial log.
//!
//! ```text
//! header (24 bytes)
//!   0..4    magic  b"SPNC"
//!   4..8    format version, u32 LE (= 1)
//!   8..16   record count n, u64 LE
//!   16..24  seed, u64 LE
//! record (25 bytes, n of them)
//!   0       orientation, i8 (+1 or -1)
//!   1..25   s as three f64 LE (x, y, z)
//! ```

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::ga::{Direction, Orientation, Vector3, EXACT_TOL, UNIT_INPUT_TOL};
use crate::spin::TrialRecord;

pub const MAGIC: [u8; 4] = *b"SPNC";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 24;
pub const RECORD_LEN: usize = 25;

#[derive(Debug, Error)]
pub enum TrialLogError {
    #[error("byte 0: bad magic {found:?}, expected \"SPNC\"")]
    BadMagic { found: [u8; 4] },
    #[error("byte 4: unsupported format version {found}, expected {VERSION}")]
    UnsupportedVersion { found: u32 },
    #[error("truncated header: {len} bytes, expected {HEADER_LEN}")]
    TruncatedHeader { len: usize },
    #[error("byte {offset}: truncated log, header declares {expected} records but found {found}")]
    Truncated { expected: u64, found: u64, offset: usize },
    #[error("byte {offset}: {extra} trailing bytes after {expected} records")]
    TrailingBytes { expected: u64, extra: usize, offset: usize },
    #[error("byte {offset}: orientation {value} is not +1 or -1")]
    BadOrientation { value: i8, offset: usize },
    #[error("byte {offset}: spin axis has norm {norm}, not unit")]
    NotUnit { norm: f64, offset: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialLog {
    pub seed: u64,
    pub records: Vec<TrialRecord>,
}

impl TrialLog {
    /// Generates `n` records from the `(seed, k)` streams.
    pub fn generate(seed: u64, n: u64) -> Self {
        Self {
            seed,
            records: (0..n).map(|k| TrialRecord::generate(seed, k)).collect(),
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(&MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.records.len() as u64).to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        let mut buf = [0u8; RECORD_LEN];
        for r in &self.records {
            buf[0] = r.orientation.sign() as u8;
            for (i, c) in r.s.vector().to_array().iter().enumerate() {
                buf[1 + 8 * i..9 + 8 * i].copy_from_slice(&c.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        w.flush()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + RECORD_LEN * self.records.len());
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, TrialLogError> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, TrialLogError> {
        if bytes.len() < HEADER_LEN {
            return Err(TrialLogError::TruncatedHeader { len: bytes.len() });
        }
        let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(TrialLogError::BadMagic { found: magic });
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(TrialLogError::UnsupportedVersion { found: version });
        }
        let expected = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let seed = u64::from_le_bytes(bytes[16..24].try_into().unwrap());

        let body = &bytes[HEADER_LEN..];
        let found = (body.len() / RECORD_LEN) as u64;
        if found < expected {
            return Err(TrialLogError::Truncated {
                expected,
                found,
                offset: HEADER_LEN + found as usize * RECORD_LEN,
            });
        }
        let used = expected as usize * RECORD_LEN;
        if body.len() > used {
            return Err(TrialLogError::TrailingBytes {
                expected,
                extra: body.len() - used,
                offset: HEADER_LEN + used,
            });
        }

        let records = body
            .chunks_exact(RECORD_LEN)
            .enumerate()
            .map(|(k, rec)| {
                let offset = HEADER_LEN + k * RECORD_LEN;
                let value = rec[0] as i8;
                let orientation = Orientation::from_sign(value).ok_or(TrialLogError::BadOrientation { value, offset })?;
                let c = |i: usize| f64::from_le_bytes(rec[1 + 8 * i..9 + 8 * i].try_into().unwrap());
                let v = Vector3::new(c(0), c(1), c(2));
                let norm = v.norm();
                if !norm.is_finite() || (norm - 1.0).abs() > UNIT_INPUT_TOL {
                    return Err(TrialLogError::NotUnit { norm, offset: offset + 1 });
                }
                // components already unit to working precision are kept bit for bit,
                // so scoring a log matches the live run exactly
                let s = if (norm - 1.0).abs() <= EXACT_TOL {
                    Direction::from_unit_unchecked(v)
                } else {
                    Direction::new(v).map_err(|_| TrialLogError::NotUnit { norm, offset: offset + 1 })?
                };
                Ok(TrialRecord { index: k as u64, orientation, s })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { seed, records })
    }
}

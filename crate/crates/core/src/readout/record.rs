//! Shot records and their CSV / binary serialization.

use super::ode::QubitState;
use super::shot::{HeraldOutcome, PulseLabel};
use super::ReadoutError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// One integrated measurement of one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub shot_id: u64,
    pub qubit: u8,
    pub prepared: PulseLabel,
    pub herald: HeraldOutcome,
    pub s: Complex64,
    /// Filled by the classifier; `None` until then.
    pub assigned: Option<QubitStateLabel>,
}

/// Assignment label, serialized as `g` / `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitStateLabel {
    G,
    E,
}

impl From<QubitState> for QubitStateLabel {
    fn from(s: QubitState) -> Self {
        match s {
            QubitState::Ground => QubitStateLabel::G,
            QubitState::Excited => QubitStateLabel::E,
        }
    }
}

/// Writes records as CSV: `shot_id, qubit, prepared, herald, re_s, im_s`.
pub fn write_shot_csv<W: Write>(records: &[ShotRecord], mut out: W) -> Result<(), ReadoutError> {
    let io = |e: std::io::Error| ReadoutError::RecordIo(e.to_string());
    writeln!(out, "shot_id,qubit,prepared,herald,re_s,im_s").map_err(io)?;
    for r in records {
        let prepared = match r.prepared {
            PulseLabel::Zero => "0",
            PulseLabel::Pi => "pi",
        };
        let herald = match r.herald {
            HeraldOutcome::Pass => "pass",
            HeraldOutcome::Fail => "fail",
        };
        writeln!(
            out,
            "{},{},{},{},{:.9e},{:.9e}",
            r.shot_id, r.qubit, prepared, herald, r.s.re, r.s.im
        )
        .map_err(io)?;
    }
    Ok(())
}

/// Parses the CSV produced by [`write_shot_csv`]; errors carry the 1-based
/// line number.
pub fn read_shot_csv(text: &str) -> Result<Vec<ShotRecord>, ReadoutError> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 || line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let bad = |what: &str| ReadoutError::RecordIo(format!("line {lineno}: {what}"));
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(bad(&format!("expected 6 fields, got {}", fields.len())));
        }
        let shot_id = fields[0].parse().map_err(|_| bad("bad shot_id"))?;
        let qubit = fields[1].parse().map_err(|_| bad("bad qubit index"))?;
        let prepared = match fields[2] {
            "0" => PulseLabel::Zero,
            "pi" => PulseLabel::Pi,
            other => return Err(bad(&format!("bad prepared label `{other}`"))),
        };
        let herald = match fields[3] {
            "pass" => HeraldOutcome::Pass,
            "fail" => HeraldOutcome::Fail,
            other => return Err(bad(&format!("bad herald label `{other}`"))),
        };
        let re: f64 = fields[4].parse().map_err(|_| bad("bad re_s"))?;
        let im: f64 = fields[5].parse().map_err(|_| bad("bad im_s"))?;
        records.push(ShotRecord {
            shot_id,
            qubit,
            prepared,
            herald,
            s: Complex64::new(re, im),
            assigned: None,
        });
    }
    Ok(records)
}

const BINARY_MAGIC: &[u8; 4] = b"CVSH";
const BINARY_VERSION: u16 = 1;

/// Compact binary record stream, little-endian:
///
/// header: magic `CVSH`, version u16, record count u64;
/// record: shot_id u64, qubit u8, prepared u8 (0 = no pulse, 1 = pi),
/// herald u8 (0 = fail, 1 = pass), assigned u8 (0 = g, 1 = e, 255 = none),
/// re_s f64, im_s f64.
pub fn write_shot_records<W: Write>(
    records: &[ShotRecord],
    mut out: W,
) -> Result<(), ReadoutError> {
    let io = |e: std::io::Error| ReadoutError::RecordIo(e.to_string());
    out.write_all(BINARY_MAGIC).map_err(io)?;
    out.write_all(&BINARY_VERSION.to_le_bytes()).map_err(io)?;
    out.write_all(&(records.len() as u64).to_le_bytes()).map_err(io)?;
    for r in records {
        out.write_all(&r.shot_id.to_le_bytes()).map_err(io)?;
        out.write_all(&[r.qubit]).map_err(io)?;
        out.write_all(&[matches!(r.prepared, PulseLabel::Pi) as u8]).map_err(io)?;
        out.write_all(&[matches!(r.herald, HeraldOutcome::Pass) as u8]).map_err(io)?;
        let assigned = match r.assigned {
            None => 255u8,
            Some(QubitStateLabel::G) => 0,
            Some(QubitStateLabel::E) => 1,
        };
        out.write_all(&[assigned]).map_err(io)?;
        out.write_all(&r.s.re.to_le_bytes()).map_err(io)?;
        out.write_all(&r.s.im.to_le_bytes()).map_err(io)?;
    }
    Ok(())
}

/// Reads the binary format written by [`write_shot_records`].
pub fn read_shot_records<R: Read>(mut input: R) -> Result<Vec<ShotRecord>, ReadoutError> {
    let io = |e: std::io::Error| ReadoutError::RecordIo(e.to_string());
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic).map_err(io)?;
    if &magic != BINARY_MAGIC {
        return Err(ReadoutError::RecordIo("bad magic".into()));
    }
    let mut version = [0u8; 2];
    input.read_exact(&mut version).map_err(io)?;
    if u16::from_le_bytes(version) != BINARY_VERSION {
        return Err(ReadoutError::RecordIo(format!(
            "unsupported version {}",
            u16::from_le_bytes(version)
        )));
    }
    let mut count = [0u8; 8];
    input.read_exact(&mut count).map_err(io)?;
    let count = u64::from_le_bytes(count) as usize;
    let mut records = Vec::with_capacity(count);
    let mut buf = [0u8; 28];
    for _ in 0..count {
        input.read_exact(&mut buf).map_err(io)?;
        let shot_id = u64::from_le_bytes(buf[0..8].try_into().unwrap());
        let qubit = buf[8];
        let prepared = if buf[9] == 1 { PulseLabel::Pi } else { PulseLabel::Zero };
        let herald = if buf[10] == 1 { HeraldOutcome::Pass } else { HeraldOutcome::Fail };
        let assigned = match buf[11] {
            255 => None,
            0 => Some(QubitStateLabel::G),
            1 => Some(QubitStateLabel::E),
            other => {
                return Err(ReadoutError::RecordIo(format!("bad assignment byte {other}")))
            }
        };
        let re = f64::from_le_bytes(buf[12..20].try_into().unwrap());
        let im = f64::from_le_bytes(buf[20..28].try_into().unwrap());
        records.push(ShotRecord {
            shot_id,
            qubit,
            prepared,
            herald,
            s: Complex64::new(re, im),
            assigned,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_records() -> Vec<ShotRecord> {
        vec![
            ShotRecord {
                shot_id: 0,
                qubit: 0,
                prepared: PulseLabel::Zero,
                herald: HeraldOutcome::Pass,
                s: Complex64::new(1.25, -0.5),
                assigned: None,
            },
            ShotRecord {
                shot_id: 1,
                qubit: 3,
                prepared: PulseLabel::Pi,
                herald: HeraldOutcome::Fail,
                s: Complex64::new(-2.0, 0.75),
                assigned: Some(QubitStateLabel::E),
            },
        ]
    }

    #[test]
    fn csv_round_trip() {
        let records = sample_records();
        let mut buf = Vec::new();
        write_shot_csv(&records, &mut buf).unwrap();
        let parsed = read_shot_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].s, records[0].s);
        assert_eq!(parsed[1].prepared, PulseLabel::Pi);
        // assignments are not carried by the CSV
        assert_eq!(parsed[1].assigned, None);
    }

    #[test]
    fn csv_parse_error_carries_line_number() {
        let text = "shot_id,qubit,prepared,herald,re_s,im_s\n0,0,0,pass,1.0,0.0\n1,0,junk,pass,1.0,0.0\n";
        let err = read_shot_csv(text).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn binary_round_trip_preserves_everything() {
        let records = sample_records();
        let mut buf = Vec::new();
        write_shot_records(&records, &mut buf).unwrap();
        let parsed = read_shot_records(buf.as_slice()).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn binary_rejects_bad_magic() {
        let err = read_shot_records(&b"XXXX\x01\x00"[..]).unwrap_err();
        assert!(err.to_string().contains("bad magic"));
    }
}

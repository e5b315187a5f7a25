//! Binary trace files and symbol files.
//!
//! Trace layout (little endian): magic `LRC1`, `dt` as f64 seconds, the
//! number of f64 values that follow as u64, then the values. Detected
//! traces store one value per sample; optical traces interleave
//! `re_x, im_x, re_y, im_y` per sample. Symbol files hold one ASCII digit
//! `0..=3` per byte.

use std::fs;
use std::io::Write;
use std::path::Path;

use photorc_core::link::{DetectedWaveform, OpticalField, SymbolStream};
use photorc_core::num_complex::Complex64;

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 4] = b"LRC1";
pub const HEADER_LEN: usize = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("byte offset {offset}: {reason}")]
pub struct FormatError {
    pub offset: u64,
    pub reason: String,
}

impl FormatError {
    fn at(offset: usize, reason: impl Into<String>) -> Self {
        Self {
            offset: offset as u64,
            reason: reason.into(),
        }
    }
}

/// Raw contents of a trace file.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub dt: f64,
    pub values: Vec<f64>,
}

pub fn encode_trace(dt: f64, values: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * values.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&dt.to_le_bytes());
    out.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_trace(bytes: &[u8]) -> std::result::Result<Trace, FormatError> {
    if bytes.len() < 4 {
        return Err(FormatError::at(bytes.len(), "file ends inside the magic number"));
    }
    if &bytes[..4] != MAGIC {
        return Err(FormatError::at(
            0,
            format!("bad magic {:?}, expected \"LRC1\"", &bytes[..4]),
        ));
    }
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::at(bytes.len(), "file ends inside the header"));
    }
    let dt = f64::from_le_bytes(bytes[4..12].try_into().expect("8 bytes"));
    if !(dt.is_finite() && dt > 0.0) {
        return Err(FormatError::at(
            4,
            format!("sample spacing {dt} is not a positive number"),
        ));
    }
    let count = u64::from_le_bytes(bytes[12..20].try_into().expect("8 bytes"));
    let body = bytes.len() - HEADER_LEN;
    let expected = count
        .checked_mul(8)
        .filter(|&n| n <= usize::MAX as u64)
        .map(|n| n as usize);
    match expected {
        Some(n) if n == body => {}
        Some(n) if n > body => {
            let whole = body / 8;
            return Err(FormatError::at(
                HEADER_LEN + 8 * whole,
                format!("truncated: header declares {count} values, file holds {whole} complete ones"),
            ));
        }
        _ => {
            return Err(FormatError::at(
                HEADER_LEN + expected.unwrap_or(0).min(body),
                format!("trailing bytes after the {count} declared values"),
            ))
        }
    }
    let values = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Ok(Trace { dt, values })
}

pub fn encode_symbols(symbols: &SymbolStream) -> Vec<u8> {
    symbols.as_slice().iter().map(|s| b'0' + s).collect()
}

/// One digit per byte; a single trailing newline is tolerated.
pub fn decode_symbols(bytes: &[u8]) -> std::result::Result<SymbolStream, FormatError> {
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    let symbols = body
        .iter()
        .enumerate()
        .map(|(i, &b)| match b {
            b'0'..=b'3' => Ok(b - b'0'),
            _ => Err(FormatError::at(i, format!("byte {b:#04x} is not a symbol digit 0-3"))),
        })
        .collect::<std::result::Result<Vec<u8>, _>>()?;
    Ok(SymbolStream::new(symbols).expect("digits are checked"))
}

pub fn detected_to_values(w: &DetectedWaveform) -> Vec<f64> {
    w.samples.clone()
}

pub fn optical_to_values(f: &OpticalField) -> Vec<f64> {
    f.env_x
        .iter()
        .zip(&f.env_y)
        .flat_map(|(x, y)| [x.re, x.im, y.re, y.im])
        .collect()
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(bytes).map_err(|e| CliError::io(path, e))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn write_detected(path: &Path, w: &DetectedWaveform) -> Result<()> {
    write_bytes(path, &encode_trace(w.dt, &w.samples))
}

pub fn write_optical(path: &Path, f: &OpticalField) -> Result<()> {
    write_bytes(path, &encode_trace(f.dt, &optical_to_values(f)))
}

pub fn write_symbols(path: &Path, s: &SymbolStream) -> Result<()> {
    write_bytes(path, &encode_symbols(s))
}

pub fn read_trace(path: &Path) -> Result<Trace> {
    decode_trace(&read_bytes(path)?).map_err(|e| CliError::format(path, e))
}

/// Reads a detected trace; the baud period comes from the caller's link
/// configuration since the file does not carry it.
pub fn read_detected(path: &Path, baud_period: f64) -> Result<DetectedWaveform> {
    let t = read_trace(path)?;
    Ok(DetectedWaveform::new(t.values, t.dt, baud_period)?)
}

pub fn read_optical(path: &Path, wavelength_nm: f64) -> Result<OpticalField> {
    let t = read_trace(path)?;
    if t.values.len() % 4 != 0 {
        return Err(CliError::format(
            path,
            FormatError::at(
                HEADER_LEN,
                format!(
                    "{} values is not a whole number of dual-polarization samples",
                    t.values.len()
                ),
            ),
        ));
    }
    let (x, y) = t
        .values
        .chunks_exact(4)
        .map(|c| (Complex64::new(c[0], c[1]), Complex64::new(c[2], c[3])))
        .unzip();
    Ok(OpticalField::new(x, y, t.dt, wavelength_nm)?)
}

pub fn read_symbols(path: &Path) -> Result<SymbolStream> {
    decode_symbols(&read_bytes(path)?).map_err(|e| CliError::format(path, e))
}

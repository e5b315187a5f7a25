use alloc::format;

use crate::link::{SymbolStream, GRAY_MAP};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerReport {
    pub ber: f64,
    pub ser: f64,
    pub bit_errors: u64,
    pub symbol_errors: u64,
    pub counted_bits: u64,
}

/// Bit and symbol error rates over all symbols except `skip_edges` at each
/// end. Bits are compared through the Gray map.
pub fn ber(hat: &SymbolStream, reference: &SymbolStream, skip_edges: usize) -> Result<BerReport> {
    if hat.len() != reference.len() {
        return Err(Error::input(
            "ber",
            format!("length mismatch: {} vs {}", hat.len(), reference.len()),
        ));
    }
    let n = hat.len();
    if 2 * skip_edges >= n {
        return Err(Error::input(
            "ber",
            format!("{skip_edges} edge symbols leave nothing of {n} to count"),
        ));
    }
    ber_ranges(hat, reference, skip_edges..n - skip_edges)
}

/// Error rates over the symbol index range `range`.
pub fn ber_ranges(hat: &SymbolStream, reference: &SymbolStream, range: core::ops::Range<usize>) -> Result<BerReport> {
    if range.end > hat.len() || range.end > reference.len() || range.is_empty() {
        return Err(Error::input("ber", "empty or out-of-range evaluation window"));
    }
    let (mut bits, mut syms) = (0u64, 0u64);
    for (&a, &b) in hat.as_slice()[range.clone()]
        .iter()
        .zip(&reference.as_slice()[range.clone()])
    {
        if a != b {
            syms += 1;
            let (ga, gb) = (GRAY_MAP[a as usize], GRAY_MAP[b as usize]);
            bits += u64::from(ga[0] != gb[0]) + u64::from(ga[1] != gb[1]);
        }
    }
    let counted = range.len() as u64;
    Ok(BerReport {
        ber: bits as f64 / (2 * counted) as f64,
        ser: syms as f64 / counted as f64,
        bit_errors: bits,
        symbol_errors: syms,
        counted_bits: 2 * counted,
    })
}

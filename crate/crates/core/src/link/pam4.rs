use alloc::format;
use alloc::vec::Vec;
use rand::Rng;

use crate::seed::{self, stream};
use crate::{Error, Result};

/// Bit pair carried by each PAM-4 symbol (amplitude index 0..=3).
///
/// Adjacent amplitude levels differ in exactly one bit.
pub const GRAY_MAP: [[u8; 2]; 4] = [[0, 0], [0, 1], [1, 1], [1, 0]];

/// PAM-4 symbols; each value is an amplitude index in `0..=3`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolStream {
    symbols: Vec<u8>,
}

impl SymbolStream {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if let Some(pos) = symbols.iter().position(|&s| s > 3) {
            return Err(Error::input(
                "pam4",
                format!("symbol {} at index {pos} is outside 0..=3", symbols[pos]),
            ));
        }
        Ok(Self { symbols })
    }

    /// Uniformly random symbols keyed by `seed`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = seed::rng(seed, stream::BITS);
        let symbols = (0..n).map(|_| rng.random_range(0..4u8)).collect();
        Self { symbols }
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.symbols
    }

    /// Gray-coded bits, two per symbol.
    pub fn to_bits(&self) -> Vec<u8> {
        self.symbols.iter().flat_map(|&s| GRAY_MAP[s as usize]).collect()
    }

    pub fn slice(&self, range: core::ops::Range<usize>) -> Self {
        Self {
            symbols: self.symbols[range].to_vec(),
        }
    }
}

fn gray_decode(pair: [u8; 2]) -> u8 {
    match pair {
        [0, 0] => 0,
        [0, 1] => 1,
        [1, 1] => 2,
        _ => 3,
    }
}

/// Packs bit pairs into Gray-decoded PAM-4 symbols.
pub fn encode_pam4(bits: &[u8]) -> Result<SymbolStream> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::input("encode_pam4", format!("odd bit count {}", bits.len())));
    }
    if let Some(pos) = bits.iter().position(|&b| b > 1) {
        return Err(Error::input(
            "encode_pam4",
            format!("value {} at index {pos} is not a bit", bits[pos]),
        ));
    }
    let symbols = bits.chunks_exact(2).map(|p| gray_decode([p[0], p[1]])).collect();
    Ok(SymbolStream { symbols })
}

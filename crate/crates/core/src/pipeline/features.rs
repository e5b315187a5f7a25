use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::readout::DesignMatrix;
use crate::{Error, Result};

/// Row-major matrix with one row per symbol (node responses, or raw
/// detected samples of one baud).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    rows: usize,
    width: usize,
    data: Vec<f64>,
}

impl BlockMatrix {
    pub fn new(rows: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || data.len() != rows * width {
            return Err(Error::input(
                "block_matrix",
                format!("{} values do not form {rows} rows of width {width}", data.len()),
            ));
        }
        Ok(Self { rows, width, data })
    }

    /// Splits a flat per-baud signal into rows of `width` samples.
    pub fn from_signal(samples: Vec<f64>, width: usize) -> Result<Self> {
        if width == 0 || !samples.len().is_multiple_of(width) {
            return Err(Error::input(
                "block_matrix",
                format!("signal length {} is not a multiple of {width}", samples.len()),
            ));
        }
        Self::new(samples.len() / width, width, samples)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.data
    }

    /// Per-column min/max over `rows`, used to scale features to `[0, 1]`.
    pub fn column_ranges(&self, rows: core::ops::Range<usize>) -> Vec<(f64, f64)> {
        let mut out = vec![(f64::INFINITY, f64::NEG_INFINITY); self.width];
        for r in rows {
            for (acc, &v) in out.iter_mut().zip(self.row(r)) {
                acc.0 = acc.0.min(v);
                acc.1 = acc.1.max(v);
            }
        }
        out
    }

    /// Maps every column through `(v - lo) / (hi - lo)`; constant columns
    /// are only shifted.
    pub fn scale_columns(&mut self, ranges: &[(f64, f64)]) {
        for row in self.data.chunks_exact_mut(self.width) {
            for (v, &(lo, hi)) in row.iter_mut().zip(ranges) {
                let span = hi - lo;
                *v = if span > 0.0 { (*v - lo) / span } else { *v - lo };
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Tap-windowed design matrix: row `b` is the concatenation of block rows
/// `b-k ..= b+k` (zeros outside the stream) followed by a constant 1.
///
/// Rows are produced on demand, so the full `S x ((2k+1)N + 1)` matrix is
/// never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    blocks: BlockMatrix,
    taps: usize,
}

impl FeatureMatrix {
    pub fn new(blocks: BlockMatrix, taps: usize) -> Result<Self> {
        if !blocks.is_finite() {
            return Err(Error::input("assemble_features", "non-finite node response"));
        }
        Ok(Self { blocks, taps })
    }

    pub fn taps(&self) -> usize {
        self.taps
    }

    pub fn blocks(&self) -> &BlockMatrix {
        &self.blocks
    }

    /// Column names `node{i}_tap{j}` and `bias`; tap `j` runs `0 ..= 2k`
    /// with `j = k` the current symbol.
    pub fn column_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.cols());
        for j in 0..=2 * self.taps {
            for i in 0..self.blocks.width() {
                names.push(format!("node{i}_tap{j}"));
            }
        }
        names.push(String::from("bias"));
        names
    }
}

impl DesignMatrix for FeatureMatrix {
    fn rows(&self) -> usize {
        self.blocks.rows()
    }

    fn cols(&self) -> usize {
        (2 * self.taps + 1) * self.blocks.width() + 1
    }

    fn fill_row(&self, r: usize, out: &mut [f64]) {
        let w = self.blocks.width();
        let k = self.taps as isize;
        let last = out.len() - 1;
        for (j, chunk) in out[..last].chunks_exact_mut(w).enumerate() {
            let src = r as isize + j as isize - k;
            if src < 0 || src >= self.blocks.rows() as isize {
                chunk.fill(0.0);
            } else {
                chunk.copy_from_slice(self.blocks.row(src as usize));
            }
        }
        out[last] = 1.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks(rows: usize, width: usize) -> BlockMatrix {
        BlockMatrix::new(rows, width, (0..rows * width).map(|v| v as f64 + 1.0).collect()).unwrap()
    }

    #[test]
    fn column_counts() {
        assert_eq!(FeatureMatrix::new(blocks(4, 32), 0).unwrap().cols(), 33);
        let f = FeatureMatrix::new(blocks(4, 32), 10).unwrap();
        assert_eq!(f.cols(), 673);
        assert_eq!(f.column_names().len(), 673);
        assert_eq!(f.column_names()[672], "bias");
        assert_eq!(f.column_names()[33], "node1_tap1");
    }

    #[test]
    fn edge_padding_and_centre() {
        let f = FeatureMatrix::new(blocks(3, 2), 1).unwrap();
        let mut row = vec![9.0; f.cols()];
        f.fill_row(0, &mut row);
        assert_eq!(row, vec![0.0, 0.0, 1.0, 2.0, 3.0, 4.0, 1.0]);
        f.fill_row(2, &mut row);
        assert_eq!(row, vec![3.0, 4.0, 5.0, 6.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn one_row_shift() {
        // Shifting the block stream by one symbol shifts feature rows by one.
        let a = blocks(6, 3);
        let shifted = BlockMatrix::new(5, 3, a.as_slice()[3..].to_vec()).unwrap();
        let fa = FeatureMatrix::new(a, 2).unwrap();
        let fb = FeatureMatrix::new(shifted, 2).unwrap();
        let (mut ra, mut rb) = (vec![0.0; fa.cols()], vec![0.0; fb.cols()]);
        for r in 2..3 {
            fa.fill_row(r + 1, &mut ra);
            fb.fill_row(r, &mut rb);
            assert_eq!(ra, rb);
        }
    }

    #[test]
    fn scaling_to_unit_range() {
        let mut b = BlockMatrix::new(3, 2, vec![1.0, 5.0, 3.0, 5.0, 2.0, 5.0]).unwrap();
        let ranges = b.column_ranges(0..3);
        b.scale_columns(&ranges);
        assert_eq!(b.as_slice(), &[0.0, 0.0, 1.0, 0.0, 0.5, 0.0]);
    }
}

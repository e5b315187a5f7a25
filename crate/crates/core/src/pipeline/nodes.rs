use alloc::format;
use alloc::vec::Vec;

use super::BlockMatrix;
use crate::{Error, Result};

/// Picks the last integration sample of every node slot from a streamed
/// reservoir trace.
#[derive(Debug, Clone)]
pub struct NodeSampler {
    steps_per_slot: usize,
    n_nodes: usize,
    counter: usize,
    values: Vec<f64>,
}

impl NodeSampler {
    pub fn new(steps_per_slot: usize, n_nodes: usize) -> Self {
        Self {
            steps_per_slot,
            n_nodes,
            counter: 0,
            values: Vec::new(),
        }
    }

    pub fn push(&mut self, v: f64) {
        self.counter += 1;
        if self.counter == self.steps_per_slot {
            self.values.push(v);
            self.counter = 0;
        }
    }

    pub fn finish(self) -> Result<BlockMatrix> {
        if self.counter != 0 || !self.values.len().is_multiple_of(self.n_nodes) {
            return Err(Error::input(
                "sample_nodes",
                format!(
                    "trace ends mid-slot or mid-symbol ({} nodes, {} partial steps)",
                    self.values.len(),
                    self.counter
                ),
            ));
        }
        BlockMatrix::new(self.values.len() / self.n_nodes, self.n_nodes, self.values)
    }
}

/// Node responses (symbols x nodes) from a full trace on the integration
/// grid, sampling each slot at its final step.
pub fn sample_nodes(trace: &[f64], steps_per_slot: usize, n_nodes: usize) -> Result<BlockMatrix> {
    if steps_per_slot == 0 || n_nodes == 0 {
        return Err(Error::input("sample_nodes", "slot and node counts must be >= 1"));
    }
    let per_symbol = steps_per_slot * n_nodes;
    if !trace.len().is_multiple_of(per_symbol) {
        return Err(Error::input(
            "sample_nodes",
            format!(
                "trace length {} is not a multiple of {per_symbol} steps per symbol",
                trace.len()
            ),
        ));
    }
    let mut sampler = NodeSampler::new(steps_per_slot, n_nodes);
    trace.iter().for_each(|&v| sampler.push(v));
    sampler.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn end_of_slot_index() {
        // theta = 50 ps at dt = 0.5 ps: node i of symbol b is sample 100 i + 99.
        let trace: Vec<f64> = (0..2 * 32 * 100).map(|i| i as f64).collect();
        let m = sample_nodes(&trace, 100, 32).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.row(0)[0], 99.0);
        assert_eq!(m.row(0)[5], 599.0);
        assert_eq!(m.row(1)[0], 3299.0);
    }

    #[test]
    fn constant_trace() {
        let m = sample_nodes(&[2.5; 3 * 4 * 10], 10, 4).unwrap();
        assert!(m.as_slice().iter().all(|&v| v == 2.5));
    }

    #[test]
    fn misaligned_rejected() {
        assert!(sample_nodes(&[0.0; 401], 10, 4).is_err());
    }
}

use alloc::format;
use alloc::vec::Vec;
use rand::Rng;

use crate::seed::{self, stream};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaskKind {
    /// Continuous uniform values in `[0, 1]`.
    #[default]
    Uniform,
    /// Values drawn from `{0, 1}`.
    Binary,
}

/// Per-node input weights shared by every symbol of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskConfig {
    pub values: Vec<f64>,
    pub kind: MaskKind,
    pub rng_seed: u64,
}

impl MaskConfig {
    pub fn random(n_nodes: usize, kind: MaskKind, rng_seed: u64) -> Self {
        let mut rng = seed::rng(rng_seed, stream::MASK);
        let values = (0..n_nodes)
            .map(|_| match kind {
                MaskKind::Uniform => rng.random::<f64>(),
                MaskKind::Binary => f64::from(rng.random::<bool>() as u8),
            })
            .collect();
        Self { values, kind, rng_seed }
    }

    pub fn n_nodes(&self) -> usize {
        self.values.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::config("mask.n_nodes", "must be >= 1"));
        }
        if let Some(i) = self.values.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::config(
                "mask.values",
                format!("value {} at {i} outside [0, 1]", self.values[i]),
            ));
        }
        Ok(())
    }
}

/// `out[b N + i] = mask[i] * s[b N + i]`: the mask repeats every baud.
pub fn apply_mask(samples: &[f64], mask: &MaskConfig) -> Result<Vec<f64>> {
    let n = mask.n_nodes();
    if n == 0 || !samples.len().is_multiple_of(n) {
        return Err(Error::input(
            "apply_mask",
            format!("waveform length {} is not a multiple of {n} nodes", samples.len()),
        ));
    }
    Ok(samples
        .chunks_exact(n)
        .flat_map(|baud| baud.iter().zip(&mask.values).map(|(s, m)| s * m))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn mask(values: Vec<f64>) -> MaskConfig {
        MaskConfig {
            values,
            kind: MaskKind::Uniform,
            rng_seed: 0,
        }
    }

    #[test]
    fn ones_zeros_and_unit_input() {
        let s: Vec<f64> = (0..8).map(|i| i as f64 / 8.0).collect();
        assert_eq!(apply_mask(&s, &mask(vec![1.0; 4])).unwrap(), s);
        assert!(apply_mask(&s, &mask(vec![0.0; 4])).unwrap().iter().all(|&v| v == 0.0));
        let m = vec![0.1, 0.7, 0.3, 0.9];
        assert_eq!(
            apply_mask(&[1.0; 8], &mask(m.clone())).unwrap(),
            [m.clone(), m].concat()
        );
    }

    #[test]
    fn length_mismatch() {
        assert!(apply_mask(&[1.0; 7], &mask(vec![1.0; 4])).is_err());
    }

    #[test]
    fn random_masks_in_range() {
        let u = MaskConfig::random(32, MaskKind::Uniform, 5);
        u.validate().unwrap();
        assert_eq!(u.n_nodes(), 32);
        let b = MaskConfig::random(32, MaskKind::Binary, 5);
        assert!(b.values.iter().all(|&v| v == 0.0 || v == 1.0));
        assert_eq!(MaskConfig::random(32, MaskKind::Uniform, 5), u);
    }
}

//! Conversion of the detected waveform into reservoir input, and of the
//! reservoir output into readout features.

mod features;
mod mask;
mod nodes;
mod normalize;

pub use features::{BlockMatrix, FeatureMatrix};
pub use mask::{apply_mask, MaskConfig, MaskKind};
pub use nodes::{sample_nodes, NodeSampler};
pub use normalize::{normalize, NormAffine, NormMode, APPLY_CLAMP};

/// Oversamples by zero-order hold: every sample is repeated `factor` times.
pub fn oversample(samples: &[f64], factor: usize) -> crate::Result<alloc::vec::Vec<f64>> {
    if factor == 0 {
        return Err(crate::Error::input("oversample", "factor must be >= 1"));
    }
    Ok(samples.iter().flat_map(|&v| core::iter::repeat_n(v, factor)).collect())
}

/// Slow-down of time-multiplexed processing: one baud stretched over one
/// delay, `(R/2) tau` for bit rate `R` (bit/s) and delay `tau` (s).
pub fn speed_penalty(bit_rate: f64, tau_s: f64) -> f64 {
    bit_rate / 2.0 * tau_s
}

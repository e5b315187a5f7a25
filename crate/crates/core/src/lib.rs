//! Simulation core for a PAM-4 intensity-modulation / direct-detection fiber
//! link equalized by a delay-based photonic reservoir computer.
//!
//! The crate is `no_std` (it only needs `alloc`). Everything here is a pure
//! function of its inputs and seeds: file formats, configuration files, the
//! command line and parallel sweep execution live in the `photorc` crate.
//!
//! Module map:
//!
//! - [`link`]: PAM-4 encoding, modulation, split-step fiber propagation,
//!   photodetection and optical noise loading.
//! - [`reservoir`]: Lang-Kobayashi laser with delayed feedback and optical
//!   injection, integrated with Euler-Maruyama.
//! - [`pipeline`]: normalization, oversampling, masking, node sampling and
//!   tap-windowed feature assembly.
//! - [`readout`]: ridge regression, PAM-4 slicing and BER counting.
//! - [`analysis`]: correlation, eye diagrams, sweep records and aggregation.
//! - [`experiment`]: end-to-end runs tying the stages together.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod fft;
pub mod link;
pub mod pipeline;
pub mod readout;
pub mod reservoir;
pub mod seed;
pub mod units;

pub use error::{Error, Result};
pub use num_complex;

/// Pre-correction BER below which hard-decision FEC decodes error-free.
pub const HD_FEC_BER: f64 = 3.8e-3;

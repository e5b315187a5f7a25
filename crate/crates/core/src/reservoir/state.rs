use alloc::vec::Vec;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::ReservoirParams;
use crate::seed::{self, stream, SimRng};

/// Dynamical state of the reservoir laser, including the feedback delay line
/// and the noise generator, so that integration can resume mid-stream.
#[derive(Debug, Clone)]
pub struct ReservoirState {
    pub e_r: Complex64,
    pub n_r: f64,
    /// Field history over the last `tau`; `delay[head]` is `E(t - tau)`.
    pub(crate) delay: Vec<Complex64>,
    pub(crate) head: usize,
    /// Global step counter; sets the phase of the detuned injection.
    pub(crate) step: u64,
    pub(crate) noise: SimRng,
}

impl ReservoirState {
    /// Small random field, carriers at transparency, empty delay line.
    pub fn new(params: &ReservoirParams) -> Self {
        Self::with_seeds(
            params,
            seed::derive(params.rng_seed, stream::RESERVOIR_INIT),
            seed::derive(params.rng_seed, stream::RESERVOIR_NOISE),
        )
    }

    /// Same as [`ReservoirState::new`] with explicit initial-condition and
    /// noise seeds.
    pub fn with_seeds(params: &ReservoirParams, init_seed: u64, noise_seed: u64) -> Self {
        let mut init = seed::rng(init_seed, 0);
        let re: f64 = StandardNormal.sample(&mut init);
        let im: f64 = StandardNormal.sample(&mut init);
        Self {
            e_r: Complex64::new(re, im) * 1e-2,
            n_r: params.n0,
            delay: alloc::vec![Complex64::new(0.0, 0.0); params.delay_steps()],
            head: 0,
            step: 0,
            noise: seed::rng(noise_seed, 0),
        }
    }

    /// Explicit state with an empty delay line and no elapsed time.
    pub fn from_parts(params: &ReservoirParams, e_r: Complex64, n_r: f64, noise_seed: u64) -> Self {
        Self {
            e_r,
            n_r,
            delay: alloc::vec![Complex64::new(0.0, 0.0); params.delay_steps()],
            head: 0,
            step: 0,
            noise: seed::rng(noise_seed, 0),
        }
    }

    pub fn intensity(&self) -> f64 {
        self.e_r.norm_sqr()
    }

    pub fn delay_len(&self) -> usize {
        self.delay.len()
    }

    /// Steps integrated so far.
    pub fn elapsed_steps(&self) -> u64 {
        self.step
    }

    pub fn is_finite(&self) -> bool {
        self.e_r.re.is_finite() && self.e_r.im.is_finite() && self.n_r.is_finite()
    }
}

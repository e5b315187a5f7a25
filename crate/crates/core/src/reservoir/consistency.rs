use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{integrate, warm_up, InjectionTrace, ReservoirParams, ReservoirState};
use crate::seed::{self, stream};
use crate::units::linear_to_db;
use crate::{Error, Result};

/// Consistency SNR (dB) of the reservoir response.
///
/// Replays the same injection `trials` times from the same initial condition
/// with independent noise and compares the variance of the trial-averaged
/// trace with the mean across-trial variance. Returns `+inf` when every
/// trial is identical.
pub fn consistency_probe(inj: &InjectionTrace, params: &ReservoirParams, trials: usize) -> Result<f64> {
    if trials < 2 {
        return Err(Error::input("consistency_probe", "need at least two trials"));
    }
    let init_seed = seed::derive(params.rng_seed, stream::RESERVOIR_INIT);
    let traces = (0..trials)
        .map(|t| {
            let noise_seed = seed::derive(seed::derive(params.rng_seed, stream::RESERVOIR_NOISE), 1 + t as u64);
            let mut state = ReservoirState::with_seeds(params, init_seed, noise_seed);
            warm_up(inj, params, &mut state)?;
            integrate(inj, params, &mut state)
        })
        .collect::<Result<Vec<_>>>()?;

    let len = traces[0].len();
    if len == 0 {
        return Err(Error::input("consistency_probe", "empty injection"));
    }
    if traces.iter().all(|t| t == &traces[0]) {
        return Ok(f64::INFINITY);
    }
    let k = trials as f64;
    let mut mean_trace = Vec::with_capacity(len);
    let mut noise_var = 0.0;
    for i in 0..len {
        let m = traces.iter().map(|t| t[i]).sum::<f64>() / k;
        noise_var += traces.iter().map(|t| (t[i] - m).powi(2)).sum::<f64>() / (k - 1.0);
        mean_trace.push(m);
    }
    noise_var /= len as f64;
    let mu = mean_trace.iter().sum::<f64>() / len as f64;
    let signal_var = mean_trace.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / len as f64;
    Ok(linear_to_db(signal_var / noise_var))
}

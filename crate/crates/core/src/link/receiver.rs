//! PIN photodiode + TIA: square-law detection, shot and thermal noise, and a
//! fourth-order Bessel low-pass applied in the frequency domain.

use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand_distr::{Distribution, StandardNormal};

use super::{DetectedWaveform, LinkConfig, OpticalField};
use crate::fft::{angular_frequencies, Fft};
use crate::seed::{self, stream};
use crate::units::{next_pow2, Q_E};
use crate::{Error, Result};

/// -3 dB angular frequency of the unit-delay fourth-order Bessel prototype.
pub const BESSEL4_CUTOFF: f64 = 2.113_917_674_904_148;
const FILTER_GUARD: usize = 64;

/// Frequency response of the fourth-order Bessel low-pass with -3 dB cutoff
/// `cutoff_hz`, evaluated at angular frequency `omega`.
pub fn bessel4_response(omega: f64, cutoff_hz: f64) -> Complex64 {
    let s = Complex64::new(0.0, omega * BESSEL4_CUTOFF / (2.0 * core::f64::consts::PI * cutoff_hz));
    let s2 = s * s;
    let den = s2 * s2 + s2 * s * 10.0 + s2 * 45.0 + s * 105.0 + 105.0;
    Complex64::new(105.0, 0.0) / den
}

/// Square-law detection with receiver noise and bandwidth limitation.
pub fn detect(field: &OpticalField, cfg: &LinkConfig) -> Result<DetectedWaveform> {
    cfg.validate()?;
    field.validate()?;
    if ((field.dt - cfg.dt()) / cfg.dt()).abs() > 1e-9 {
        return Err(Error::input(
            "detect",
            format!(
                "field sample interval {} s does not match the link's {} s",
                field.dt,
                cfg.dt()
            ),
        ));
    }
    let fs = 1.0 / field.dt;
    let mut rng = seed::rng(cfg.rng_seed, stream::RECEIVER);
    let thermal_var = cfg.thermal_noise_density * cfg.thermal_noise_density * fs / 2.0;

    let mut current: Vec<f64> = field.powers().iter().map(|p| cfg.responsivity * p).collect();
    if cfg.shot_noise || thermal_var > 0.0 {
        for i in current.iter_mut() {
            let shot_var = if cfg.shot_noise { Q_E * i.max(0.0) * fs } else { 0.0 };
            let z: f64 = StandardNormal.sample(&mut rng);
            *i += (shot_var + thermal_var).sqrt() * z;
        }
    }

    let filtered = lowpass(&current, field.dt, cfg.rx_cutoff_hz())?;
    let gain = cfg.tia_gain_linear();
    let samples = filtered.into_iter().map(|v| v * gain).collect();
    DetectedWaveform::new(samples, field.dt, cfg.baud_period())
}

/// Bessel low-pass of a real signal; edges are padded with the signal mean.
pub fn lowpass(signal: &[f64], dt: f64, cutoff_hz: f64) -> Result<Vec<f64>> {
    let n = signal.len();
    let n_fft = next_pow2(n + 2 * FILTER_GUARD);
    let mean = signal.iter().sum::<f64>() / n.max(1) as f64;
    let mut buf = alloc::vec![Complex64::new(mean, 0.0); n_fft];
    for (b, &v) in buf[FILTER_GUARD..].iter_mut().zip(signal) {
        *b = Complex64::new(v, 0.0);
    }
    let fft = Fft::new(n_fft)?;
    fft.forward(&mut buf);
    for (v, w) in buf.iter_mut().zip(angular_frequencies(n_fft, dt)) {
        *v *= bessel4_response(w, cutoff_hz);
    }
    fft.inverse(&mut buf);
    Ok(buf[FILTER_GUARD..FILTER_GUARD + n].iter().map(|c| c.re).collect())
}

use alloc::vec;
use alloc::vec::Vec;

use crate::link::DetectedWaveform;

/// Two-baud eye as a 2-D histogram. `counts[a * phase_bins + p]` holds the
/// samples with phase bin `p` and amplitude bin `a` (bin 0 = lowest).
#[derive(Debug, Clone, PartialEq)]
pub struct EyeDiagram {
    pub phase_bins: usize,
    pub amp_bins: usize,
    pub amp_min: f64,
    pub amp_max: f64,
    pub counts: Vec<u64>,
}

impl EyeDiagram {
    pub fn count(&self, amp: usize, phase: usize) -> u64 {
        self.counts[amp * self.phase_bins + phase]
    }

    /// Amplitude histogram over the phase bins of both eye centres.
    pub fn centre_profile(&self) -> Vec<u64> {
        let centres = [self.phase_bins / 4, 3 * self.phase_bins / 4];
        (0..self.amp_bins)
            .map(|a| centres.iter().map(|&p| self.count(a, p)).sum())
            .collect()
    }

    /// Number of separated amplitude bands at the eye centre: maximal runs
    /// of occupied amplitude bins.
    pub fn centre_bands(&self) -> usize {
        let mut bands = 0;
        let mut inside = false;
        for c in self.centre_profile() {
            if c > 0 && !inside {
                bands += 1;
            }
            inside = c > 0;
        }
        bands
    }
}

/// Folds the waveform modulo two baud periods onto `phase_bins` columns,
/// with amplitudes binned over the waveform's range into `amp_bins` rows.
pub fn eye_data(wave: &DetectedWaveform, phase_bins: usize, amp_bins: usize) -> EyeDiagram {
    let phase_bins = phase_bins.max(1);
    let amp_bins = amp_bins.max(1);
    let (lo, hi) = wave
        .samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
    let mut counts = vec![0u64; phase_bins * amp_bins];
    let period = 2.0 * wave.baud_period;
    for (i, &v) in wave.samples.iter().enumerate() {
        let t = (i as f64 * wave.dt) % period;
        let p = ((t / period * phase_bins as f64) as usize).min(phase_bins - 1);
        let a = if hi > lo {
            (((v - lo) / (hi - lo) * amp_bins as f64) as usize).min(amp_bins - 1)
        } else {
            0
        };
        counts[a * phase_bins + p] += 1;
    }
    EyeDiagram {
        phase_bins,
        amp_bins,
        amp_min: lo,
        amp_max: hi,
        counts,
    }
}

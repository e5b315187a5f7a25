use alloc::format;
use alloc::vec::Vec;

use crate::link::DetectedWaveform;
use crate::{Error, Result};

/// Range that applied (not fitted) normalization is clamped to.
pub const APPLY_CLAMP: (f64, f64) = (-0.1, 1.1);

/// Affine map `x -> (x - min) / (max - min)` fitted on a training span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormAffine {
    pub min: f64,
    pub max: f64,
}

pub enum NormMode {
    Fit,
    Apply(NormAffine),
}

impl NormAffine {
    pub fn fit(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::input("normalize", "empty waveform"));
        }
        let (min, max) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        if !((max - min).is_finite() && max > min) {
            return Err(Error::input(
                "normalize",
                format!("degenerate waveform: min {min} max {max}"),
            ));
        }
        Ok(Self { min, max })
    }

    pub fn map(&self, v: f64) -> f64 {
        (v - self.min) / (self.max - self.min)
    }

    /// Maps and clamps to [`APPLY_CLAMP`].
    pub fn apply(&self, samples: &[f64]) -> Vec<f64> {
        samples
            .iter()
            .map(|&v| self.map(v).clamp(APPLY_CLAMP.0, APPLY_CLAMP.1))
            .collect()
    }
}

/// Min/max normalization of a detected waveform, either fitting the affine
/// on this waveform or reusing a stored one.
pub fn normalize(wave: &DetectedWaveform, mode: NormMode) -> Result<(Vec<f64>, NormAffine)> {
    match mode {
        NormMode::Fit => {
            let affine = NormAffine::fit(&wave.samples)?;
            Ok((wave.samples.iter().map(|&v| affine.map(v)).collect(), affine))
        }
        NormMode::Apply(affine) => {
            if wave.samples.is_empty() {
                return Err(Error::input("normalize", "empty waveform"));
            }
            Ok((affine.apply(&wave.samples), affine))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    fn wave(samples: Vec<f64>) -> DetectedWaveform {
        DetectedWaveform::new(samples, 1.0, 8.0).unwrap()
    }

    #[test]
    fn constant_rejected() {
        assert!(normalize(&wave(vec![2.0; 16]), NormMode::Fit).is_err());
    }

    #[test]
    fn fit_maps_extremes() {
        let (s, a) = normalize(&wave(vec![3.0, 1.0, 5.0, 2.0]), NormMode::Fit).unwrap();
        assert_eq!(s, vec![0.5, 0.0, 1.0, 0.25]);
        assert_eq!(a, NormAffine { min: 1.0, max: 5.0 });
    }

    #[test]
    fn applied_values_are_clamped() {
        let a = NormAffine { min: 0.0, max: 1.0 };
        let (s, _) = normalize(&wave(vec![-5.0, 0.5, 7.0]), NormMode::Apply(a)).unwrap();
        assert_eq!(s, vec![-0.1, 0.5, 1.1]);
    }

    #[test]
    fn matched_distributions_rarely_clamp() {
        // Train and test drawn from the same distribution: the test set
        // should stay inside [0, 1] except for a tiny tail.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let dist = Normal::new(0.0, 1.0).unwrap();
        let n = 1 << 17;
        let train: Vec<f64> = (0..n).map(|_| dist.sample(&mut rng)).collect();
        let test: Vec<f64> = (0..n).map(|_| dist.sample(&mut rng)).collect();
        let affine = NormAffine::fit(&train).unwrap();
        let outside = test
            .iter()
            .map(|&v| affine.map(v))
            .filter(|v| !(0.0..=1.0).contains(v))
            .count();
        assert!((outside as f64) <= 1e-3 * n as f64, "{outside}");
    }
}

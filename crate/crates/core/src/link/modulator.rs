use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand_distr::{Distribution, StandardNormal};

use super::{LinkConfig, OpticalField, SymbolStream};
use crate::seed::{self, stream};
use crate::units::dbm_to_watts;
use crate::Result;

/// Optical power of each PAM-4 level as a fraction of the peak power.
///
/// Levels are equidistant in power; the lowest carries 1/21 of the peak
/// (about 13 dB extinction).
pub fn level_fractions() -> [f64; 4] {
    [3.0 / 63.0, 23.0 / 63.0, 43.0 / 63.0, 1.0]
}

/// Linear-regime MZM: rectangular per-baud power levels on the x
/// polarization, with multiplicative laser RIN drawn per sample.
pub fn modulate(symbols: &SymbolStream, cfg: &LinkConfig) -> Result<OpticalField> {
    cfg.validate()?;
    let spb = cfg.samples_per_baud;
    let peak = dbm_to_watts(cfg.launch_peak_power_dbm);
    let levels = level_fractions().map(|f| f * peak);
    let rin_std = cfg.rin_variance().sqrt();
    let mut rng = seed::rng(cfg.rng_seed, stream::RIN);

    let mut env_x = Vec::with_capacity(symbols.len() * spb);
    for &s in symbols.as_slice() {
        let p = levels[s as usize];
        for _ in 0..spb {
            let p = if rin_std > 0.0 {
                let z: f64 = StandardNormal.sample(&mut rng);
                (p * (1.0 + rin_std * z)).max(0.0)
            } else {
                p
            };
            env_x.push(Complex64::new(p.sqrt(), 0.0));
        }
    }
    if env_x.is_empty() {
        env_x.push(Complex64::new(0.0, 0.0));
    }
    OpticalField::x_polarized(env_x, cfg.dt(), cfg.wavelength_nm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn top_level_is_launch_peak() {
        let cfg = LinkConfig::default().noiseless();
        let f = modulate(&SymbolStream::new(vec![3, 0]).unwrap(), &cfg).unwrap();
        assert!((f.power(0) - 10e-3).abs() < 1e-15);
        assert!((f.power(8) - 10e-3 / 21.0).abs() < 1e-15);
        assert_eq!(f.len(), 16);
        assert!(f.env_y.iter().all(|v| v.norm_sqr() == 0.0));
    }

    #[test]
    fn levels_are_equidistant() {
        let l = level_fractions();
        let d = l[1] - l[0];
        for w in l.windows(2) {
            assert!((w[1] - w[0] - d).abs() < 1e-12);
        }
        assert_eq!(l[3], 1.0);
    }

    #[test]
    fn rin_variance_matches_closed_form() {
        // sigma^2 = 10^(RIN/10) * B over the Nyquist band; Monte-Carlo check
        // on 2^20 samples of a constant top level.
        let cfg = LinkConfig::default();
        let n = 1 << 17;
        let f = modulate(&SymbolStream::new(vec![3; n]).unwrap(), &cfg).unwrap();
        let peak = dbm_to_watts(cfg.launch_peak_power_dbm);
        let rel: Vec<f64> = f.powers().iter().map(|p| p / peak - 1.0).collect();
        let mean = rel.iter().sum::<f64>() / rel.len() as f64;
        let var = rel.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (rel.len() - 1) as f64;
        let expected = 10f64.powf(-15.0) * 224e9 / 2.0;
        assert!(rel.len() >= 1 << 20);
        assert!((var / expected - 1.0).abs() < 0.05, "var {var} expected {expected}");
    }
}

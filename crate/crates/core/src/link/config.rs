use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;

use crate::units::{db_to_linear, C_LIGHT};
use crate::{Error, Result};

/// Transmission link parameters, in the units engineers quote them in.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    /// Line rate (bit/s). PAM-4 carries two bits per baud.
    pub bit_rate: f64,
    pub fiber_length_km: f64,
    pub launch_peak_power_dbm: f64,
    pub attenuation_db_km: f64,
    pub dispersion_ps_nm_km: f64,
    /// Nonlinear index (m^2/W).
    pub n2: f64,
    pub a_eff_um2: f64,
    pub dgd_ps_km: f64,
    /// Transmitter relative intensity noise (dB/Hz); `-inf` disables it.
    pub rin_db_hz: f64,
    pub wavelength_nm: f64,
    pub samples_per_baud: usize,
    pub responsivity: f64,
    pub tia_gain_db: f64,
    /// Receiver low-pass cutoff as a fraction of the bit rate.
    pub rx_cutoff_fraction: f64,
    /// Input-referred thermal noise current density (A/sqrt(Hz)).
    pub thermal_noise_density: f64,
    pub shot_noise: bool,
    /// Nominal split-step length (m).
    pub step_m: f64,
    /// Clamp launch power at the Brillouin threshold estimate.
    pub sbs_clamp: bool,
    /// ASE loading at the receiver input (dB in 0.1 nm); `+inf` adds none.
    pub osnr_db: f64,
    pub rng_seed: u64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            bit_rate: 56e9,
            fiber_length_km: 27.0,
            launch_peak_power_dbm: 10.0,
            attenuation_db_km: 0.2,
            dispersion_ps_nm_km: 17.0,
            n2: 2.6e-20,
            a_eff_um2: 80.0,
            dgd_ps_km: 0.2,
            rin_db_hz: -150.0,
            wavelength_nm: 1550.0,
            samples_per_baud: 8,
            responsivity: 0.9,
            tia_gain_db: 10.0,
            rx_cutoff_fraction: 0.7,
            thermal_noise_density: 10e-12,
            shot_noise: true,
            step_m: 50.0,
            sbs_clamp: false,
            osnr_db: f64::INFINITY,
            rng_seed: 1,
        }
    }
}

impl LinkConfig {
    /// 56 Gb/s over 27 km.
    pub fn r1() -> Self {
        Self::default()
    }

    /// 112 Gb/s over 5.5 km.
    pub fn r2() -> Self {
        Self {
            bit_rate: 112e9,
            fiber_length_km: 5.5,
            ..Self::default()
        }
    }

    /// Zero-length link with every noise source switched off.
    pub fn back_to_back_noiseless() -> Self {
        Self {
            fiber_length_km: 0.0,
            ..Self::default()
        }
        .noiseless()
    }

    pub fn noiseless(mut self) -> Self {
        self.rin_db_hz = f64::NEG_INFINITY;
        self.thermal_noise_density = 0.0;
        self.shot_noise = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(field, format!("must be finite and > 0, got {v}")))
            }
        }
        fn non_negative(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::config(field, format!("must be finite and >= 0, got {v}")))
            }
        }
        positive("link.bit_rate", self.bit_rate)?;
        non_negative("link.fiber_length_km", self.fiber_length_km)?;
        if !self.launch_peak_power_dbm.is_finite() {
            return Err(Error::config("link.launch_peak_power_dbm", "must be finite"));
        }
        non_negative("link.attenuation_db_km", self.attenuation_db_km)?;
        if !self.dispersion_ps_nm_km.is_finite() {
            return Err(Error::config("link.dispersion_ps_nm_km", "must be finite"));
        }
        non_negative("link.n2", self.n2)?;
        positive("link.a_eff_um2", self.a_eff_um2)?;
        non_negative("link.dgd_ps_km", self.dgd_ps_km)?;
        if self.rin_db_hz.is_nan() || self.rin_db_hz == f64::INFINITY {
            return Err(Error::config("link.rin_db_hz", "must be finite or -inf"));
        }
        positive("link.wavelength_nm", self.wavelength_nm)?;
        if self.samples_per_baud < 4 || !self.samples_per_baud.is_multiple_of(2) {
            return Err(Error::config(
                "link.samples_per_baud",
                format!("must be even and >= 4, got {}", self.samples_per_baud),
            ));
        }
        positive("link.responsivity", self.responsivity)?;
        if !self.tia_gain_db.is_finite() {
            return Err(Error::config("link.tia_gain_db", "must be finite"));
        }
        if !(self.rx_cutoff_fraction > 0.0 && self.rx_cutoff_fraction <= 1.0) {
            return Err(Error::config(
                "link.rx_cutoff_fraction",
                format!("must lie in (0, 1], got {}", self.rx_cutoff_fraction),
            ));
        }
        non_negative("link.thermal_noise_density", self.thermal_noise_density)?;
        positive("link.step_m", self.step_m)?;
        if self.osnr_db.is_nan() || self.osnr_db == f64::NEG_INFINITY {
            return Err(Error::config("link.osnr_db", "must be finite or +inf"));
        }
        Ok(())
    }

    pub fn baud_rate(&self) -> f64 {
        self.bit_rate / 2.0
    }

    pub fn baud_period(&self) -> f64 {
        1.0 / self.baud_rate()
    }

    pub fn sample_rate(&self) -> f64 {
        self.baud_rate() * self.samples_per_baud as f64
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate()
    }

    pub fn length_m(&self) -> f64 {
        self.fiber_length_km * 1e3
    }

    /// Power attenuation coefficient (1/m).
    pub fn alpha(&self) -> f64 {
        self.attenuation_db_km * core::f64::consts::LN_10 / 10.0 / 1e3
    }

    /// Group-velocity dispersion (s^2/m) from the dispersion parameter D.
    pub fn beta2(&self) -> f64 {
        let d = self.dispersion_ps_nm_km * 1e-6; // s/m^2
        let lambda = self.wavelength_nm * 1e-9;
        -d * lambda * lambda / (2.0 * core::f64::consts::PI * C_LIGHT)
    }

    /// Kerr coefficient gamma = 2 pi n2 / (lambda A_eff) in 1/(W m).
    pub fn gamma(&self) -> f64 {
        2.0 * core::f64::consts::PI * self.n2 / (self.wavelength_nm * 1e-9 * self.a_eff_um2 * 1e-12)
    }

    /// Differential group delay (s/m).
    pub fn dgd_s_per_m(&self) -> f64 {
        self.dgd_ps_km * 1e-12 / 1e3
    }

    /// Effective nonlinear length (m).
    pub fn effective_length(&self) -> f64 {
        let a = self.alpha();
        let l = self.length_m();
        if a == 0.0 {
            l
        } else {
            (1.0 - (-a * l).exp()) / a
        }
    }

    pub fn rx_cutoff_hz(&self) -> f64 {
        self.rx_cutoff_fraction * self.bit_rate
    }

    pub fn tia_gain_linear(&self) -> f64 {
        db_to_linear(self.tia_gain_db / 2.0)
    }

    /// Single-sided RIN variance over the simulation's Nyquist band.
    pub fn rin_variance(&self) -> f64 {
        if self.rin_db_hz == f64::NEG_INFINITY {
            0.0
        } else {
            db_to_linear(self.rin_db_hz) * self.sample_rate() / 2.0
        }
    }

    /// Smith estimate of the stimulated Brillouin threshold (W), using a
    /// Brillouin gain of 5e-11 m/W.
    pub fn sbs_threshold(&self) -> f64 {
        const G_B: f64 = 5e-11;
        21.0 * self.a_eff_um2 * 1e-12 / (G_B * self.effective_length().max(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        LinkConfig::default().validate().unwrap();
        LinkConfig::r2().validate().unwrap();
        LinkConfig::back_to_back_noiseless().validate().unwrap();
    }

    #[test]
    fn derived_fiber_constants() {
        let c = LinkConfig::default();
        // SSMF at 1550 nm: beta2 ~ -21.7 ps^2/km, gamma ~ 1.32 /W/km.
        assert!((c.beta2() * 1e27 + 21.68).abs() < 0.05, "{}", c.beta2());
        assert!((c.gamma() * 1e3 - 1.3175).abs() < 1e-3, "{}", c.gamma());
        assert!((c.alpha() - 0.2 * 0.1 * core::f64::consts::LN_10 / 1e3).abs() < 1e-15);
    }

    #[test]
    fn receiver_cutoff_at_r1() {
        let c = LinkConfig::r1();
        assert!((c.rx_cutoff_hz() - 39.2e9).abs() < 1.0);
        assert!((c.sample_rate() - 224e9).abs() < 1.0);
    }

    #[test]
    fn rejects_bad_fields() {
        let c = LinkConfig {
            samples_per_baud: 5,
            ..LinkConfig::default()
        };
        assert!(matches!(
            c.validate(),
            Err(Error::InvalidConfig {
                field: "link.samples_per_baud",
                ..
            })
        ));
        for c in [
            LinkConfig {
                rx_cutoff_fraction: 1.5,
                ..LinkConfig::default()
            },
            LinkConfig {
                bit_rate: 0.0,
                ..LinkConfig::default()
            },
        ] {
            assert!(c.validate().is_err());
        }
    }
}

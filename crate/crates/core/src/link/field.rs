use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Dual-polarization complex envelope (sqrt(W)) on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalField {
    pub env_x: Vec<Complex64>,
    pub env_y: Vec<Complex64>,
    /// Sample interval (s).
    pub dt: f64,
    pub wavelength_nm: f64,
    /// Power spectral density (W/Hz, both polarizations) of the amplified
    /// spontaneous emission loaded onto this field; zero when none was added.
    pub ase_psd: f64,
}

impl OpticalField {
    pub fn new(env_x: Vec<Complex64>, env_y: Vec<Complex64>, dt: f64, wavelength_nm: f64) -> Result<Self> {
        let field = Self {
            env_x,
            env_y,
            dt,
            wavelength_nm,
            ase_psd: 0.0,
        };
        field.validate()?;
        Ok(field)
    }

    /// Field with all power in the x polarization.
    pub fn x_polarized(env_x: Vec<Complex64>, dt: f64, wavelength_nm: f64) -> Result<Self> {
        let env_y = alloc::vec![Complex64::new(0.0, 0.0); env_x.len()];
        Self::new(env_x, env_y, dt, wavelength_nm)
    }

    pub fn validate(&self) -> Result<()> {
        if self.env_x.is_empty() || self.env_x.len() != self.env_y.len() {
            return Err(Error::input(
                "optical_field",
                format!(
                    "polarization lengths {} / {} must be equal and nonzero",
                    self.env_x.len(),
                    self.env_y.len()
                ),
            ));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::input("optical_field", format!("dt {} must be > 0", self.dt)));
        }
        if let Some(i) = self
            .env_x
            .iter()
            .chain(&self.env_y)
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::input(
                "optical_field",
                format!("non-finite sample at flat index {i}"),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.env_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.env_x.is_empty()
    }

    /// Instantaneous power (W), summed over both polarizations.
    pub fn power(&self, i: usize) -> f64 {
        self.env_x[i].norm_sqr() + self.env_y[i].norm_sqr()
    }

    pub fn powers(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.power(i)).collect()
    }

    pub fn mean_power(&self) -> f64 {
        (0..self.len()).map(|i| self.power(i)).sum::<f64>() / self.len() as f64
    }

    /// Pulse energy (J).
    pub fn energy(&self) -> f64 {
        (0..self.len()).map(|i| self.power(i)).sum::<f64>() * self.dt
    }
}

/// Electrical waveform after the photoreceiver (arbitrary units).
#[derive(Debug, Clone, PartialEq)]
pub struct DetectedWaveform {
    pub samples: Vec<f64>,
    /// Sample interval (s).
    pub dt: f64,
    /// Symbol period (s).
    pub baud_period: f64,
}

impl DetectedWaveform {
    pub fn new(samples: Vec<f64>, dt: f64, baud_period: f64) -> Result<Self> {
        let w = Self {
            samples,
            dt,
            baud_period,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.baud_period > 0.0 && self.dt.is_finite() && self.baud_period.is_finite()) {
            return Err(Error::input("detected_waveform", "dt and baud period must be positive"));
        }
        let spb = self.baud_period / self.dt;
        if (spb - spb.round()).abs() > 1e-6 * spb {
            return Err(Error::input(
                "detected_waveform",
                format!("baud period is {spb} samples; must be an integer"),
            ));
        }
        if let Some(i) = self.samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(
                "detected_waveform",
                format!("non-finite sample at index {i}"),
            ));
        }
        Ok(())
    }

    pub fn samples_per_baud(&self) -> usize {
        (self.baud_period / self.dt).round() as usize
    }

    pub fn n_symbols(&self) -> usize {
        self.samples.len() / self.samples_per_baud()
    }
}

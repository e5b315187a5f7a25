//! Optical noise loading and OSNR bookkeeping.
//!
//! OSNR is the ratio of mean signal power to the ASE power in a 0.1 nm
//! reference bandwidth, counting both polarizations. The field tracks the ASE
//! spectral density it carries, so the noise estimate does not have to be
//! recovered from spectra whose NRZ sidelobes would swamp a 40 dB floor.

use alloc::format;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand_distr::{Distribution, StandardNormal};

use super::OpticalField;
use crate::seed::{self, stream};
use crate::units::{db_to_linear, linear_to_db, nm_to_hz_bandwidth};
use crate::{Error, Result};

pub const OSNR_REFERENCE_NM: f64 = 0.1;

/// OSNR in dB; `+inf` when no optical noise has been loaded.
pub fn measure_osnr(field: &OpticalField) -> Result<f64> {
    field.validate()?;
    if field.ase_psd <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let fs = 1.0 / field.dt;
    let noise_total = field.ase_psd * fs;
    let signal = field.mean_power() - noise_total;
    let b_ref = nm_to_hz_bandwidth(OSNR_REFERENCE_NM, field.wavelength_nm);
    Ok(linear_to_db(signal.max(0.0) / (field.ase_psd * b_ref)))
}

/// Adds circular white Gaussian noise to both polarizations so that the
/// field's OSNR becomes `target_db`. `+inf` returns the field unchanged.
pub fn add_ase_noise(field: &OpticalField, target_db: f64, seed: u64) -> Result<OpticalField> {
    field.validate()?;
    if target_db == f64::INFINITY {
        return Ok(field.clone());
    }
    if !target_db.is_finite() {
        return Err(Error::input(
            "add_ase_noise",
            format!("target OSNR {target_db} dB is not finite"),
        ));
    }
    let fs = 1.0 / field.dt;
    let signal = field.mean_power() - field.ase_psd * fs;
    if signal <= 0.0 {
        return Err(Error::input("add_ase_noise", "field carries no signal power"));
    }
    let current = measure_osnr(field)?;
    if current < target_db {
        return Err(Error::input(
            "add_ase_noise",
            format!("field OSNR is already {current:.2} dB, below the {target_db:.2} dB target"),
        ));
    }
    let b_ref = nm_to_hz_bandwidth(OSNR_REFERENCE_NM, field.wavelength_nm);
    let psd_target = signal / (db_to_linear(target_db) * b_ref);
    let psd_added = psd_target - field.ase_psd;
    // Each polarization gets half the power; each quadrature half of that.
    let sigma = (psd_added * fs / 4.0).sqrt();
    let mut rng = seed::rng(seed, stream::ASE);
    let mut out = field.clone();
    for v in out.env_x.iter_mut().chain(out.env_y.iter_mut()) {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *v += Complex64::new(sigma * re, sigma * im);
    }
    out.ase_psd = psd_target;
    Ok(out)
}

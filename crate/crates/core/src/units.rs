//! Physical constants and unit conversions.

#[allow(unused_imports)]
use num_traits::Float;
/// Elementary charge (C).
pub const Q_E: f64 = 1.602_176_634e-19;
/// Speed of light in vacuum (m/s).
pub const C_LIGHT: f64 = 299_792_458.0;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts / 1e-3).log10()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// Optical bandwidth (Hz) spanned by `width_nm` around `wavelength_nm`.
pub fn nm_to_hz_bandwidth(width_nm: f64, wavelength_nm: f64) -> f64 {
    let lambda = wavelength_nm * 1e-9;
    C_LIGHT * width_nm * 1e-9 / (lambda * lambda)
}

/// Smallest power of two that is `>= n` (and at least 1).
pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

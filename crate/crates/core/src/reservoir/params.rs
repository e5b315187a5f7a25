use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;

use crate::units::Q_E;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirParams {
    /// Linewidth enhancement factor.
    pub alpha_h: f64,
    /// Gain coefficient (1/ns).
    pub g_n: f64,
    /// Gain saturation coefficient.
    pub sat_s: f64,
    /// Carrier number at transparency.
    pub n0: f64,
    /// Carrier lifetime (ns).
    pub t_s: f64,
    /// Laser cavity round trip (ns).
    pub t_in: f64,
    /// Photon lifetime (ns).
    pub t_ph: f64,
    /// Bias current (A).
    pub bias_current: f64,
    /// Threshold current (A); informational.
    pub i_th: f64,
    pub k_f: f64,
    pub k_inj: f64,
    /// Feedback delay (ns).
    pub tau: f64,
    /// Injection minus reservoir frequency (GHz).
    pub delta_f: f64,
    /// Feedback round-trip phase, `omega_0 tau mod 2 pi` (rad).
    pub feedback_phase: f64,
    /// Langevin noise strength (1/ns).
    pub noise_d: f64,
    /// Mean injected field amplitude.
    pub e_inj0: f64,
    /// Integration step (ns).
    pub dt: f64,
    pub rng_seed: u64,
}

impl Default for ReservoirParams {
    fn default() -> Self {
        Self {
            alpha_h: 3.0,
            g_n: 1.2e-5,
            sat_s: 5e-7,
            n0: 1.5e8,
            t_s: 2.0,
            t_in: 1e-2,
            t_ph: 2e-3,
            bias_current: 15.3e-3,
            i_th: 15.37e-3,
            k_f: 0.05,
            k_inj: 0.15,
            tau: 1.6,
            delta_f: 0.0,
            feedback_phase: 0.0,
            noise_d: 3.0,
            e_inj0: 100.0,
            dt: 5e-4,
            rng_seed: 1,
        }
    }
}

impl ReservoirParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("reservoir.alpha_h", self.alpha_h),
            ("reservoir.g_n", self.g_n),
            ("reservoir.sat_s", self.sat_s),
            ("reservoir.n0", self.n0),
            ("reservoir.bias_current", self.bias_current),
            ("reservoir.i_th", self.i_th),
            ("reservoir.k_inj", self.k_inj),
            ("reservoir.feedback_phase", self.feedback_phase),
            ("reservoir.noise_d", self.noise_d),
            ("reservoir.e_inj0", self.e_inj0),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return Err(Error::config(field, format!("must be finite, got {v}")));
            }
        }
        for (field, v) in [
            ("reservoir.t_s", self.t_s),
            ("reservoir.t_in", self.t_in),
            ("reservoir.t_ph", self.t_ph),
            ("reservoir.tau", self.tau),
            ("reservoir.dt", self.dt),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(field, format!("must be > 0, got {v}")));
            }
        }
        if self.noise_d < 0.0 || self.k_inj < 0.0 || self.sat_s < 0.0 || self.g_n < 0.0 {
            return Err(Error::config("reservoir", "noise_d, k_inj, sat_s and g_n must be >= 0"));
        }
        if !(0.0..=0.2).contains(&self.k_f) {
            return Err(Error::config(
                "reservoir.k_f",
                format!("must lie in [0, 0.2], got {}", self.k_f),
            ));
        }
        if !(-50.0..=50.0).contains(&self.delta_f) {
            return Err(Error::config(
                "reservoir.delta_f",
                format!("must lie in [-50, 50] GHz, got {}", self.delta_f),
            ));
        }
        if self.dt > 1e-3 * self.tau * (1.0 + 1e-12) || self.dt > self.t_ph / 2.0 * (1.0 + 1e-12) {
            return Err(Error::config(
                "reservoir.dt",
                format!("{} ns exceeds min(1e-3 tau, t_ph / 2)", self.dt),
            ));
        }
        let steps = self.tau / self.dt;
        if (steps - steps.round()).abs() > 1e-6 * steps {
            return Err(Error::config("reservoir.dt", "tau must be an integer number of steps"));
        }
        Ok(())
    }

    /// Ring-buffer length: steps per feedback delay.
    pub fn delay_steps(&self) -> usize {
        (self.tau / self.dt).round() as usize
    }

    /// Node separation for `n_nodes` virtual nodes per delay (ns).
    pub fn theta(&self, n_nodes: usize) -> f64 {
        self.tau / n_nodes as f64
    }

    /// Pump term I/q in carriers per ns.
    pub fn pump_rate(&self) -> f64 {
        self.bias_current / Q_E * 1e-9
    }

    /// Angular detuning `2 pi (f_inj - f_r)` (rad/ns).
    pub fn delta_omega(&self) -> f64 {
        2.0 * core::f64::consts::PI * self.delta_f
    }

    /// Material gain at carrier number `n` and photon number `intensity`.
    pub fn gain(&self, n: f64, intensity: f64) -> f64 {
        self.g_n * (n - self.n0) / (1.0 + self.sat_s * intensity)
    }

    /// Carrier number where gain balances cavity loss (unsaturated).
    pub fn threshold_carriers(&self) -> f64 {
        self.n0 + 1.0 / (self.g_n * self.t_ph)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_valid_and_below_threshold() {
        let p = ReservoirParams::default();
        p.validate().unwrap();
        assert_eq!(p.delay_steps(), 3200);
        // Solitary laser is biased just under threshold.
        let n_ss = p.pump_rate() * p.t_s;
        assert!(n_ss < p.threshold_carriers());
        assert!(p.bias_current < p.i_th);
    }

    #[test]
    fn gain_vanishes_at_transparency() {
        let p = ReservoirParams::default();
        assert_eq!(p.gain(p.n0, 0.0), 0.0);
        assert_eq!(p.gain(p.n0, 1e6), 0.0);
    }

    #[test]
    fn node_spacing() {
        let p = ReservoirParams::default();
        assert!((p.theta(32) - 0.05).abs() < 1e-15);
        let short = ReservoirParams { tau: 0.8, ..p };
        assert!((short.theta(32) - 0.025).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = ReservoirParams {
            k_f: 0.3,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ReservoirParams {
            delta_f: 60.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ReservoirParams {
            dt: 2e-3,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ReservoirParams {
            dt: 3e-4,
            ..Default::default()
        };
        assert!(bad.validate().is_err(), "1.6 ns is not a multiple of 0.3 ps");
    }
}

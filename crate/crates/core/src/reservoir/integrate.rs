use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand_distr::{Distribution, StandardNormal};

use super::{InjectionTrace, ReservoirParams, ReservoirState};
use crate::{Error, Result};

/// Delays of warm-up integrated (and discarded) before recording.
pub const WARM_UP_DELAYS: usize = 20;

/// Euler-Maruyama integration over the whole injection; returns `|E|^2`
/// after every step.
pub fn integrate(inj: &InjectionTrace, params: &ReservoirParams, state: &mut ReservoirState) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(inj.len());
    integrate_with(inj, params, state, |v| out.push(v))?;
    Ok(out)
}

/// Streaming form of [`integrate`]: `sink` receives `|E|^2` after each step.
pub fn integrate_with(
    inj: &InjectionTrace,
    params: &ReservoirParams,
    state: &mut ReservoirState,
    mut sink: impl FnMut(f64),
) -> Result<()> {
    params.validate()?;
    if state.delay.len() != params.delay_steps() {
        return Err(Error::input(
            "integrate",
            format!(
                "delay line holds {} steps, parameters need {}",
                state.delay.len(),
                params.delay_steps()
            ),
        ));
    }
    let dt = params.dt;
    let lin = Complex64::new(0.5, 0.5 * params.alpha_h);
    let inv_tph = 1.0 / params.t_ph;
    let inv_ts = 1.0 / params.t_s;
    let pump = params.pump_rate();
    let fb = Complex64::from_polar(params.k_f / params.t_in, params.feedback_phase);
    let k_inj = params.k_inj / params.t_in;
    let dw = params.delta_omega();
    let rot_step = Complex64::from_polar(1.0, dw * dt);
    // xi is unit complex white noise, <xi(t) xi*(t')> = delta(t - t'):
    // each quadrature carries half of D dt.
    let noise_amp = (0.5 * params.noise_d * dt).sqrt();
    let (g_n, n0, sat) = (params.g_n, params.n0, params.sat_s);

    let mut e = state.e_r;
    let mut n = state.n_r;
    let mut head = state.head;
    let len = state.delay.len();

    for &amp in &inj.slots {
        // Re-anchor the detuning phasor every slot so rounding cannot drift.
        let mut rot = Complex64::from_polar(1.0, dw * dt * state.step as f64);
        let drive = k_inj * amp;
        for _ in 0..inj.steps_per_slot {
            let intensity = e.norm_sqr();
            let g = g_n * (n - n0) / (1.0 + sat * intensity);
            let delayed = state.delay[head];
            state.delay[head] = e;
            head += 1;
            if head == len {
                head = 0;
            }
            let de = lin * (g - inv_tph) * e + fb * delayed + rot * drive;
            let dn = pump - n * inv_ts - g * intensity;
            e += de * dt;
            if noise_amp > 0.0 {
                let re: f64 = StandardNormal.sample(&mut state.noise);
                let im: f64 = StandardNormal.sample(&mut state.noise);
                e += Complex64::new(re, im) * noise_amp;
            }
            n += dn * dt;
            rot *= rot_step;
            sink(e.norm_sqr());
        }
        state.step += inj.steps_per_slot as u64;
        if !(e.re.is_finite() && e.im.is_finite() && n.is_finite()) {
            state.e_r = e;
            state.n_r = n;
            state.head = head;
            return Err(Error::numerical(
                "integrate",
                format!(
                    "non-finite reservoir state after {} steps; dt {} ns is too large",
                    state.step, dt
                ),
            ));
        }
    }
    state.e_r = e;
    state.n_r = n;
    state.head = head;
    Ok(())
}

/// Drives the reservoir with the first symbol's injection held for
/// [`WARM_UP_DELAYS`] delays and discards the response.
pub fn warm_up(inj: &InjectionTrace, params: &ReservoirParams, state: &mut ReservoirState) -> Result<()> {
    if inj.n_symbols() == 0 {
        return Ok(());
    }
    let first = inj.symbols(0..1);
    for _ in 0..WARM_UP_DELAYS {
        integrate_with(&first, params, state, |_| {})?;
    }
    Ok(())
}

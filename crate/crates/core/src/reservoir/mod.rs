//! Delay-based photonic reservoir: a semiconductor laser with delayed optical
//! feedback and a time-multiplexed optical injection.
//!
//! The slowly varying field `E` and carrier number `N` follow the
//! Lang-Kobayashi equations with an injection term:
//!
//! ```text
//! dE/dt = (1 + i a)/2 [G - 1/t_ph] E + (k_f/t_in) E(t - tau) e^{i phi}
//!         + (k_inj/t_in) E_inj(t) e^{i dw t} + sqrt(D) xi(t)
//! dN/dt = I/q - N/t_s - G |E|^2
//! G     = g_n (N - N_0) / (1 + s |E|^2)
//! ```
//!
//! `E` is the envelope of `E e^{i w_r t}`, the convention the `(1 + i a)`
//! term belongs to, and `dw = 2 pi (f_inj - f_r)`. Negative detuning
//! (injection red of the free-running laser) is the side with the wide
//! stable-locking range.
//!
//! `xi` is unit complex white noise, `<xi(t) xi*(t')> = delta(t - t')`.
//! Time is in ns throughout this module.

mod consistency;
mod injection;
mod integrate;
mod params;
mod state;

pub use consistency::consistency_probe;
pub use injection::{build_injection, InjectionTrace};
pub use integrate::{integrate, integrate_with, warm_up, WARM_UP_DELAYS};
pub use params::ReservoirParams;
pub use state::ReservoirState;

//! PAM-4 IM/DD fiber link: transmitter, fiber and photoreceiver.

mod config;
mod fiber;
mod field;
mod modulator;
mod osnr;
mod pam4;
mod receiver;

pub use config::LinkConfig;
pub use fiber::{propagate, propagate_fixed_step, propagate_with_report, PropagationReport};
pub use field::{DetectedWaveform, OpticalField};
pub use modulator::{level_fractions, modulate};
pub use osnr::{add_ase_noise, measure_osnr, OSNR_REFERENCE_NM};
pub use pam4::{encode_pam4, SymbolStream, GRAY_MAP};
pub use receiver::{bessel4_response, detect, lowpass, BESSEL4_CUTOFF};

use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::ReservoirParams;
use crate::{Error, Result};

/// Injected field `E_inj0 (1/2 + v)` held over each node slot.
///
/// Stored as one amplitude per slot; [`InjectionTrace::sample`] expands it
/// onto the integration grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InjectionTrace {
    pub(crate) slots: Vec<f64>,
    pub(crate) steps_per_slot: usize,
    pub(crate) slots_per_symbol: usize,
}

impl InjectionTrace {
    pub fn slot_amplitudes(&self) -> &[f64] {
        &self.slots
    }

    pub fn steps_per_slot(&self) -> usize {
        self.steps_per_slot
    }

    pub fn slots_per_symbol(&self) -> usize {
        self.slots_per_symbol
    }

    /// Number of integration steps covered.
    pub fn len(&self) -> usize {
        self.slots.len() * self.steps_per_slot
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn n_symbols(&self) -> usize {
        self.slots.len() / self.slots_per_symbol
    }

    /// Injected field at integration step `i`.
    pub fn sample(&self, i: usize) -> Complex64 {
        Complex64::new(self.slots[i / self.steps_per_slot], 0.0)
    }

    /// Sub-trace covering symbols `range`.
    pub fn symbols(&self, range: core::ops::Range<usize>) -> Self {
        let n = self.slots_per_symbol;
        Self {
            slots: self.slots[range.start * n..range.end * n].to_vec(),
            ..*self
        }
    }
}

/// Builds the zero-order-hold injection from masked node values in `[0, 1]`
/// with slot width `theta` (ns). One symbol's nodes span one delay `tau`.
pub fn build_injection(masked: &[f64], theta: f64, params: &ReservoirParams) -> Result<InjectionTrace> {
    params.validate()?;
    let per_step = theta / params.dt;
    if !(per_step.is_finite() && per_step >= 1.0) || (per_step - per_step.round()).abs() > 1e-9 * per_step {
        return Err(Error::input(
            "build_injection",
            format!("theta {theta} ns is not an integer multiple of dt {} ns", params.dt),
        ));
    }
    let nodes = params.tau / theta;
    if (nodes - nodes.round()).abs() > 1e-9 * nodes {
        return Err(Error::input(
            "build_injection",
            format!("theta {theta} ns does not divide tau {} ns", params.tau),
        ));
    }
    let slots_per_symbol = nodes.round() as usize;
    if !masked.len().is_multiple_of(slots_per_symbol) {
        return Err(Error::input(
            "build_injection",
            format!(
                "{} node values is not a whole number of {slots_per_symbol}-node symbols",
                masked.len()
            ),
        ));
    }
    if let Some(i) = masked.iter().position(|v| !(v.is_finite() && (0.0..=1.0).contains(v))) {
        return Err(Error::input(
            "build_injection",
            format!("masked value {} at index {i} is outside [0, 1]", masked[i]),
        ));
    }
    Ok(InjectionTrace {
        slots: masked.iter().map(|v| params.e_inj0 * (0.5 + v)).collect(),
        steps_per_slot: per_step.round() as usize,
        slots_per_symbol,
    })
}

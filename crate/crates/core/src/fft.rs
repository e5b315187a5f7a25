//! Power-of-two complex FFT.
//!
//! Iterative decimation-in-time radix-2 transform with per-stage contiguous
//! twiddle tables, two stages per pass. Forward uses `exp(-i 2 pi k n / N)`; the inverse is scaled
//! by `1/N` so that `inverse(forward(x)) == x`.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Fft {
    n: usize,
    /// Twiddles for stage with half-width `m` live at `[m - 1, 2m - 1)`.
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
}

impl Fft {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::input("fft", alloc::format!("length {n} is not a power of two")));
        }
        let mut twiddles = Vec::with_capacity(n.saturating_sub(1));
        let mut m = 1;
        while m < n {
            for j in 0..m {
                let phase = -core::f64::consts::PI * j as f64 / m as f64;
                twiddles.push(Complex64::new(phase.cos(), phase.sin()));
            }
            m *= 2;
        }
        let bits = n.trailing_zeros();
        let bitrev = (0..n as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Ok(Self { n, twiddles, bitrev })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform::<false>(data);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform::<true>(data);
        let scale = 1.0 / self.n as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn transform<const INV: bool>(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.n, "fft length mismatch");
        for (i, &r) in self.bitrev.iter().enumerate() {
            let r = r as usize;
            if i < r {
                data.swap(i, r);
            }
        }
        // Two radix-2 stages per pass over the data (half-widths m and 2m);
        // the butterflies are the plain radix-2 ones, only the loop order
        // changes.
        let mut m = 1;
        while 4 * m <= self.n {
            let tw1 = &self.twiddles[m - 1..2 * m - 1];
            let (tw2a, tw2b) = self.twiddles[2 * m - 1..4 * m - 1].split_at(m);
            for block in data.chunks_exact_mut(4 * m) {
                let (q01, q23) = block.split_at_mut(2 * m);
                let (q0, q1) = q01.split_at_mut(m);
                let (q2, q3) = q23.split_at_mut(m);
                let quads = q0.iter_mut().zip(q1.iter_mut()).zip(q2.iter_mut().zip(q3.iter_mut()));
                let tws = tw1.iter().zip(tw2a.iter().zip(tw2b));
                for (((p0, p1), (p2, p3)), (&w1, (&w2, &w3))) in quads.zip(tws) {
                    let (w1, w2, w3) = if INV {
                        (w1.conj(), w2.conj(), w3.conj())
                    } else {
                        (w1, w2, w3)
                    };
                    let t1 = *p1 * w1;
                    let t3 = *p3 * w1;
                    let (b0, b1, b2, b3) = (*p0 + t1, *p0 - t1, *p2 + t3, *p2 - t3);
                    let u2 = b2 * w2;
                    let u3 = b3 * w3;
                    *p0 = b0 + u2;
                    *p2 = b0 - u2;
                    *p1 = b1 + u3;
                    *p3 = b1 - u3;
                }
            }
            m *= 4;
        }
        if m < self.n {
            for block in data.chunks_exact_mut(2 * m) {
                let (lo, hi) = block.split_at_mut(m);
                for ((a, b), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(&self.twiddles[m - 1..2 * m - 1]) {
                    let t = *b * if INV { w.conj() } else { w };
                    *b = *a - t;
                    *a += t;
                }
            }
        }
    }
}

/// Angular frequency (rad/s) of every FFT bin for sample spacing `dt`, in the
/// standard order (DC, positive, then negative frequencies).
pub fn angular_frequencies(n: usize, dt: f64) -> Vec<f64> {
    let df = 2.0 * core::f64::consts::PI / (n as f64 * dt);
    (0..n)
        .map(|k| {
            let k = if k < n.div_ceil(2) {
                k as f64
            } else {
                k as f64 - n as f64
            };
            k * df
        })
        .collect()
}

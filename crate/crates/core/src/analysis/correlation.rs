use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaggedCorrelation {
    pub r: f64,
    /// `b` is compared against `a` shifted by this many samples:
    /// `a[i]` pairs with `b[i + lag]`.
    pub lag: isize,
}

/// Pearson correlation of two equal-length sequences.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::input(
            "pearson",
            format!("need equal lengths >= 2, got {} and {}", a.len(), b.len()),
        ));
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::input("pearson", "zero-variance input"));
    }
    Ok(sab / (saa * sbb).sqrt())
}

/// Pearson correlation at the lag in `-max_lag ..= max_lag` with the
/// largest magnitude.
pub fn pearson_lagged(a: &[f64], b: &[f64], max_lag: usize) -> Result<LaggedCorrelation> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::input(
            "pearson_lagged",
            format!("need equal lengths >= 2, got {} and {}", a.len(), b.len()),
        ));
    }
    let n = a.len();
    let max_lag = max_lag.min(n - 2);
    let mut best: Option<LaggedCorrelation> = None;
    for lag in -(max_lag as isize)..=max_lag as isize {
        let (sa, sb) = if lag >= 0 {
            (&a[..n - lag as usize], &b[lag as usize..])
        } else {
            (&a[(-lag) as usize..], &b[..n - (-lag) as usize])
        };
        let r = match pearson(sa, sb) {
            Ok(r) => r,
            Err(_) if lag != 0 => continue,
            Err(e) => return Err(e),
        };
        if best.is_none_or(|b| r.abs() > b.r.abs()) {
            best = Some(LaggedCorrelation { r, lag });
        }
    }
    best.ok_or_else(|| Error::input("pearson_lagged", "zero-variance input"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn identical_and_negated() {
        let a = noise(1000, 1);
        let same = pearson_lagged(&a, &a, 5).unwrap();
        assert!((same.r - 1.0).abs() < 1e-12 && same.lag == 0);
        let neg: Vec<f64> = a.iter().map(|v| -v).collect();
        assert!((pearson_lagged(&a, &neg, 5).unwrap().r + 1.0).abs() < 1e-12);
    }

    #[test]
    fn finds_shift() {
        let a = noise(2000, 2);
        let mut b = alloc::vec![0.0; 2000];
        b[7..].copy_from_slice(&a[..1993]);
        let c = pearson_lagged(&a, &b, 20).unwrap();
        assert_eq!(c.lag, 7);
        assert!(c.r > 0.999);
    }

    #[test]
    fn independent_noise_is_uncorrelated() {
        let n = 100_000;
        let r = pearson(&noise(n, 3), &noise(n, 4)).unwrap();
        assert!(r.abs() < 3.0 / (n as f64).sqrt(), "{r}");
    }

    #[test]
    fn zero_variance_rejected() {
        assert!(pearson_lagged(&[1.0; 10], &noise(10, 5), 2).is_err());
    }
}

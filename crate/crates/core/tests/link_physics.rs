use num_complex::Complex64;
use photorc_core::link::{propagate, propagate_fixed_step, LinkConfig, OpticalField};
use proptest::prelude::*;

const C: f64 = 299_792_458.0;

/// Plain fiber with only the effects a test switches on.
fn bare(length_km: f64) -> LinkConfig {
    LinkConfig {
        fiber_length_km: length_km,
        attenuation_db_km: 0.0,
        dispersion_ps_nm_km: 0.0,
        n2: 0.0,
        dgd_ps_km: 0.0,
        ..LinkConfig::default()
    }
    .noiseless()
}

fn gaussian(n: usize, dt: f64, t0: f64, peak_w: f64) -> OpticalField {
    let env = (0..n)
        .map(|i| {
            let t = (i as f64 - n as f64 / 2.0) * dt;
            Complex64::new(peak_w.sqrt() * (-t * t / (2.0 * t0 * t0)).exp(), 0.0)
        })
        .collect();
    OpticalField::x_polarized(env, dt, 1550.0).unwrap()
}

fn rms_width(f: &OpticalField) -> f64 {
    let p = f.powers();
    let total: f64 = p.iter().sum();
    let mean = p.iter().enumerate().map(|(i, v)| i as f64 * v).sum::<f64>() / total;
    let var = p
        .iter()
        .enumerate()
        .map(|(i, v)| (i as f64 - mean).powi(2) * v)
        .sum::<f64>()
        / total;
    var.sqrt() * f.dt
}

fn total_energy(f: &OpticalField) -> f64 {
    f.env_x.iter().chain(&f.env_y).map(|v| v.norm_sqr()).sum::<f64>() * f.dt
}

#[test]
fn gaussian_pulse_broadens_as_predicted() {
    let (t0, l_km, d) = (20e-12, 27.0, 17.0);
    let cfg = LinkConfig {
        dispersion_ps_nm_km: d,
        ..bare(l_km)
    };
    let input = gaussian(4096, 1e-12, t0, 1e-6);
    let out = propagate(&input, &cfg).unwrap();
    let lambda = 1550e-9;
    let beta2 = d * 1e-6 * lambda * lambda / (2.0 * std::f64::consts::PI * C);
    let z_ld = beta2 * l_km * 1e3 / (t0 * t0);
    let expected = (1.0 + z_ld * z_ld).sqrt();
    let ratio = rms_width(&out) / rms_width(&input);
    assert!(
        (ratio / expected - 1.0).abs() < 0.01,
        "ratio {ratio}, expected {expected}"
    );
}

#[test]
fn attenuation_matches_decibel_loss() {
    let cfg = LinkConfig {
        attenuation_db_km: 0.2,
        ..bare(27.0)
    };
    let input = gaussian(512, 1e-12, 30e-12, 1e-3);
    let out = propagate(&input, &cfg).unwrap();
    let expected = 10f64.powf(-0.2 * 27.0 / 10.0);
    let ratio = total_energy(&out) / total_energy(&input);
    assert!((ratio / expected - 1.0).abs() < 1e-9);
}

#[test]
fn kerr_phase_of_continuous_wave() {
    let (p, l_km): (f64, f64) = (0.1, 27.0);
    let cfg = LinkConfig {
        attenuation_db_km: 0.2,
        n2: 2.6e-20,
        ..bare(l_km)
    };
    let n = 256;
    let input = OpticalField::x_polarized(vec![Complex64::new(p.sqrt(), 0.0); n], 1e-12, 1550.0).unwrap();
    let out = propagate(&input, &cfg).unwrap();
    let gamma = 2.0 * std::f64::consts::PI * 2.6e-20 / (1550e-9 * 80e-12);
    let alpha = 0.2 / (10.0 * std::f64::consts::LOG10_E) / 1e3;
    let l_eff = (1.0 - (-alpha * l_km * 1e3).exp()) / alpha;
    let expected = gamma * p * l_eff;
    let phase = out.env_x[n / 2].arg();
    assert!((phase - expected).abs() < 1e-6, "phase {phase}, expected {expected}");
}

#[test]
fn split_step_is_second_order() {
    let cfg = LinkConfig {
        attenuation_db_km: 0.2,
        dispersion_ps_nm_km: 17.0,
        n2: 2.6e-20,
        ..bare(10.0)
    };
    let input = gaussian(1024, 1e-12, 20e-12, 0.1);
    let runs: Vec<OpticalField> = [1000.0, 500.0, 250.0, 125.0]
        .iter()
        .map(|&h| propagate_fixed_step(&input, &cfg, h).unwrap())
        .collect();
    let diff = |a: &OpticalField, b: &OpticalField| {
        a.env_x
            .iter()
            .zip(&b.env_x)
            .map(|(u, v)| (u - v).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    for w in runs.windows(3) {
        let order = (diff(&w[0], &w[1]) / diff(&w[1], &w[2])).log2();
        assert!((1.7..=2.3).contains(&order), "order {order}");
    }
}

#[test]
fn lossless_fiber_conserves_energy() {
    let l_km = 10.0;
    let cfg = LinkConfig {
        dispersion_ps_nm_km: 17.0,
        n2: 2.6e-20,
        dgd_ps_km: 0.2,
        ..bare(l_km)
    };
    let mut input = gaussian(2048, 1e-12, 15e-12, 0.2);
    input.env_y = input.env_x.iter().map(|v| v * 0.5).collect();
    let out = propagate_fixed_step(&input, &cfg, 100.0).unwrap();
    let drift = (total_energy(&out) / total_energy(&input) - 1.0).abs() / l_km;
    assert!(drift < 1e-9, "relative energy drift {drift} per km");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn linear_fiber_superposes(
        a in prop::collection::vec(-1.0f64..1.0, 64),
        b in prop::collection::vec(-1.0f64..1.0, 64),
        length in 0.5f64..30.0,
    ) {
        let cfg = LinkConfig { attenuation_db_km: 0.2, dispersion_ps_nm_km: 17.0, dgd_ps_km: 0.2, ..bare(length) };
        let field = |v: &[f64]| {
            let x = v.iter().map(|&r| Complex64::new(r, 0.0)).collect::<Vec<_>>();
            let y = v.iter().rev().map(|&r| Complex64::new(0.0, r)).collect::<Vec<_>>();
            OpticalField::new(x, y, 4e-12, 1550.0).unwrap()
        };
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let (fa, fb, fs) = (
            propagate(&field(&a), &cfg).unwrap(),
            propagate(&field(&b), &cfg).unwrap(),
            propagate(&field(&sum), &cfg).unwrap(),
        );
        for i in 0..64 {
            prop_assert!((fa.env_x[i] + fb.env_x[i] - fs.env_x[i]).norm() < 1e-12);
            prop_assert!((fa.env_y[i] + fb.env_y[i] - fs.env_y[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn propagation_is_deterministic(seedish in 0u64..1000, p in 1e-4f64..0.05) {
        let cfg = LinkConfig { attenuation_db_km: 0.2, dispersion_ps_nm_km: 17.0, n2: 2.6e-20, ..bare(5.0) };
        let env: Vec<Complex64> = (0..128)
            .map(|i| Complex64::new((p * (((i as u64 * 31 + seedish) % 7) as f64 / 6.0)).sqrt(), 0.0))
            .collect();
        let f = OpticalField::x_polarized(env, 2e-12, 1550.0).unwrap();
        prop_assert_eq!(propagate(&f, &cfg).unwrap(), propagate(&f, &cfg).unwrap());
    }
}

use num_complex::Complex64;
use photorc_core::reservoir::{
    build_injection, consistency_probe, integrate, warm_up, InjectionTrace, ReservoirParams, ReservoirState,
};

fn quiet() -> ReservoirParams {
    ReservoirParams {
        k_f: 0.0,
        k_inj: 0.0,
        noise_d: 0.0,
        ..ReservoirParams::default()
    }
}

fn constant_injection(params: &ReservoirParams, value: f64, symbols: usize) -> InjectionTrace {
    build_injection(&vec![value; 32 * symbols], params.theta(32), params).unwrap()
}

#[test]
fn below_threshold_field_decays() {
    let p = quiet();
    let inj = constant_injection(&p, 0.0, 12);
    let mut st = ReservoirState::from_parts(&p, Complex64::new(10.0, 0.0), p.n0, 1);
    let trace = integrate(&inj, &p, &mut st).unwrap();
    let start = 100.0;
    let last = *trace.last().unwrap();
    assert!(last < 1e-6 * start, "final intensity {last}");
    // After the carriers settle the decay is monotone.
    let tail = &trace[trace.len() / 2..];
    assert!(tail.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn gain_is_zero_at_transparency() {
    let p = ReservoirParams::default();
    for intensity in [0.0, 1.0, 1e3, 1e6] {
        assert_eq!(p.gain(p.n0, intensity), 0.0);
    }
}

/// Steady state of the injected laser without feedback or noise, found by
/// bisection on the carrier balance with the field equation solved in
/// closed form for a given gain.
fn steady_state_intensity(p: &ReservoirParams, drive: f64) -> f64 {
    let inv_tph = 1.0 / p.t_ph;
    let pump = p.bias_current / 1.602_176_634e-19 * 1e-9;
    let k = p.k_inj / p.t_in * drive;
    let intensity = |g: f64| k * k / (0.25 * (1.0 + p.alpha_h * p.alpha_h) * (g - inv_tph).powi(2));
    let balance = |g: f64| {
        let s = intensity(g);
        let n = p.n0 + g * (1.0 + p.sat_s * s) / p.g_n;
        pump - n / p.t_s - g * s
    };
    // balance -> -inf as g -> 1/t_ph, and is positive for very negative g.
    let (mut lo, mut hi) = (-1e4, inv_tph - 1e-12);
    assert!(balance(lo) > 0.0 && balance(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if balance(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    intensity(0.5 * (lo + hi))
}

#[test]
fn constant_injection_reaches_steady_state() {
    let mut p = quiet();
    p.k_inj = 0.15;
    for value in [0.0, 0.4, 1.0] {
        let inj = constant_injection(&p, value, 40);
        let mut st = ReservoirState::from_parts(&p, Complex64::new(1.0, 0.0), p.n0, 1);
        let trace = integrate(&inj, &p, &mut st).unwrap();
        let expected = steady_state_intensity(&p, p.e_inj0 * (0.5 + value));
        let got = *trace.last().unwrap();
        assert!(
            ((got - expected) / expected).abs() < 1e-6,
            "value {value}: {got} vs {expected}"
        );
    }
}

#[test]
fn feedback_echoes_at_delay_multiples() {
    let mut p = quiet();
    p.k_f = 0.1;
    let inj = constant_injection(&p, 0.0, 4);
    let mut st = ReservoirState::from_parts(&p, Complex64::new(100.0, 0.0), p.n0, 1);
    let trace = integrate(&inj, &p, &mut st).unwrap();
    let d = p.delay_steps();
    for m in 1..=3 {
        let window = &trace[m * d - d / 2..m * d + d / 2];
        let (arg, peak) = window
            .iter()
            .enumerate()
            .fold((0, 0.0), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
        let at = m * d - d / 2 + arg;
        // The echo rises at m tau and peaks within a few photon lifetimes.
        assert!(at >= m * d && at < m * d + 40, "echo {m} at step {at}, tau = {d} steps");
        assert!(peak > 1e6 * trace[m * d - d / 2]);
    }
}

#[test]
fn identical_seeds_are_bit_identical() {
    let p = ReservoirParams::default();
    let inj = build_injection(
        &(0..32 * 6).map(|i| ((i * 37) % 17) as f64 / 16.0).collect::<Vec<_>>(),
        p.theta(32),
        &p,
    )
    .unwrap();
    let run = || {
        let mut st = ReservoirState::new(&p);
        warm_up(&inj, &p, &mut st).unwrap();
        integrate(&inj, &p, &mut st).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn euler_converges_at_first_order() {
    // Noiseless trajectory under smooth, slowly varying injection. The
    // differences between successive halvings of dt shrink by 2 per halving.
    let base = ReservoirParams {
        noise_d: 0.0,
        k_f: 0.05,
        tau: 1.6,
        dt: 5e-4,
        ..ReservoirParams::default()
    };
    let values: Vec<f64> = (0..32 * 3).map(|i| 0.5 + 0.4 * (i as f64 * 0.2).sin()).collect();
    let run = |div: usize| {
        let p = ReservoirParams {
            dt: base.dt / div as f64,
            ..base.clone()
        };
        let inj = build_injection(&values, p.theta(32), &p)
            .map_err(|e| format!("{e}"))
            .unwrap();
        let mut st = ReservoirState::from_parts(&p, Complex64::new(30.0, 0.0), 1.8e8, 1);
        let trace = integrate(&inj, &p, &mut st).unwrap();
        trace.iter().skip(div - 1).step_by(div).copied().collect::<Vec<f64>>()
    };
    let runs: Vec<Vec<f64>> = [1, 2, 4, 8].iter().map(|&d| run(d)).collect();
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let d: Vec<f64> = runs.windows(2).map(|w| diff(&w[0], &w[1])).collect();
    let o1 = (d[0] / d[1]).log2();
    let o2 = (d[1] / d[2]).log2();
    eprintln!("euler orders {o1:.3} {o2:.3}");
    assert!(
        (0.8..=1.2).contains(&o1) && (0.8..=1.2).contains(&o2),
        "orders {o1} {o2}"
    );
}

#[test]
fn noiseless_reservoir_is_fully_consistent() {
    let p = ReservoirParams {
        noise_d: 0.0,
        ..ReservoirParams::default()
    };
    let inj = build_injection(
        &(0..32 * 8).map(|i| ((i * 11) % 7) as f64 / 6.0).collect::<Vec<_>>(),
        p.theta(32),
        &p,
    )
    .unwrap();
    assert_eq!(consistency_probe(&inj, &p, 3).unwrap(), f64::INFINITY);
}

#[test]
fn chaotic_feedback_is_less_consistent() {
    let values: Vec<f64> = (0..32 * 48).map(|i| ((i * 29) % 13) as f64 / 12.0).collect();
    let snr = |k_f: f64| {
        let p = ReservoirParams {
            k_f,
            ..ReservoirParams::default()
        };
        let inj = build_injection(&values, p.theta(32), &p)
            .map_err(|e| format!("{e}"))
            .unwrap();
        consistency_probe(&inj, &p, 4).unwrap()
    };
    let (partial, chaotic) = (snr(0.05), snr(0.2));
    assert!(partial > chaotic + 10.0, "partial {partial} dB, chaotic {chaotic} dB");
}

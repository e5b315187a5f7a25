use photorc_core::link::SymbolStream;
use photorc_core::readout::{ber, predict, slice, train_ridge, DenseMatrix, DesignMatrix, NormalEquations, SplitSpec};
use proptest::prelude::*;

/// Gaussian elimination with partial pivoting on a square system.
#[allow(clippy::needless_range_loop)]
fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

fn dense(rows: usize, cols: usize, data: &[f64]) -> DenseMatrix {
    DenseMatrix::new(rows, cols, data.to_vec()).unwrap()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn vanishing_ridge_recovers_exact_solution() {
    let data = [
        4.0, 1.0, -2.0, 0.5, 3.0, //
        1.0, 5.0, 0.0, -1.0, 2.0, //
        -2.0, 0.0, 6.0, 1.5, -1.0, //
        0.5, -1.0, 1.5, 3.0, 0.0, //
        3.0, 2.0, -1.0, 0.0, 7.0,
    ];
    let y = [1.0, -2.0, 0.5, 3.0, -1.5];
    let x = dense(5, 5, &data);
    let ne = NormalEquations::accumulate(&x, &y, 0..5);
    let w = ne.solve(1e-12, 1e-8).unwrap();
    let rows: Vec<Vec<f64>> = data.chunks(5).map(|r| r.to_vec()).collect();
    let exact = gauss_solve(rows, y.to_vec());
    for (a, b) in w.iter().zip(&exact) {
        assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()), "{a} vs {b}");
    }
}

#[test]
fn duplicated_column_shares_weight() {
    let base: Vec<f64> = (0..200).map(|i| ((i * 7919) % 101) as f64 / 50.0 - 1.0).collect();
    let data: Vec<f64> = base.iter().flat_map(|&v| [v, v, 1.0]).collect();
    let y: Vec<f64> = base.iter().map(|v| 2.0 * v + 0.3).collect();
    let ne = NormalEquations::accumulate(&dense(200, 3, &data), &y, 0..200);
    let w = ne.solve(1e-3, 1e-8).unwrap();
    assert!((w[0] - w[1]).abs() < 1e-9);
    assert!((w[0] + w[1] - 2.0).abs() < 1e-3);
}

#[test]
fn huge_ridge_gives_chance_performance() {
    let n = 4000;
    let y = SymbolStream::random(n, 7);
    let data: Vec<f64> = y.as_slice().iter().flat_map(|&s| [s as f64, 1.0]).collect();
    let x = dense(n, 2, &data);
    let (model, _) = train_ridge(&x, &y, SplitSpec::default(), &[1e12]).unwrap();
    let hat = slice(&predict(&model, &x).unwrap());
    let b = ber(&hat, &y, 0).unwrap().ber;
    // Every prediction collapses onto the same level.
    assert!((b - 0.5).abs() < 0.05, "ber {b}");
}

#[test]
fn separable_symbols_are_recovered() {
    let n = 4000;
    let y = SymbolStream::random(n, 3);
    let data: Vec<f64> = y
        .as_slice()
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| [s as f64 + 0.05 * ((i * 13 % 17) as f64 / 16.0 - 0.5), 1.0])
        .collect();
    let x = dense(n, 2, &data);
    let grid: Vec<f64> = (-8..=4).map(|e| 10f64.powi(e)).collect();
    let (model, report) = train_ridge(&x, &y, SplitSpec::default(), &grid).unwrap();
    assert_eq!(report.n_train, 3000);
    let hat = slice(&predict(&model, &x).unwrap());
    assert_eq!(ber(&hat, &y, 0).unwrap().bit_errors, 0);
}

#[test]
fn threshold_ties_take_lower_level() {
    assert_eq!(
        slice(&[-2.0, 0.0, 2.0, -2.000001, 2.000001]).as_slice(),
        &[0, 1, 2, 0, 3]
    );
}

fn system() -> impl Strategy<Value = (usize, usize, Vec<f64>, Vec<f64>)> {
    (6usize..30, 1usize..6).prop_flat_map(|(rows, cols)| {
        (
            Just(rows),
            Just(cols),
            prop::collection::vec(-3.0f64..3.0, rows * cols),
            prop::collection::vec(-3.0f64..3.0, rows),
        )
    })
}

proptest! {
    #[test]
    fn weights_shrink_as_ridge_grows((rows, cols, data, y) in system()) {
        let ne = NormalEquations::accumulate(&dense(rows, cols, &data), &y, 0..rows);
        let mut last = f64::INFINITY;
        for e in -2..6 {
            let w = ne.solve(10f64.powi(e), 1e-8).unwrap();
            let n = norm(&w);
            prop_assert!(n <= last * (1.0 + 1e-9));
            last = n;
        }
    }

    #[test]
    fn accepted_solutions_meet_residual_bound((rows, cols, data, y) in system(), e in -4i32..4) {
        let ne = NormalEquations::accumulate(&dense(rows, cols, &data), &y, 0..rows);
        let lambda = 10f64.powi(e);
        if let Ok(w) = ne.solve(lambda, 1e-8) {
            prop_assert!(ne.residual_norm(&w, lambda) <= 1e-8 * norm(&ne.xty).max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn feature_scaling_is_absorbed_by_ridge((rows, cols, data, y) in system(), c in 0.1f64..10.0, lambda in 0.01f64..10.0) {
        let x = dense(rows, cols, &data);
        let scaled: Vec<f64> = data.iter().map(|v| v * c).collect();
        let xs = dense(rows, cols, &scaled);
        let w = NormalEquations::accumulate(&x, &y, 0..rows).solve(lambda, 1e-8).unwrap();
        let ws = NormalEquations::accumulate(&xs, &y, 0..rows).solve(lambda * c * c, 1e-8).unwrap();
        let mut row = vec![0.0; cols];
        let mut rows_s = vec![0.0; cols];
        for r in 0..rows {
            x.fill_row(r, &mut row);
            xs.fill_row(r, &mut rows_s);
            let p: f64 = row.iter().zip(&w).map(|(a, b)| a * b).sum();
            let ps: f64 = rows_s.iter().zip(&ws).map(|(a, b)| a * b).sum();
            prop_assert!((p - ps).abs() < 1e-8 * (1.0 + p.abs()));
        }
    }

    #[test]
    fn gray_coding_bounds_bit_errors(pairs in prop::collection::vec((0u8..4, 0u8..4), 1..200)) {
        let (a, b): (Vec<u8>, Vec<u8>) = pairs.into_iter().unzip();
        let r = ber(&SymbolStream::new(a.clone()).unwrap(), &SymbolStream::new(b.clone()).unwrap(), 0).unwrap();
        prop_assert!(r.bit_errors >= r.symbol_errors && r.bit_errors <= 2 * r.symbol_errors);
        prop_assert!(r.ber <= r.ser);
        let adjacent = a.iter().zip(&b).all(|(x, y)| x.abs_diff(*y) <= 1);
        if adjacent {
            prop_assert_eq!(r.bit_errors, r.symbol_errors);
        }
    }

    #[test]
    fn ber_of_random_flips_within_binomial_interval(p in 0.01f64..0.3, seed in 0u64..1000) {
        // Replace each symbol by its neighbour with probability p: one bit
        // error per flip, so the BER estimate is binomial with mean p / 2.
        let n = 20_000;
        let y = SymbolStream::random(n, seed);
        let coin = SymbolStream::random(4 * n, seed + 1);
        let hat: Vec<u8> = y.as_slice().iter().enumerate().map(|(i, &s)| {
            let u = coin.as_slice()[4 * i..4 * i + 4].iter().fold(0.0, |acc, &d| acc / 4.0 + d as f64 / 4.0);
            if u < p { if s == 3 { 2 } else { s + 1 } } else { s }
        }).collect();
        let r = ber(&SymbolStream::new(hat).unwrap(), &y, 0).unwrap();
        // u is quantized to 1/256, so the flip probability is ceil(256 p)/256.
        let q = (256.0 * p).ceil() / 256.0;
        let mean = q / 2.0;
        let sd = (q * (1.0 - q) / n as f64).sqrt() / 2.0;
        prop_assert!((r.ber - mean).abs() < 5.0 * sd, "ber {} mean {}", r.ber, mean);
    }
}

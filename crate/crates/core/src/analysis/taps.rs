use alloc::vec::Vec;

use crate::experiment::{reservoir_responses, Capture, ExperimentConfig};
use crate::pipeline::{FeatureMatrix, NormAffine};
use crate::readout::{
    baseline_features, baseline_lr, ber, predict_and_slice, train_ridge_with, BerReport, NaiveSlicer,
};
use crate::{Error, Result};

/// Error rates of one tap count on one test set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TapPoint {
    pub taps: usize,
    pub test_set: usize,
    pub rc: BerReport,
    pub lr: BerReport,
    pub naive: BerReport,
}

/// Reservoir and linear-regression error rates for each tap count in
/// `taps`. Node responses are computed once per stream and shared by all
/// tap counts; every count is scored on the same symbols, skipping the
/// largest tap count at each edge.
pub fn tap_study(
    cfg: &ExperimentConfig,
    train: Capture<'_>,
    tests: &[Capture<'_>],
    taps: &[usize],
) -> Result<Vec<TapPoint>> {
    cfg.validate()?;
    let skip = match taps.iter().max() {
        Some(&m) => m,
        None => return Err(Error::input("tap_study", "no tap counts given")),
    };
    let affine = NormAffine::fit(&train.wave.samples)?;
    let normalized: Vec<f64> = train.wave.samples.iter().map(|&v| affine.map(v)).collect();
    let mut train_nodes = reservoir_responses(&normalized, cfg, train.noise_seed)?;
    let ranges = train_nodes.column_ranges(0..train_nodes.rows());
    train_nodes.scale_columns(&ranges);
    let test_nodes = tests
        .iter()
        .map(|t| {
            let mut n = reservoir_responses(&affine.apply(&t.wave.samples), cfg, t.noise_seed)?;
            n.scale_columns(&ranges);
            Ok(n)
        })
        .collect::<Result<Vec<_>>>()?;
    let naive = NaiveSlicer::fit(train.wave, train.symbols)?;
    let naive_ber = tests
        .iter()
        .map(|t| ber(&naive.apply(t.wave)?, t.symbols, skip))
        .collect::<Result<Vec<_>>>()?;

    let (split, grid) = (cfg.pipeline.split, &cfg.pipeline.lambda_grid);
    let mut out = Vec::with_capacity(taps.len() * tests.len());
    for &k in taps {
        let features = FeatureMatrix::new(train_nodes.clone(), k)?;
        let (model, _) = train_ridge_with(&features, train.symbols, split, grid, k)?;
        let (lr, _) = baseline_lr(train.wave, train.symbols, split, grid, k)?;
        let lr_affine = lr
            .norm_affine
            .ok_or_else(|| Error::input("tap_study", "baseline lacks normalization"))?;
        for (i, t) in tests.iter().enumerate() {
            let f = FeatureMatrix::new(test_nodes[i].clone(), k)?;
            let rc = ber(&predict_and_slice(&model, &f)?, t.symbols, skip)?;
            let lf = baseline_features(t.wave, lr_affine, k)?;
            let lr_ber = ber(&predict_and_slice(&lr, &lf)?, t.symbols, skip)?;
            out.push(TapPoint {
                taps: k,
                test_set: i,
                rc,
                lr: lr_ber,
                naive: naive_ber[i],
            });
        }
    }
    Ok(out)
}

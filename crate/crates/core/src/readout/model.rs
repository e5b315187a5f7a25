use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{ber_ranges, DesignMatrix, NormalEquations};
use crate::link::{DetectedWaveform, SymbolStream};
use crate::pipeline::{BlockMatrix, FeatureMatrix, NormAffine};
use crate::{Error, Result};

/// Regression targets for symbols 0..=3.
pub const TARGET_LEVELS: [f64; 4] = [-3.0, -1.0, 1.0, 3.0];
/// Midpoints between adjacent target levels.
pub const SLICER_THRESHOLDS: [f64; 3] = [-2.0, 0.0, 2.0];

/// Relative normal-equation residual every accepted fit must meet.
const RESIDUAL_TOL: f64 = 1e-8;

/// Train/validation split of the training stream. The test stream is
/// always generated independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self { train_fraction: 0.75 }
    }
}

impl SplitSpec {
    pub fn validation_fraction(&self) -> f64 {
        1.0 - self.train_fraction
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::config("readout.train_fraction", "must lie in (0, 1)"));
        }
        Ok(())
    }

    fn n_train(&self, rows: usize) -> usize {
        ((rows as f64) * self.train_fraction).round() as usize
    }
}

/// 13 values, one per decade from 1e-8 to 1e4.
pub fn default_lambda_grid() -> Vec<f64> {
    (-8..=4).map(|e| 10f64.powi(e)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutModel {
    pub weights: Vec<f64>,
    pub ridge_lambda: f64,
    pub target_levels: [f64; 4],
    pub slicer_thresholds: [f64; 3],
    /// Input normalization fitted on the training waveform.
    pub norm_affine: Option<NormAffine>,
    /// Per-feature-block (min, max) fitted on the training responses.
    pub feature_ranges: Vec<(f64, f64)>,
    pub taps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub lambda: f64,
    /// NaN when the point was skipped.
    pub validation_ber: f64,
    pub validation_mse: f64,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingReport {
    pub grid: Vec<GridPoint>,
    pub n_train: usize,
    pub n_validation: usize,
}

pub fn symbols_to_levels(y: &SymbolStream) -> Vec<f64> {
    y.as_slice().iter().map(|&s| TARGET_LEVELS[s as usize]).collect()
}

/// Nearest-level decision; a value exactly on a threshold takes the lower
/// level.
pub fn slice(pred: &[f64]) -> SymbolStream {
    let symbols = pred
        .iter()
        .map(|&v| SLICER_THRESHOLDS.iter().filter(|&&t| v > t).count() as u8)
        .collect();
    SymbolStream::new(symbols).expect("slicer emits symbols 0..=3")
}

pub fn levels_to_symbols(pred: &[f64]) -> SymbolStream {
    slice(pred)
}

pub fn predict<X: DesignMatrix + ?Sized>(model: &ReadoutModel, x: &X) -> Result<Vec<f64>> {
    predict_rows(&model.weights, x, 0..x.rows())
}

fn predict_rows<X: DesignMatrix + ?Sized>(w: &[f64], x: &X, rows: core::ops::Range<usize>) -> Result<Vec<f64>> {
    if x.cols() != w.len() {
        return Err(Error::input(
            "predict",
            format!("feature matrix has {} columns, model expects {}", x.cols(), w.len()),
        ));
    }
    let mut row = vec![0.0; w.len()];
    Ok(rows
        .map(|r| {
            x.fill_row(r, &mut row);
            row.iter().zip(w).map(|(a, b)| a * b).sum()
        })
        .collect())
}

pub fn predict_and_slice<X: DesignMatrix + ?Sized>(model: &ReadoutModel, x: &X) -> Result<SymbolStream> {
    Ok(slice(&predict(model, x)?))
}

/// [`train_ridge_with`] counting every validation row.
pub fn train_ridge<X: DesignMatrix + ?Sized>(
    x: &X,
    y: &SymbolStream,
    split: SplitSpec,
    lambda_grid: &[f64],
) -> Result<(ReadoutModel, TrainingReport)> {
    train_ridge_with(x, y, split, lambda_grid, 0)
}

/// Fits ridge weights on the first `train_fraction` of the rows for every
/// λ, picks the λ with the lowest validation BER (ties broken by
/// validation MSE) and refits on all rows. The last `skip_tail` rows are
/// left out of validation scoring.
pub fn train_ridge_with<X: DesignMatrix + ?Sized>(
    x: &X,
    y: &SymbolStream,
    split: SplitSpec,
    lambda_grid: &[f64],
    skip_tail: usize,
) -> Result<(ReadoutModel, TrainingReport)> {
    split.validate()?;
    if x.rows() != y.len() {
        return Err(Error::input(
            "train_ridge",
            format!("{} feature rows for {} symbols", x.rows(), y.len()),
        ));
    }
    if lambda_grid.is_empty() || lambda_grid.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
        return Err(Error::config(
            "readout.lambda_grid",
            "must be a nonempty list of finite values >= 0",
        ));
    }
    let rows = x.rows();
    let n_train = split.n_train(rows);
    let val_end = rows.saturating_sub(skip_tail);
    if n_train == 0 || val_end <= n_train {
        return Err(Error::input("train_ridge", format!("{rows} rows are too few to split")));
    }
    let targets = symbols_to_levels(y);
    let ne_train = NormalEquations::accumulate(x, &targets, 0..n_train);

    let mut grid = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let point = match ne_train.solve(lambda, RESIDUAL_TOL) {
            Ok(w) => {
                let pred = predict_rows(&w, x, n_train..val_end)?;
                let mse = pred
                    .iter()
                    .zip(&targets[n_train..val_end])
                    .map(|(p, t)| (p - t) * (p - t))
                    .sum::<f64>()
                    / pred.len() as f64;
                let mut hat = y.as_slice().to_vec();
                hat[n_train..val_end].copy_from_slice(slice(&pred).as_slice());
                let b = ber_ranges(&SymbolStream::new(hat)?, y, n_train..val_end)?;
                GridPoint {
                    lambda,
                    validation_ber: b.ber,
                    validation_mse: mse,
                    skipped: None,
                }
            }
            Err(e) => GridPoint {
                lambda,
                validation_ber: f64::NAN,
                validation_mse: f64::NAN,
                skipped: Some(format!("{e}")),
            },
        };
        grid.push(point);
    }

    let mut order: Vec<&GridPoint> = grid.iter().filter(|p| p.skipped.is_none()).collect();
    order.sort_by(|a, b| {
        a.validation_ber
            .total_cmp(&b.validation_ber)
            .then(a.validation_mse.total_cmp(&b.validation_mse))
    });
    if order.is_empty() {
        return Err(Error::numerical("train_ridge", "every lambda on the grid was rejected"));
    }
    let ne_val = NormalEquations::accumulate(x, &targets, n_train..rows);
    let ne_all = ne_train.add(&ne_val);
    // Refit at the best λ; fall back down the ranking if the pooled system
    // fails its residual check.
    let mut last_err = None;
    for p in &order {
        match ne_all.solve(p.lambda, RESIDUAL_TOL) {
            Ok(weights) => {
                let model = ReadoutModel {
                    weights,
                    ridge_lambda: p.lambda,
                    target_levels: TARGET_LEVELS,
                    slicer_thresholds: SLICER_THRESHOLDS,
                    norm_affine: None,
                    feature_ranges: Vec::new(),
                    taps: 0,
                };
                let report = TrainingReport {
                    grid: grid.clone(),
                    n_train,
                    n_validation: rows - n_train,
                };
                return Ok((model, report));
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("nonempty ranking"))
}

/// Linear regression on the raw detected samples: the same tap windowing
/// and λ selection as the reservoir readout, with the reservoir removed.
/// `wave` is normalized with an affine fitted on itself.
pub fn baseline_lr(
    wave: &DetectedWaveform,
    y: &SymbolStream,
    split: SplitSpec,
    lambda_grid: &[f64],
    taps: usize,
) -> Result<(ReadoutModel, TrainingReport)> {
    let affine = NormAffine::fit(&wave.samples)?;
    let features = baseline_features(wave, affine, taps)?;
    let (mut model, report) = train_ridge_with(&features, y, split, lambda_grid, taps)?;
    model.norm_affine = Some(affine);
    model.taps = taps;
    Ok((model, report))
}

/// Features for the linear baseline: one block of `samples_per_baud`
/// normalized samples per symbol.
pub fn baseline_features(wave: &DetectedWaveform, affine: NormAffine, taps: usize) -> Result<FeatureMatrix> {
    wave.validate()?;
    let blocks = BlockMatrix::from_signal(affine.apply(&wave.samples), wave.samples_per_baud())?;
    FeatureMatrix::new(blocks, taps)
}

/// Threshold detector on one sample per baud, with thresholds at the
/// midpoints of the per-level means seen on training data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveSlicer {
    pub sample_offset: usize,
    pub thresholds: [f64; 3],
}

impl NaiveSlicer {
    pub fn fit(wave: &DetectedWaveform, y: &SymbolStream) -> Result<Self> {
        wave.validate()?;
        let sps = wave.samples_per_baud();
        if wave.n_symbols() != y.len() {
            return Err(Error::input(
                "naive_slicer",
                format!(
                    "{} symbols in waveform, {} reference symbols",
                    wave.n_symbols(),
                    y.len()
                ),
            ));
        }
        let offset = sps / 2;
        let mut sum = [0.0; 4];
        let mut count = [0usize; 4];
        for (b, &s) in y.as_slice().iter().enumerate() {
            sum[s as usize] += wave.samples[b * sps + offset];
            count[s as usize] += 1;
        }
        if count.contains(&0) {
            return Err(Error::input("naive_slicer", "training stream lacks a PAM-4 level"));
        }
        let mut means = [0.0; 4];
        for i in 0..4 {
            means[i] = sum[i] / count[i] as f64;
        }
        means.sort_by(f64::total_cmp);
        Ok(Self {
            sample_offset: offset,
            thresholds: [
                0.5 * (means[0] + means[1]),
                0.5 * (means[1] + means[2]),
                0.5 * (means[2] + means[3]),
            ],
        })
    }

    pub fn apply(&self, wave: &DetectedWaveform) -> Result<SymbolStream> {
        wave.validate()?;
        let sps = wave.samples_per_baud();
        if self.sample_offset >= sps {
            return Err(Error::input("naive_slicer", "sampling offset beyond one baud"));
        }
        let symbols = wave
            .samples
            .chunks_exact(sps)
            .map(|baud| {
                self.thresholds
                    .iter()
                    .filter(|&&t| baud[self.sample_offset] > t)
                    .count() as u8
            })
            .collect();
        SymbolStream::new(symbols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::readout::DenseMatrix;

    #[test]
    fn slicing_rules() {
        assert_eq!(slice(&[2.9, -2.0, 0.0, 2.0, -7.0, 0.1]).as_slice(), &[3, 0, 1, 2, 0, 2]);
    }

    #[test]
    fn thresholds_are_midpoints() {
        for i in 0..3 {
            assert_eq!(SLICER_THRESHOLDS[i], 0.5 * (TARGET_LEVELS[i] + TARGET_LEVELS[i + 1]));
        }
        assert_eq!(default_lambda_grid().len(), 13);
    }

    #[test]
    fn separable_data_trains_to_zero_errors() {
        let y = SymbolStream::random(400, 9);
        let data: Vec<f64> = y.as_slice().iter().flat_map(|&s| [s as f64 * 0.3 + 0.1, 1.0]).collect();
        let x = DenseMatrix::new(400, 2, data).unwrap();
        let (m, report) = train_ridge(&x, &y, SplitSpec::default(), &default_lambda_grid()).unwrap();
        assert_eq!(report.n_train, 300);
        let hat = predict_and_slice(&m, &x).unwrap();
        assert_eq!(hat, y);
    }

    #[test]
    fn column_mismatch() {
        let m = ReadoutModel {
            weights: vec![1.0; 3],
            ridge_lambda: 1.0,
            target_levels: TARGET_LEVELS,
            slicer_thresholds: SLICER_THRESHOLDS,
            norm_affine: None,
            feature_ranges: Vec::new(),
            taps: 0,
        };
        let x = DenseMatrix::new(1, 2, vec![1.0, 2.0]).unwrap();
        assert!(predict(&m, &x).is_err());
    }
}

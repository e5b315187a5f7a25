//! Linear readout: ridge regression on tap-windowed features, PAM-4
//! slicing and bit-error counting.

mod ber;
mod linalg;
mod model;

pub use ber::{ber, ber_ranges, BerReport};
pub use linalg::{cholesky_solve, DenseMatrix, DesignMatrix, NormalEquations};
pub use model::{
    baseline_features, baseline_lr, default_lambda_grid, levels_to_symbols, predict, predict_and_slice, slice,
    symbols_to_levels, train_ridge, train_ridge_with, GridPoint, NaiveSlicer, ReadoutModel, SplitSpec, TrainingReport,
    SLICER_THRESHOLDS, TARGET_LEVELS,
};

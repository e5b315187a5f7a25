//! Diagnostics and sweep bookkeeping.

mod correlation;
mod eye;
mod sweep;
mod taps;

pub use correlation::{pearson, pearson_lagged, LaggedCorrelation};
pub use eye::{eye_data, EyeDiagram};
pub use sweep::{aggregate, run_map, AggregateRow, MapContext, Stat, SweepGrid, SweepRecord};
pub use taps::{tap_study, TapPoint};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::experiment::{
    evaluate_baselines, evaluate_rc, simulate_stream, train_baselines, train_rc, ExperimentConfig, StreamRole,
};
use crate::link::{DetectedWaveform, SymbolStream};
use crate::pipeline::{apply_mask, oversample, NormAffine};
use crate::readout::BerReport;
use crate::reservoir::{build_injection, consistency_probe};
use crate::Result;

/// Grid of the (detuning, feedback) map and its replicate seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub delta_f: Vec<f64>,
    pub k_f: Vec<f64>,
    pub seeds: Vec<u64>,
}

impl SweepGrid {
    /// 11 x 9 points over Δf ∈ [-50, 50] GHz and k_f ∈ [0, 0.2].
    pub fn coarse(seeds: Vec<u64>) -> Self {
        Self {
            delta_f: (0..11).map(|i| -50.0 + 10.0 * i as f64).collect(),
            k_f: (0..9).map(|i| 0.025 * i as f64).collect(),
            seeds,
        }
    }

    pub fn len(&self) -> usize {
        self.delta_f.len() * self.k_f.len() * self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One evaluated sweep point. `x` is the swept scalar of line sweeps
/// (taps, launch power, OSNR) and 0 on maps.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub delta_f_ghz: f64,
    pub k_f: f64,
    pub x: f64,
    pub seed: u64,
    pub snr_db: f64,
    pub ber_rc: f64,
    pub ber_lr: f64,
    pub ber_naive: f64,
    pub n_bits: u64,
    /// Failure reason when the point could not be evaluated.
    pub note: Option<String>,
}

impl SweepRecord {
    pub fn failed(delta_f_ghz: f64, k_f: f64, x: f64, seed: u64, reason: String) -> Self {
        Self {
            delta_f_ghz,
            k_f,
            x,
            seed,
            snr_db: f64::NAN,
            ber_rc: f64::NAN,
            ber_lr: f64::NAN,
            ber_naive: f64::NAN,
            n_bits: 0,
            note: Some(reason),
        }
    }
}

/// Everything about one seed of a map that does not depend on the grid
/// point: the simulated streams and the baseline error rates.
pub struct MapContext {
    cfg: ExperimentConfig,
    seed: u64,
    train: (SymbolStream, DetectedWaveform),
    test: (SymbolStream, DetectedWaveform),
    baselines: (BerReport, BerReport),
    probe_input: Vec<f64>,
}

/// Symbols of the test stream replayed by the consistency probe.
const PROBE_SYMBOLS: usize = 256;
const PROBE_TRIALS: usize = 5;

impl MapContext {
    /// Simulates the training stream and test stream 0 of `seed`.
    pub fn prepare(cfg: &ExperimentConfig, seed: u64) -> Result<Self> {
        let mut cfg = cfg.clone();
        cfg.run.seed = seed;
        cfg.validate()?;
        let (train_syms, train_run) = simulate_stream(&cfg, StreamRole::Train)?;
        let (test_syms, test_run) = simulate_stream(&cfg, StreamRole::Test(0))?;
        Self::from_streams(&cfg, (train_syms, train_run.detected), (test_syms, test_run.detected))
    }

    /// Context over already simulated training and test-0 streams of
    /// `cfg.run.seed`.
    pub fn from_streams(
        cfg: &ExperimentConfig,
        train: (SymbolStream, DetectedWaveform),
        test: (SymbolStream, DetectedWaveform),
    ) -> Result<Self> {
        let cfg = cfg.clone();
        cfg.validate()?;
        let seed = cfg.run.seed;
        let b = train_baselines(&cfg, &train.1, &train.0)?;
        let baselines = evaluate_baselines(&cfg, &b, &test.1, &test.0)?;
        let affine = NormAffine::fit(&train.1.samples)?;
        let sps = cfg.link.samples_per_baud;
        let n_probe = PROBE_SYMBOLS.min(test.0.len());
        let probe_input = apply_mask(
            &oversample(&affine.apply(&test.1.samples[..n_probe * sps]), cfg.pipeline.oversample)?,
            &cfg.pipeline.mask(),
        )?
        .into_iter()
        .map(|v| v.clamp(0.0, 1.0))
        .collect();
        Ok(Self {
            cfg,
            seed,
            train,
            test,
            baselines,
            probe_input,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn baselines(&self) -> (BerReport, BerReport) {
        self.baselines
    }

    /// Consistency SNR and reservoir BER at one grid point; failures are
    /// recorded, never propagated.
    pub fn evaluate(&self, delta_f: f64, k_f: f64) -> SweepRecord {
        match self.try_evaluate(delta_f, k_f) {
            Ok(r) => r,
            Err(e) => SweepRecord::failed(delta_f, k_f, 0.0, self.seed, format!("{e}")),
        }
    }

    fn try_evaluate(&self, delta_f: f64, k_f: f64) -> Result<SweepRecord> {
        let mut cfg = self.cfg.clone();
        cfg.reservoir.delta_f = delta_f;
        cfg.reservoir.k_f = k_f;
        cfg.validate()?;
        let params = &cfg.reservoir;
        let inj = build_injection(&self.probe_input, params.theta(cfg.pipeline.n_nodes), params)?;
        let snr_db = consistency_probe(&inj, params, PROBE_TRIALS)?;
        let (model, _) = train_rc(
            &cfg,
            &self.train.1,
            &self.train.0,
            StreamRole::Train.reservoir_seed(&cfg),
        )?;
        let rc = evaluate_rc(
            &cfg,
            &model,
            &self.test.1,
            &self.test.0,
            StreamRole::Test(0).reservoir_seed(&cfg),
        )?;
        Ok(SweepRecord {
            delta_f_ghz: delta_f,
            k_f,
            x: 0.0,
            seed: self.seed,
            snr_db,
            ber_rc: rc.ber,
            ber_lr: self.baselines.0.ber,
            ber_naive: self.baselines.1.ber,
            n_bits: rc.counted_bits,
            note: None,
        })
    }
}

/// Sequential map over every grid point and seed.
pub fn run_map(grid: &SweepGrid, cfg: &ExperimentConfig) -> Vec<SweepRecord> {
    let mut out = Vec::with_capacity(grid.len());
    for &seed in &grid.seeds {
        match MapContext::prepare(cfg, seed) {
            Ok(ctx) => {
                for &df in &grid.delta_f {
                    for &kf in &grid.k_f {
                        out.push(ctx.evaluate(df, kf));
                    }
                }
            }
            Err(e) => {
                for &df in &grid.delta_f {
                    for &kf in &grid.k_f {
                        out.push(SweepRecord::failed(df, kf, 0.0, seed, format!("{e}")));
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Sample standard deviation (0 for a single value).
    pub std: f64,
}

impl Stat {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let v: Vec<f64> = values.filter(|v| !v.is_nan()).collect();
        if v.is_empty() {
            return Self {
                mean: f64::NAN,
                min: f64::NAN,
                max: f64::NAN,
                std: f64::NAN,
            };
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = if v.len() > 1 {
            v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            std: var.sqrt(),
        }
    }
}

/// Across-seed summary of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub delta_f_ghz: f64,
    pub k_f: f64,
    pub x: f64,
    pub n: usize,
    /// Records whose reservoir BER is NaN.
    pub n_nan: usize,
    pub snr_db: Stat,
    pub ber_rc: Stat,
    pub ber_lr: Stat,
    pub ber_naive: Stat,
}

/// Groups records by (Δf, k_f, x), ordered ascending in that key order.
pub fn aggregate(records: &[SweepRecord]) -> Vec<AggregateRow> {
    let mut sorted: Vec<&SweepRecord> = records.iter().collect();
    let key = |r: &SweepRecord| (r.delta_f_ghz, r.k_f, r.x);
    sorted.sort_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.total_cmp(&kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then(ka.2.total_cmp(&kb.2))
    });
    let mut rows = Vec::new();
    let mut start = 0;
    while start < sorted.len() {
        let k = key(sorted[start]);
        let same = |r: &&&SweepRecord| {
            let kr = key(r);
            kr.0.total_cmp(&k.0).is_eq() && kr.1.total_cmp(&k.1).is_eq() && kr.2.total_cmp(&k.2).is_eq()
        };
        let end = start + sorted[start..].iter().take_while(same).count();
        let group = &sorted[start..end];
        rows.push(AggregateRow {
            delta_f_ghz: k.0,
            k_f: k.1,
            x: k.2,
            n: group.len(),
            n_nan: group.iter().filter(|r| r.ber_rc.is_nan()).count(),
            snr_db: Stat::of(group.iter().map(|r| r.snr_db)),
            ber_rc: Stat::of(group.iter().map(|r| r.ber_rc)),
            ber_lr: Stat::of(group.iter().map(|r| r.ber_lr)),
            ber_naive: Stat::of(group.iter().map(|r| r.ber_naive)),
        });
        start = end;
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(df: f64, seed: u64, ber: f64) -> SweepRecord {
        SweepRecord {
            delta_f_ghz: df,
            k_f: 0.05,
            x: 0.0,
            seed,
            snr_db: 10.0,
            ber_rc: ber,
            ber_lr: 0.02,
            ber_naive: 0.2,
            n_bits: 100,
            note: None,
        }
    }

    #[test]
    fn single_seed_mean_is_value() {
        let rows = aggregate(&[rec(0.0, 1, 3e-3)]);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].ber_rc.mean, 3e-3);
        assert_eq!(rows[0].ber_rc.std, 0.0);
    }

    #[test]
    fn ordering_and_nan_handling() {
        let recs: Vec<SweepRecord> = (0..5)
            .map(|s| rec(10.0, s, 1e-3 * (s + 1) as f64))
            .chain([rec(-10.0, 0, f64::NAN), rec(-10.0, 1, 4e-3)])
            .collect();
        let rows = aggregate(&recs);
        assert_eq!(rows[0].delta_f_ghz, -10.0);
        assert_eq!((rows[0].n, rows[0].n_nan), (2, 1));
        assert_eq!(rows[0].ber_rc.mean, 4e-3);
        let s = rows[1].ber_rc;
        assert!(s.min <= s.mean && s.mean <= s.max);
        assert_eq!((s.min, s.max), (1e-3, 5e-3));
    }

    #[test]
    fn coarse_grid_ranges() {
        let g = SweepGrid::coarse(alloc::vec![1]);
        assert_eq!((g.delta_f.len(), g.k_f.len()), (11, 9));
        assert_eq!(g.delta_f[0], -50.0);
        assert!((g.k_f[8] - 0.2).abs() < 1e-12);
    }
}

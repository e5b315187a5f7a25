//! End-to-end runs: link simulation, reservoir processing, readout
//! training and evaluation on independent test streams.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::link::{
    add_ase_noise, detect, modulate, propagate_with_report, DetectedWaveform, LinkConfig, OpticalField,
    PropagationReport, SymbolStream,
};
use crate::pipeline::{
    apply_mask, oversample, speed_penalty, BlockMatrix, FeatureMatrix, MaskConfig, MaskKind, NodeSampler, NormAffine,
};
use crate::readout::{
    baseline_features, baseline_lr, ber, default_lambda_grid, predict_and_slice, train_ridge_with, BerReport,
    NaiveSlicer, ReadoutModel, SplitSpec, TrainingReport,
};
use crate::reservoir::{build_injection, integrate_with, warm_up, ReservoirParams, ReservoirState};
use crate::seed::{self, stream};
use crate::{Error, Result};

/// Settings of the stages between detection and readout.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub n_nodes: usize,
    pub oversample: usize,
    pub mask_kind: MaskKind,
    pub mask_seed: u64,
    /// Neighbouring symbols on each side fed to the readout.
    pub taps: usize,
    pub split: SplitSpec,
    pub lambda_grid: Vec<f64>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            n_nodes: 32,
            oversample: 4,
            mask_kind: MaskKind::Uniform,
            mask_seed: 1,
            taps: 10,
            split: SplitSpec::default(),
            lambda_grid: default_lambda_grid(),
        }
    }
}

impl PipelineConfig {
    pub fn mask(&self) -> MaskConfig {
        MaskConfig::random(self.n_nodes, self.mask_kind, self.mask_seed)
    }
}

/// Stream sizes and the base seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub n_train_symbols: usize,
    pub n_test_symbols: usize,
    pub n_test_sets: usize,
    pub seed: u64,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            n_train_symbols: 1 << 17,
            n_test_symbols: 1 << 17,
            n_test_sets: 5,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentConfig {
    pub link: LinkConfig,
    pub reservoir: ReservoirParams,
    pub pipeline: PipelineConfig,
    pub run: RunSpec,
}

impl ExperimentConfig {
    /// Reduced stream lengths for quick runs.
    pub fn desk_scale(mut self) -> Self {
        self.run.n_train_symbols = 1 << 15;
        self.run.n_test_symbols = 1 << 15;
        self.run.n_test_sets = 3;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.link.validate()?;
        self.reservoir.validate()?;
        self.pipeline.split.validate()?;
        let p = &self.pipeline;
        if p.n_nodes == 0 {
            return Err(Error::config("pipeline.n_nodes", "must be >= 1"));
        }
        if p.oversample == 0 || self.link.samples_per_baud * p.oversample != p.n_nodes {
            return Err(Error::config(
                "pipeline.oversample",
                format!(
                    "samples_per_baud {} x oversample {} must equal n_nodes {}",
                    self.link.samples_per_baud, p.oversample, p.n_nodes
                ),
            ));
        }
        let slot = self.reservoir.theta(p.n_nodes) / self.reservoir.dt;
        if (slot - slot.round()).abs() > 1e-6 || slot.round() < 1.0 {
            return Err(Error::config(
                "reservoir.dt",
                format!("node spacing tau/n_nodes must be a whole number of steps, got {slot}"),
            ));
        }
        if p.lambda_grid.is_empty() || p.lambda_grid.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return Err(Error::config(
                "readout.lambda_grid",
                "must be a nonempty list of finite values >= 0",
            ));
        }
        let r = &self.run;
        if r.n_train_symbols < 8 * (2 * p.taps + 1) || r.n_test_symbols <= 2 * p.taps {
            return Err(Error::config(
                "run.n_symbols",
                "streams are too short for the tap window",
            ));
        }
        if r.n_test_sets == 0 {
            return Err(Error::config("run.n_test_sets", "must be >= 1"));
        }
        Ok(())
    }

    /// Slot duration of one virtual node (ps).
    pub fn theta_ps(&self) -> f64 {
        self.reservoir.theta(self.pipeline.n_nodes) * 1e3
    }

    pub fn speed_penalty(&self) -> f64 {
        speed_penalty(self.link.bit_rate, self.reservoir.tau * 1e-9)
    }
}

/// Which stream of an experiment: training, or test set `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamRole {
    Train,
    Test(usize),
}

impl StreamRole {
    /// Seed every random draw of this stream is derived from.
    pub fn seed(self, base: u64) -> u64 {
        match self {
            Self::Train => seed::derive(base, stream::TRAIN),
            Self::Test(i) => seed::derive(base, stream::TEST + i as u64),
        }
    }

    pub fn symbols(self, cfg: &ExperimentConfig) -> SymbolStream {
        let n = match self {
            Self::Train => cfg.run.n_train_symbols,
            Self::Test(_) => cfg.run.n_test_symbols,
        };
        SymbolStream::random(n, seed::derive(self.seed(cfg.run.seed), stream::BITS))
    }

    /// Reservoir noise seed used while processing this stream.
    pub fn reservoir_seed(self, cfg: &ExperimentConfig) -> u64 {
        seed::derive(self.seed(cfg.run.seed), stream::RESERVOIR_NOISE)
    }
}

#[derive(Debug, Clone)]
pub struct LinkRun {
    pub launch: OpticalField,
    pub received: OpticalField,
    pub detected: DetectedWaveform,
    pub propagation: PropagationReport,
}

/// Modulation, fiber, optional ASE loading and detection of `symbols`.
pub fn simulate_link(link: &LinkConfig, symbols: &SymbolStream) -> Result<LinkRun> {
    let launch = modulate(symbols, link)?;
    let (received, propagation) = propagate_with_report(&launch, link)?;
    let received = add_ase_noise(&received, link.osnr_db, seed::derive(link.rng_seed, stream::ASE))?;
    let detected = detect(&received, link)?;
    Ok(LinkRun {
        launch,
        received,
        detected,
        propagation,
    })
}

/// Symbols and link simulation of one stream.
pub fn simulate_stream(cfg: &ExperimentConfig, role: StreamRole) -> Result<(SymbolStream, LinkRun)> {
    let symbols = role.symbols(cfg);
    let mut link = cfg.link.clone();
    link.rng_seed = role.seed(cfg.run.seed);
    let run = simulate_link(&link, &symbols)?;
    Ok((symbols, run))
}

/// Normalized samples through oversampling, masking, injection and the
/// reservoir; returns node responses (symbols x nodes).
pub fn reservoir_responses(normalized: &[f64], cfg: &ExperimentConfig, noise_seed: u64) -> Result<BlockMatrix> {
    let p = &cfg.pipeline;
    let params = &cfg.reservoir;
    let mask = p.mask();
    mask.validate()?;
    let mut masked = apply_mask(&oversample(normalized, p.oversample)?, &mask)?;
    // The modulator cannot exceed full transmission: out-of-range test
    // values saturate.
    masked.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
    let inj = build_injection(&masked, params.theta(p.n_nodes), params)?;
    let mut state = ReservoirState::with_seeds(
        params,
        seed::derive(params.rng_seed, stream::RESERVOIR_INIT),
        noise_seed,
    );
    warm_up(&inj, params, &mut state)?;
    let mut sampler = NodeSampler::new(inj.steps_per_slot(), p.n_nodes);
    integrate_with(&inj, params, &mut state, |v| sampler.push(v))?;
    sampler.finish()
}

fn check_stream(wave: &DetectedWaveform, symbols: &SymbolStream, cfg: &ExperimentConfig) -> Result<()> {
    wave.validate()?;
    if wave.samples_per_baud() != cfg.link.samples_per_baud {
        return Err(Error::input(
            "rc",
            format!(
                "waveform has {} samples per baud, configuration expects {}; resample the trace",
                wave.samples_per_baud(),
                cfg.link.samples_per_baud
            ),
        ));
    }
    if wave.n_symbols() != symbols.len() {
        return Err(Error::input(
            "rc",
            format!(
                "waveform spans {} symbols, symbol file has {}",
                wave.n_symbols(),
                symbols.len()
            ),
        ));
    }
    Ok(())
}

/// Trains the reservoir readout on a detected training stream.
pub fn train_rc(
    cfg: &ExperimentConfig,
    wave: &DetectedWaveform,
    symbols: &SymbolStream,
    noise_seed: u64,
) -> Result<(ReadoutModel, TrainingReport)> {
    check_stream(wave, symbols, cfg)?;
    let affine = NormAffine::fit(&wave.samples)?;
    let normalized: Vec<f64> = wave.samples.iter().map(|&v| affine.map(v)).collect();
    let mut nodes = reservoir_responses(&normalized, cfg, noise_seed)?;
    let ranges = nodes.column_ranges(0..nodes.rows());
    nodes.scale_columns(&ranges);
    let taps = cfg.pipeline.taps;
    let features = FeatureMatrix::new(nodes, taps)?;
    let (mut model, report) =
        train_ridge_with(&features, symbols, cfg.pipeline.split, &cfg.pipeline.lambda_grid, taps)?;
    model.norm_affine = Some(affine);
    model.feature_ranges = ranges;
    model.taps = taps;
    Ok((model, report))
}

/// Reservoir features of a test stream under a trained model's scalings.
pub fn rc_features(
    cfg: &ExperimentConfig,
    model: &ReadoutModel,
    wave: &DetectedWaveform,
    noise_seed: u64,
) -> Result<FeatureMatrix> {
    let affine = model
        .norm_affine
        .ok_or_else(|| Error::input("rc", "model carries no input normalization"))?;
    let mut nodes = reservoir_responses(&affine.apply(&wave.samples), cfg, noise_seed)?;
    if model.feature_ranges.len() != nodes.width() {
        return Err(Error::input(
            "rc",
            "model feature scaling does not match the node count",
        ));
    }
    nodes.scale_columns(&model.feature_ranges);
    FeatureMatrix::new(nodes, model.taps)
}

/// BER of a trained reservoir readout on one test stream; the first and
/// last `taps` symbols are not counted.
pub fn evaluate_rc(
    cfg: &ExperimentConfig,
    model: &ReadoutModel,
    wave: &DetectedWaveform,
    symbols: &SymbolStream,
    noise_seed: u64,
) -> Result<BerReport> {
    check_stream(wave, symbols, cfg)?;
    let features = rc_features(cfg, model, wave, noise_seed)?;
    ber(&predict_and_slice(model, &features)?, symbols, model.taps)
}

/// Equalizers that do not use the reservoir.
#[derive(Debug, Clone, PartialEq)]
pub struct Baselines {
    pub lr: ReadoutModel,
    pub lr_training: TrainingReport,
    pub naive: NaiveSlicer,
}

pub fn train_baselines(cfg: &ExperimentConfig, wave: &DetectedWaveform, symbols: &SymbolStream) -> Result<Baselines> {
    check_stream(wave, symbols, cfg)?;
    let (lr, lr_training) = baseline_lr(
        wave,
        symbols,
        cfg.pipeline.split,
        &cfg.pipeline.lambda_grid,
        cfg.pipeline.taps,
    )?;
    let naive = NaiveSlicer::fit(wave, symbols)?;
    Ok(Baselines { lr, lr_training, naive })
}

/// (linear regression, naive slicer) error rates on one test stream.
pub fn evaluate_baselines(
    cfg: &ExperimentConfig,
    b: &Baselines,
    wave: &DetectedWaveform,
    symbols: &SymbolStream,
) -> Result<(BerReport, BerReport)> {
    check_stream(wave, symbols, cfg)?;
    let affine =
        b.lr.norm_affine
            .ok_or_else(|| Error::input("baseline", "model carries no normalization"))?;
    let features = baseline_features(wave, affine, b.lr.taps)?;
    let lr = ber(&predict_and_slice(&b.lr, &features)?, symbols, b.lr.taps)?;
    let naive = ber(&b.naive.apply(wave)?, symbols, cfg.pipeline.taps)?;
    Ok((lr, naive))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestSetResult {
    pub rc: BerReport,
    pub lr: BerReport,
    pub naive: BerReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RcReport {
    pub rc_model: ReadoutModel,
    pub rc_training: TrainingReport,
    pub baselines: Baselines,
    pub tests: Vec<TestSetResult>,
    pub theta_ps: f64,
    pub speed_penalty: f64,
}

impl RcReport {
    pub fn mean_ber(&self, pick: impl Fn(&TestSetResult) -> f64) -> f64 {
        self.tests.iter().map(pick).sum::<f64>() / self.tests.len() as f64
    }
}

/// A detected stream with its reference symbols and the reservoir noise
/// seed to process it with.
pub struct Capture<'a> {
    pub wave: &'a DetectedWaveform,
    pub symbols: &'a SymbolStream,
    pub noise_seed: u64,
}

/// Trains every equalizer on `train` and scores each test capture.
pub fn run_rc_on(cfg: &ExperimentConfig, train: Capture<'_>, tests: &[Capture<'_>]) -> Result<RcReport> {
    cfg.validate()?;
    let (rc_model, rc_training) = train_rc(cfg, train.wave, train.symbols, train.noise_seed)?;
    let baselines = train_baselines(cfg, train.wave, train.symbols)?;
    let mut results = Vec::with_capacity(tests.len());
    for t in tests {
        let rc = evaluate_rc(cfg, &rc_model, t.wave, t.symbols, t.noise_seed)?;
        let (lr, naive) = evaluate_baselines(cfg, &baselines, t.wave, t.symbols)?;
        results.push(TestSetResult { rc, lr, naive });
    }
    Ok(RcReport {
        rc_model,
        rc_training,
        baselines,
        tests: results,
        theta_ps: cfg.theta_ps(),
        speed_penalty: cfg.speed_penalty(),
    })
}

/// Simulates the training stream and `n_test_sets` test streams and runs
/// [`run_rc_on`].
pub fn run_rc(cfg: &ExperimentConfig) -> Result<RcReport> {
    cfg.validate()?;
    let (train_syms, train_run) = simulate_stream(cfg, StreamRole::Train)?;
    let mut test_streams = Vec::with_capacity(cfg.run.n_test_sets);
    for i in 0..cfg.run.n_test_sets {
        let (s, r) = simulate_stream(cfg, StreamRole::Test(i))?;
        test_streams.push((s, r.detected));
    }
    let tests: Vec<Capture<'_>> = test_streams
        .iter()
        .enumerate()
        .map(|(i, (s, w))| Capture {
            wave: w,
            symbols: s,
            noise_seed: StreamRole::Test(i).reservoir_seed(cfg),
        })
        .collect();
    let train = Capture {
        wave: &train_run.detected,
        symbols: &train_syms,
        noise_seed: StreamRole::Train.reservoir_seed(cfg),
    };
    run_rc_on(cfg, train, &tests)
}

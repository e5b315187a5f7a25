//! Flat `section.key = value` configuration text.
//!
//! Every setting has exactly one dotted key. Lists are comma separated;
//! numeric lists also accept inclusive `start:stop:step` ranges. `#` starts
//! a comment. [`to_text`] writes every key in a fixed order, and its
//! SHA-256 is the configuration hash embedded in reports.

use std::fmt;

use photorc_core::experiment::ExperimentConfig;
use photorc_core::pipeline::MaskKind;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    /// 1-based line of the offending entry, when it came from a file.
    pub line: Option<usize>,
    pub key: String,
    pub reason: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config line {l}: `{}`: {}", self.key, self.reason),
            None => write!(f, "config `{}`: {}", self.key, self.reason),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Map,
    Taps,
    Power,
    Osnr,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Map => "map",
            Self::Taps => "taps",
            Self::Power => "power",
            Self::Osnr => "osnr",
        }
    }
}

/// Named rate/length pair a sweep can be repeated over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// 56 Gb/s over 27 km.
    R1,
    /// 112 Gb/s over 5.5 km.
    R2,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Self::R1 => "r1",
            Self::R2 => "r2",
        }
    }

    pub fn apply(self, cfg: &mut ExperimentConfig) {
        let (rate, km) = match self {
            Self::R1 => (56e9, 27.0),
            Self::R2 => (112e9, 5.5),
        };
        cfg.link.bit_rate = rate;
        cfg.link.fiber_length_km = km;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: Option<SweepKind>,
    pub delta_f: Vec<f64>,
    pub k_f: Vec<f64>,
    pub seeds: Vec<u64>,
    pub taps: Vec<usize>,
    pub power_dbm: Vec<f64>,
    pub osnr_db: Vec<f64>,
    /// Empty: run on the configured link only.
    pub variants: Vec<Variant>,
}

/// Drops the last few bits of rounding noise from a computed grid value,
/// so that `0.025 * 3` prints as `0.075`.
fn tidy(x: f64) -> f64 {
    format!("{x:.12e}").parse().unwrap_or(x)
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            kind: None,
            delta_f: (0..=10).map(|i| tidy(-50.0 + 10.0 * i as f64)).collect(),
            k_f: (0..=8).map(|i| tidy(0.025 * i as f64)).collect(),
            seeds: vec![1],
            taps: vec![0, 1, 2, 3, 4, 6, 8, 10, 12, 15],
            power_dbm: (0..=11).map(|i| tidy(-8.0 + 2.0 * i as f64)).collect(),
            osnr_db: (0..=5).map(|i| tidy(20.0 + 5.0 * i as f64)).collect(),
            variants: Vec::new(),
        }
    }
}

/// Everything a command needs: the experiment and an optional sweep.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Settings {
    pub experiment: ExperimentConfig,
    pub sweep: SweepSpec,
}

trait Value: Sized {
    fn show(&self) -> String;
    fn parse(s: &str) -> Result<Self, String>;
}

impl Value for f64 {
    fn show(&self) -> String {
        format!("{self:?}")
    }
    fn parse(s: &str) -> Result<Self, String> {
        s.parse().map_err(|_| format!("`{s}` is not a number"))
    }
}

impl Value for usize {
    fn show(&self) -> String {
        self.to_string()
    }
    fn parse(s: &str) -> Result<Self, String> {
        s.parse().map_err(|_| format!("`{s}` is not a non-negative integer"))
    }
}

impl Value for u64 {
    fn show(&self) -> String {
        self.to_string()
    }
    fn parse(s: &str) -> Result<Self, String> {
        s.parse().map_err(|_| format!("`{s}` is not a non-negative integer"))
    }
}

impl Value for bool {
    fn show(&self) -> String {
        self.to_string()
    }
    fn parse(s: &str) -> Result<Self, String> {
        match s {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(format!("`{s}` is not true or false")),
        }
    }
}

impl Value for MaskKind {
    fn show(&self) -> String {
        match self {
            MaskKind::Uniform => "uniform".into(),
            MaskKind::Binary => "binary".into(),
        }
    }
    fn parse(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(MaskKind::Uniform),
            "binary" => Ok(MaskKind::Binary),
            _ => Err(format!("`{s}` is not uniform or binary")),
        }
    }
}

impl Value for Option<SweepKind> {
    fn show(&self) -> String {
        self.map_or("none", SweepKind::name).into()
    }
    fn parse(s: &str) -> Result<Self, String> {
        Ok(Some(match s {
            "none" => return Ok(None),
            "map" => SweepKind::Map,
            "taps" => SweepKind::Taps,
            "power" => SweepKind::Power,
            "osnr" => SweepKind::Osnr,
            _ => return Err(format!("`{s}` is not one of map, taps, power, osnr, none")),
        }))
    }
}

impl Value for Variant {
    fn show(&self) -> String {
        self.name().into()
    }
    fn parse(s: &str) -> Result<Self, String> {
        match s {
            "r1" => Ok(Variant::R1),
            "r2" => Ok(Variant::R2),
            _ => Err(format!("`{s}` is not r1 or r2")),
        }
    }
}

/// Numbers that may appear in `start:stop:step` ranges.
trait RangeItem: Value + Copy {
    fn expand(a: Self, b: Self, step: Self) -> Result<Vec<Self>, String>;
}

impl RangeItem for f64 {
    fn expand(a: f64, b: f64, step: f64) -> Result<Vec<f64>, String> {
        if !(step.is_finite() && step > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
            return Err(format!("range {a}:{b}:{step} needs finite ends and a positive step"));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| tidy(a + step * i as f64)).collect())
    }
}

impl RangeItem for usize {
    fn expand(a: usize, b: usize, step: usize) -> Result<Vec<usize>, String> {
        if step == 0 || b < a {
            return Err(format!("range {a}:{b}:{step} needs a positive step"));
        }
        Ok((a..=b).step_by(step).collect())
    }
}

impl RangeItem for u64 {
    fn expand(a: u64, b: u64, step: u64) -> Result<Vec<u64>, String> {
        if step == 0 || b < a {
            return Err(format!("range {a}:{b}:{step} needs a positive step"));
        }
        Ok((a..=b).step_by(step as usize).collect())
    }
}

impl<T: RangeItem> Value for Vec<T> {
    fn show(&self) -> String {
        self.iter().map(Value::show).collect::<Vec<_>>().join(", ")
    }
    fn parse(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let parts: Vec<&str> = item.split(':').map(str::trim).collect();
            match parts.as_slice() {
                [one] => out.push(T::parse(one)?),
                [a, b, step] => out.extend(T::expand(T::parse(a)?, T::parse(b)?, T::parse(step)?)?),
                _ => return Err(format!("`{item}` is neither a value nor start:stop:step")),
            }
        }
        Ok(out)
    }
}

impl Value for Vec<Variant> {
    fn show(&self) -> String {
        self.iter().map(Value::show).collect::<Vec<_>>().join(", ")
    }
    fn parse(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(Variant::parse)
            .collect()
    }
}

struct Field {
    key: &'static str,
    get: fn(&Settings) -> String,
    set: fn(&mut Settings, &str) -> Result<(), String>,
}

macro_rules! fields {
    ($($key:literal => $($path:ident).+;)*) => {
        const FIELDS: &[Field] = &[$(Field {
            key: $key,
            get: |s| Value::show(&s.$($path).+),
            set: |s, v| {
                s.$($path).+ = Value::parse(v)?;
                Ok(())
            },
        },)*];
    };
}

fields! {
    "link.bit_rate" => experiment.link.bit_rate;
    "link.fiber_length_km" => experiment.link.fiber_length_km;
    "link.launch_peak_power_dbm" => experiment.link.launch_peak_power_dbm;
    "link.attenuation_db_km" => experiment.link.attenuation_db_km;
    "link.dispersion_ps_nm_km" => experiment.link.dispersion_ps_nm_km;
    "link.n2" => experiment.link.n2;
    "link.a_eff_um2" => experiment.link.a_eff_um2;
    "link.dgd_ps_km" => experiment.link.dgd_ps_km;
    "link.rin_db_hz" => experiment.link.rin_db_hz;
    "link.wavelength_nm" => experiment.link.wavelength_nm;
    "link.samples_per_baud" => experiment.link.samples_per_baud;
    "link.responsivity" => experiment.link.responsivity;
    "link.tia_gain_db" => experiment.link.tia_gain_db;
    "link.rx_cutoff_fraction" => experiment.link.rx_cutoff_fraction;
    "link.thermal_noise_density" => experiment.link.thermal_noise_density;
    "link.shot_noise" => experiment.link.shot_noise;
    "link.step_m" => experiment.link.step_m;
    "link.sbs_clamp" => experiment.link.sbs_clamp;
    "link.osnr_db" => experiment.link.osnr_db;
    "link.rng_seed" => experiment.link.rng_seed;
    "reservoir.alpha_h" => experiment.reservoir.alpha_h;
    "reservoir.g_n" => experiment.reservoir.g_n;
    "reservoir.sat_s" => experiment.reservoir.sat_s;
    "reservoir.n0" => experiment.reservoir.n0;
    "reservoir.t_s" => experiment.reservoir.t_s;
    "reservoir.t_in" => experiment.reservoir.t_in;
    "reservoir.t_ph" => experiment.reservoir.t_ph;
    "reservoir.bias_current" => experiment.reservoir.bias_current;
    "reservoir.i_th" => experiment.reservoir.i_th;
    "reservoir.k_f" => experiment.reservoir.k_f;
    "reservoir.k_inj" => experiment.reservoir.k_inj;
    "reservoir.tau" => experiment.reservoir.tau;
    "reservoir.delta_f" => experiment.reservoir.delta_f;
    "reservoir.feedback_phase" => experiment.reservoir.feedback_phase;
    "reservoir.noise_d" => experiment.reservoir.noise_d;
    "reservoir.e_inj0" => experiment.reservoir.e_inj0;
    "reservoir.dt" => experiment.reservoir.dt;
    "reservoir.rng_seed" => experiment.reservoir.rng_seed;
    "pipeline.n_nodes" => experiment.pipeline.n_nodes;
    "pipeline.oversample" => experiment.pipeline.oversample;
    "pipeline.mask_kind" => experiment.pipeline.mask_kind;
    "pipeline.mask_seed" => experiment.pipeline.mask_seed;
    "pipeline.taps" => experiment.pipeline.taps;
    "readout.train_fraction" => experiment.pipeline.split.train_fraction;
    "readout.lambda_grid" => experiment.pipeline.lambda_grid;
    "run.n_train_symbols" => experiment.run.n_train_symbols;
    "run.n_test_symbols" => experiment.run.n_test_symbols;
    "run.n_test_sets" => experiment.run.n_test_sets;
    "run.seed" => experiment.run.seed;
    "sweep.kind" => sweep.kind;
    "sweep.delta_f" => sweep.delta_f;
    "sweep.k_f" => sweep.k_f;
    "sweep.seeds" => sweep.seeds;
    "sweep.taps" => sweep.taps;
    "sweep.power_dbm" => sweep.power_dbm;
    "sweep.osnr_db" => sweep.osnr_db;
    "sweep.variants" => sweep.variants;
}

/// All keys in canonical order.
pub fn keys() -> impl Iterator<Item = &'static str> {
    FIELDS.iter().map(|f| f.key)
}

/// Key/value pairs in canonical order.
pub fn entries(s: &Settings) -> Vec<(&'static str, String)> {
    FIELDS.iter().map(|f| (f.key, (f.get)(s))).collect()
}

/// Canonical text: every key, one per line, sections separated by a
/// blank line.
pub fn to_text(s: &Settings) -> String {
    let mut out = String::new();
    let mut section = "";
    for (key, value) in entries(s) {
        let sec = key.split('.').next().unwrap_or("");
        if !section.is_empty() && sec != section {
            out.push('\n');
        }
        section = sec;
        out.push_str(&format!("{key} = {value}\n"));
    }
    out
}

/// Hex SHA-256 of [`to_text`].
pub fn config_hash(s: &Settings) -> String {
    Sha256::digest(to_text(s).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Sets one key from its text value.
pub fn set(s: &mut Settings, key: &str, value: &str) -> Result<(), ConfigError> {
    let field = FIELDS.iter().find(|f| f.key == key).ok_or_else(|| ConfigError {
        line: None,
        key: key.into(),
        reason: "unknown key".into(),
    })?;
    (field.set)(s, value).map_err(|reason| ConfigError {
        line: None,
        key: key.into(),
        reason,
    })
}

/// Applies the entries of `text` on top of `base` and validates the
/// result.
pub fn parse(text: &str, base: Settings) -> Result<Settings, ConfigError> {
    let mut s = base;
    let mut seen: Vec<(&str, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError {
            line: Some(line),
            key: content.into(),
            reason: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        if let Some((_, first)) = seen.iter().find(|(k, _)| *k == key) {
            return Err(ConfigError {
                line: Some(line),
                key: key.into(),
                reason: format!("already set on line {first}"),
            });
        }
        set(&mut s, key, value.trim()).map_err(|e| ConfigError { line: Some(line), ..e })?;
        seen.push((key, line));
    }
    validate(&s).map_err(|mut e| {
        e.line = seen.iter().find(|(k, _)| *k == e.key).map(|(_, l)| *l);
        e
    })?;
    Ok(s)
}

pub fn validate(s: &Settings) -> Result<(), ConfigError> {
    s.experiment.validate().map_err(|e| match e {
        photorc_core::Error::InvalidConfig { field, reason } => ConfigError {
            line: None,
            key: field.into(),
            reason,
        },
        other => ConfigError {
            line: None,
            key: String::new(),
            reason: other.to_string(),
        },
    })?;
    let sw = &s.sweep;
    let empty = |key: &str| ConfigError {
        line: None,
        key: key.into(),
        reason: "must not be empty".into(),
    };
    match sw.kind {
        Some(SweepKind::Map) if sw.delta_f.is_empty() => return Err(empty("sweep.delta_f")),
        Some(SweepKind::Map) if sw.k_f.is_empty() => return Err(empty("sweep.k_f")),
        Some(SweepKind::Taps) if sw.taps.is_empty() => return Err(empty("sweep.taps")),
        Some(SweepKind::Power) if sw.power_dbm.is_empty() => return Err(empty("sweep.power_dbm")),
        Some(SweepKind::Osnr) if sw.osnr_db.is_empty() => return Err(empty("sweep.osnr_db")),
        _ => {}
    }
    if sw.seeds.is_empty() {
        return Err(empty("sweep.seeds"));
    }
    Ok(())
}

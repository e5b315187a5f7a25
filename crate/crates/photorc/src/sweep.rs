//! Parallel sweep execution over shared simulated streams.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use photorc_core::analysis::{aggregate, tap_study, AggregateRow, MapContext, SweepRecord};
use photorc_core::experiment::{run_rc_on, simulate_stream, Capture, ExperimentConfig, RcReport, StreamRole};
use photorc_core::link::{add_ase_noise, detect, DetectedWaveform, OpticalField, SymbolStream};
use photorc_core::seed::{self, stream};
use photorc_core::HD_FEC_BER;
use rayon::prelude::*;

use crate::config::{Settings, SweepKind, Variant};
use crate::error::{CliError, Result};
use crate::plot::{self, Series};

/// A detected stream and its reference symbols.
#[derive(Debug)]
pub struct Stream {
    pub symbols: SymbolStream,
    pub detected: DetectedWaveform,
}

/// Memo of simulated streams keyed by everything that determines them, so
/// sweeps and criteria that need the same stream simulate it once.
#[derive(Default)]
pub struct StreamCache {
    detected: Mutex<HashMap<String, Arc<Stream>>>,
    received: Mutex<HashMap<String, Arc<(SymbolStream, OpticalField)>>>,
}

fn stream_key(cfg: &ExperimentConfig, role: StreamRole) -> String {
    let n = match role {
        StreamRole::Train => cfg.run.n_train_symbols,
        StreamRole::Test(_) => cfg.run.n_test_symbols,
    };
    format!("{:?}|{:?}|{}|{}", cfg.link, role, n, cfg.run.seed)
}

impl StreamCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stream(&self, cfg: &ExperimentConfig, role: StreamRole) -> Result<Arc<Stream>> {
        let key = stream_key(cfg, role);
        if let Some(s) = self.detected.lock().expect("cache lock").get(&key) {
            return Ok(s.clone());
        }
        let (symbols, run) = simulate_stream(cfg, role)?;
        let s = Arc::new(Stream {
            symbols,
            detected: run.detected,
        });
        Ok(self
            .detected
            .lock()
            .expect("cache lock")
            .entry(key)
            .or_insert(s)
            .clone())
    }

    /// Received field before optical noise loading.
    pub fn received(&self, cfg: &ExperimentConfig, role: StreamRole) -> Result<Arc<(SymbolStream, OpticalField)>> {
        let mut clean = cfg.clone();
        clean.link.osnr_db = f64::INFINITY;
        let key = stream_key(&clean, role);
        if let Some(s) = self.received.lock().expect("cache lock").get(&key) {
            return Ok(s.clone());
        }
        let (symbols, run) = simulate_stream(&clean, role)?;
        let s = Arc::new((symbols, run.received));
        Ok(self
            .received
            .lock()
            .expect("cache lock")
            .entry(key)
            .or_insert(s)
            .clone())
    }

    /// Same stream as [`StreamCache::stream`] with `cfg.link.osnr_db`
    /// applied, reusing the propagated field across OSNR values.
    pub fn stream_at_osnr(&self, cfg: &ExperimentConfig, role: StreamRole) -> Result<Stream> {
        let rx = self.received(cfg, role)?;
        let mut link = cfg.link.clone();
        link.rng_seed = role.seed(cfg.run.seed);
        let noisy = add_ase_noise(&rx.1, link.osnr_db, seed::derive(link.rng_seed, stream::ASE))?;
        Ok(Stream {
            symbols: rx.0.clone(),
            detected: detect(&noisy, &link)?,
        })
    }
}

/// Trains on the training stream and scores `n_test_sets` test streams.
pub fn rc_from_cache(cfg: &ExperimentConfig, cache: &StreamCache) -> Result<RcReport> {
    let train = cache.stream(cfg, StreamRole::Train)?;
    let tests = (0..cfg.run.n_test_sets)
        .map(|i| cache.stream(cfg, StreamRole::Test(i)))
        .collect::<Result<Vec<_>>>()?;
    rc_on_streams(cfg, &train, &tests.iter().map(|t| &**t).collect::<Vec<_>>())
}

pub fn rc_on_streams(cfg: &ExperimentConfig, train: &Stream, tests: &[&Stream]) -> Result<RcReport> {
    let captures: Vec<Capture<'_>> = tests
        .iter()
        .enumerate()
        .map(|(i, t)| Capture {
            wave: &t.detected,
            symbols: &t.symbols,
            noise_seed: StreamRole::Test(i).reservoir_seed(cfg),
        })
        .collect();
    let train = Capture {
        wave: &train.detected,
        symbols: &train.symbols,
        noise_seed: StreamRole::Train.reservoir_seed(cfg),
    };
    Ok(run_rc_on(cfg, train, &captures)?)
}

/// One sweep result row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub variant: Option<Variant>,
    pub test_set: usize,
    pub record: SweepRecord,
}

fn variants(s: &Settings) -> Vec<Option<Variant>> {
    if s.sweep.variants.is_empty() {
        vec![None]
    } else {
        s.sweep.variants.iter().copied().map(Some).collect()
    }
}

fn base_config(s: &Settings, variant: Option<Variant>, seed: u64) -> ExperimentConfig {
    let mut cfg = s.experiment.clone();
    if let Some(v) = variant {
        v.apply(&mut cfg);
    }
    cfg.run.seed = seed;
    cfg
}

/// Rows of a run_rc-style evaluation at sweep coordinate `x`.
fn report_rows(cfg: &ExperimentConfig, variant: Option<Variant>, x: f64, r: Result<RcReport>) -> Vec<Row> {
    let p = &cfg.reservoir;
    match r {
        Ok(rep) => rep
            .tests
            .iter()
            .enumerate()
            .map(|(i, t)| Row {
                variant,
                test_set: i,
                record: SweepRecord {
                    delta_f_ghz: p.delta_f,
                    k_f: p.k_f,
                    x,
                    seed: cfg.run.seed,
                    snr_db: f64::NAN,
                    ber_rc: t.rc.ber,
                    ber_lr: t.lr.ber,
                    ber_naive: t.naive.ber,
                    n_bits: t.rc.counted_bits,
                    note: None,
                },
            })
            .collect(),
        Err(e) => vec![Row {
            variant,
            test_set: 0,
            record: SweepRecord::failed(p.delta_f, p.k_f, x, cfg.run.seed, e.to_string()),
        }],
    }
}

pub fn run(s: &Settings, cache: &StreamCache) -> Result<Vec<Row>> {
    let kind = s
        .sweep
        .kind
        .ok_or_else(|| CliError::Usage("no sweep selected: set sweep.kind or pass --kind".into()))?;
    let mut rows = Vec::new();
    for variant in variants(s) {
        for &seed in &s.sweep.seeds {
            let cfg = base_config(s, variant, seed);
            rows.extend(match kind {
                SweepKind::Map => map(&cfg, variant, &s.sweep.delta_f, &s.sweep.k_f, cache),
                SweepKind::Taps => taps(&cfg, variant, &s.sweep.taps, cache),
                SweepKind::Power => power(&cfg, variant, &s.sweep.power_dbm, cache),
                SweepKind::Osnr => osnr(&cfg, variant, &s.sweep.osnr_db, cache),
            });
        }
    }
    Ok(rows)
}

/// Consistency SNR and reservoir BER over the (detuning, feedback) grid.
pub fn map(
    cfg: &ExperimentConfig,
    variant: Option<Variant>,
    delta_f: &[f64],
    k_f: &[f64],
    cache: &StreamCache,
) -> Vec<Row> {
    let points: Vec<(f64, f64)> = delta_f.iter().flat_map(|&d| k_f.iter().map(move |&k| (d, k))).collect();
    let ctx = (|| -> Result<MapContext> {
        let train = cache.stream(cfg, StreamRole::Train)?;
        let test = cache.stream(cfg, StreamRole::Test(0))?;
        Ok(MapContext::from_streams(
            cfg,
            (train.symbols.clone(), train.detected.clone()),
            (test.symbols.clone(), test.detected.clone()),
        )?)
    })();
    let records: Vec<SweepRecord> = match &ctx {
        Ok(ctx) => points.par_iter().map(|&(d, k)| ctx.evaluate(d, k)).collect(),
        Err(e) => points
            .iter()
            .map(|&(d, k)| SweepRecord::failed(d, k, 0.0, cfg.run.seed, e.to_string()))
            .collect(),
    };
    records
        .into_iter()
        .map(|record| Row {
            variant,
            test_set: 0,
            record,
        })
        .collect()
}

/// BER against the number of neighbouring symbols per side.
pub fn taps(cfg: &ExperimentConfig, variant: Option<Variant>, taps: &[usize], cache: &StreamCache) -> Vec<Row> {
    let p = &cfg.reservoir;
    let result = (|| -> Result<Vec<Row>> {
        let mut c = cfg.clone();
        c.pipeline.taps = taps.iter().copied().max().unwrap_or(0);
        let train = cache.stream(&c, StreamRole::Train)?;
        let tests = (0..c.run.n_test_sets)
            .map(|i| cache.stream(&c, StreamRole::Test(i)))
            .collect::<Result<Vec<_>>>()?;
        let captures: Vec<Capture<'_>> = tests
            .iter()
            .enumerate()
            .map(|(i, t)| Capture {
                wave: &t.detected,
                symbols: &t.symbols,
                noise_seed: StreamRole::Test(i).reservoir_seed(&c),
            })
            .collect();
        let train_cap = Capture {
            wave: &train.detected,
            symbols: &train.symbols,
            noise_seed: StreamRole::Train.reservoir_seed(&c),
        };
        let points = tap_study(&c, train_cap, &captures, taps)?;
        Ok(points
            .into_iter()
            .map(|t| Row {
                variant,
                test_set: t.test_set,
                record: SweepRecord {
                    delta_f_ghz: p.delta_f,
                    k_f: p.k_f,
                    x: t.taps as f64,
                    seed: cfg.run.seed,
                    snr_db: f64::NAN,
                    ber_rc: t.rc.ber,
                    ber_lr: t.lr.ber,
                    ber_naive: t.naive.ber,
                    n_bits: t.rc.counted_bits,
                    note: None,
                },
            })
            .collect())
    })();
    result.unwrap_or_else(|e| {
        taps.iter()
            .map(|&k| Row {
                variant,
                test_set: 0,
                record: SweepRecord::failed(p.delta_f, p.k_f, k as f64, cfg.run.seed, e.to_string()),
            })
            .collect()
    })
}

/// Full pipeline at each launched peak power.
pub fn power(cfg: &ExperimentConfig, variant: Option<Variant>, powers: &[f64], cache: &StreamCache) -> Vec<Row> {
    powers
        .par_iter()
        .map(|&p| {
            let mut c = cfg.clone();
            c.link.launch_peak_power_dbm = p;
            report_rows(&c, variant, p, rc_from_cache(&c, cache))
        })
        .collect::<Vec<_>>()
        .concat()
}

/// Full pipeline at each OSNR; fiber propagation is shared across values.
pub fn osnr(cfg: &ExperimentConfig, variant: Option<Variant>, values: &[f64], cache: &StreamCache) -> Vec<Row> {
    values
        .par_iter()
        .map(|&o| {
            let mut c = cfg.clone();
            c.link.osnr_db = o;
            let r = (|| {
                let train = cache.stream_at_osnr(&c, StreamRole::Train)?;
                let tests = (0..c.run.n_test_sets)
                    .map(|i| cache.stream_at_osnr(&c, StreamRole::Test(i)))
                    .collect::<Result<Vec<_>>>()?;
                rc_on_streams(&c, &train, &tests.iter().collect::<Vec<_>>())
            })();
            report_rows(&c, variant, o, r)
        })
        .collect::<Vec<_>>()
        .concat()
}

fn num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:?}")
    }
}

fn variant_name(v: Option<Variant>) -> &'static str {
    v.map_or("", Variant::name)
}

pub const RECORD_HEADER: &str = "variant,test_set,delta_f_ghz,k_f,x,seed,snr_db,ber_rc,ber_lr,ber_naive,n_bits,note";

/// Per-record CSV; NaN is written as an empty field and notes are quoted.
pub fn records_csv(rows: &[Row]) -> String {
    let mut out = String::from(RECORD_HEADER);
    out.push('\n');
    for row in rows {
        let r = &row.record;
        let note = r
            .note
            .as_deref()
            .map(|n| format!("\"{}\"", n.replace('"', "\"\"")))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            variant_name(row.variant),
            row.test_set,
            num(r.delta_f_ghz),
            num(r.k_f),
            num(r.x),
            r.seed,
            num(r.snr_db),
            num(r.ber_rc),
            num(r.ber_lr),
            num(r.ber_naive),
            r.n_bits,
            note
        );
    }
    out
}

/// Splits one CSV line, honouring double-quoted fields.
fn split_csv(line: &str) -> Vec<String> {
    let mut fields = vec![String::new()];
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                chars.next();
                fields.last_mut().expect("nonempty").push('"');
            }
            ('"', _) => quoted = !quoted,
            (',', false) => fields.push(String::new()),
            _ => fields.last_mut().expect("nonempty").push(c),
        }
    }
    fields
}

/// Parses [`records_csv`] output.
pub fn parse_records_csv(text: &str) -> std::result::Result<Vec<Row>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(RECORD_HEADER) {
        return Err("line 1: not a sweep record file".into());
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let n = i + 2;
            let f = split_csv(line);
            if f.len() != 12 {
                return Err(format!("line {n}: expected 12 fields, found {}", f.len()));
            }
            let float = |s: &str| -> std::result::Result<f64, String> {
                if s.is_empty() {
                    Ok(f64::NAN)
                } else {
                    s.parse().map_err(|_| format!("line {n}: `{s}` is not a number"))
                }
            };
            let int = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| format!("line {n}: `{s}` is not an integer"))
            };
            let variant = match f[0].as_str() {
                "" => None,
                "r1" => Some(Variant::R1),
                "r2" => Some(Variant::R2),
                v => return Err(format!("line {n}: unknown variant `{v}`")),
            };
            Ok(Row {
                variant,
                test_set: int(&f[1])? as usize,
                record: SweepRecord {
                    delta_f_ghz: float(&f[2])?,
                    k_f: float(&f[3])?,
                    x: float(&f[4])?,
                    seed: int(&f[5])?,
                    snr_db: float(&f[6])?,
                    ber_rc: float(&f[7])?,
                    ber_lr: float(&f[8])?,
                    ber_naive: float(&f[9])?,
                    n_bits: int(&f[10])?,
                    note: (!f[11].is_empty()).then(|| f[11].clone()),
                },
            })
        })
        .collect()
}

/// Across-seed and across-test-set statistics, grouped per variant.
pub fn aggregate_rows(rows: &[Row]) -> Vec<(Option<Variant>, AggregateRow)> {
    let mut out = Vec::new();
    let mut names: Vec<Option<Variant>> = Vec::new();
    for r in rows {
        if !names.contains(&r.variant) {
            names.push(r.variant);
        }
    }
    for v in names {
        let recs: Vec<SweepRecord> = rows
            .iter()
            .filter(|r| r.variant == v)
            .map(|r| r.record.clone())
            .collect();
        out.extend(aggregate(&recs).into_iter().map(|a| (v, a)));
    }
    out
}

pub fn aggregate_csv(rows: &[(Option<Variant>, AggregateRow)]) -> String {
    let mut out = String::from(
        "variant,delta_f_ghz,k_f,x,n,n_nan,snr_mean,snr_min,snr_max,ber_rc_mean,ber_rc_min,ber_rc_max,ber_rc_std,\
         ber_lr_mean,ber_lr_min,ber_lr_max,ber_naive_mean\n",
    );
    for (v, a) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            variant_name(*v),
            num(a.delta_f_ghz),
            num(a.k_f),
            num(a.x),
            a.n,
            a.n_nan,
            num(a.snr_db.mean),
            num(a.snr_db.min),
            num(a.snr_db.max),
            num(a.ber_rc.mean),
            num(a.ber_rc.min),
            num(a.ber_rc.max),
            num(a.ber_rc.std),
            num(a.ber_lr.mean),
            num(a.ber_lr.min),
            num(a.ber_lr.max),
            num(a.ber_naive.mean)
        );
    }
    out
}

/// SVG figures for a sweep: `(file stem, svg)`.
pub fn figures(kind: SweepKind, agg: &[(Option<Variant>, AggregateRow)]) -> Vec<(String, String)> {
    let mut names: Vec<Option<Variant>> = Vec::new();
    for (v, _) in agg {
        if !names.contains(v) {
            names.push(*v);
        }
    }
    let suffix = |v: Option<Variant>| v.map(|v| format!("_{}", v.name())).unwrap_or_default();
    let mut out = Vec::new();
    match kind {
        SweepKind::Map => {
            for v in names {
                let rows: Vec<&AggregateRow> = agg.iter().filter(|(w, _)| *w == v).map(|(_, a)| a).collect();
                let mut xs: Vec<f64> = rows.iter().map(|a| a.delta_f_ghz).collect();
                let mut ys: Vec<f64> = rows.iter().map(|a| a.k_f).collect();
                for l in [&mut xs, &mut ys] {
                    l.sort_by(f64::total_cmp);
                    l.dedup();
                }
                let grid = |pick: &dyn Fn(&AggregateRow) -> f64| -> Vec<Vec<f64>> {
                    ys.iter()
                        .map(|&k| {
                            xs.iter()
                                .map(|&d| {
                                    rows.iter()
                                        .find(|a| a.delta_f_ghz == d && a.k_f == k)
                                        .map_or(f64::NAN, |a| pick(a))
                                })
                                .collect()
                        })
                        .collect()
                };
                let snr = grid(&|a| {
                    if a.snr_db.mean.is_finite() {
                        a.snr_db.mean
                    } else {
                        f64::NAN
                    }
                });
                let ber = grid(&|a| a.ber_rc.mean.max(1e-6).log10());
                out.push((
                    format!("map_snr{}", suffix(v)),
                    plot::heatmap(
                        "Reservoir consistency SNR",
                        "detuning (GHz)",
                        "feedback k_f",
                        &xs,
                        &ys,
                        &snr,
                        "SNR (dB)",
                    ),
                ));
                out.push((
                    format!("map_ber{}", suffix(v)),
                    plot::heatmap(
                        "Reservoir BER",
                        "detuning (GHz)",
                        "feedback k_f",
                        &xs,
                        &ys,
                        &ber,
                        "log10 BER",
                    ),
                ));
            }
        }
        SweepKind::Taps | SweepKind::Power | SweepKind::Osnr => {
            let (stem, x_label) = match kind {
                SweepKind::Taps => ("taps", "taps per side"),
                SweepKind::Power => ("power", "launched peak power (dBm)"),
                _ => ("osnr", "OSNR (dB / 0.1 nm)"),
            };
            let mut series = Vec::new();
            for v in names {
                let rows: Vec<&AggregateRow> = agg.iter().filter(|(w, _)| *w == v).map(|(_, a)| a).collect();
                let tag = v.map(|v| format!(" {}", v.name())).unwrap_or_default();
                series.push(Series {
                    name: format!("RC{tag}"),
                    points: rows.iter().map(|a| (a.x, a.ber_rc.mean)).collect(),
                });
                series.push(Series {
                    name: format!("LR{tag}"),
                    points: rows.iter().map(|a| (a.x, a.ber_lr.mean)).collect(),
                });
            }
            out.push((
                stem.to_string(),
                plot::line_plot("BER", x_label, "BER", &series, true, Some((HD_FEC_BER, "HD-FEC"))),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: Option<Variant>, x: f64, ber: f64, note: Option<&str>) -> Row {
        Row {
            variant: v,
            test_set: 1,
            record: SweepRecord {
                delta_f_ghz: -10.0,
                k_f: 0.05,
                x,
                seed: 3,
                snr_db: f64::NAN,
                ber_rc: ber,
                ber_lr: 0.01,
                ber_naive: 0.3,
                n_bits: 1000,
                note: note.map(String::from),
            },
        }
    }

    #[test]
    fn record_csv_round_trip() {
        let rows = vec![
            row(None, 1.0, 2e-3, None),
            row(Some(Variant::R2), 2.0, f64::NAN, Some("failed, \"badly\"")),
        ];
        let text = records_csv(&rows);
        let back = parse_records_csv(&text).unwrap();
        assert_eq!(records_csv(&back), text);
        assert_eq!(back[1].record.note.as_deref(), Some("failed, \"badly\""));
        assert!(back[1].record.ber_rc.is_nan());
    }

    #[test]
    fn aggregation_is_per_variant() {
        let rows = vec![
            row(Some(Variant::R1), 1.0, 1e-3, None),
            row(Some(Variant::R1), 1.0, 3e-3, None),
            row(Some(Variant::R2), 1.0, 5e-3, None),
        ];
        let agg = aggregate_rows(&rows);
        assert_eq!(agg.len(), 2);
        assert_eq!(agg[0].1.n, 2);
        assert!((agg[0].1.ber_rc.mean - 2e-3).abs() < 1e-15);
        assert_eq!(figures(SweepKind::Power, &agg).len(), 1);
    }
}

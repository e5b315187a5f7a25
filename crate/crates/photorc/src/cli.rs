//! Command-line front end.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use photorc_core::experiment::{rc_features, simulate_stream, StreamRole};
use photorc_core::link::measure_osnr;
use serde_json::{json, Value};

use crate::config::{self, Settings, SweepKind};
use crate::error::{CliError, Result};
use crate::format;
use crate::presets;
use crate::report;
use crate::sweep::{self, Stream, StreamCache};

#[derive(Debug, Parser)]
#[command(
    name = "photorc",
    version,
    about = "PAM-4 fiber link equalized by a delay-based photonic reservoir"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Configuration file applied on top of the preset (or the defaults).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Base seed; overrides run.seed and sweep.seeds.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Shipped preset: r1, r2, b2b, fig4a, fig4b, fig6, fig7a, fig7b, fig8.
    #[arg(long, global = true, value_name = "NAME")]
    pub preset: Option<String>,
    /// Shorter streams for quick runs.
    #[arg(long, global = true)]
    pub desk_scale: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the link and write optical fields, detected traces and symbols.
    Simulate,
    /// Simulate, train the readouts and write the BER report.
    Rc {
        /// Also export the reservoir feature matrix of test set 0 as CSV.
        #[arg(long)]
        features: bool,
    },
    /// Run the configured sweep and write CSV and SVG output.
    Sweep {
        /// map, taps, power or osnr; overrides sweep.kind.
        #[arg(long)]
        kind: Option<String>,
    },
    /// Run the rc pipeline on externally produced traces.
    Ingest {
        /// Directory holding train.lrc1, train.sym, test0.lrc1, test0.sym, ...
        #[arg(long = "in", value_name = "DIR")]
        input: Option<PathBuf>,
        #[arg(long, value_name = "FILE", requires = "train_symbols")]
        train_wave: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        train_symbols: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        test_wave: Vec<PathBuf>,
        #[arg(long, value_name = "FILE")]
        test_symbols: Vec<PathBuf>,
    },
    /// Re-render the aggregate CSV and figures of a sweep directory, or
    /// summarize an rc report.
    Report {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
    },
}

/// Preset, then config file, then `--seed`.
pub fn resolve(c: &Common) -> Result<Settings> {
    let mut s = match &c.preset {
        Some(name) => presets::load(name, c.desk_scale)?,
        None => Settings::default(),
    };
    if let Some(path) = &c.config {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        s = config::parse(&text, s)?;
    }
    if c.preset.is_none() && c.desk_scale {
        s.experiment = s.experiment.desk_scale();
    }
    if let Some(seed) = c.seed {
        s.experiment.run.seed = seed;
        s.sweep.seeds = vec![seed];
    }
    config::validate(&s)?;
    Ok(s)
}

fn out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_config(dir: &Path, s: &Settings) -> Result<()> {
    report::write_text(&dir.join("config.conf"), &config::to_text(s))
}

pub fn run(cli: Cli) -> Result<()> {
    let mut s = resolve(&cli.common)?;
    let out = &cli.common.out;
    match cli.command {
        Command::Simulate => simulate(&s, out),
        Command::Rc { features } => rc(&s, out, features),
        Command::Sweep { kind } => {
            if let Some(k) = kind {
                config::set(&mut s, "sweep.kind", &k)?;
                config::validate(&s)?;
            }
            run_sweep(&s, out)
        }
        Command::Ingest {
            input,
            train_wave,
            train_symbols,
            test_wave,
            test_symbols,
        } => {
            let files = match (input, train_wave, train_symbols) {
                (Some(dir), None, None) => IngestFiles::from_dir(&dir, s.experiment.run.n_test_sets),
                (None, Some(w), Some(sy)) => {
                    if test_wave.is_empty() || test_wave.len() != test_symbols.len() {
                        return Err(CliError::Usage(
                            "give one --test-symbols file per --test-wave file, at least one pair".into(),
                        ));
                    }
                    IngestFiles {
                        train: (w, sy),
                        tests: test_wave.into_iter().zip(test_symbols).collect(),
                    }
                }
                _ => {
                    return Err(CliError::Usage(
                        "ingest needs either --in DIR or --train-wave/--train-symbols with test files".into(),
                    ))
                }
            };
            s.experiment.run.n_test_sets = files.tests.len();
            ingest(&s, &files, out)
        }
        Command::Report { input } => report_cmd(&input, out, cli.common.out.as_os_str() != "out"),
    }
}

fn simulate(s: &Settings, out: &Path) -> Result<()> {
    out_dir(out)?;
    write_config(out, s)?;
    let cfg = &s.experiment;
    let roles = std::iter::once(StreamRole::Train).chain((0..cfg.run.n_test_sets).map(StreamRole::Test));
    let mut streams = Vec::new();
    for role in roles {
        let name = stream_name(role);
        eprintln!("simulating {name}");
        let (symbols, run) = simulate_stream(cfg, role)?;
        format::write_symbols(&out.join(format!("{name}.sym")), &symbols)?;
        format::write_detected(&out.join(format!("{name}.lrc1")), &run.detected)?;
        format::write_optical(&out.join(format!("{name}_launch.lrc1")), &run.launch)?;
        format::write_optical(&out.join(format!("{name}_received.lrc1")), &run.received)?;
        let p = run.propagation;
        streams.push(json!({
            "name": name,
            "symbols": symbols.len(),
            "step_m": p.step_m,
            "steps": p.steps,
            "refinements": p.refinements,
            "probe_error": p.probe_error,
            "received_osnr_db": measure_osnr(&run.received).ok().filter(|v| v.is_finite()),
        }));
    }
    let summary = json!({
        "config_hash": config::config_hash(s),
        "streams": streams,
    });
    report::write_text(&out.join("simulation.json"), &report::to_pretty(&summary))
}

fn stream_name(role: StreamRole) -> String {
    match role {
        StreamRole::Train => "train".into(),
        StreamRole::Test(i) => format!("test{i}"),
    }
}

fn print_summary(v: &Value) {
    let m = &v["mean_ber"];
    println!(
        "theta {} ps, speed penalty {}, lambda {}",
        v["theta_ps"], v["speed_penalty"], v["rc"]["lambda"]
    );
    println!("mean BER  rc {}  lr {}  naive {}", m["rc"], m["lr"], m["naive"]);
}

fn write_rc_outputs(s: &Settings, r: &photorc_core::experiment::RcReport, out: &Path) -> Result<Value> {
    let v = report::rc_report_json(s, r);
    report::write_text(&out.join("report.json"), &report::to_pretty(&v))?;
    report::write_text(&out.join("rc_model.csv"), &report::model_to_text(&r.rc_model))?;
    report::write_text(&out.join("lr_model.csv"), &report::model_to_text(&r.baselines.lr))?;
    print_summary(&v);
    Ok(v)
}

fn rc(s: &Settings, out: &Path, features: bool) -> Result<()> {
    out_dir(out)?;
    write_config(out, s)?;
    let cache = StreamCache::new();
    let cfg = &s.experiment;
    let r = sweep::rc_from_cache(cfg, &cache)?;
    write_rc_outputs(s, &r, out)?;
    if features {
        let t = cache.stream(cfg, StreamRole::Test(0))?;
        let f = rc_features(cfg, &r.rc_model, &t.detected, StreamRole::Test(0).reservoir_seed(cfg))?;
        report::write_features(&out.join("features_test0.csv"), &f)?;
    }
    Ok(())
}

pub struct IngestFiles {
    pub train: (PathBuf, PathBuf),
    pub tests: Vec<(PathBuf, PathBuf)>,
}

impl IngestFiles {
    /// Layout written by `simulate`.
    pub fn from_dir(dir: &Path, n_tests: usize) -> Self {
        Self {
            train: (dir.join("train.lrc1"), dir.join("train.sym")),
            tests: (0..n_tests)
                .map(|i| (dir.join(format!("test{i}.lrc1")), dir.join(format!("test{i}.sym"))))
                .collect(),
        }
    }
}

fn load_stream(s: &Settings, wave: &Path, symbols: &Path) -> Result<Stream> {
    let baud = s.experiment.link.baud_period();
    Ok(Stream {
        detected: format::read_detected(wave, baud)?,
        symbols: format::read_symbols(symbols)?,
    })
}

pub fn ingest(s: &Settings, files: &IngestFiles, out: &Path) -> Result<()> {
    let train = load_stream(s, &files.train.0, &files.train.1)?;
    let tests = files
        .tests
        .iter()
        .map(|(w, sy)| load_stream(s, w, sy))
        .collect::<Result<Vec<_>>>()?;
    out_dir(out)?;
    write_config(out, s)?;
    let r = sweep::rc_on_streams(&s.experiment, &train, &tests.iter().collect::<Vec<_>>())?;
    write_rc_outputs(s, &r, out)?;
    Ok(())
}

fn write_sweep_outputs(kind: SweepKind, rows: &[sweep::Row], out: &Path, records: bool) -> Result<()> {
    if records {
        report::write_text(&out.join("sweep.csv"), &sweep::records_csv(rows))?;
    }
    let agg = sweep::aggregate_rows(rows);
    report::write_text(&out.join("aggregate.csv"), &sweep::aggregate_csv(&agg))?;
    for (stem, svg) in sweep::figures(kind, &agg) {
        report::write_text(&out.join(format!("{stem}.svg")), &svg)?;
    }
    Ok(())
}

fn run_sweep(s: &Settings, out: &Path) -> Result<()> {
    let kind = s
        .sweep
        .kind
        .ok_or_else(|| CliError::Usage("no sweep selected: set sweep.kind or pass --kind".into()))?;
    out_dir(out)?;
    write_config(out, s)?;
    eprintln!("running {} sweep", kind.name());
    let rows = sweep::run(s, &StreamCache::new())?;
    write_sweep_outputs(kind, &rows, out, true)?;
    let failed = rows.iter().filter(|r| r.record.ber_rc.is_nan()).count();
    println!("{} records, {failed} failed", rows.len());
    Ok(())
}

fn report_cmd(input: &Path, out: &Path, out_given: bool) -> Result<()> {
    let target = if out_given { out } else { input };
    let report_json = input.join("report.json");
    if report_json.exists() {
        let text = fs::read_to_string(&report_json).map_err(|e| CliError::io(&report_json, e))?;
        let v: Value =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", report_json.display())))?;
        println!("config hash {}", v["config_hash"].as_str().unwrap_or("?"));
        print_summary(&v);
        return Ok(());
    }
    let conf_path = input.join("config.conf");
    let conf = fs::read_to_string(&conf_path).map_err(|e| CliError::io(&conf_path, e))?;
    let s = config::parse(&conf, Settings::default())?;
    let kind = s
        .sweep
        .kind
        .ok_or_else(|| CliError::Usage(format!("{}: no sweep.kind", conf_path.display())))?;
    let csv_path = input.join("sweep.csv");
    let csv = fs::read_to_string(&csv_path).map_err(|e| CliError::io(&csv_path, e))?;
    let rows = sweep::parse_records_csv(&csv).map_err(|e| CliError::Usage(format!("{}: {e}", csv_path.display())))?;
    out_dir(target)?;
    write_sweep_outputs(kind, &rows, target, target != input)
}

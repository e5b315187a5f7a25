//! Reports, model files and feature exports.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use photorc_core::experiment::RcReport;
use photorc_core::pipeline::{FeatureMatrix, NormAffine};
use photorc_core::readout::{BerReport, DesignMatrix, GridPoint, ReadoutModel, TrainingReport};
use photorc_core::HD_FEC_BER;
use serde_json::{json, Map, Value};

use crate::config::{self, Settings};
use crate::error::{CliError, Result};

fn config_json(s: &Settings) -> Value {
    let map: Map<String, Value> = config::entries(s)
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    Value::Object(map)
}

fn ber_json(b: &BerReport) -> Value {
    json!({
        "ber": b.ber,
        "ser": b.ser,
        "bit_errors": b.bit_errors,
        "symbol_errors": b.symbol_errors,
        "counted_bits": b.counted_bits,
    })
}

fn grid_json(g: &GridPoint) -> Value {
    json!({
        "lambda": g.lambda,
        "validation_ber": g.validation_ber,
        "validation_mse": g.validation_mse,
        "skipped": g.skipped,
    })
}

fn training_json(model: &ReadoutModel, t: &TrainingReport) -> Value {
    json!({
        "lambda": model.ridge_lambda,
        "taps": model.taps,
        "n_features": model.weights.len(),
        "n_train": t.n_train,
        "n_validation": t.n_validation,
        "grid": t.grid.iter().map(grid_json).collect::<Vec<_>>(),
    })
}

/// Report of an `rc` or `ingest` run. It depends only on the resolved
/// settings and the numbers, so both commands produce the same bytes for
/// the same streams.
pub fn rc_report_json(s: &Settings, r: &RcReport) -> Value {
    let tests: Vec<Value> = r
        .tests
        .iter()
        .enumerate()
        .map(|(i, t)| json!({"set": i, "rc": ber_json(&t.rc), "lr": ber_json(&t.lr), "naive": ber_json(&t.naive)}))
        .collect();
    json!({
        "config_hash": config::config_hash(s),
        "config": config_json(s),
        "theta_ps": r.theta_ps,
        "speed_penalty": r.speed_penalty,
        "hd_fec_ber": HD_FEC_BER,
        "rc": training_json(&r.rc_model, &r.rc_training),
        "lr": training_json(&r.baselines.lr, &r.baselines.lr_training),
        "naive": {
            "sample_offset": r.baselines.naive.sample_offset,
            "thresholds": r.baselines.naive.thresholds.to_vec(),
        },
        "tests": tests,
        "mean_ber": {
            "rc": r.mean_ber(|t| t.rc.ber),
            "lr": r.mean_ber(|t| t.lr.ber),
            "naive": r.mean_ber(|t| t.naive.ber),
        },
    })
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Column names of a reservoir readout with `n_nodes` nodes and `taps`
/// neighbours per side.
pub fn column_names(n_nodes: usize, taps: usize) -> Vec<String> {
    let mut names: Vec<String> = (0..=2 * taps)
        .flat_map(|j| (0..n_nodes).map(move |i| format!("node{i}_tap{j}")))
        .collect();
    names.push("bias".into());
    names
}

/// Model file: a `#` header line holding the non-weight fields as JSON,
/// then `column,weight` CSV rows.
pub fn model_to_text(m: &ReadoutModel) -> String {
    let header = json!({
        "ridge_lambda": m.ridge_lambda,
        "taps": m.taps,
        "target_levels": m.target_levels.to_vec(),
        "slicer_thresholds": m.slicer_thresholds.to_vec(),
        "norm_affine": m.norm_affine.map(|a| json!({"min": a.min, "max": a.max})),
        "feature_ranges": m.feature_ranges.iter().map(|&(lo, hi)| vec![lo, hi]).collect::<Vec<_>>(),
    });
    let mut out = String::from("# photorc readout model\n");
    let _ = writeln!(
        out,
        "# {}",
        serde_json::to_string(&header).expect("json values serialize")
    );
    out.push_str("column,weight\n");
    let mut names = column_names(m.feature_ranges.len(), m.taps);
    if m.feature_ranges.is_empty() || names.len() != m.weights.len() {
        names = (0..m.weights.len()).map(|i| format!("w{i}")).collect();
    }
    for (n, w) in names.iter().zip(&m.weights) {
        let _ = writeln!(out, "{n},{w:?}");
    }
    out
}

pub fn model_from_text(text: &str) -> std::result::Result<ReadoutModel, String> {
    let mut lines = text.lines();
    if lines.next() != Some("# photorc readout model") {
        return Err("line 1: missing model header".into());
    }
    let header = lines
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .ok_or("line 2: missing parameter block")?;
    let h: Value = serde_json::from_str(header).map_err(|e| format!("line 2: {e}"))?;
    let num = |v: &Value, what: &str| v.as_f64().ok_or_else(|| format!("line 2: `{what}` is not a number"));
    let arr = |key: &str| -> std::result::Result<Vec<f64>, String> {
        h[key]
            .as_array()
            .ok_or_else(|| format!("line 2: `{key}` is not a list"))?
            .iter()
            .map(|v| num(v, key))
            .collect()
    };
    let levels: [f64; 4] = arr("target_levels")?
        .try_into()
        .map_err(|_| "line 2: need 4 target levels")?;
    let thresholds: [f64; 3] = arr("slicer_thresholds")?
        .try_into()
        .map_err(|_| "line 2: need 3 thresholds")?;
    let norm_affine = match &h["norm_affine"] {
        Value::Null => None,
        v => Some(NormAffine {
            min: num(&v["min"], "norm_affine.min")?,
            max: num(&v["max"], "norm_affine.max")?,
        }),
    };
    let feature_ranges = h["feature_ranges"]
        .as_array()
        .ok_or("line 2: `feature_ranges` is not a list")?
        .iter()
        .map(|p| Ok((num(&p[0], "feature_ranges")?, num(&p[1], "feature_ranges")?)))
        .collect::<std::result::Result<Vec<_>, String>>()?;
    if lines.next() != Some("column,weight") {
        return Err("line 3: expected `column,weight`".into());
    }
    let weights = lines
        .enumerate()
        .map(|(i, l)| {
            let (_, w) = l
                .split_once(',')
                .ok_or_else(|| format!("line {}: expected `column,weight`", i + 4))?;
            w.parse::<f64>()
                .map_err(|_| format!("line {}: `{w}` is not a number", i + 4))
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    Ok(ReadoutModel {
        weights,
        ridge_lambda: num(&h["ridge_lambda"], "ridge_lambda")?,
        target_levels: levels,
        slicer_thresholds: thresholds,
        norm_affine,
        feature_ranges,
        taps: h["taps"].as_u64().ok_or("line 2: `taps` is not an integer")? as usize,
    })
}

/// Feature matrix as CSV with a header of column names.
pub fn write_features(path: &Path, f: &FeatureMatrix) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| CliError::io(path, e);
    writeln!(w, "{}", f.column_names().join(",")).map_err(io)?;
    let mut row = vec![0.0; f.cols()];
    let mut line = String::new();
    for r in 0..f.rows() {
        f.fill_row(r, &mut row);
        line.clear();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            let _ = write!(line, "{v:?}");
        }
        writeln!(w, "{line}").map_err(io)?;
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> ReadoutModel {
        ReadoutModel {
            weights: (0..7).map(|i| i as f64 * 0.1 - 0.37).collect(),
            ridge_lambda: 1e-4,
            target_levels: [-3.0, -1.0, 1.0, 3.0],
            slicer_thresholds: [-2.0, 0.0, 2.0],
            norm_affine: Some(NormAffine {
                min: 0.0123,
                max: 1.5e-3 + 2.0,
            }),
            feature_ranges: vec![(0.1, 0.9), (-1.0, 3.25)],
            taps: 1,
        }
    }

    #[test]
    fn model_round_trip_is_byte_identical() {
        let text = model_to_text(&model());
        let back = model_from_text(&text).unwrap();
        assert_eq!(back, model());
        assert_eq!(model_to_text(&back), text);
    }

    #[test]
    fn column_names_match_feature_layout() {
        let n = column_names(2, 1);
        assert_eq!(n.len(), 7);
        assert_eq!(n[0], "node0_tap0");
        assert_eq!(n[3], "node1_tap1");
        assert_eq!(n[6], "bias");
    }

    #[test]
    fn malformed_model_names_line() {
        let text = model_to_text(&model()).replace("node0_tap1,", "node0_tap1;");
        assert!(model_from_text(&text).unwrap_err().starts_with("line "));
    }
}

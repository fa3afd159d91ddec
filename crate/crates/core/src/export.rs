//! File formats written by the command layer.
//!
//! CSV numbers use 17 significant digits (`%.17g` style) so every value
//! parses back to the identical `f64`. JSON numbers use the shortest
//! representation that round-trips, which is equally exact.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::{MatrixKind, ReproMatrix};
use crate::pipeline::Analysis;
use crate::scores::ScoreId;
use crate::selection::Selection;

pub const TOOL_NAME: &str = "reprosel";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats like C's `%.17g`.
pub fn format_sig17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        trim_fraction(&format!("{x:.*}", (16 - exp) as usize)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Serialize(e.to_string())
}

/// Square CSV with the axis ids as header row and first column.
pub fn matrix_to_csv(m: &ReproMatrix) -> Result<String> {
    let mut w = csv_writer();
    let mut header = vec![String::new()];
    header.extend(m.axis().iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for (i, id) in m.axis().iter().enumerate() {
        let mut row = vec![id.clone()];
        row.extend(m.row(i).iter().map(|&v| format_sig17(v)));
        w.write_record(&row).map_err(csv_err)?;
    }
    finish_csv(w)
}

/// Parses a matrix written by [`matrix_to_csv`]. Row ids must repeat the
/// header ids in the same order.
pub fn matrix_from_csv(text: &str, source_name: &str, kind: MatrixKind) -> Result<ReproMatrix> {
    let fail = |message: String| Error::MatrixParse {
        source_name: source_name.to_string(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = records
        .next()
        .ok_or_else(|| fail("empty file".into()))?
        .map_err(|e| fail(e.to_string()))?;
    let axis: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::with_capacity(axis.len());
    for (i, record) in records.enumerate() {
        let record = record.map_err(|e| fail(e.to_string()))?;
        let id = record.get(0).unwrap_or_default();
        if axis.get(i).map(String::as_str) != Some(id) {
            return Err(fail(format!(
                "row {} has id {id:?}, expected {:?}",
                i + 1,
                axis.get(i)
            )));
        }
        let row = record
            .iter()
            .skip(1)
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| fail(format!("row {id:?}: {v:?} is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    ReproMatrix::from_rows(axis, rows, kind).map_err(|e| fail(e.to_string()))
}

/// One row per (mode, model), one column per score, modes in config order.
pub fn scores_csv(analysis: &Analysis) -> Result<String> {
    let mut w = csv_writer();
    let mut header = vec!["mode".to_string(), "model".to_string()];
    header.extend(ScoreId::ALL.iter().map(|s| s.label().to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for mode in &analysis.modes {
        for (m, model) in analysis.config.models().iter().enumerate() {
            let mut row = vec![mode.mode.clone(), model.clone()];
            row.extend(mode.scores.iter().map(|s| format_sig17(s.per_model[m])));
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    finish_csv(w)
}

fn matrix_json(m: &ReproMatrix) -> Value {
    json!({ "axis": m.axis(), "values": m.rows() })
}

/// Per-mode scores with their full pairwise matrices.
pub fn scores_json(analysis: &Analysis) -> Value {
    let modes: Vec<Value> = analysis
        .modes
        .iter()
        .map(|mode| {
            let scores: Vec<Value> = mode
                .scores
                .iter()
                .map(|s| {
                    json!({
                        "score": s.score.label(),
                        "higher_is_better": s.score.higher_is_better(),
                        "per_model": s.per_model,
                        "pairwise": matrix_json(&s.pairwise),
                    })
                })
                .collect();
            json!({ "mode": mode.mode, "models": analysis.config.models(), "scores": scores })
        })
        .collect();
    json!({ "modes": modes })
}

fn selection_json(s: &Selection, axis: &[String]) -> Value {
    let strengths: Vec<Value> = axis
        .iter()
        .zip(&s.strengths)
        .map(|(id, v)| json!({ "model": id, "strength": v }))
        .collect();
    json!({
        "winner": s.winner,
        "winner_index": s.winner_index,
        "tie": s.tie,
        "strengths": strengths,
    })
}

/// Selection from precomputed matrices, as written by the `select` command.
pub fn selection_report(s: &Selection, overall: &ReproMatrix) -> Value {
    let mut v = selection_json(s, overall.axis());
    v["overall"] = matrix_json(overall);
    v
}

/// Relative paths of the heatmap CSVs written for one mode or the grand mean.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MatrixFiles {
    pub view_average: String,
    pub rank_correlation: String,
    pub overall: String,
    /// `(view id, path)`; empty for the grand mean.
    pub view_specific: Vec<(String, String)>,
    /// `(model id, path)`; empty for the grand mean.
    pub gnn_specific: Vec<(String, String)>,
}

pub fn report_json(
    analysis: &Analysis,
    mode_files: &[MatrixFiles],
    grand_files: &MatrixFiles,
    winner_weights_file: &str,
) -> Value {
    let models = analysis.config.models();
    let modes: Vec<Value> = analysis
        .modes
        .iter()
        .zip(mode_files)
        .map(|(mode, files)| {
            let mut v = selection_json(&mode.selection, models);
            v["mode"] = json!(mode.mode);
            v["runs"] = json!(mode.runs);
            v["matrices"] = json!(files);
            v
        })
        .collect();
    let mut grand = selection_json(&analysis.selection, models);
    grand["matrices"] = json!(grand_files);
    json!({
        "tool": { "name": TOOL_NAME, "version": TOOL_VERSION },
        "pool": {
            "models": models,
            "views": analysis.config.views(),
            "modes": analysis.config.modes(),
            "n_r": analysis.config.n_r(),
            "thresholds": analysis.config.thresholds(),
        },
        "options": analysis.options,
        "modes": modes,
        "grand": grand,
        "winner_per_mode": analysis.modes.iter().map(|m| &m.selection.winner).collect::<Vec<_>>(),
        "modes_agree": analysis.modes_agree,
        "winner_weights": winner_weights_file,
        "scores": { "csv": "scores.csv", "json": "scores.json" },
    })
}

/// `biomarker,label,mean_abs_weight`; the label column is empty without
/// configured labels.
pub fn winner_weights_csv(weights: &[f64], labels: Option<&[String]>) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["biomarker", "label", "mean_abs_weight"])
        .map_err(csv_err)?;
    for (i, v) in weights.iter().enumerate() {
        let label = labels.and_then(|l| l.get(i)).map_or("", String::as_str);
        w.write_record([i.to_string().as_str(), label, format_sig17(*v).as_str()])
            .map_err(csv_err)?;
    }
    finish_csv(w)
}

pub fn json_bytes(v: &impl Serialize) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v).map_err(|e| Error::Serialize(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestFlags {
    pub allow_missing: bool,
    pub normalize_overall: bool,
    pub signed_ranking: bool,
    pub thresholds: Option<Vec<usize>>,
}

/// Provenance record of one command invocation. Written as `started` before
/// any other output and rewritten as `complete` with every output's hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub status: String,
    /// Seconds since the Unix epoch. The only field that differs between
    /// otherwise identical invocations.
    pub created_unix: u64,
    pub config: Option<FileEntry>,
    pub inputs: Vec<FileEntry>,
    pub out_dir: String,
    pub flags: ManifestFlags,
    pub scores: Vec<String>,
    pub outputs: Vec<FileEntry>,
}

impl RunManifest {
    pub fn new(command: &str, out_dir: &Path, flags: ManifestFlags) -> Self {
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        RunManifest {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            command: command.into(),
            status: "started".into(),
            created_unix,
            config: None,
            inputs: Vec::new(),
            out_dir: out_dir.display().to_string(),
            flags,
            scores: Vec::new(),
            outputs: Vec::new(),
        }
    }
}

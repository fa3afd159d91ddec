//! JSONL weight ingestion and the immutable per-cell index.
//!
//! One record per line:
//! `{"model": str, "view": str, "mode": str, "run": int, "weights": [float; n_r]}`.
//! Records are re-sorted into config order on load, so line order in the
//! file never affects the resulting store.

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::StudyConfig;
use crate::error::{Error, Result};

/// One learned weight vector for a (model, view, mode, run) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightRecord {
    #[serde(rename = "model")]
    pub model_id: String,
    #[serde(rename = "view")]
    pub view_id: String,
    #[serde(rename = "mode")]
    pub mode_id: String,
    #[serde(rename = "run")]
    pub run_id: u64,
    pub weights: Vec<f64>,
}

impl WeightRecord {
    pub fn new(
        model: impl Into<String>,
        view: impl Into<String>,
        mode: impl Into<String>,
        run: u64,
        weights: Vec<f64>,
    ) -> Self {
        WeightRecord {
            model_id: model.into(),
            view_id: view.into(),
            mode_id: mode.into(),
            run_id: run,
            weights,
        }
    }

    fn key_string(&self) -> String {
        format!(
            "({}, {}, {}, {})",
            self.model_id, self.view_id, self.mode_id, self.run_id
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Downgrade missing (model, view, mode) cells from an error to a
    /// warning. Pipeline stages then fail on the first missing cell they touch.
    pub allow_missing: bool,
}

/// Cell coordinates as config indices: (model, view, mode).
pub type CellIndex = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct WeightStore {
    config: StudyConfig,
    records: Vec<WeightRecord>,
    cells: BTreeMap<CellIndex, Range<usize>>,
}

/// Everything wrong with an input, collected rather than fail-fast.
#[derive(Debug, Default)]
pub struct Diagnostics {
    pub errors: Vec<Error>,
    pub warnings: Vec<String>,
    pub records: usize,
}

impl Diagnostics {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

struct Parsed {
    line: usize,
    source: Option<PathBuf>,
    key: (usize, usize, usize, u64),
    record: WeightRecord,
}

fn wrap(source: &Option<PathBuf>, err: Error) -> Error {
    match source {
        Some(path) => Error::InFile {
            path: path.clone(),
            source: Box::new(err),
        },
        None => err,
    }
}

fn parse_line(
    config: &StudyConfig,
    line_no: usize,
    line: &str,
) -> std::result::Result<(CellIndex, WeightRecord), Error> {
    let record: WeightRecord = serde_json::from_str(line).map_err(|e| Error::MalformedLine {
        line: line_no,
        message: e.to_string(),
    })?;
    let lookup = |kind: &'static str, idx: Option<usize>, id: &str| {
        idx.ok_or_else(|| Error::UnknownId {
            kind,
            id: id.to_string(),
            line: Some(line_no),
        })
    };
    let m = lookup(
        "model",
        config.model_index(&record.model_id),
        &record.model_id,
    )?;
    let v = lookup("view", config.view_index(&record.view_id), &record.view_id)?;
    let o = lookup("mode", config.mode_index(&record.mode_id), &record.mode_id)?;
    if record.weights.len() != config.n_r() {
        return Err(Error::LengthMismatch {
            line: line_no,
            expected: config.n_r(),
            found: record.weights.len(),
        });
    }
    if let Some(index) = record.weights.iter().position(|w| !w.is_finite()) {
        return Err(Error::NonFiniteWeight {
            line: line_no,
            index,
        });
    }
    Ok(((m, v, o), record))
}

fn parse_text(
    config: &StudyConfig,
    text: &str,
    source: Option<PathBuf>,
    out: &mut Vec<Parsed>,
    errors: &mut Vec<Error>,
) {
    for (i, line) in text.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(config, i + 1, line) {
            Ok(((m, v, o), record)) => out.push(Parsed {
                line: i + 1,
                source: source.clone(),
                key: (m, v, o, record.run_id),
                record,
            }),
            Err(e) => errors.push(wrap(&source, e)),
        }
    }
}

/// Sorts, de-duplicates and indexes parsed records. Returns the store (if no
/// error was found) together with every error and warning encountered.
fn assemble(
    config: StudyConfig,
    mut parsed: Vec<Parsed>,
    mut errors: Vec<Error>,
    opts: LoadOptions,
) -> (Option<WeightStore>, Diagnostics) {
    // Stable sort keeps file order among equal keys so the duplicate report
    // names the first occurrence.
    parsed.sort_by_key(|p| p.key);
    let mut records = Vec::with_capacity(parsed.len());
    let mut keys = Vec::with_capacity(parsed.len());
    let mut first: Option<&Parsed> = None;
    for p in &parsed {
        if let Some(prev) = first.filter(|prev| prev.key == p.key) {
            errors.push(wrap(
                &p.source,
                Error::DuplicateKey {
                    line: p.line,
                    first_line: prev.line,
                    key: p.record.key_string(),
                },
            ));
            continue;
        }
        first = Some(p);
        keys.push(p.key);
        records.push(p.record.clone());
    }

    let mut cells = BTreeMap::new();
    let mut start = 0;
    while start < keys.len() {
        let cell = (keys[start].0, keys[start].1, keys[start].2);
        let mut end = start + 1;
        while end < keys.len() && (keys[end].0, keys[end].1, keys[end].2) == cell {
            end += 1;
        }
        cells.insert(cell, start..end);
        start = end;
    }

    let mut warnings = Vec::new();
    for (m, model) in config.models().iter().enumerate() {
        for (v, view) in config.views().iter().enumerate() {
            for (o, mode) in config.modes().iter().enumerate() {
                if cells.contains_key(&(m, v, o)) {
                    continue;
                }
                let err = Error::MissingCell {
                    model: model.clone(),
                    view: view.clone(),
                    mode: mode.clone(),
                };
                if opts.allow_missing {
                    warnings.push(err.to_string());
                } else {
                    errors.push(err);
                }
            }
        }
    }

    let diagnostics = Diagnostics {
        records: records.len(),
        errors,
        warnings,
    };
    let store = diagnostics.is_ok().then_some(WeightStore {
        config,
        records,
        cells,
    });
    (store, diagnostics)
}

impl WeightStore {
    /// Loads and validates a single JSONL file.
    pub fn load(path: impl AsRef<Path>, config: StudyConfig, opts: LoadOptions) -> Result<Self> {
        Self::load_many(&[path.as_ref()], config, opts)
    }

    /// Loads several JSONL files into one store. Fails with the first error found.
    pub fn load_many<P: AsRef<Path>>(
        paths: &[P],
        config: StudyConfig,
        opts: LoadOptions,
    ) -> Result<Self> {
        let (store, mut diag) = Self::check_paths(paths, config, opts);
        match store {
            Some(store) => Ok(store),
            None => Err(diag.errors.remove(0)),
        }
    }

    /// Validates without stopping at the first problem.
    pub fn validate_paths<P: AsRef<Path>>(
        paths: &[P],
        config: StudyConfig,
        opts: LoadOptions,
    ) -> Diagnostics {
        Self::check_paths(paths, config, opts).1
    }

    fn check_paths<P: AsRef<Path>>(
        paths: &[P],
        config: StudyConfig,
        opts: LoadOptions,
    ) -> (Option<WeightStore>, Diagnostics) {
        let mut parsed = Vec::new();
        let mut errors = Vec::new();
        let tag = paths.len() > 1;
        for path in paths {
            let path = path.as_ref();
            match std::fs::read_to_string(path) {
                Ok(text) => {
                    let source = tag.then(|| path.to_path_buf());
                    parse_text(&config, &text, source, &mut parsed, &mut errors);
                }
                Err(e) => errors.push(Error::io(path, e)),
            }
        }
        assemble(config, parsed, errors, opts)
    }

    /// Parses JSONL from memory.
    pub fn from_jsonl(text: &str, config: StudyConfig, opts: LoadOptions) -> Result<Self> {
        let mut parsed = Vec::new();
        let mut errors = Vec::new();
        parse_text(&config, text, None, &mut parsed, &mut errors);
        let (store, mut diag) = assemble(config, parsed, errors, opts);
        store.ok_or_else(|| diag.errors.remove(0))
    }

    /// Builds a store from in-memory records under the same validation rules
    /// as file loading. Line numbers in errors are 1-based record positions.
    pub fn from_records(
        config: StudyConfig,
        records: Vec<WeightRecord>,
        opts: LoadOptions,
    ) -> Result<Self> {
        let mut parsed = Vec::with_capacity(records.len());
        let mut errors = Vec::new();
        for (i, record) in records.into_iter().enumerate() {
            let line = i + 1;
            let lookup = |kind: &'static str, idx: Option<usize>, id: &str| {
                idx.ok_or_else(|| Error::UnknownId {
                    kind,
                    id: id.to_string(),
                    line: Some(line),
                })
            };
            let checked = (|| {
                let m = lookup(
                    "model",
                    config.model_index(&record.model_id),
                    &record.model_id,
                )?;
                let v = lookup("view", config.view_index(&record.view_id), &record.view_id)?;
                let o = lookup("mode", config.mode_index(&record.mode_id), &record.mode_id)?;
                if record.weights.len() != config.n_r() {
                    return Err(Error::LengthMismatch {
                        line,
                        expected: config.n_r(),
                        found: record.weights.len(),
                    });
                }
                if let Some(index) = record.weights.iter().position(|w| !w.is_finite()) {
                    return Err(Error::NonFiniteWeight { line, index });
                }
                Ok((m, v, o))
            })();
            match checked {
                Ok((m, v, o)) => parsed.push(Parsed {
                    line,
                    source: None,
                    key: (m, v, o, record.run_id),
                    record,
                }),
                Err(e) => errors.push(e),
            }
        }
        let (store, mut diag) = assemble(config, parsed, errors, opts);
        store.ok_or_else(|| diag.errors.remove(0))
    }

    pub fn config(&self) -> &StudyConfig {
        &self.config
    }

    /// All records in canonical order: config model, view, mode order, then run id.
    pub fn records(&self) -> &[WeightRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Runs of one cell sorted by run id. Empty only when the store was
    /// loaded with `allow_missing` and the cell is absent.
    pub fn records_for(&self, model: &str, view: &str, mode: &str) -> Result<&[WeightRecord]> {
        let cell = (
            self.config.require_model(model)?,
            self.config.require_view(view)?,
            self.config.require_mode(mode)?,
        );
        Ok(self.cell(cell))
    }

    pub fn cell(&self, cell: CellIndex) -> &[WeightRecord] {
        self.cells
            .get(&cell)
            .map(|r| &self.records[r.clone()])
            .unwrap_or(&[])
    }

    /// Cells with no runs (only possible under `allow_missing`).
    pub fn missing_cells(&self) -> Vec<CellIndex> {
        let c = &self.config;
        let mut out = Vec::new();
        for m in 0..c.models().len() {
            for v in 0..c.views().len() {
                for o in 0..c.modes().len() {
                    if !self.cells.contains_key(&(m, v, o)) {
                        out.push((m, v, o));
                    }
                }
            }
        }
        out
    }

    /// Canonical JSONL serialization (one record per line, LF endings).
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    /// The same records re-indexed under a different config (for example a
    /// reordered model axis or overridden thresholds).
    pub fn with_config(&self, config: StudyConfig, opts: LoadOptions) -> Result<Self> {
        Self::from_records(config, self.records.clone(), opts)
    }
}

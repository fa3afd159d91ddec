//! Study layout: biomarker count, the model / view / mode axes and the
//! top-k thresholds shared by every downstream matrix.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Validated study description.
///
/// On disk this is a JSON object
/// `{"n_r": int, "models": [str], "views": [str], "modes": [str], "thresholds": [int]}`
/// with an optional `"labels": [str]` naming each biomarker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct StudyConfig {
    n_r: usize,
    models: Vec<String>,
    views: Vec<String>,
    modes: Vec<String>,
    thresholds: Vec<usize>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n_r: usize,
    models: Vec<String>,
    views: Vec<String>,
    modes: Vec<String>,
    thresholds: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<RawConfig> for StudyConfig {
    type Error = Error;

    fn try_from(raw: RawConfig) -> Result<Self> {
        let mut config =
            StudyConfig::new(raw.n_r, raw.models, raw.views, raw.modes, raw.thresholds)?;
        if let Some(labels) = raw.labels {
            config = config.with_labels(labels)?;
        }
        Ok(config)
    }
}

impl From<StudyConfig> for RawConfig {
    fn from(c: StudyConfig) -> Self {
        RawConfig {
            n_r: c.n_r,
            models: c.models,
            views: c.views,
            modes: c.modes,
            thresholds: c.thresholds,
            labels: c.labels,
        }
    }
}

fn check_ids(kind: &str, ids: &[String]) -> Result<()> {
    if ids.is_empty() {
        return Err(Error::InvalidConfig(format!("{kind} list is empty")));
    }
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::InvalidConfig(format!("duplicate {kind} id {id:?}")));
        }
    }
    Ok(())
}

fn check_thresholds(n_r: usize, thresholds: &[usize]) -> Result<()> {
    if thresholds.is_empty() {
        return Err(Error::InvalidConfig("threshold list is empty".into()));
    }
    for &k in thresholds {
        if k == 0 || k > n_r {
            return Err(Error::InvalidConfig(format!(
                "threshold {k} outside 1..={n_r}"
            )));
        }
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(format!(
            "thresholds must be strictly increasing, got {thresholds:?}"
        )));
    }
    Ok(())
}

impl StudyConfig {
    pub fn new(
        n_r: usize,
        models: Vec<String>,
        views: Vec<String>,
        modes: Vec<String>,
        thresholds: Vec<usize>,
    ) -> Result<Self> {
        if n_r < 2 {
            return Err(Error::InvalidConfig(format!(
                "n_r must be at least 2, got {n_r}"
            )));
        }
        check_ids("model", &models)?;
        check_ids("view", &views)?;
        check_ids("mode", &modes)?;
        check_thresholds(n_r, &thresholds)?;
        Ok(StudyConfig {
            n_r,
            models,
            views,
            modes,
            thresholds,
            labels: None,
        })
    }

    /// Reads and validates a config JSON file.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        // Validation errors surface through serde's custom error; unwrap them
        // back into InvalidConfig so callers see a single error kind.
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        StudyConfig::try_from(raw)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// Replaces the threshold list (the `--thresholds` override).
    pub fn with_thresholds(mut self, thresholds: Vec<usize>) -> Result<Self> {
        check_thresholds(self.n_r, &thresholds)?;
        self.thresholds = thresholds;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_r {
            return Err(Error::InvalidConfig(format!(
                "{} biomarker labels given for n_r={}",
                labels.len(),
                self.n_r
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Same study with the model axis reordered. `models` must be a
    /// permutation of the current model list.
    pub fn with_model_order(mut self, models: Vec<String>) -> Result<Self> {
        let mut a = self.models.clone();
        let mut b = models.clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(Error::InvalidConfig(
                "model order must be a permutation of the configured models".into(),
            ));
        }
        self.models = models;
        Ok(self)
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn models(&self) -> &[String] {
        &self.models
    }

    pub fn views(&self) -> &[String] {
        &self.views
    }

    pub fn modes(&self) -> &[String] {
        &self.modes
    }

    pub fn thresholds(&self) -> &[usize] {
        &self.thresholds
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn model_index(&self, id: &str) -> Option<usize> {
        self.models.iter().position(|m| m == id)
    }

    pub fn view_index(&self, id: &str) -> Option<usize> {
        self.views.iter().position(|v| v == id)
    }

    pub fn mode_index(&self, id: &str) -> Option<usize> {
        self.modes.iter().position(|m| m == id)
    }

    pub(crate) fn require_model(&self, id: &str) -> Result<usize> {
        self.model_index(id).ok_or_else(|| unknown("model", id))
    }

    pub(crate) fn require_view(&self, id: &str) -> Result<usize> {
        self.view_index(id).ok_or_else(|| unknown("view", id))
    }

    pub(crate) fn require_mode(&self, id: &str) -> Result<usize> {
        self.mode_index(id).ok_or_else(|| unknown("mode", id))
    }
}

fn unknown(kind: &'static str, id: &str) -> Error {
    Error::UnknownId {
        kind,
        id: id.to_string(),
        line: None,
    }
}

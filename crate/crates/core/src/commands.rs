//! The `validate`, `run`, `scores`, `select` and `gen` commands.
//!
//! Each command is a plain function so the binary stays a thin argument
//! parser and the commands can be driven from tests and examples.

use std::path::{Path, PathBuf};

use crate::config::StudyConfig;
use crate::error::{Error, Result};
use crate::export::{
    json_bytes, matrix_from_csv, matrix_to_csv, report_json, scores_csv, scores_json,
    selection_report, sha256_file, sha256_hex, winner_weights_csv, FileEntry, ManifestFlags,
    MatrixFiles, RunManifest,
};
use crate::matrix::{MatrixKind, ReproMatrix};
use crate::pipeline::{analyze, Analysis, AnalysisOptions, ModeAnalysis};
use crate::ranking::RankingMode;
use crate::scores::ScoreId;
use crate::selection::{build_overall, select_model, Selection};
use crate::store::{Diagnostics, LoadOptions, WeightStore};
use crate::synth::{generate_study, SyntheticStudySpec};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Inputs shared by every command that reads a study.
#[derive(Debug, Clone, Default)]
pub struct StudyInput {
    pub config: PathBuf,
    pub inputs: Vec<PathBuf>,
    pub allow_missing: bool,
    /// Replaces the config's thresholds when set.
    pub thresholds: Option<Vec<usize>>,
}

impl StudyInput {
    pub fn load_config(&self) -> Result<StudyConfig> {
        let config = StudyConfig::from_path(&self.config)?;
        match &self.thresholds {
            Some(t) => config.with_thresholds(t.clone()),
            None => Ok(config),
        }
    }

    pub fn load(&self) -> Result<WeightStore> {
        if self.inputs.is_empty() {
            return Err(Error::Empty("no input files"));
        }
        WeightStore::load_many(&self.inputs, self.load_config()?, self.load_options())
    }

    fn load_options(&self) -> LoadOptions {
        LoadOptions {
            allow_missing: self.allow_missing,
        }
    }
}

#[derive(Debug)]
pub struct ValidateOutcome {
    pub diagnostics: Diagnostics,
    pub n_models: usize,
    pub n_views: usize,
}

impl ValidateOutcome {
    /// `OK, n_m=…, n_v=…, records=…` or an error count.
    pub fn summary(&self) -> String {
        if self.diagnostics.is_ok() {
            format!(
                "OK, n_m={}, n_v={}, records={}",
                self.n_models, self.n_views, self.diagnostics.records
            )
        } else {
            format!("FAILED, {} error(s)", self.diagnostics.errors.len())
        }
    }
}

/// Checks config and every input file, collecting all problems.
pub fn validate(input: &StudyInput) -> Result<ValidateOutcome> {
    let config = input.load_config()?;
    if input.inputs.is_empty() {
        return Err(Error::Empty("no input files"));
    }
    let (n_models, n_views) = (config.models().len(), config.views().len());
    let diagnostics = WeightStore::validate_paths(&input.inputs, config, input.load_options());
    Ok(ValidateOutcome {
        diagnostics,
        n_models,
        n_views,
    })
}

/// Output directory that keeps the manifest in step with what is written.
struct OutputDir {
    root: PathBuf,
    manifest: RunManifest,
}

impl OutputDir {
    fn start(root: &Path, manifest: RunManifest) -> Result<Self> {
        std::fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        let out = OutputDir {
            root: root.to_path_buf(),
            manifest,
        };
        out.write_manifest()?;
        Ok(out)
    }

    fn write_manifest(&self) -> Result<()> {
        let path = self.root.join(MANIFEST_FILE);
        std::fs::write(&path, json_bytes(&self.manifest)?).map_err(|e| Error::io(&path, e))
    }

    fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(rel);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.manifest.outputs.push(FileEntry {
            path: rel.to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    fn finish(mut self) -> Result<Vec<FileEntry>> {
        self.manifest.outputs.sort_by(|a, b| a.path.cmp(&b.path));
        self.manifest.status = "complete".into();
        self.write_manifest()?;
        Ok(self.manifest.outputs)
    }
}

fn entry(path: &Path) -> Result<FileEntry> {
    Ok(FileEntry {
        path: path.display().to_string(),
        sha256: sha256_file(path)?,
    })
}

fn study_manifest(
    command: &str,
    input: &StudyInput,
    options: AnalysisOptions,
    out: &Path,
) -> Result<RunManifest> {
    let flags = ManifestFlags {
        allow_missing: input.allow_missing,
        normalize_overall: options.normalize_overall,
        signed_ranking: options.ranking == RankingMode::Signed,
        thresholds: input.thresholds.clone(),
    };
    let mut manifest = RunManifest::new(command, out, flags);
    manifest.config = Some(entry(&input.config)?);
    manifest.inputs = input
        .inputs
        .iter()
        .map(|p| entry(p))
        .collect::<Result<_>>()?;
    manifest.scores = ScoreId::ALL.iter().map(|s| s.label().to_string()).collect();
    Ok(manifest)
}

/// Ids turned into file-name stems: characters outside `[A-Za-z0-9._-]`
/// become `_`, and stems that collide get their position appended.
pub fn file_stems(ids: &[String]) -> Vec<String> {
    let clean: Vec<String> = ids
        .iter()
        .map(|id| {
            let s: String = id
                .chars()
                .map(|c| {
                    if c.is_ascii_alphanumeric() || "._-".contains(c) {
                        c
                    } else {
                        '_'
                    }
                })
                .collect();
            if s.is_empty() || s.starts_with('.') {
                format!("_{s}")
            } else {
                s
            }
        })
        .collect();
    clean
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if clean.iter().filter(|t| *t == s).count() > 1 {
                format!("{s}-{i}")
            } else {
                s.clone()
            }
        })
        .collect()
}

fn put_matrix(out: &mut OutputDir, rel: String, m: &ReproMatrix) -> Result<String> {
    out.write(&rel, matrix_to_csv(m)?.as_bytes())?;
    Ok(rel)
}

fn write_mode_heatmaps(
    out: &mut OutputDir,
    dir: &str,
    mode: &ModeAnalysis,
    analysis: &Analysis,
) -> Result<MatrixFiles> {
    let config = &analysis.config;
    let mut files = MatrixFiles {
        view_average: put_matrix(out, format!("{dir}/view_average.csv"), &mode.view_average)?,
        rank_correlation: put_matrix(
            out,
            format!("{dir}/rank_correlation.csv"),
            &mode.rank_correlation,
        )?,
        overall: put_matrix(out, format!("{dir}/overall.csv"), &mode.overall)?,
        ..MatrixFiles::default()
    };
    for ((id, stem), m) in config
        .views()
        .iter()
        .zip(file_stems(config.views()))
        .zip(&mode.view_matrices)
    {
        let rel = put_matrix(out, format!("{dir}/view_specific/{stem}.csv"), m)?;
        files.view_specific.push((id.clone(), rel));
    }
    for ((id, stem), m) in config
        .models()
        .iter()
        .zip(file_stems(config.models()))
        .zip(&mode.gnn_matrices)
    {
        let rel = put_matrix(out, format!("{dir}/gnn_specific/{stem}.csv"), m)?;
        files.gnn_specific.push((id.clone(), rel));
    }
    Ok(files)
}

#[derive(Debug)]
pub struct RunOutcome {
    pub analysis: Analysis,
    pub outputs: Vec<FileEntry>,
}

/// Full pipeline: heatmaps per mode and for the grand mean, score tables,
/// report, winner weights and manifest.
pub fn run(input: &StudyInput, options: AnalysisOptions, out: &Path) -> Result<RunOutcome> {
    let store = input.load()?;
    let analysis = analyze(&store, options)?;
    let mut dir = OutputDir::start(out, study_manifest("run", input, options, out)?)?;

    let mut mode_files = Vec::with_capacity(analysis.modes.len());
    for (mode, stem) in analysis
        .modes
        .iter()
        .zip(file_stems(analysis.config.modes()))
    {
        mode_files.push(write_mode_heatmaps(
            &mut dir,
            &format!("heatmaps/modes/{stem}"),
            mode,
            &analysis,
        )?);
    }
    let grand_files = MatrixFiles {
        view_average: put_matrix(
            &mut dir,
            "heatmaps/grand/view_average.csv".into(),
            &analysis.view_average,
        )?,
        rank_correlation: put_matrix(
            &mut dir,
            "heatmaps/grand/rank_correlation.csv".into(),
            &analysis.rank_correlation,
        )?,
        overall: put_matrix(
            &mut dir,
            "heatmaps/grand/overall.csv".into(),
            &analysis.overall,
        )?,
        ..MatrixFiles::default()
    };
    dir.write("scores.csv", scores_csv(&analysis)?.as_bytes())?;
    dir.write("scores.json", &json_bytes(&scores_json(&analysis))?)?;
    dir.write(
        "winner_weights.csv",
        winner_weights_csv(&analysis.winner_weights, analysis.config.labels())?.as_bytes(),
    )?;
    let report = report_json(&analysis, &mode_files, &grand_files, "winner_weights.csv");
    dir.write("report.json", &json_bytes(&report)?)?;
    let outputs = dir.finish()?;
    Ok(RunOutcome { analysis, outputs })
}

/// Scores only: `scores.csv` and `scores.json`.
pub fn scores(input: &StudyInput, options: AnalysisOptions, out: &Path) -> Result<RunOutcome> {
    let store = input.load()?;
    let analysis = analyze(&store, options)?;
    let mut dir = OutputDir::start(out, study_manifest("scores", input, options, out)?)?;
    dir.write("scores.csv", scores_csv(&analysis)?.as_bytes())?;
    dir.write("scores.json", &json_bytes(&scores_json(&analysis))?)?;
    let outputs = dir.finish()?;
    Ok(RunOutcome { analysis, outputs })
}

/// Where `select` takes its matrices from.
#[derive(Debug, Clone)]
pub enum SelectInput {
    /// A precomputed overall matrix.
    Overall(PathBuf),
    /// View-average and rank-correlation matrices to be summed.
    Parts {
        view_average: PathBuf,
        rank_correlation: PathBuf,
    },
}

fn read_matrix(path: &Path, kind: MatrixKind) -> Result<ReproMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    matrix_from_csv(&text, &path.display().to_string(), kind)
}

#[derive(Debug)]
pub struct SelectOutcome {
    pub overall: ReproMatrix,
    pub selection: Selection,
}

/// Node-strength selection from matrix CSVs. With `out`, writes
/// `selection.json` (and a manifest) there.
pub fn select(
    input: &SelectInput,
    normalize_overall: bool,
    out: Option<&Path>,
) -> Result<SelectOutcome> {
    let (overall, sources) = match input {
        SelectInput::Overall(path) => (read_matrix(path, MatrixKind::Overall)?, vec![path.clone()]),
        SelectInput::Parts {
            view_average,
            rank_correlation,
        } => {
            let va = read_matrix(view_average, MatrixKind::Averaged)?;
            let rc = read_matrix(rank_correlation, MatrixKind::RankCorrelation)?;
            (
                build_overall(&va, &rc, normalize_overall)?,
                vec![view_average.clone(), rank_correlation.clone()],
            )
        }
    };
    let selection = select_model(&overall)?;
    if let Some(out) = out {
        let flags = ManifestFlags {
            normalize_overall,
            ..ManifestFlags::default()
        };
        let mut manifest = RunManifest::new("select", out, flags);
        manifest.inputs = sources.iter().map(|p| entry(p)).collect::<Result<_>>()?;
        let mut dir = OutputDir::start(out, manifest)?;
        dir.write(
            "selection.json",
            &json_bytes(&selection_report(&selection, &overall))?,
        )?;
        dir.finish()?;
    }
    Ok(SelectOutcome { overall, selection })
}

#[derive(Debug)]
pub struct GenOutcome {
    pub weights: PathBuf,
    pub config: PathBuf,
    pub records: usize,
}

/// Writes `weights.jsonl` and `config.json` for a synthetic study.
pub fn gen(spec: &SyntheticStudySpec, out: &Path) -> Result<GenOutcome> {
    let store = generate_study(spec)?;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let weights = out.join("weights.jsonl");
    let config = out.join("config.json");
    std::fs::write(&weights, store.to_jsonl()).map_err(|e| Error::io(&weights, e))?;
    std::fs::write(&config, store.config().to_json()).map_err(|e| Error::io(&config, e))?;
    Ok(GenOutcome {
        weights,
        config,
        records: store.len(),
    })
}

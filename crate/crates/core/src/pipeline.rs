//! End-to-end analysis of a [`WeightStore`].
//!
//! Aggregation order, per training mode:
//! per-run threshold matrices → mean over thresholds → mean over runs →
//! mean over views (view-specific only). Modes are combined last into the
//! grand matrices. Every intermediate is kept on the result so it can be
//! exported.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::config::StudyConfig;
use crate::error::{Error, Result};
use crate::matrix::{average_matrices, overlap_matrix, MatrixKind, ReproMatrix};
use crate::ranking::{rank_biomarkers_with, BiomarkerRanking, RankingMode};
use crate::scores::{all_scores, ScoreId, ScoreResult, StrengthProfile};
use crate::selection::{build_overall, select_model, winner_weights, Selection};
use crate::store::WeightStore;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub ranking: RankingMode,
    pub normalize_overall: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeAnalysis {
    pub mode: String,
    /// Run ids shared by every cell of this mode.
    pub runs: Vec<u64>,
    /// One model × model matrix per view, averaged over thresholds and runs.
    pub view_matrices: Vec<ReproMatrix>,
    /// `[model][threshold]` view × view matrices averaged over runs.
    pub gnn_threshold_matrices: Vec<Vec<ReproMatrix>>,
    /// One view × view matrix per model, averaged over thresholds and runs.
    pub gnn_matrices: Vec<ReproMatrix>,
    pub profiles: Vec<StrengthProfile>,
    /// The eight scores in [`ScoreId::ALL`] order.
    pub scores: Vec<ScoreResult>,
    pub view_average: ReproMatrix,
    pub rank_correlation: ReproMatrix,
    pub overall: ReproMatrix,
    pub selection: Selection,
}

impl ModeAnalysis {
    pub fn score(&self, id: ScoreId) -> &ScoreResult {
        &self.scores[ScoreId::ALL
            .iter()
            .position(|&s| s == id)
            .expect("score listed")]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub config: StudyConfig,
    pub options: AnalysisOptions,
    pub modes: Vec<ModeAnalysis>,
    pub view_average: ReproMatrix,
    pub rank_correlation: ReproMatrix,
    pub overall: ReproMatrix,
    pub selection: Selection,
    /// Mean |w| of the grand winner over all of its records.
    pub winner_weights: Vec<f64>,
    /// Every per-mode winner equals the first mode's winner.
    pub modes_agree: bool,
}

/// Runs the full pipeline over every mode of the store.
pub fn analyze(store: &WeightStore, options: AnalysisOptions) -> Result<Analysis> {
    let config = store.config();
    if config.models().len() < 2 {
        return Err(Error::TooFew {
            what: "models",
            required: 2,
            found: config.models().len(),
        });
    }
    let modes = (0..config.modes().len())
        .map(|o| analyze_mode(store, o, options))
        .collect::<Result<Vec<_>>>()?;

    let view_average = average_matrices(
        &modes
            .iter()
            .map(|m| m.view_average.clone())
            .collect::<Vec<_>>(),
    )?;
    let rank_correlation = average_matrices(
        &modes
            .iter()
            .map(|m| m.rank_correlation.clone())
            .collect::<Vec<_>>(),
    )?;
    let overall = build_overall(&view_average, &rank_correlation, options.normalize_overall)?;
    let selection = select_model(&overall)?;
    let winner_weights = winner_weights(store, &selection.winner)?;
    let modes_agree = modes
        .windows(2)
        .all(|w| w[0].selection.winner == w[1].selection.winner);

    Ok(Analysis {
        config: config.clone(),
        options,
        modes,
        view_average,
        rank_correlation,
        overall,
        selection,
        winner_weights,
        modes_agree,
    })
}

/// Rankings of one mode as `[model][view][run]`, after checking that every
/// cell is present and carries the same run ids.
/// `[model][view][run]`.
type CellRankings = Vec<Vec<Vec<BiomarkerRanking>>>;

fn mode_rankings(
    store: &WeightStore,
    mode: usize,
    ranking: RankingMode,
) -> Result<(Vec<u64>, CellRankings)> {
    let config = store.config();
    let mode_id = &config.modes()[mode];
    let mut expected: Option<Vec<u64>> = None;
    let mut out = Vec::with_capacity(config.models().len());
    for (m, model_id) in config.models().iter().enumerate() {
        let mut per_view = Vec::with_capacity(config.views().len());
        for (v, view_id) in config.views().iter().enumerate() {
            let records = store.cell((m, v, mode));
            if records.is_empty() {
                return Err(Error::MissingCell {
                    model: model_id.clone(),
                    view: view_id.clone(),
                    mode: mode_id.clone(),
                });
            }
            let runs: Vec<u64> = records.iter().map(|r| r.run_id).collect();
            match &expected {
                None => expected = Some(runs),
                Some(e) if *e != runs => {
                    return Err(Error::RunMismatch {
                        mode: mode_id.clone(),
                        model: model_id.clone(),
                        view: view_id.clone(),
                        expected: e.clone(),
                        found: runs,
                    })
                }
                Some(_) => {}
            }
            per_view.push(
                records
                    .iter()
                    .map(|r| rank_biomarkers_with(&r.weights, ranking))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        out.push(per_view);
    }
    Ok((expected.unwrap_or_default(), out))
}

fn analyze_mode(
    store: &WeightStore,
    mode: usize,
    options: AnalysisOptions,
) -> Result<ModeAnalysis> {
    let config = store.config();
    let models = config.models();
    let views = config.views();
    let thresholds = config.thresholds();
    let (runs, rankings) = mode_rankings(store, mode, options.ranking)?;
    let n_runs = runs.len();

    let view_matrices = (0..views.len())
        .map(|v| {
            let per_run = (0..n_runs)
                .map(|r| {
                    let column: Vec<&BiomarkerRanking> =
                        rankings.iter().map(|per_view| &per_view[v][r]).collect();
                    let per_k = thresholds
                        .iter()
                        .map(|&k| overlap_matrix(models, &column, k, MatrixKind::ViewSpecific))
                        .collect::<Result<Vec<_>>>()?;
                    average_matrices(&per_k)
                })
                .collect::<Result<Vec<_>>>()?;
            average_matrices(&per_run)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut gnn_threshold_matrices = Vec::with_capacity(models.len());
    let mut gnn_matrices = Vec::with_capacity(models.len());
    let mut profiles = Vec::with_capacity(models.len());
    for (g, model_id) in models.iter().enumerate() {
        let per_k = thresholds
            .iter()
            .map(|&k| {
                let per_run = (0..n_runs)
                    .map(|r| {
                        let row: Vec<&BiomarkerRanking> =
                            rankings[g].iter().map(|per_run| &per_run[r]).collect();
                        overlap_matrix(views, &row, k, MatrixKind::GnnSpecific)
                    })
                    .collect::<Result<Vec<_>>>()?;
                average_matrices(&per_run)
            })
            .collect::<Result<Vec<_>>>()?;
        profiles.push(StrengthProfile::from_gnn_matrices(
            model_id.clone(),
            &per_k,
        )?);
        gnn_matrices.push(average_matrices(&per_k)?);
        gnn_threshold_matrices.push(per_k);
    }

    let k_max = *thresholds.last().expect("config has thresholds");
    let accumulated_sets: Vec<Vec<Vec<usize>>> = (0..n_runs)
        .map(|r| {
            rankings
                .iter()
                .map(|per_view| {
                    let mut set = BTreeSet::new();
                    for per_run in per_view {
                        for &k in thresholds {
                            set.extend(per_run[r].top_k(k)?.members().iter().copied());
                        }
                    }
                    debug_assert!(set.len() >= k_max);
                    Ok(set.into_iter().collect())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let scores = all_scores(&view_matrices, &profiles, &accumulated_sets)?;
    let view_average = scores[0].pairwise.clone();
    let rank_correlation = scores[1]
        .pairwise
        .clone()
        .with_kind(MatrixKind::RankCorrelation);
    let overall = build_overall(&view_average, &rank_correlation, options.normalize_overall)?;
    let selection = select_model(&overall)?;

    Ok(ModeAnalysis {
        mode: config.modes()[mode].clone(),
        runs,
        view_matrices,
        gnn_threshold_matrices,
        gnn_matrices,
        profiles,
        scores,
        view_average,
        rank_correlation,
        overall,
        selection,
    })
}

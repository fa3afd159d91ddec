//! Reproducibility analysis for pools of trained models.
//!
//! Each model exposes one learned weight per biomarker, per data view,
//! training mode and run. Biomarkers are ranked by weight magnitude and the
//! top-k sets are compared across models (per view) and across views (per
//! model). Those overlaps feed the reproducibility matrices, eight
//! per-model scores, and the selection of the most reproducible model as the
//! node of largest strength in the overall reproducibility graph.

pub mod commands;
pub mod config;
pub mod error;
pub mod export;
pub mod matrix;
pub mod oracle;
pub mod pipeline;
pub mod ranking;
pub mod scores;
pub mod selection;
pub mod store;
pub mod synth;

pub use config::StudyConfig;
pub use error::{Error, Result};
pub use matrix::{MatrixKind, ReproMatrix};
pub use ranking::{BiomarkerRanking, RankingMode, TopKSet};
pub use scores::{ScoreId, ScoreResult, StrengthProfile};
pub use selection::Selection;
pub use store::{LoadOptions, WeightRecord, WeightStore};

//! Biomarker rankings and top-k sets.
//!
//! Biomarkers are ordered by descending |weight| (or signed weight in
//! [`RankingMode::Signed`]); equal keys fall back to ascending biomarker
//! index so every ranking is a total order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::store::WeightStore;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingMode {
    /// Rank by |w|.
    #[default]
    Absolute,
    /// Rank by w itself, largest first.
    Signed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiomarkerRanking {
    order: Vec<usize>,
    magnitudes: Vec<f64>,
}

impl BiomarkerRanking {
    /// Biomarker indices, most important first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Ranking keys aligned with [`order`](Self::order); non-increasing.
    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn top_k(&self, k: usize) -> Result<TopKSet> {
        top_k(self, k)
    }
}

/// The first `k` biomarkers of a ranking, stored as a sorted index list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TopKSet {
    k: usize,
    members: Vec<usize>,
}

impl TopKSet {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Member indices in ascending order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    /// |self ∩ other| by merging the two sorted member lists.
    pub fn intersection_len(&self, other: &TopKSet) -> usize {
        let (a, b) = (&self.members, &other.members);
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn is_subset(&self, other: &TopKSet) -> bool {
        self.intersection_len(other) == self.members.len()
    }
}

pub fn rank_biomarkers(weights: &[f64]) -> Result<BiomarkerRanking> {
    rank_biomarkers_with(weights, RankingMode::Absolute)
}

pub fn rank_biomarkers_with(weights: &[f64], mode: RankingMode) -> Result<BiomarkerRanking> {
    if let Some(index) = weights.iter().position(|w| !w.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let keys: Vec<f64> = match mode {
        RankingMode::Absolute => weights.iter().map(|w| w.abs()).collect(),
        // +0.0 so -0.0 and 0.0 compare equal under total_cmp
        RankingMode::Signed => weights.iter().map(|w| w + 0.0).collect(),
    };
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));
    let magnitudes = order.iter().map(|&i| keys[i]).collect();
    Ok(BiomarkerRanking { order, magnitudes })
}

pub fn top_k(ranking: &BiomarkerRanking, k: usize) -> Result<TopKSet> {
    if k == 0 || k > ranking.len() {
        return Err(Error::ThresholdOutOfRange {
            k,
            n_r: ranking.len(),
        });
    }
    let mut members = ranking.order[..k].to_vec();
    members.sort_unstable();
    Ok(TopKSet { k, members })
}

/// One ranking per run of a cell, in run order. Weights are never averaged
/// across runs; aggregation happens on the matrices built from these.
pub fn ranking_for_cell(
    store: &WeightStore,
    model: &str,
    view: &str,
    mode: &str,
    ranking: RankingMode,
) -> Result<Vec<(u64, BiomarkerRanking)>> {
    let records = store.records_for(model, view, mode)?;
    if records.is_empty() {
        return Err(Error::MissingCell {
            model: model.into(),
            view: view.into(),
            mode: mode.into(),
        });
    }
    records
        .iter()
        .map(|r| Ok((r.run_id, rank_biomarkers_with(&r.weights, ranking)?)))
        .collect()
}

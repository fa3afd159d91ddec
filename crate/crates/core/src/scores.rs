//! The eight per-model reproducibility scores.
//!
//! Each score is a symmetric model × model matrix reduced to one scalar per
//! model by averaging the off-diagonal entries of its row. KL and L2 are
//! distances (lower is better); the other six are similarities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{average_matrices, node_strength, MatrixKind, ReproMatrix};

/// Additive smoothing applied to strengths before they are normalised into
/// probability vectors for KL.
pub const KL_EPSILON: f64 = 1e-12;

/// Strength differences at or below this are treated as ties when ranking
/// views and when deciding that a vector is constant.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScoreId {
    #[serde(rename = "v.a")]
    ViewsAverage,
    #[serde(rename = "r.c")]
    RankCorrelation,
    #[serde(rename = "a.w.i")]
    AccumulatedWeightedIntersection,
    #[serde(rename = "a.w.c")]
    AccumulatedWeightsCorrelation,
    #[serde(rename = "s.c")]
    StrengthCorrelation,
    #[serde(rename = "a.r.i")]
    AccumulatedRankIntersection,
    #[serde(rename = "KL")]
    Kl,
    #[serde(rename = "L2")]
    L2,
}

impl ScoreId {
    /// Column order of the score table.
    pub const ALL: [ScoreId; 8] = [
        ScoreId::ViewsAverage,
        ScoreId::RankCorrelation,
        ScoreId::AccumulatedWeightedIntersection,
        ScoreId::AccumulatedWeightsCorrelation,
        ScoreId::StrengthCorrelation,
        ScoreId::AccumulatedRankIntersection,
        ScoreId::Kl,
        ScoreId::L2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ScoreId::ViewsAverage => "v.a",
            ScoreId::RankCorrelation => "r.c",
            ScoreId::AccumulatedWeightedIntersection => "a.w.i",
            ScoreId::AccumulatedWeightsCorrelation => "a.w.c",
            ScoreId::StrengthCorrelation => "s.c",
            ScoreId::AccumulatedRankIntersection => "a.r.i",
            ScoreId::Kl => "KL",
            ScoreId::L2 => "L2",
        }
    }

    pub fn from_label(label: &str) -> Option<ScoreId> {
        ScoreId::ALL.into_iter().find(|s| s.label() == label)
    }

    pub fn higher_is_better(self) -> bool {
        !matches!(self, ScoreId::Kl | ScoreId::L2)
    }

    /// Value on the diagonal: 1 for similarities, 0 for distances.
    fn self_value(self) -> f64 {
        if self.higher_is_better() {
            1.0
        } else {
            0.0
        }
    }
}

/// Strengths of one model's view × view overlap matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrengthProfile {
    pub model_id: String,
    /// `[threshold][view]` node strengths.
    pub per_threshold_strengths: Vec<Vec<f64>>,
    /// Per-view mean over thresholds.
    pub mean_strengths: Vec<f64>,
    /// Threshold-major concatenation of `per_threshold_strengths`.
    pub accumulated_strengths: Vec<f64>,
    /// 1-based rank of each view by mean strength, strongest first; equal
    /// strengths keep config view order.
    pub view_ranks: Vec<usize>,
}

impl StrengthProfile {
    /// Builds the profile from one averaged view × view matrix per threshold.
    pub fn from_gnn_matrices(
        model_id: impl Into<String>,
        per_threshold: &[ReproMatrix],
    ) -> Result<Self> {
        if per_threshold.is_empty() {
            return Err(Error::Empty(
                "no per-threshold matrices for strength profile",
            ));
        }
        let per_threshold_strengths: Vec<Vec<f64>> =
            per_threshold.iter().map(node_strength).collect();
        Self::from_strengths(model_id, per_threshold_strengths)
    }

    pub fn from_strengths(
        model_id: impl Into<String>,
        per_threshold_strengths: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n_k = per_threshold_strengths.len();
        let n_v = per_threshold_strengths.first().map_or(0, Vec::len);
        if n_k == 0 || n_v == 0 || per_threshold_strengths.iter().any(|s| s.len() != n_v) {
            return Err(Error::AxisMismatch("ragged or empty strength table".into()));
        }
        let mean_strengths: Vec<f64> = (0..n_v)
            .map(|v| {
                per_threshold_strengths
                    .iter()
                    .map(|row| row[v])
                    .sum::<f64>()
                    / n_k as f64
            })
            .collect();
        let accumulated_strengths = per_threshold_strengths.concat();
        let view_ranks = descending_ranks(&mean_strengths);
        Ok(StrengthProfile {
            model_id: model_id.into(),
            per_threshold_strengths,
            mean_strengths,
            accumulated_strengths,
            view_ranks,
        })
    }

    pub fn n_views(&self) -> usize {
        self.mean_strengths.len()
    }

    pub fn n_thresholds(&self) -> usize {
        self.per_threshold_strengths.len()
    }
}

/// 1-based ranks, largest value first. Values within [`TIE_TOLERANCE`] of
/// each other count as equal and keep their positional order.
fn descending_ranks(values: &[f64]) -> Vec<usize> {
    let ranks: Vec<usize> = (0..values.len())
        .map(|v| {
            let above = values
                .iter()
                .filter(|&&u| u - values[v] > TIE_TOLERANCE)
                .count();
            let tied_before = values[..v]
                .iter()
                .filter(|&&u| (u - values[v]).abs() <= TIE_TOLERANCE)
                .count();
            1 + above + tied_before
        })
        .collect();
    let mut seen = vec![false; values.len()];
    let is_permutation = ranks
        .iter()
        .all(|&r| !std::mem::replace(&mut seen[r - 1], true));
    if is_permutation {
        return ranks;
    }
    // Only reachable when near-equal values chain across the tolerance;
    // fall back to exact ordering.
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut ranks = vec![0; values.len()];
    for (pos, &v) in order.iter().enumerate() {
        ranks[v] = pos + 1;
    }
    ranks
}

fn is_constant(v: &[f64]) -> bool {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo <= TIE_TOLERANCE
}

/// Pairwise score matrix and its per-model reduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResult {
    pub score: ScoreId,
    pub pairwise: ReproMatrix,
    pub per_model: Vec<f64>,
}

impl ScoreResult {
    fn from_matrix(score: ScoreId, pairwise: ReproMatrix) -> Self {
        let per_model = (0..pairwise.dim())
            .map(|i| pairwise.off_diagonal_mean(i))
            .collect();
        ScoreResult {
            score,
            pairwise,
            per_model,
        }
    }

    /// Builds the symmetric pairwise matrix from a pair function evaluated on
    /// i < j only; the diagonal takes the score's self value.
    fn pairwise(score: ScoreId, axis: Vec<String>, f: impl Fn(usize, usize) -> f64) -> Self {
        let n = axis.len();
        let mut upper = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                upper[i * n + j] = f(i, j);
            }
        }
        let m = ReproMatrix::from_fn(axis, MatrixKind::Score, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => score.self_value(),
            std::cmp::Ordering::Less => upper[i * n + j],
            std::cmp::Ordering::Greater => upper[j * n + i],
        });
        Self::from_matrix(score, m)
    }
}

/// Pearson correlation; 0 when either input is constant (spread within
/// [`TIE_TOLERANCE`]).
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    // A constant vector's float mean need not equal its entries, so test
    // constancy directly instead of trusting a zero sum of squares.
    if is_constant(x) || is_constant(y) {
        return 0.0;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0)
}

/// Spearman correlation of two rank permutations (no ties possible):
/// 1 − 6 Σd² / (n(n² − 1)).
pub fn spearman_of_ranks(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let d2: f64 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// KL(p ‖ q) in nats. Both inputs must be strictly positive distributions.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(&a, &b)| a * (a / b).ln()).sum()
}

/// ½(KL(p‖q) + KL(q‖p)).
pub fn symmetric_kl(p: &[f64], q: &[f64]) -> f64 {
    0.5 * (kl_divergence(p, q) + kl_divergence(q, p))
}

/// ε-smoothed normalisation of non-negative strengths into a distribution.
pub fn strength_distribution(strengths: &[f64]) -> Vec<f64> {
    let total: f64 = strengths.iter().map(|s| s + KL_EPSILON).sum();
    strengths.iter().map(|s| (s + KL_EPSILON) / total).collect()
}

pub fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Min-max normalisation to [0, 1]; a constant vector maps to all zeros.
fn min_max(x: &[f64]) -> Vec<f64> {
    if is_constant(x) {
        return vec![0.0; x.len()];
    }
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    x.iter().map(|v| (v - lo) / span).collect()
}

fn check_profiles(profiles: &[StrengthProfile]) -> Result<(usize, usize)> {
    let first = profiles
        .first()
        .ok_or(Error::Empty("no strength profiles"))?;
    let (n_v, n_k) = (first.n_views(), first.n_thresholds());
    if profiles
        .iter()
        .any(|p| p.n_views() != n_v || p.n_thresholds() != n_k)
    {
        return Err(Error::AxisMismatch(
            "strength profiles differ in shape".into(),
        ));
    }
    Ok((n_v, n_k))
}

fn axis_of(profiles: &[StrengthProfile]) -> Vec<String> {
    profiles.iter().map(|p| p.model_id.clone()).collect()
}

/// v.a: elementwise mean of the per-view (threshold- and run-averaged)
/// view-specific matrices.
pub fn score_views_average(view_matrices: &[ReproMatrix]) -> Result<ScoreResult> {
    let mean = average_matrices(view_matrices)?;
    Ok(ScoreResult::from_matrix(ScoreId::ViewsAverage, mean))
}

/// r.c: Spearman correlation between models' view-rank vectors.
pub fn score_rank_correlation(profiles: &[StrengthProfile]) -> Result<ScoreResult> {
    let (n_v, _) = check_profiles(profiles)?;
    if n_v < 2 {
        return Err(Error::TooFew {
            what: "views for rank correlation",
            required: 2,
            found: n_v,
        });
    }
    Ok(ScoreResult::pairwise(
        ScoreId::RankCorrelation,
        axis_of(profiles),
        |i, j| spearman_of_ranks(&profiles[i].view_ranks, &profiles[j].view_ranks),
    ))
}

/// s.c: Pearson correlation of threshold-averaged view strengths.
pub fn score_strength_correlation(profiles: &[StrengthProfile]) -> Result<ScoreResult> {
    check_profiles(profiles)?;
    Ok(ScoreResult::pairwise(
        ScoreId::StrengthCorrelation,
        axis_of(profiles),
        |i, j| pearson(&profiles[i].mean_strengths, &profiles[j].mean_strengths),
    ))
}

/// a.w.c: Pearson correlation of the threshold-accumulated strength vectors.
pub fn score_accumulated_weights_correlation(profiles: &[StrengthProfile]) -> Result<ScoreResult> {
    check_profiles(profiles)?;
    Ok(ScoreResult::pairwise(
        ScoreId::AccumulatedWeightsCorrelation,
        axis_of(profiles),
        |i, j| {
            pearson(
                &profiles[i].accumulated_strengths,
                &profiles[j].accumulated_strengths,
            )
        },
    ))
}

/// a.w.i: strength similarity gated by view-rank similarity.
///
/// With ŝ the per-model min-max normalised accumulated strengths,
/// `(1/(n_v·n_k)) Σ_t Σ_v (1 − |ŝ_i(v,t) − ŝ_j(v,t)|) · (1 − |rank_i(v) − rank_j(v)| / (n_v − 1))`.
pub fn score_accumulated_weighted_intersection(
    profiles: &[StrengthProfile],
) -> Result<ScoreResult> {
    let (n_v, n_k) = check_profiles(profiles)?;
    if n_v < 2 {
        return Err(Error::TooFew {
            what: "views for weighted intersection",
            required: 2,
            found: n_v,
        });
    }
    let normalized: Vec<Vec<f64>> = profiles
        .iter()
        .map(|p| min_max(&p.accumulated_strengths))
        .collect();
    let span = (n_v - 1) as f64;
    Ok(ScoreResult::pairwise(
        ScoreId::AccumulatedWeightedIntersection,
        axis_of(profiles),
        |i, j| {
            let mut total = 0.0;
            for t in 0..n_k {
                for v in 0..n_v {
                    let idx = t * n_v + v;
                    let strength = 1.0 - (normalized[i][idx] - normalized[j][idx]).abs();
                    let rank_gap = profiles[i].view_ranks[v].abs_diff(profiles[j].view_ranks[v]);
                    total += strength * (1.0 - rank_gap as f64 / span);
                }
            }
            total / (n_v * n_k) as f64
        },
    ))
}

/// a.r.i: Jaccard index of each model's union of top-k biomarkers over all
/// views and thresholds, averaged over runs.
///
/// `per_run_sets[run][model]` is that model's accumulated biomarker set as a
/// sorted, duplicate-free index list.
pub fn score_accumulated_rank_intersection(
    models: &[String],
    per_run_sets: &[Vec<Vec<usize>>],
) -> Result<ScoreResult> {
    if per_run_sets.is_empty() {
        return Err(Error::Empty("no runs for accumulated rank intersection"));
    }
    let mut per_run = Vec::with_capacity(per_run_sets.len());
    for sets in per_run_sets {
        if sets.len() != models.len() {
            return Err(Error::AxisMismatch(format!(
                "{} accumulated sets for {} models",
                sets.len(),
                models.len()
            )));
        }
        per_run.push(
            ScoreResult::pairwise(
                ScoreId::AccumulatedRankIntersection,
                models.to_vec(),
                |i, j| jaccard(&sets[i], &sets[j]),
            )
            .pairwise,
        );
    }
    let mean = average_matrices(&per_run)?;
    Ok(ScoreResult::from_matrix(
        ScoreId::AccumulatedRankIntersection,
        mean,
    ))
}

/// |A ∩ B| / |A ∪ B| over sorted index lists; two empty sets count as identical.
pub fn jaccard(a: &[usize], b: &[usize]) -> f64 {
    let (mut i, mut j, mut inter) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                inter += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.len() + b.len() - inter;
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// KL: symmetrised KL divergence between ε-smoothed strength distributions.
pub fn score_kl(profiles: &[StrengthProfile]) -> Result<ScoreResult> {
    check_profiles(profiles)?;
    let dists: Vec<Vec<f64>> = profiles
        .iter()
        .map(|p| strength_distribution(&p.mean_strengths))
        .collect();
    Ok(ScoreResult::pairwise(
        ScoreId::Kl,
        axis_of(profiles),
        |i, j| symmetric_kl(&dists[i], &dists[j]).max(0.0),
    ))
}

/// L2: Euclidean distance between accumulated strength vectors.
pub fn score_l2(profiles: &[StrengthProfile]) -> Result<ScoreResult> {
    check_profiles(profiles)?;
    Ok(ScoreResult::pairwise(
        ScoreId::L2,
        axis_of(profiles),
        |i, j| {
            euclidean(
                &profiles[i].accumulated_strengths,
                &profiles[j].accumulated_strengths,
            )
        },
    ))
}

/// All eight scores for one mode, in [`ScoreId::ALL`] order.
pub fn all_scores(
    view_matrices: &[ReproMatrix],
    profiles: &[StrengthProfile],
    accumulated_sets: &[Vec<Vec<usize>>],
) -> Result<Vec<ScoreResult>> {
    let models = axis_of(profiles);
    Ok(vec![
        score_views_average(view_matrices)?,
        score_rank_correlation(profiles)?,
        score_accumulated_weighted_intersection(profiles)?,
        score_accumulated_weights_correlation(profiles)?,
        score_strength_correlation(profiles)?,
        score_accumulated_rank_intersection(&models, accumulated_sets)?,
        score_kl(profiles)?,
        score_l2(profiles)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(id: &str, per_threshold: Vec<Vec<f64>>) -> StrengthProfile {
        StrengthProfile::from_strengths(id, per_threshold).unwrap()
    }

    /// Profile whose views rank exactly as `ranks` (1 = strongest).
    fn ranked(id: &str, ranks: &[usize]) -> StrengthProfile {
        let n = ranks.len();
        let s = ranks.iter().map(|&r| (n - r) as f64).collect();
        profile(id, vec![s])
    }

    #[test]
    fn view_ranks_break_ties_by_order() {
        let p = profile("m", vec![vec![1.0, 3.0, 1.0, 2.0]]);
        assert_eq!(p.view_ranks, vec![3, 1, 4, 2]);
        let p = profile("m", vec![vec![0.1 + 0.2, 0.3, 0.0]]);
        assert_eq!(p.view_ranks, vec![1, 2, 3]);
        let p = profile("m", vec![vec![1.0, 2.0], vec![3.0, 2.0]]);
        assert_eq!(p.mean_strengths, vec![2.0, 2.0]);
        assert_eq!(p.view_ranks, vec![1, 2]);
        assert_eq!(p.accumulated_strengths, vec![1.0, 2.0, 3.0, 2.0]);
    }

    #[test]
    fn rank_correlation_examples() {
        assert_eq!(spearman_of_ranks(&[1, 2, 3, 4], &[1, 2, 3, 4]), 1.0);
        assert_eq!(spearman_of_ranks(&[1, 2, 3, 4], &[4, 3, 2, 1]), -1.0);
        // 1 - 6*2/(4*15) = 0.8
        assert!((spearman_of_ranks(&[1, 2, 3, 4], &[1, 2, 4, 3]) - 0.8).abs() < 1e-15);

        let r = score_rank_correlation(&[ranked("a", &[1, 2, 3, 4]), ranked("b", &[1, 2, 4, 3])])
            .unwrap();
        assert!((r.pairwise.get(0, 1) - 0.8).abs() < 1e-15);
        assert_eq!(r.pairwise.get(0, 0), 1.0);
        assert!(matches!(
            score_rank_correlation(&[ranked("a", &[1]), ranked("b", &[1])]),
            Err(Error::TooFew { .. })
        ));
    }

    #[test]
    fn pearson_examples() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]) - 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-15);
        assert_eq!(pearson(&[2.0, 2.0, 2.0], &[1.0, 5.0, 2.0]), 0.0);
        assert!((pearson(&[1.0, 2.0, 3.0, 4.0], &[11.0, 12.0, 13.0, 14.0]) - 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0, 4.0], &[2.0, 1.0, 4.0, 3.0]) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn correlation_scores_use_strengths() {
        let a = profile("a", vec![vec![1.0, 2.0, 3.0]]);
        let b = profile("b", vec![vec![2.0, 4.0, 6.0]]);
        let c = profile("c", vec![vec![3.0, 2.0, 1.0]]);
        let flat = profile("d", vec![vec![1.0, 1.0, 1.0]]);
        let s = score_strength_correlation(&[a.clone(), b, c, flat]).unwrap();
        assert!((s.pairwise.get(0, 1) - 1.0).abs() < 1e-15);
        assert!((s.pairwise.get(0, 2) + 1.0).abs() < 1e-15);
        assert_eq!(s.pairwise.get(0, 3), 0.0);
        assert_eq!(s.pairwise.get(3, 3), 1.0);

        let x = profile("x", vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let y = profile("y", vec![vec![2.0, 1.0], vec![4.0, 3.0]]);
        let w = score_accumulated_weights_correlation(&[x.clone(), x.clone()]).unwrap();
        assert!((w.pairwise.get(0, 1) - 1.0).abs() < 1e-15);
        let w = score_accumulated_weights_correlation(&[x, y]).unwrap();
        assert!((w.pairwise.get(0, 1) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn weighted_intersection_examples() {
        let a = profile("a", vec![vec![1.0, 2.0], vec![0.5, 3.0]]);
        let s = score_accumulated_weighted_intersection(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(s.pairwise.get(0, 1), 1.0);

        // Equal strengths but opposite view ranks (n_v = 2): the rank gate closes.
        let p = profile("p", vec![vec![1.0, 1.0]]);
        let mut q = p.clone();
        q.view_ranks = vec![2, 1];
        let s = score_accumulated_weighted_intersection(&[p, q]).unwrap();
        assert_eq!(s.pairwise.get(0, 1), 0.0);
    }

    #[test]
    fn weighted_intersection_small_instance() {
        // n_v = 2, n_k = 2, both models rank view 1 first.
        let a = profile("a", vec![vec![0.0, 1.0], vec![2.0, 4.0]]);
        let b = profile("b", vec![vec![1.0, 3.0], vec![0.0, 1.0]]);
        assert_eq!(a.view_ranks, vec![2, 1]);
        assert_eq!(b.view_ranks, vec![2, 1]);
        // min-max normalised accumulated vectors, computed by hand
        let ah: [f64; 4] = [0.0, 0.25, 0.5, 1.0];
        let bh: [f64; 4] = [1.0 / 3.0, 1.0, 0.0, 1.0 / 3.0];
        let expected: f64 = ah
            .iter()
            .zip(&bh)
            .map(|(x, y)| 1.0 - (x - y).abs())
            .sum::<f64>()
            / 4.0;
        assert!((expected - 0.4375).abs() < 1e-15);
        let s = score_accumulated_weighted_intersection(&[a.clone(), b.clone()]).unwrap();
        assert!((s.pairwise.get(0, 1) - expected).abs() < 1e-15);

        // Opposite view ranks close the gate on every term.
        let c = profile("c", vec![vec![1.0, 0.0], vec![3.0, 1.0]]);
        assert_eq!(c.view_ranks, vec![1, 2]);
        let s = score_accumulated_weighted_intersection(&[a, c]).unwrap();
        assert_eq!(s.pairwise.get(0, 1), 0.0);
    }

    #[test]
    fn jaccard_examples() {
        assert_eq!(jaccard(&[0, 1, 2, 3], &[2, 3, 4]), 0.4);
        assert_eq!(jaccard(&[0, 1], &[0, 1]), 1.0);
        assert_eq!(jaccard(&[0, 1], &[2, 3]), 0.0);
        let models = vec!["a".to_string(), "b".to_string()];
        let runs = vec![
            vec![vec![0, 1, 2, 3], vec![2, 3, 4]],
            vec![vec![0, 1], vec![0, 1]],
        ];
        let s = score_accumulated_rank_intersection(&models, &runs).unwrap();
        assert!((s.pairwise.get(0, 1) - 0.7).abs() < 1e-15);
        assert_eq!(s.per_model, vec![s.pairwise.get(0, 1); 2]);
    }

    #[test]
    fn kl_examples() {
        let p = [0.5, 0.5];
        let q = [0.9, 0.1];
        assert_eq!(symmetric_kl(&p, &p), 0.0);
        // One direction, KL(q ‖ p) = 0.9 ln 1.8 + 0.1 ln 0.2
        let forward = 0.9 * 1.8f64.ln() + 0.1 * 0.2f64.ln();
        assert!((kl_divergence(&q, &p) - forward).abs() < 1e-15);
        assert!((forward - 0.3681).abs() < 1e-4);

        let v = symmetric_kl(
            &strength_distribution(&[1.0, 0.0]),
            &strength_distribution(&[0.0, 1.0]),
        );
        assert!(v.is_finite() && v > 10.0);

        let a = profile("a", vec![vec![1.0, 1.0]]);
        let k = score_kl(&[a.clone(), a]).unwrap();
        assert_eq!(k.pairwise.values(), &[0.0; 4]);
        assert!(!ScoreId::Kl.higher_is_better());
    }

    #[test]
    fn l2_examples() {
        assert_eq!(euclidean(&[0.0, 0.0], &[3.0, 4.0]), 5.0);
        let a = profile("a", vec![vec![0.0, 0.0]]);
        let b = profile("b", vec![vec![3.0, 4.0]]);
        let s = score_l2(&[a.clone(), b]).unwrap();
        assert_eq!(s.pairwise.get(0, 1), 5.0);
        assert_eq!(s.pairwise.get(1, 1), 0.0);
        assert_eq!(s.per_model, vec![5.0, 5.0]);
    }

    #[test]
    fn labels_round_trip() {
        for s in ScoreId::ALL {
            assert_eq!(ScoreId::from_label(s.label()), Some(s));
            assert_eq!(
                serde_json::to_string(&s).unwrap(),
                format!("\"{}\"", s.label())
            );
        }
    }
}

//! Overall reproducibility matrix and node-strength model selection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{node_strength, MatrixKind, ReproMatrix};
use crate::store::WeightStore;

pub use crate::scores::TIE_TOLERANCE;

/// Elementwise `view_avg + rank_corr`.
///
/// With `normalize`, the off-diagonal entries of each input are first
/// min-max scaled to [0, 1] (constant inputs become 0) and the diagonal set
/// to 1; the literal sum is the default.
pub fn build_overall(
    view_avg: &ReproMatrix,
    rank_corr: &ReproMatrix,
    normalize: bool,
) -> Result<ReproMatrix> {
    if view_avg.axis() != rank_corr.axis() {
        return Err(Error::AxisMismatch(format!(
            "view average over {:?} but rank correlation over {:?}",
            view_avg.axis(),
            rank_corr.axis()
        )));
    }
    let (a, b) = if normalize {
        (
            min_max_off_diagonal(view_avg),
            min_max_off_diagonal(rank_corr),
        )
    } else {
        (view_avg.values().to_vec(), rank_corr.values().to_vec())
    };
    let n = view_avg.dim();
    Ok(ReproMatrix::from_fn(
        view_avg.axis().to_vec(),
        MatrixKind::Overall,
        |i, j| a[i * n + j] + b[i * n + j],
    ))
}

fn min_max_off_diagonal(m: &ReproMatrix) -> Vec<f64> {
    let n = m.dim();
    let off = || (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));
    let lo = off()
        .map(|(i, j)| m.get(i, j))
        .fold(f64::INFINITY, f64::min);
    let hi = off()
        .map(|(i, j)| m.get(i, j))
        .fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let mut out = vec![1.0; n * n];
    for (i, j) in off() {
        out[i * n + j] = if span > TIE_TOLERANCE {
            (m.get(i, j) - lo) / span
        } else {
            0.0
        };
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub winner: String,
    pub winner_index: usize,
    pub strengths: Vec<f64>,
    /// Another model's strength is within [`TIE_TOLERANCE`] of the winner's.
    pub tie: bool,
}

/// Picks the node with the largest off-diagonal row sum; the first model in
/// axis order wins ties.
pub fn select_model(overall: &ReproMatrix) -> Result<Selection> {
    if overall.dim() == 0 {
        return Err(Error::Empty("empty reproducibility matrix"));
    }
    let strengths = node_strength(overall);
    let max = strengths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let near: Vec<usize> = (0..strengths.len())
        .filter(|&i| max - strengths[i] <= TIE_TOLERANCE)
        .collect();
    let winner_index = near[0];
    Ok(Selection {
        winner: overall.axis()[winner_index].clone(),
        winner_index,
        tie: near.len() > 1,
        strengths,
    })
}

/// Mean |w| over every (view, mode, run) record of `winner`.
pub fn winner_weights(store: &WeightStore, winner: &str) -> Result<Vec<f64>> {
    let m = store.config().require_model(winner)?;
    let records: Vec<_> = store
        .records()
        .iter()
        .filter(|r| store.config().model_index(&r.model_id) == Some(m))
        .collect();
    if records.is_empty() {
        return Err(Error::Empty("winner has no weight records"));
    }
    let mut sum = vec![0.0; store.config().n_r()];
    for r in &records {
        for (s, w) in sum.iter_mut().zip(&r.weights) {
            *s += w.abs();
        }
    }
    let n = records.len() as f64;
    Ok(sum.into_iter().map(|s| s / n).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::StudyConfig;
    use crate::store::{LoadOptions, WeightRecord};

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("m{i}")).collect()
    }

    fn mat(rows: Vec<Vec<f64>>, kind: MatrixKind) -> ReproMatrix {
        ReproMatrix::from_rows(ids(rows.len()), rows, kind).unwrap()
    }

    #[test]
    fn overall_is_elementwise_sum() {
        let ones = mat(vec![vec![1.0; 3]; 3], MatrixKind::Averaged);
        let ident = mat(
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ],
            MatrixKind::RankCorrelation,
        );
        let o = build_overall(&ones, &ident, false).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(o.get(i, j), if i == j { 2.0 } else { 1.0 });
            }
        }

        let m = mat(vec![vec![0.0, 0.3], vec![0.3, 0.0]], MatrixKind::Averaged);
        let neg = mat(
            vec![vec![0.0, -0.3], vec![-0.3, 0.0]],
            MatrixKind::RankCorrelation,
        );
        let o = build_overall(&m, &neg, false).unwrap();
        assert_eq!(o.values(), &[0.0; 4]);

        let a = mat(
            vec![
                vec![1.0, 0.2, 0.4],
                vec![0.2, 1.0, 0.6],
                vec![0.4, 0.6, 1.0],
            ],
            MatrixKind::Averaged,
        );
        let b = mat(
            vec![
                vec![1.0, -0.5, 0.5],
                vec![-0.5, 1.0, 1.0],
                vec![0.5, 1.0, 1.0],
            ],
            MatrixKind::RankCorrelation,
        );
        let o = build_overall(&a, &b, false).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(o.get(i, j), a.get(i, j) + b.get(i, j));
            }
        }
        assert!(o.is_symmetric(0.0));
    }

    #[test]
    fn normalized_overall() {
        let a = mat(
            vec![
                vec![1.0, 0.2, 0.4],
                vec![0.2, 1.0, 0.6],
                vec![0.4, 0.6, 1.0],
            ],
            MatrixKind::Averaged,
        );
        let b = mat(
            vec![
                vec![1.0, -0.5, 0.5],
                vec![-0.5, 1.0, 1.0],
                vec![0.5, 1.0, 1.0],
            ],
            MatrixKind::RankCorrelation,
        );
        let o = build_overall(&a, &b, true).unwrap();
        assert!((o.get(0, 1) - 0.0).abs() < 1e-15);
        assert!((o.get(1, 2) - 2.0).abs() < 1e-15);
        assert!((o.get(0, 2) - (0.5 + 2.0 / 3.0)).abs() < 1e-15);
        assert_eq!(o.get(0, 0), 2.0);
    }

    #[test]
    fn axis_mismatch() {
        let a = mat(vec![vec![1.0; 2]; 2], MatrixKind::Averaged);
        let b = ReproMatrix::from_rows(
            vec!["x".into(), "y".into()],
            vec![vec![1.0; 2]; 2],
            MatrixKind::RankCorrelation,
        )
        .unwrap();
        assert!(matches!(
            build_overall(&a, &b, false),
            Err(Error::AxisMismatch(_))
        ));
    }

    #[test]
    fn selects_strongest_node() {
        // strengths [0.5, 0.9, 0.7]
        let m = mat(
            vec![
                vec![2.0, 0.35, 0.15],
                vec![0.35, 2.0, 0.55],
                vec![0.15, 0.55, 2.0],
            ],
            MatrixKind::Overall,
        );
        let s = select_model(&m).unwrap();
        assert_eq!(s.winner_index, 1);
        assert_eq!(s.winner, "m1");
        assert!(!s.tie);

        let flat = mat(vec![vec![2.0; 3]; 3], MatrixKind::Overall);
        let s = select_model(&flat).unwrap();
        assert_eq!(s.winner_index, 0);
        assert!(s.tie);
    }

    #[test]
    fn winner_weights_average_absolutes() {
        let config = StudyConfig::new(
            3,
            vec!["a".into(), "b".into()],
            vec!["v".into()],
            vec!["x".into(), "y".into()],
            vec![1],
        )
        .unwrap();
        let recs = vec![
            WeightRecord::new("a", "v", "x", 0, vec![1.0, -2.0, 3.0]),
            WeightRecord::new("a", "v", "y", 0, vec![-1.0, 2.0, -3.0]),
            WeightRecord::new("b", "v", "x", 0, vec![9.0, 9.0, 9.0]),
            WeightRecord::new("b", "v", "y", 0, vec![0.0, 3.0, -6.0]),
            WeightRecord::new("b", "v", "y", 1, vec![3.0, 0.0, 0.0]),
        ];
        let store = WeightStore::from_records(config, recs, LoadOptions::default()).unwrap();
        assert_eq!(winner_weights(&store, "a").unwrap(), vec![1.0, 2.0, 3.0]);
        // (|9|+|0|+|3|)/3, (9+3+0)/3, (9+6+0)/3
        assert_eq!(winner_weights(&store, "b").unwrap(), vec![4.0, 4.0, 5.0]);
        assert!(winner_weights(&store, "zz").is_err());
    }
}

//! Axis-labelled square matrices and the overlap constructions built on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranking::{BiomarkerRanking, TopKSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    /// Models × models top-k overlap on one view.
    ViewSpecific,
    /// Views × views top-k overlap for one model.
    GnnSpecific,
    /// Mean of overlap matrices (over thresholds, runs, views or modes).
    Averaged,
    /// Pairwise correlation of view-rank vectors.
    RankCorrelation,
    /// Sum of a view-average and a rank-correlation matrix.
    Overall,
    /// Pairwise matrix behind a reproducibility score.
    Score,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Overlap,
    Correlation,
    Overall,
    Score,
}

impl MatrixKind {
    fn family(self) -> Family {
        match self {
            MatrixKind::ViewSpecific | MatrixKind::GnnSpecific | MatrixKind::Averaged => {
                Family::Overlap
            }
            MatrixKind::RankCorrelation => Family::Correlation,
            MatrixKind::Overall => Family::Overall,
            MatrixKind::Score => Family::Score,
        }
    }

    pub fn is_overlap(self) -> bool {
        self.family() == Family::Overlap
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproMatrix {
    axis: Vec<String>,
    /// Row-major, `axis.len()²` entries.
    values: Vec<f64>,
    kind: MatrixKind,
}

impl ReproMatrix {
    pub fn from_rows(axis: Vec<String>, rows: Vec<Vec<f64>>, kind: MatrixKind) -> Result<Self> {
        let n = axis.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::AxisMismatch(format!(
                "{n} axis ids but matrix is not {n}×{n}"
            )));
        }
        Ok(ReproMatrix {
            axis,
            values: rows.into_iter().flatten().collect(),
            kind,
        })
    }

    pub(crate) fn from_fn(
        axis: Vec<String>,
        kind: MatrixKind,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let n = axis.len();
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i, j));
            }
        }
        ReproMatrix { axis, values, kind }
    }

    pub fn axis(&self) -> &[String] {
        &self.axis
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.axis.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.dim();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn with_kind(mut self, kind: MatrixKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// Mean of the off-diagonal entries of row `i`.
    pub fn off_diagonal_mean(&self, i: usize) -> f64 {
        let n = self.dim();
        if n < 2 {
            return 0.0;
        }
        off_diagonal_sum(self.row(i), i) / (n - 1) as f64
    }
}

fn off_diagonal_sum(row: &[f64], skip: usize) -> f64 {
    row.iter()
        .enumerate()
        .filter(|&(j, _)| j != skip)
        .map(|(_, v)| v)
        .sum()
}

/// |a ∩ b| / k.
pub fn overlap_ratio(a: &TopKSet, b: &TopKSet) -> Result<f64> {
    if a.k() != b.k() {
        return Err(Error::ThresholdMismatch {
            left: a.k(),
            right: b.k(),
        });
    }
    Ok(a.intersection_len(b) as f64 / a.k() as f64)
}

/// Pairwise top-k overlap between the rankings, one per axis entry.
/// The diagonal is computed like every other entry.
pub fn overlap_matrix(
    axis: &[String],
    rankings: &[&BiomarkerRanking],
    k: usize,
    kind: MatrixKind,
) -> Result<ReproMatrix> {
    if axis.len() != rankings.len() {
        return Err(Error::AxisMismatch(format!(
            "{} axis ids for {} rankings",
            axis.len(),
            rankings.len()
        )));
    }
    let sets = rankings
        .iter()
        .map(|r| r.top_k(k))
        .collect::<Result<Vec<_>>>()?;
    let n = sets.len();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = overlap_ratio(&sets[i], &sets[j])?;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    Ok(ReproMatrix {
        axis: axis.to_vec(),
        values,
        kind,
    })
}

/// Model × model overlap on one view at threshold `k`; one ranking per model
/// in config order.
pub fn view_matrix_at_threshold(
    models: &[String],
    rankings: &[&BiomarkerRanking],
    k: usize,
) -> Result<ReproMatrix> {
    overlap_matrix(models, rankings, k, MatrixKind::ViewSpecific)
}

/// View × view overlap for one model at threshold `k`; one ranking per view
/// in config order.
pub fn gnn_matrix_at_threshold(
    views: &[String],
    rankings: &[&BiomarkerRanking],
    k: usize,
) -> Result<ReproMatrix> {
    overlap_matrix(views, rankings, k, MatrixKind::GnnSpecific)
}

/// Elementwise arithmetic mean, summed in list order.
///
/// Overlap kinds may be mixed and yield [`MatrixKind::Averaged`]; any other
/// kind must match exactly and is preserved.
pub fn average_matrices(ms: &[ReproMatrix]) -> Result<ReproMatrix> {
    let first = ms.first().ok_or(Error::Empty("no matrices to average"))?;
    for m in &ms[1..] {
        if m.axis != first.axis {
            return Err(Error::AxisMismatch(format!(
                "cannot average {:?} with {:?}",
                first.axis, m.axis
            )));
        }
        if m.kind.family() != first.kind.family() {
            return Err(Error::AxisMismatch(format!(
                "cannot average {:?} with {:?} matrices",
                first.kind, m.kind
            )));
        }
    }
    let mut sum = vec![0.0; first.values.len()];
    for m in ms {
        for (s, v) in sum.iter_mut().zip(&m.values) {
            *s += v;
        }
    }
    let n = ms.len() as f64;
    let kind = if first.kind.is_overlap() {
        MatrixKind::Averaged
    } else {
        first.kind
    };
    Ok(ReproMatrix {
        axis: first.axis.clone(),
        values: sum.into_iter().map(|s| s / n).collect(),
        kind,
    })
}

/// Off-diagonal row sums.
pub fn node_strength(m: &ReproMatrix) -> Vec<f64> {
    (0..m.dim())
        .map(|i| off_diagonal_sum(m.row(i), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranking::rank_biomarkers;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("m{i}")).collect()
    }

    /// Ranking whose first entries are `top`, followed by the rest in index order.
    fn ranking_with_top(top: &[usize], n_r: usize) -> BiomarkerRanking {
        let mut w = vec![0.0; n_r];
        for (pos, &i) in top.iter().enumerate() {
            w[i] = (n_r - pos) as f64;
        }
        rank_biomarkers(&w).unwrap()
    }

    fn set(top: &[usize], n_r: usize) -> TopKSet {
        ranking_with_top(top, n_r).top_k(top.len()).unwrap()
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(
            overlap_ratio(&set(&[1, 2, 3], 8), &set(&[1, 2, 3], 8)).unwrap(),
            1.0
        );
        assert_eq!(
            overlap_ratio(&set(&[1, 2, 3], 8), &set(&[4, 5, 6], 8)).unwrap(),
            0.0
        );
        assert_eq!(
            overlap_ratio(&set(&[0, 1, 2, 3, 4], 8), &set(&[3, 4, 5, 6, 7], 8)).unwrap(),
            0.4
        );
        assert!(matches!(
            overlap_ratio(&set(&[1, 2], 8), &set(&[1, 2, 3], 8)),
            Err(Error::ThresholdMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn view_matrix_examples() {
        let same = ranking_with_top(&[3, 1], 6);
        let m = view_matrix_at_threshold(&ids(3), &[&same, &same, &same], 2).unwrap();
        assert!(m.values().iter().all(|&v| v == 1.0));

        let (a, b) = (ranking_with_top(&[0, 1], 6), ranking_with_top(&[2, 3], 6));
        let m = view_matrix_at_threshold(&ids(2), &[&a, &b], 2).unwrap();
        assert_eq!(m.rows(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);

        // {0,1}, {1,2}, {0,1} over n_r = 6
        let r = [
            ranking_with_top(&[0, 1], 6),
            ranking_with_top(&[1, 2], 6),
            ranking_with_top(&[1, 0], 6),
        ];
        let m = view_matrix_at_threshold(&ids(3), &[&r[0], &r[1], &r[2]], 2).unwrap();
        assert_eq!(m.get(0, 1), 0.5);
        assert_eq!(m.get(0, 2), 1.0);
        assert_eq!(m.get(1, 2), 0.5);
        assert!(m.is_symmetric(0.0));
    }

    #[test]
    fn gnn_matrix_four_views() {
        // Hand-built k=3 sets; expected entries counted by hand.
        let tops = [[0, 1, 2], [1, 2, 3], [4, 5, 6], [2, 0, 6]];
        let r: Vec<_> = tops.iter().map(|t| ranking_with_top(t, 8)).collect();
        let refs: Vec<_> = r.iter().collect();
        let m = gnn_matrix_at_threshold(&ids(4), &refs, 3).unwrap();
        assert_eq!(m.kind(), MatrixKind::GnnSpecific);
        let third = 1.0 / 3.0;
        let expected = [
            [1.0, 2.0 * third, 0.0, 2.0 * third],
            [2.0 * third, 1.0, 0.0, third],
            [0.0, 0.0, 1.0, third],
            [2.0 * third, third, third, 1.0],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(m.get(i, j), v, "({i},{j})");
            }
        }
    }

    #[test]
    fn averaging() {
        let id = ReproMatrix::from_rows(
            ids(2),
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            MatrixKind::ViewSpecific,
        )
        .unwrap();
        let ones = ReproMatrix::from_rows(ids(2), vec![vec![1.0; 2]; 2], MatrixKind::ViewSpecific)
            .unwrap();
        let avg = average_matrices(&[id.clone(), ones.clone()]).unwrap();
        assert_eq!(avg.rows(), vec![vec![1.0, 0.5], vec![0.5, 1.0]]);
        assert_eq!(avg.kind(), MatrixKind::Averaged);
        assert_eq!(
            average_matrices(&[ones.clone(), ones.clone()])
                .unwrap()
                .values(),
            ones.values()
        );

        assert!(matches!(average_matrices(&[]), Err(Error::Empty(_))));
        let other = ReproMatrix::from_rows(
            vec!["a".into(), "b".into()],
            vec![vec![1.0; 2]; 2],
            MatrixKind::ViewSpecific,
        )
        .unwrap();
        assert!(matches!(
            average_matrices(&[id.clone(), other]),
            Err(Error::AxisMismatch(_))
        ));
        let corr = id.clone().with_kind(MatrixKind::RankCorrelation);
        assert!(average_matrices(&[id, corr]).is_err());
    }

    #[test]
    fn strengths() {
        let m = ReproMatrix::from_rows(
            ids(2),
            vec![vec![1.0, 0.5], vec![0.5, 1.0]],
            MatrixKind::Averaged,
        )
        .unwrap();
        assert_eq!(node_strength(&m), vec![0.5, 0.5]);
        let ones =
            ReproMatrix::from_rows(ids(3), vec![vec![1.0; 3]; 3], MatrixKind::Averaged).unwrap();
        assert_eq!(node_strength(&ones), vec![2.0, 2.0, 2.0]);
        let m = ReproMatrix::from_rows(
            ids(3),
            vec![
                vec![1.0, 0.2, 0.8],
                vec![0.2, 1.0, 0.0],
                vec![0.8, 0.0, 1.0],
            ],
            MatrixKind::Averaged,
        )
        .unwrap();
        assert_eq!(node_strength(&m)[0], 1.0);
    }

    #[test]
    fn from_rows_checks_shape() {
        assert!(ReproMatrix::from_rows(ids(2), vec![vec![1.0]], MatrixKind::Score).is_err());
        assert!(
            ReproMatrix::from_rows(ids(2), vec![vec![1.0, 2.0], vec![1.0]], MatrixKind::Score)
                .is_err()
        );
    }
}

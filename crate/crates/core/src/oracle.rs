//! Naive reference implementation of the whole analysis.
//!
//! Everything here is written directly from the definitions with plain
//! loops over nested `Vec`s and shares no code with the main pipeline apart
//! from reading records out of a [`WeightStore`]. Top-k sets come from
//! repeated maximum selection, overlaps from nested-loop counting, rank
//! correlation from Pearson on rank vectors. It is slow on purpose and is
//! only meant for cross-checking small studies with default options
//! (absolute ranking, literal overall sum).

#![allow(clippy::needless_range_loop)]

use crate::store::WeightStore;

const TOL: f64 = 1e-12;
const EPS: f64 = 1e-12;

type Mat = Vec<Vec<f64>>;

#[derive(Debug, Clone)]
pub struct OracleScore {
    pub label: &'static str,
    pub pairwise: Mat,
    pub per_model: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct OracleMode {
    pub mode: String,
    /// `[view]` model × model.
    pub view_matrices: Vec<Mat>,
    /// `[model][threshold]` view × view, averaged over runs.
    pub gnn_threshold_matrices: Vec<Vec<Mat>>,
    /// `[model]` view × view, averaged over thresholds and runs.
    pub gnn_matrices: Vec<Mat>,
    pub mean_strengths: Vec<Vec<f64>>,
    pub accumulated_strengths: Vec<Vec<f64>>,
    pub view_ranks: Vec<Vec<usize>>,
    /// v.a, r.c, a.w.i, a.w.c, s.c, a.r.i, KL, L2.
    pub scores: Vec<OracleScore>,
    pub overall: Mat,
    pub strengths: Vec<f64>,
    pub winner: usize,
    pub tie: bool,
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub modes: Vec<OracleMode>,
    pub view_average: Mat,
    pub rank_correlation: Mat,
    pub overall: Mat,
    pub strengths: Vec<f64>,
    pub winner: usize,
    pub tie: bool,
    pub winner_weights: Vec<f64>,
}

/// Membership mask of the k largest |w|, lower index first on ties.
pub fn oracle_top_k(w: &[f64], k: usize) -> Vec<bool> {
    let mut taken = vec![false; w.len()];
    for _ in 0..k {
        let mut best: Option<usize> = None;
        for i in 0..w.len() {
            if taken[i] {
                continue;
            }
            match best {
                Some(b) if w[i].abs() <= w[b].abs() => {}
                _ => best = Some(i),
            }
        }
        taken[best.expect("k <= len")] = true;
    }
    taken
}

/// |top_k(a) ∩ top_k(b)| / k.
pub fn oracle_overlap(a: &[f64], b: &[f64], k: usize) -> f64 {
    let ta = oracle_top_k(a, k);
    let tb = oracle_top_k(b, k);
    let mut common = 0;
    for i in 0..a.len() {
        if !ta[i] {
            continue;
        }
        for j in 0..b.len() {
            if tb[j] && i == j {
                common += 1;
            }
        }
    }
    common as f64 / k as f64
}

fn row_off_sum(m: &Mat, i: usize) -> f64 {
    let mut s = 0.0;
    for j in 0..m.len() {
        if j != i {
            s += m[i][j];
        }
    }
    s
}

fn row_off_mean(m: &Mat, i: usize) -> f64 {
    row_off_sum(m, i) / (m.len() - 1) as f64
}

fn spread(x: &[f64]) -> f64 {
    let mut lo = x[0];
    let mut hi = x[0];
    for &v in x {
        if v < lo {
            lo = v;
        }
        if v > hi {
            hi = v;
        }
    }
    hi - lo
}

fn correlation(x: &[f64], y: &[f64]) -> f64 {
    if spread(x) <= TOL || spread(y) <= TOL {
        return 0.0;
    }
    let n = x.len() as f64;
    let mut mx = 0.0;
    let mut my = 0.0;
    for i in 0..x.len() {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for i in 0..x.len() {
        cov += (x[i] - mx) * (y[i] - my);
        vx += (x[i] - mx) * (x[i] - mx);
        vy += (y[i] - my) * (y[i] - my);
    }
    let r = cov / (vx * vy).sqrt();
    r.clamp(-1.0, 1.0)
}

/// Pearson correlation of two rank vectors.
pub fn oracle_rank_correlation(a: &[usize], b: &[usize]) -> f64 {
    let x: Vec<f64> = a.iter().map(|&r| r as f64).collect();
    let y: Vec<f64> = b.iter().map(|&r| r as f64).collect();
    correlation(&x, &y)
}

/// ½ Σ (p − q) ln(p / q) over two strictly positive distributions.
pub fn oracle_symmetric_kl(p: &[f64], q: &[f64]) -> f64 {
    let mut s = 0.0;
    for v in 0..p.len() {
        s += (p[v] - q[v]) * (p[v] / q[v]).ln();
    }
    (0.5 * s).max(0.0)
}

pub fn oracle_l2(x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() {
        let d = x[i] - y[i];
        s += d * d;
    }
    s.sqrt()
}

/// Selection-sort ranking: the earliest view within `TOL` of the largest
/// remaining strength takes the next rank.
fn ranks_of(s: &[f64]) -> Vec<usize> {
    let mut rank = vec![0; s.len()];
    for r in 1..=s.len() {
        let mut best: Option<usize> = None;
        for u in 0..s.len() {
            if rank[u] != 0 {
                continue;
            }
            match best {
                Some(b) if s[u] <= s[b] + TOL => {}
                _ => best = Some(u),
            }
        }
        rank[best.unwrap()] = r;
    }
    rank
}

fn normalise(x: &[f64]) -> Vec<f64> {
    if spread(x) <= TOL {
        return vec![0.0; x.len()];
    }
    let lo = x.iter().cloned().fold(f64::MAX, f64::min);
    let hi = x.iter().cloned().fold(f64::MIN, f64::max);
    x.iter().map(|v| (v - lo) / (hi - lo)).collect()
}

fn pair_matrix(n: usize, diag: f64, f: impl Fn(usize, usize) -> f64) -> Mat {
    let mut m = vec![vec![diag; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m[i][j] = f(i, j);
            }
        }
    }
    m
}

fn score(label: &'static str, pairwise: Mat) -> OracleScore {
    let per_model = (0..pairwise.len())
        .map(|i| row_off_mean(&pairwise, i))
        .collect();
    OracleScore {
        label,
        pairwise,
        per_model,
    }
}

fn pick(m: &Mat) -> (Vec<f64>, usize, bool) {
    let strengths: Vec<f64> = (0..m.len()).map(|i| row_off_sum(m, i)).collect();
    let mut max = strengths[0];
    for &s in &strengths {
        if s > max {
            max = s;
        }
    }
    let mut winner = None;
    let mut count = 0;
    for (i, &s) in strengths.iter().enumerate() {
        if max - s <= TOL {
            count += 1;
            if winner.is_none() {
                winner = Some(i);
            }
        }
    }
    (strengths, winner.unwrap(), count > 1)
}

fn add(a: &Mat, b: &Mat) -> Mat {
    (0..a.len())
        .map(|i| (0..a.len()).map(|j| a[i][j] + b[i][j]).collect())
        .collect()
}

fn oracle_mode(store: &WeightStore, o: usize) -> OracleMode {
    let cfg = store.config();
    let (models, views, ks) = (cfg.models(), cfg.views(), cfg.thresholds());
    let (n_m, n_v, n_k) = (models.len(), views.len(), ks.len());
    let mode = &cfg.modes()[o];

    // w[m][v][r], runs in ascending id order
    let mut w: Vec<Vec<Vec<Vec<f64>>>> = vec![vec![Vec::new(); n_v]; n_m];
    for m in 0..n_m {
        for v in 0..n_v {
            let mut recs: Vec<_> = store
                .records()
                .iter()
                .filter(|r| r.model_id == models[m] && r.view_id == views[v] && &r.mode_id == mode)
                .collect();
            recs.sort_by_key(|r| r.run_id);
            w[m][v] = recs.iter().map(|r| r.weights.clone()).collect();
        }
    }
    let n_runs = w[0][0].len();

    let mut view_matrices = Vec::new();
    for v in 0..n_v {
        let mut m = vec![vec![0.0; n_m]; n_m];
        for i in 0..n_m {
            for j in 0..n_m {
                let mut over_runs = 0.0;
                for r in 0..n_runs {
                    let mut over_k = 0.0;
                    for &k in ks {
                        over_k += oracle_overlap(&w[i][v][r], &w[j][v][r], k);
                    }
                    over_runs += over_k / n_k as f64;
                }
                m[i][j] = over_runs / n_runs as f64;
            }
        }
        view_matrices.push(m);
    }

    let mut gnn_threshold_matrices = Vec::new();
    let mut gnn_matrices = Vec::new();
    let mut mean_strengths = Vec::new();
    let mut accumulated_strengths = Vec::new();
    let mut view_ranks = Vec::new();
    for g in 0..n_m {
        let mut per_t = Vec::new();
        for &k in ks {
            let mut m = vec![vec![0.0; n_v]; n_v];
            for a in 0..n_v {
                for b in 0..n_v {
                    let mut s = 0.0;
                    for r in 0..n_runs {
                        s += oracle_overlap(&w[g][a][r], &w[g][b][r], k);
                    }
                    m[a][b] = s / n_runs as f64;
                }
            }
            per_t.push(m);
        }
        let mut avg = vec![vec![0.0; n_v]; n_v];
        for m in &per_t {
            for a in 0..n_v {
                for b in 0..n_v {
                    avg[a][b] += m[a][b];
                }
            }
        }
        for row in avg.iter_mut() {
            for x in row.iter_mut() {
                *x /= n_k as f64;
            }
        }
        let mut acc = Vec::new();
        for m in &per_t {
            for a in 0..n_v {
                acc.push(row_off_sum(m, a));
            }
        }
        let mut mean = vec![0.0; n_v];
        for t in 0..n_k {
            for a in 0..n_v {
                mean[a] += acc[t * n_v + a];
            }
        }
        for x in mean.iter_mut() {
            *x /= n_k as f64;
        }
        view_ranks.push(ranks_of(&mean));
        mean_strengths.push(mean);
        accumulated_strengths.push(acc);
        gnn_threshold_matrices.push(per_t);
        gnn_matrices.push(avg);
    }

    let mut va = vec![vec![0.0; n_m]; n_m];
    for vm in &view_matrices {
        for i in 0..n_m {
            for j in 0..n_m {
                va[i][j] += vm[i][j];
            }
        }
    }
    for row in va.iter_mut() {
        for x in row.iter_mut() {
            *x /= n_v as f64;
        }
    }

    let rc = pair_matrix(n_m, 1.0, |i, j| {
        oracle_rank_correlation(&view_ranks[i], &view_ranks[j])
    });

    let norm: Vec<Vec<f64>> = accumulated_strengths.iter().map(|a| normalise(a)).collect();
    let awi = pair_matrix(n_m, 1.0, |i, j| {
        let mut s = 0.0;
        for t in 0..n_k {
            for v in 0..n_v {
                let x = t * n_v + v;
                let gap = (view_ranks[i][v] as f64 - view_ranks[j][v] as f64).abs();
                s += (1.0 - (norm[i][x] - norm[j][x]).abs()) * (1.0 - gap / (n_v - 1) as f64);
            }
        }
        s / (n_v * n_k) as f64
    });
    let awc = pair_matrix(n_m, 1.0, |i, j| {
        correlation(&accumulated_strengths[i], &accumulated_strengths[j])
    });
    let sc = pair_matrix(n_m, 1.0, |i, j| {
        correlation(&mean_strengths[i], &mean_strengths[j])
    });

    let n_r = cfg.n_r();
    let unions: Vec<Vec<Vec<bool>>> = (0..n_runs)
        .map(|r| {
            (0..n_m)
                .map(|m| {
                    let mut u = vec![false; n_r];
                    for v in 0..n_v {
                        for &k in ks {
                            let t = oracle_top_k(&w[m][v][r], k);
                            for x in 0..n_r {
                                u[x] = u[x] || t[x];
                            }
                        }
                    }
                    u
                })
                .collect()
        })
        .collect();
    let ari = pair_matrix(n_m, 1.0, |i, j| {
        let mut s = 0.0;
        for u in &unions {
            let both = (0..n_r).filter(|&x| u[i][x] && u[j][x]).count();
            let either = (0..n_r).filter(|&x| u[i][x] || u[j][x]).count();
            s += if either == 0 {
                1.0
            } else {
                both as f64 / either as f64
            };
        }
        s / n_runs as f64
    });

    let dist: Vec<Vec<f64>> = mean_strengths
        .iter()
        .map(|s| {
            let total: f64 = s.iter().map(|x| x + EPS).sum();
            s.iter().map(|x| (x + EPS) / total).collect()
        })
        .collect();
    let kl = pair_matrix(n_m, 0.0, |i, j| oracle_symmetric_kl(&dist[i], &dist[j]));
    let l2 = pair_matrix(n_m, 0.0, |i, j| {
        oracle_l2(&accumulated_strengths[i], &accumulated_strengths[j])
    });

    let overall = add(&va, &rc);
    let (strengths, winner, tie) = pick(&overall);
    OracleMode {
        mode: mode.clone(),
        view_matrices,
        gnn_threshold_matrices,
        gnn_matrices,
        mean_strengths,
        accumulated_strengths,
        view_ranks,
        scores: vec![
            score("v.a", va),
            score("r.c", rc),
            score("a.w.i", awi),
            score("a.w.c", awc),
            score("s.c", sc),
            score("a.r.i", ari),
            score("KL", kl),
            score("L2", l2),
        ],
        overall,
        strengths,
        winner,
        tie,
    }
}

/// Runs the reference analysis. The store must be complete: every cell
/// present with the same run ids, at least two models and two views.
pub fn oracle_pipeline(store: &WeightStore) -> OracleReport {
    let cfg = store.config();
    let modes: Vec<OracleMode> = (0..cfg.modes().len())
        .map(|o| oracle_mode(store, o))
        .collect();
    let n_m = cfg.models().len();
    let n_o = modes.len() as f64;
    let mut view_average = vec![vec![0.0; n_m]; n_m];
    let mut rank_correlation = vec![vec![0.0; n_m]; n_m];
    for m in &modes {
        for i in 0..n_m {
            for j in 0..n_m {
                view_average[i][j] += m.scores[0].pairwise[i][j];
                rank_correlation[i][j] += m.scores[1].pairwise[i][j];
            }
        }
    }
    for i in 0..n_m {
        for j in 0..n_m {
            view_average[i][j] /= n_o;
            rank_correlation[i][j] /= n_o;
        }
    }
    let overall = add(&view_average, &rank_correlation);
    let (strengths, winner, tie) = pick(&overall);

    let mut winner_weights = vec![0.0; cfg.n_r()];
    let mut count = 0;
    for r in store.records() {
        if r.model_id == cfg.models()[winner] {
            count += 1;
            for x in 0..cfg.n_r() {
                winner_weights[x] += r.weights[x].abs();
            }
        }
    }
    for x in winner_weights.iter_mut() {
        *x /= count as f64;
    }

    OracleReport {
        modes,
        view_average,
        rank_correlation,
        overall,
        strengths,
        winner,
        tie,
        winner_weights,
    }
}

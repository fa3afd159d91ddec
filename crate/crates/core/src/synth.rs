//! Seeded synthetic studies with known ground truth.
//!
//! All randomness comes from ChaCha8 seeded with [`SyntheticStudySpec::seed`],
//! drawn in a fixed loop order (mode, run, view, model), so a given spec
//! produces the same weights, bit for bit, on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::StudyConfig;
use crate::error::{Error, Result};
use crate::store::{LoadOptions, WeightRecord, WeightStore};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    /// i.i.d. standard normal weights for every cell.
    RandomIndependent,
    /// One model shares a `consensus` fraction of its top-k biomarkers with
    /// every other model; the other models share as little as the layout
    /// allows with each other.
    PlantedConsensus { planted: usize, consensus: f64 },
    /// Every model receives the same vector per (view, mode, run).
    IdenticalModels,
    /// Model 0 holds a random vector; every other model a fixed positive
    /// multiple of it.
    ScaledCopies,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticStudySpec {
    pub seed: u64,
    pub n_r: usize,
    pub n_models: usize,
    pub n_views: usize,
    pub n_modes: usize,
    pub thresholds: Vec<usize>,
    pub runs_per_cell: usize,
    pub scenario: Scenario,
}

impl SyntheticStudySpec {
    pub fn config(&self) -> Result<StudyConfig> {
        StudyConfig::new(
            self.n_r,
            (0..self.n_models).map(|i| format!("m{i}")).collect(),
            (0..self.n_views).map(|i| format!("v{i}")).collect(),
            (0..self.n_modes).map(|i| format!("mode{i}")).collect(),
            self.thresholds.clone(),
        )
    }
}

/// Position pattern deciding which of the planted model's ranked positions
/// a non-planted model keeps.
///
/// Positions repeat with period `period`; non-planted model `j` keeps the
/// cyclic window of `width` residues starting at `j·period / n_others`, so
/// windows of different models overlap as little as the period allows.
#[derive(Debug, Clone, PartialEq)]
pub struct KeepPattern {
    period: usize,
    width: usize,
    starts: Vec<usize>,
}

impl KeepPattern {
    pub fn new(thresholds: &[usize], consensus: f64, n_others: usize) -> Self {
        let gcd = thresholds.iter().copied().fold(0, gcd);
        let period = if gcd >= 5 { gcd } else { 5 };
        let width = ((consensus * period as f64).round() as usize).min(period);
        let starts = (0..n_others)
            .map(|j| j * period / n_others.max(1))
            .collect();
        KeepPattern {
            period,
            width,
            starts,
        }
    }

    /// Whether non-planted model `other` keeps the planted element at `position`.
    pub fn keeps(&self, other: usize, position: usize) -> bool {
        let offset = (position % self.period + self.period - self.starts[other]) % self.period;
        offset < self.width
    }

    /// Kept fraction within each full period.
    pub fn consensus(&self) -> f64 {
        self.width as f64 / self.period as f64
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Builds a validated [`WeightStore`] for `spec`.
pub fn generate_study(spec: &SyntheticStudySpec) -> Result<WeightStore> {
    let config = spec.config()?;
    if spec.runs_per_cell == 0 {
        return Err(Error::InvalidSpec("runs_per_cell must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n_r = spec.n_r;
    let n_models = spec.n_models;
    let records = match spec.scenario {
        Scenario::RandomIndependent => cells(spec, &mut rng, |rng| {
            (0..n_models).map(|_| normal_vector(rng, n_r)).collect()
        }),
        Scenario::IdenticalModels => cells(spec, &mut rng, |rng| {
            vec![normal_vector(rng, n_r); n_models]
        }),
        Scenario::ScaledCopies => {
            let scales: Vec<f64> = (0..n_models)
                .map(|m| {
                    if m == 0 {
                        1.0
                    } else {
                        rng.random_range(0.1..10.0)
                    }
                })
                .collect();
            cells(spec, &mut rng, |rng| {
                let base = normal_vector(rng, n_r);
                scales
                    .iter()
                    .map(|c| base.iter().map(|w| w * c).collect())
                    .collect()
            })
        }
        Scenario::PlantedConsensus { planted, consensus } => {
            planted_records(spec, planted, consensus, &mut rng)?
        }
    };
    WeightStore::from_records(config, records, LoadOptions::default())
}

fn normal_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Walks (mode, run, view); `per_view` returns one vector per model.
fn cells(
    spec: &SyntheticStudySpec,
    rng: &mut ChaCha8Rng,
    mut per_view: impl FnMut(&mut ChaCha8Rng) -> Vec<Vec<f64>>,
) -> Vec<WeightRecord> {
    let mut out = Vec::new();
    for mode in 0..spec.n_modes {
        for run in 0..spec.runs_per_cell {
            for view in 0..spec.n_views {
                for (model, weights) in per_view(rng).into_iter().enumerate() {
                    out.push(WeightRecord::new(
                        format!("m{model}"),
                        format!("v{view}"),
                        format!("mode{mode}"),
                        run as u64,
                        weights,
                    ));
                }
            }
        }
    }
    out
}

/// Weight vector whose |w| ranking is exactly `order`, with random
/// magnitudes and signs.
fn weights_for_order(rng: &mut ChaCha8Rng, order: &[usize]) -> Vec<f64> {
    let mut mags: Vec<f64> = (0..order.len())
        .map(|_| 0.05 + 0.95 * rng.random::<f64>())
        .collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let mut w = vec![0.0; order.len()];
    for (pos, &idx) in order.iter().enumerate() {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        w[idx] = sign * mags[pos];
    }
    w
}

fn planted_records(
    spec: &SyntheticStudySpec,
    planted: usize,
    consensus: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<WeightRecord>> {
    if planted >= spec.n_models {
        return Err(Error::InvalidSpec(format!(
            "planted model {planted} out of range for {} models",
            spec.n_models
        )));
    }
    if !(0.0..=1.0).contains(&consensus) {
        return Err(Error::InvalidSpec(format!(
            "consensus {consensus} outside [0, 1]"
        )));
    }
    let n_r = spec.n_r;
    let k_max = *spec
        .thresholds
        .iter()
        .max()
        .ok_or(Error::InvalidSpec("no thresholds".into()))?;
    let others: Vec<usize> = (0..spec.n_models).filter(|&m| m != planted).collect();
    let pattern = KeepPattern::new(&spec.thresholds, consensus, others.len());
    let replaced: usize = (0..others.len())
        .map(|j| (0..k_max).filter(|&p| !pattern.keeps(j, p)).count())
        .sum();
    if replaced > n_r - k_max {
        return Err(Error::InvalidSpec(format!(
            "planted layout needs {replaced} private biomarkers outside the top {k_max}, only {} available",
            n_r - k_max
        )));
    }

    let mut out = Vec::new();
    for mode in 0..spec.n_modes {
        for run in 0..spec.runs_per_cell {
            let mut base: Vec<usize> = (0..n_r).collect();
            base.shuffle(rng);

            // Each non-planted model relabels the planted model's biomarkers:
            // a replaced top position swaps its element with a private one
            // drawn from outside the top k_max.
            let mut relabel: Vec<Vec<usize>> = vec![(0..n_r).collect(); others.len()];
            let mut next_private = k_max;
            for (j, map) in relabel.iter_mut().enumerate() {
                for p in (0..k_max).filter(|&p| !pattern.keeps(j, p)) {
                    let (a, b) = (base[p], base[next_private]);
                    map[a] = b;
                    map[b] = a;
                    next_private += 1;
                }
            }

            for view in 0..spec.n_views {
                let mut order = base.clone();
                for block in order[..k_max].chunks_mut(pattern.period) {
                    block.shuffle(rng);
                }
                order[k_max..].shuffle(rng);

                let mut per_model: Vec<Option<Vec<f64>>> = vec![None; spec.n_models];
                per_model[planted] = Some(weights_for_order(rng, &order));
                for (j, &m) in others.iter().enumerate() {
                    let mapped: Vec<usize> = order.iter().map(|&i| relabel[j][i]).collect();
                    per_model[m] = Some(weights_for_order(rng, &mapped));
                }
                for (m, w) in per_model.into_iter().enumerate() {
                    out.push(WeightRecord::new(
                        format!("m{m}"),
                        format!("v{view}"),
                        format!("mode{mode}"),
                        run as u64,
                        w.expect("every model filled"),
                    ));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranking::rank_biomarkers;

    fn spec(scenario: Scenario) -> SyntheticStudySpec {
        SyntheticStudySpec {
            seed: 7,
            n_r: 40,
            n_models: 3,
            n_views: 2,
            n_modes: 2,
            thresholds: vec![5, 10, 15, 20],
            runs_per_cell: 2,
            scenario,
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        for scenario in [
            Scenario::RandomIndependent,
            Scenario::IdenticalModels,
            Scenario::ScaledCopies,
            Scenario::PlantedConsensus {
                planted: 1,
                consensus: 0.6,
            },
        ] {
            let a = generate_study(&spec(scenario)).unwrap().to_jsonl();
            let b = generate_study(&spec(scenario)).unwrap().to_jsonl();
            assert_eq!(a, b);
            let mut other = spec(scenario);
            other.seed = 8;
            assert_ne!(a, generate_study(&other).unwrap().to_jsonl());
        }
    }

    #[test]
    fn record_count() {
        let mut s = spec(Scenario::RandomIndependent);
        s.n_r = 35;
        s.n_models = 5;
        s.n_views = 4;
        let store = generate_study(&s).unwrap();
        assert_eq!(store.len(), 5 * 4 * 2 * 2);
    }

    #[test]
    fn keep_pattern_layout() {
        let p = KeepPattern::new(&[5, 10, 15, 20], 0.6, 2);
        let kept = |j| (0..5).filter(|&q| p.keeps(j, q)).collect::<Vec<_>>();
        assert_eq!(kept(0), vec![0, 1, 2]);
        assert_eq!(kept(1), vec![2, 3, 4]);
        assert_eq!(p.consensus(), 0.6);
    }

    #[test]
    fn planted_overlap_is_exact_at_period_multiples() {
        let store = generate_study(&spec(Scenario::PlantedConsensus {
            planted: 1,
            consensus: 0.6,
        }))
        .unwrap();
        let cfg = store.config().clone();
        for mode in cfg.modes() {
            for view in cfg.views() {
                let top = |m: &str, k| {
                    let r = &store.records_for(m, view, mode).unwrap()[0];
                    rank_biomarkers(&r.weights).unwrap().top_k(k).unwrap()
                };
                for k in [5, 10, 15, 20] {
                    let (p, a, b) = (top("m1", k), top("m0", k), top("m2", k));
                    assert_eq!(p.intersection_len(&a) * 5, 3 * k);
                    assert_eq!(p.intersection_len(&b) * 5, 3 * k);
                    assert_eq!(a.intersection_len(&b) * 5, k);
                }
            }
        }
    }

    #[test]
    fn planted_layout_needs_room() {
        let mut s = spec(Scenario::PlantedConsensus {
            planted: 0,
            consensus: 0.6,
        });
        s.n_r = 35;
        assert!(matches!(generate_study(&s), Err(Error::InvalidSpec(_))));
        s.n_r = 40;
        s.scenario = Scenario::PlantedConsensus {
            planted: 3,
            consensus: 0.6,
        };
        assert!(generate_study(&s).is_err());
    }
}

//! Compare the pipeline with the naive reference implementation.

use reprosel::oracle::oracle_pipeline;
use reprosel::pipeline::{analyze, AnalysisOptions};
use reprosel::synth::{generate_study, Scenario, SyntheticStudySpec};

fn main() -> reprosel::Result<()> {
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let spec = SyntheticStudySpec {
            seed,
            n_r: 10,
            n_models: 4,
            n_views: 3,
            n_modes: 2,
            thresholds: vec![2, 3, 5],
            runs_per_cell: 2,
            scenario: Scenario::RandomIndependent,
        };
        let store = generate_study(&spec)?;
        let main = analyze(&store, AnalysisOptions::default())?;
        let oracle = oracle_pipeline(&store);
        for (m, o) in main.modes.iter().zip(&oracle.modes) {
            for (s, os) in m.scores.iter().zip(&o.scores) {
                for (i, row) in os.pairwise.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        worst = worst.max((s.pairwise.get(i, j) - v).abs());
                    }
                }
            }
        }
        println!(
            "seed {seed}: winner {} / oracle {}",
            main.selection.winner,
            store.config().models()[oracle.winner]
        );
    }
    println!("largest score difference: {worst:e}");
    Ok(())
}

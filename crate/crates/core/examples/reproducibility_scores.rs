//! Print the eight per-model scores of a planted-consensus study.

use reprosel::pipeline::{analyze, AnalysisOptions};
use reprosel::synth::{generate_study, Scenario, SyntheticStudySpec};
use reprosel::ScoreId;

fn main() -> reprosel::Result<()> {
    let spec = SyntheticStudySpec {
        seed: 11,
        n_r: 40,
        n_models: 3,
        n_views: 3,
        n_modes: 1,
        thresholds: vec![5, 10, 15, 20],
        runs_per_cell: 3,
        scenario: Scenario::PlantedConsensus {
            planted: 1,
            consensus: 0.6,
        },
    };
    let analysis = analyze(&generate_study(&spec)?, AnalysisOptions::default())?;
    let mode = &analysis.modes[0];
    print!("{:>6}", "model");
    for id in ScoreId::ALL {
        print!("{:>9}", id.label());
    }
    println!();
    for (m, model) in analysis.config.models().iter().enumerate() {
        print!("{model:>6}");
        for id in ScoreId::ALL {
            print!("{:>9.4}", mode.score(id).per_model[m]);
        }
        println!();
    }
    Ok(())
}

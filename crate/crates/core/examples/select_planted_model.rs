//! The planted model should win in every mode.

use reprosel::pipeline::{analyze, AnalysisOptions};
use reprosel::synth::{generate_study, Scenario, SyntheticStudySpec};

fn main() -> reprosel::Result<()> {
    for seed in 0..5 {
        let spec = SyntheticStudySpec {
            seed,
            n_r: 40,
            n_models: 3,
            n_views: 3,
            n_modes: 2,
            thresholds: vec![5, 10, 15, 20],
            runs_per_cell: 3,
            scenario: Scenario::PlantedConsensus {
                planted: 2,
                consensus: 0.6,
            },
        };
        let analysis = analyze(&generate_study(&spec)?, AnalysisOptions::default())?;
        let strengths: Vec<String> = analysis
            .selection
            .strengths
            .iter()
            .map(|s| format!("{s:.3}"))
            .collect();
        println!(
            "seed {seed}: winner {} (strengths {}), per mode {:?}, agree {}",
            analysis.selection.winner,
            strengths.join(", "),
            analysis
                .modes
                .iter()
                .map(|m| m.selection.winner.as_str())
                .collect::<Vec<_>>(),
            analysis.modes_agree
        );
    }
    Ok(())
}

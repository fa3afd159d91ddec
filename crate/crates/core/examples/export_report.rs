//! Generate a study on disk and run the full export into a directory.
//!
//! cargo run --example export_report -- /tmp/reprosel-demo

use std::path::PathBuf;

use reprosel::commands::{gen, run, StudyInput};
use reprosel::pipeline::AnalysisOptions;
use reprosel::synth::{Scenario, SyntheticStudySpec};

fn main() -> reprosel::Result<()> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("reprosel-demo"));
    let spec = SyntheticStudySpec {
        seed: 7,
        n_r: 35,
        n_models: 5,
        n_views: 4,
        n_modes: 2,
        thresholds: vec![5, 10, 15, 20],
        runs_per_cell: 3,
        scenario: Scenario::RandomIndependent,
    };
    let study = gen(&spec, &root.join("study"))?;
    let input = StudyInput {
        config: study.config,
        inputs: vec![study.weights],
        ..StudyInput::default()
    };
    let outcome = run(&input, AnalysisOptions::default(), &root.join("out"))?;
    for f in &outcome.outputs {
        println!("{}  {}", &f.sha256[..12], f.path);
    }
    println!("winner: {}", outcome.analysis.selection.winner);
    Ok(())
}

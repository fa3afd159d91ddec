//! Build view-specific and GNN-specific matrices for a small random study.

use reprosel::pipeline::{analyze, AnalysisOptions};
use reprosel::synth::{generate_study, Scenario, SyntheticStudySpec};
use reprosel::ReproMatrix;

fn show(title: &str, m: &ReproMatrix) {
    println!("{title}");
    for (i, id) in m.axis().iter().enumerate() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:.3}")).collect();
        println!("  {id:>4} {}", row.join(" "));
    }
}

fn main() -> reprosel::Result<()> {
    let spec = SyntheticStudySpec {
        seed: 3,
        n_r: 35,
        n_models: 4,
        n_views: 3,
        n_modes: 1,
        thresholds: vec![5, 10, 15, 20],
        runs_per_cell: 5,
        scenario: Scenario::RandomIndependent,
    };
    let store = generate_study(&spec)?;
    let analysis = analyze(&store, AnalysisOptions::default())?;
    let mode = &analysis.modes[0];
    for (view, m) in store.config().views().iter().zip(&mode.view_matrices) {
        show(&format!("view-specific, view {view}"), m);
    }
    for (model, m) in store.config().models().iter().zip(&mode.gnn_matrices) {
        show(&format!("GNN-specific, model {model}"), m);
    }
    show("views average", &mode.view_average);
    Ok(())
}

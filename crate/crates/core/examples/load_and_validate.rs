//! Validate JSONL weight files, first a clean one and then a broken one.

use reprosel::store::{LoadOptions, WeightStore};
use reprosel::StudyConfig;

fn main() -> reprosel::Result<()> {
    let config = StudyConfig::new(
        3,
        vec!["gcn".into(), "gat".into()],
        vec!["lh".into()],
        vec!["cv3".into()],
        vec![1, 2],
    )?;
    let good = concat!(
        r#"{"model":"gcn","view":"lh","mode":"cv3","run":0,"weights":[0.1,0.5,-0.2]}"#,
        "\n",
        r#"{"model":"gat","view":"lh","mode":"cv3","run":0,"weights":[0.3,0.1,0.9]}"#,
        "\n",
    );
    let bad = concat!(
        r#"{"model":"gcn","view":"lh","mode":"cv3","run":0,"weights":[0.1,0.5]}"#,
        "\n",
        r#"{"model":"gin","view":"lh","mode":"cv3","run":0,"weights":[0.3,0.1,0.9]}"#,
        "\n",
    );
    let dir = std::env::temp_dir().join(format!("reprosel-validate-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    for (name, text) in [("good.jsonl", good), ("bad.jsonl", bad)] {
        let path = dir.join(name);
        std::fs::write(&path, text).expect("write sample");
        let diag = WeightStore::validate_paths(&[&path], config.clone(), LoadOptions::default());
        println!(
            "{name}: {} record(s), {} error(s)",
            diag.records,
            diag.errors.len()
        );
        for e in &diag.errors {
            println!("  {e}");
        }
    }
    let store = WeightStore::load(dir.join("good.jsonl"), config, LoadOptions::default())?;
    print!("canonical form:\n{}", store.to_jsonl());
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}

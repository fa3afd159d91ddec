//! Rank two weight vectors and compare their top-k sets.

use reprosel::matrix::overlap_ratio;
use reprosel::ranking::rank_biomarkers;

fn main() -> reprosel::Result<()> {
    let a = [0.9, -0.1, 0.45, 0.3, -0.8, 0.05];
    let b = [0.2, 0.7, -0.6, 0.1, 0.95, 0.0];
    let ra = rank_biomarkers(&a)?;
    let rb = rank_biomarkers(&b)?;
    println!("order a: {:?}", ra.order());
    println!("order b: {:?}", rb.order());
    for k in 1..=a.len() {
        let (ta, tb) = (ra.top_k(k)?, rb.top_k(k)?);
        println!(
            "k={k}: {:?} vs {:?} -> overlap {:.3}",
            ta.members(),
            tb.members(),
            overlap_ratio(&ta, &tb)?
        );
    }
    Ok(())
}

//! Greedy selection with feature decay: every time a test n-gram enters
//! the selected pool its value drops, so the selection spreads over n-gram
//! variety instead of piling onto the same matches. Scores are normalized
//! by sentence length.
//!
//! ```bash
//! cargo run -p transelect --example fda_selection
//! ```

use transelect::corpus::{concat_corpora, ParallelCorpus, TestSet};
use transelect::features::NgramConfig;
use transelect::selection::{fda_select, fda_select_with_init, FdaConfig};

fn main() -> transelect::Result<()> {
    let source = vec!["a b c", "a b c", "a b c", "c d e"];
    let target: Vec<String> = source.iter().map(|s| format!("<target of: {s}>")).collect();
    let pool = concat_corpora(vec![ParallelCorpus::from_lines("pool", source, target)?])?;
    let test = TestSet::from_lines(vec!["a b c d"])?;

    // the default configuration halves an n-gram's value per selected
    // occurrence: three identical candidates score 2.0, 1.0, 0.5
    let selection = fda_select(&pool, &test, 4, &FdaConfig::default())?;
    println!("exponential decay (default d=0.5):");
    for entry in selection.entries() {
        println!("  #{} score {:.4}  {}", entry.rank(), entry.score(), entry.source());
    }

    // polynomial decay divides by (1 + count)^c instead
    let polynomial = FdaConfig::new(1.0, 1.0, 1.0, NgramConfig::new(1, 3)?)?;
    let selection = fda_select(&pool, &test, 4, &polynomial)?;
    println!("\npolynomial decay (d=1, c=1):");
    for entry in selection.entries() {
        println!("  #{} score {:.4}  {}", entry.rank(), entry.score(), entry.source());
    }

    // per-feature initial values reweight or mask individual n-grams;
    // here everything containing "c" starts at zero and stops counting
    let masked = fda_select_with_init(&pool, &test, 4, &FdaConfig::default(), |gram| {
        if gram.split(' ').any(|tok| tok == "c") {
            0.0
        } else {
            1.0
        }
    })?;
    println!("\nwith n-grams containing \"c\" masked out:");
    for entry in masked.entries() {
        println!("  #{} score {:.4}  {}", entry.rank(), entry.score(), entry.source());
    }
    Ok(())
}

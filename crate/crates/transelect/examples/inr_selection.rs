//! Greedy selection that values a candidate by how many still-infrequent
//! test n-grams it covers: each shared n-gram is worth the distance between
//! its occurrence count in the selected pool and the threshold, and the run
//! stops early once nothing valuable remains.
//!
//! ```bash
//! cargo run -p transelect --example inr_selection
//! ```

use transelect::corpus::{concat_corpora, ParallelCorpus, TestSet};
use transelect::features::NgramConfig;
use transelect::selection::{inr_select, inr_select_seeded, DecayState, InrConfig};

fn main() -> transelect::Result<()> {
    let source = vec![
        "the weather report",
        "the weather report",
        "a sunny weather forecast",
        "unrelated press release",
    ];
    let target: Vec<String> = source.iter().map(|s| format!("<target of: {s}>")).collect();
    let pool = concat_corpora(vec![ParallelCorpus::from_lines("news", source, target)?])?;
    let test = TestSet::from_lines(vec!["the weather report", "weather forecast"])?;
    let cfg = InrConfig::new(2, NgramConfig::new(1, 3)?)?;

    // requesting the whole pool shows the early stop: once every covered
    // test n-gram has reached the threshold, remaining scores are zero and
    // zeroes are never selected
    let selection = inr_select(&pool, &test, 4, &cfg)?;
    println!(
        "selected {} of 4 requested, exhausted early: {}",
        selection.len(),
        selection.exhausted_early()
    );
    for entry in selection.entries() {
        println!("  #{} score {:>4}  {}", entry.rank(), entry.score(), entry.source());
    }

    // a seeded run behaves as if the seed sentences had been selected
    // already: their n-gram counts are pre-paid and scores start decayed
    let seed = DecayState::from_sentences(["the weather report"], cfg.ngram());
    let seeded = inr_select_seeded(&pool, &test, 4, &cfg, &seed)?;
    println!(
        "\nwith one seed sentence: {} entries, exhausted early: {}",
        seeded.len(),
        seeded.exhausted_early()
    );
    for entry in seeded.entries() {
        println!("  #{} score {:>4}  {}", entry.rank(), entry.score(), entry.source());
    }
    Ok(())
}

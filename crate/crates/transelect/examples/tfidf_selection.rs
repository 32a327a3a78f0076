//! Retrieve the candidates most similar to a test set under TF-IDF
//! weighted cosine similarity — once with a single global ranking, once
//! with the per-test-sentence variant that keeps duplicates.
//!
//! ```bash
//! cargo run -p transelect --example tfidf_selection
//! ```

use transelect::corpus::{concat_corpora, ParallelCorpus, TestSet};
use transelect::features::NgramConfig;
use transelect::selection::{tfidf_select, tfidf_select_per_sentence};

fn main() -> transelect::Result<()> {
    let source = vec![
        "the weather report for tomorrow",
        "tomorrow will be sunny and warm",
        "parliament adjourned the session",
        "the weather tomorrow looks stormy",
        "stock prices fell sharply today",
    ];
    let target: Vec<String> = source.iter().map(|s| format!("<target of: {s}>")).collect();
    let pool = concat_corpora(vec![ParallelCorpus::from_lines("news", source, target)?])?;
    let test = TestSet::from_lines(vec!["what is the weather tomorrow"])?;
    let ngram = NgramConfig::new(1, 3)?;

    // each candidate is scored once: its best cosine similarity against any
    // test sentence; zero-similarity candidates still rank (at the bottom)
    let selection = tfidf_select(&pool, &test, 3, &ngram)?;
    println!("global ranking, top {}:", selection.len());
    for entry in selection.entries() {
        println!(
            "  #{} score {:.4}  {}",
            entry.rank(),
            entry.score(),
            entry.source()
        );
    }

    // the per-sentence variant splits the budget over test sentences and
    // may retrieve the same candidate for several of them
    let test = TestSet::from_lines(vec![
        "what is the weather tomorrow",
        "how did the stock market close",
    ])?;
    let selection = tfidf_select_per_sentence(&pool, &test, 4, &ngram)?;
    println!("\nper-test-sentence retrieval, {} entries:", selection.len());
    for entry in selection.entries() {
        println!(
            "  #{} score {:.4}  {}",
            entry.rank(),
            entry.score(),
            entry.source()
        );
    }
    Ok(())
}

//! Build parallel corpora in memory, concatenate them into one candidate
//! pool, and resolve lines in both directions: global index to provenance
//! and back.
//!
//! ```bash
//! cargo run -p transelect --example load_and_concat
//! ```

use transelect::corpus::{concat_corpora, ParallelCorpus};

fn main() -> transelect::Result<()> {
    let parliament = ParallelCorpus::from_lines(
        "parliament",
        vec!["the committee agrees", "we discussed the annual report"],
        vec!["der ausschuss stimmt zu", "wir haben den jahresbericht besprochen"],
    )?;
    let medical = ParallelCorpus::from_lines(
        "medical",
        vec!["take one tablet daily"],
        vec!["nehmen sie täglich eine tablette"],
    )?;

    // a pool concatenates corpora and addresses every sentence pair by one
    // global index, while remembering where each line came from
    let pool = concat_corpora(vec![parliament, medical])?;
    println!(
        "pool of {} candidates from {} corpora",
        pool.len(),
        pool.corpora().len()
    );
    for global_index in 0..pool.len() {
        let (corpus_id, line_no) = pool.locate(global_index);
        println!(
            "  [{global_index}] {corpus_id}:{line_no}  {} ||| {}",
            pool.candidate(global_index).raw(),
            pool.target_line(global_index)
        );
    }

    // provenance also resolves back to the global index
    let global_index = pool
        .global_index("medical", 0)
        .expect("the medical corpus has a line 0");
    println!("medical:0 sits at global index {global_index}");

    // misaligned corpora are rejected up front
    let lopsided = ParallelCorpus::from_lines("lopsided", vec!["one", "two"], vec!["uno"]);
    println!("misaligned corpus: {}", lopsided.unwrap_err());
    Ok(())
}

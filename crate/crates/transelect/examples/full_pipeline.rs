//! The whole workflow on files, end to end: write two parallel corpora and
//! a test set to disk, load and concatenate them, select with decaying
//! feature scores, write the selection next to its provenance, report its
//! composition, and subword-encode the selected data.
//!
//! ```bash
//! cargo run -p transelect --example full_pipeline
//! ```

use std::fs;
use std::path::Path;

use transelect::bpe::{learn_bpe, BpeApplier};
use transelect::corpus::{concat_corpora, load_parallel_corpus, load_test_set, write_selection};
use transelect::report::provenance_stats;
use transelect::selection::{fda_select, FdaConfig};

fn write(path: &Path, lines: &[&str]) -> std::io::Result<()> {
    fs::write(path, lines.join("\n") + "\n")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("transelect_full_pipeline");
    fs::create_dir_all(&dir)?;

    // a big general-domain corpus and a small in-domain one
    write(
        &dir.join("general.src"),
        &[
            "the committee agrees on the budget",
            "the weather report for the capital",
            "exports rose sharply last quarter",
            "the weather tomorrow will be cold",
        ],
    )?;
    write(
        &dir.join("general.tgt"),
        &[
            "der ausschuss billigt den haushalt",
            "der wetterbericht für die hauptstadt",
            "die exporte stiegen im letzten quartal stark",
            "das wetter morgen wird kalt",
        ],
    )?;
    write(
        &dir.join("domain.src"),
        &["weather forecast for tomorrow", "sunny weather expected"],
    )?;
    write(
        &dir.join("domain.tgt"),
        &["wettervorhersage für morgen", "sonniges wetter erwartet"],
    )?;
    write(&dir.join("test.src"), &["what is the weather forecast for tomorrow"])?;

    // load, concatenate, select
    let pool = concat_corpora(vec![
        load_parallel_corpus(&dir.join("general.src"), &dir.join("general.tgt"), "general")?,
        load_parallel_corpus(&dir.join("domain.src"), &dir.join("domain.tgt"), "domain")?,
    ])?;
    let test = load_test_set(&dir.join("test.src"))?;
    let selection = fda_select(&pool, &test, 4, &FdaConfig::default())?;
    println!(
        "selected {} of {} candidates (exhausted early: {})",
        selection.len(),
        pool.len(),
        selection.exhausted_early()
    );

    // the selection lands in rank order as .src/.tgt plus a .meta.tsv
    // recording score and provenance per line
    let prefix = dir.join("selected");
    write_selection(&selection, &prefix)?;
    println!("\n{}", fs::read_to_string(dir.join("selected.meta.tsv"))?);

    let report = provenance_stats(&selection)?;
    print!("{}", report.render_table());

    // subword-encode the selected source side for an NMT toolchain
    let selected_src = fs::read_to_string(dir.join("selected.src"))?;
    let table = learn_bpe(selected_src.split_whitespace(), 40);
    let mut applier = BpeApplier::new(&table);
    println!("\nsubword-encoded selection ({} merges):", table.len());
    for line in selected_src.lines() {
        println!("  {}", applier.apply_line(line));
    }

    fs::remove_dir_all(&dir).ok();
    Ok(())
}

//! Learn a byte-pair merge table from raw text, segment words into
//! subwords, restore the original text, and round-trip the table through
//! its file format.
//!
//! ```bash
//! cargo run -p transelect --example bpe_roundtrip
//! ```

use transelect::bpe::{learn_bpe, unapply_bpe, BpeApplier, MergeTable};

fn main() -> transelect::Result<()> {
    let corpus = [
        "the lowest temperature",
        "the lower house",
        "lower and lower still",
        "newest member states",
    ];

    // learning iterates: count adjacent symbol pairs across all words,
    // merge the most frequent pair, repeat
    let table = learn_bpe(corpus.iter().flat_map(|l| l.split_whitespace()), 12);
    println!("learned {} merges:", table.len());
    for (left, right) in table.merges() {
        println!("  {left} + {right}");
    }

    // applying replays those merges on any word, seen or unseen; subword
    // boundaries inside a word are marked with a trailing @@
    let mut applier = BpeApplier::new(&table);
    for word in ["lowest", "lowering", "newest", "the"] {
        println!("{word:>10} -> {}", applier.segment_word(word).join(" "));
    }

    let line = "the lowest temperature tomorrow";
    let segmented = applier.apply_line(line);
    println!("\nline:      {line}");
    println!("segmented: {segmented}");

    // joining the @@ runs restores the original tokens exactly
    let subwords: Vec<&str> = segmented.split_whitespace().collect();
    let restored = unapply_bpe(&subwords)?;
    println!("restored:  {}", restored.join(" "));
    assert_eq!(restored.join(" "), line);

    // the table serializes to a small text file and reads back identically
    let path = std::env::temp_dir().join("bpe_roundtrip_example.codec");
    table.write_to(&path)?;
    let reloaded = MergeTable::read_from(&path)?;
    assert_eq!(reloaded.merges(), table.merges());
    println!("\ncodec file round-tripped through {}", path.display());
    std::fs::remove_file(&path).ok();
    Ok(())
}

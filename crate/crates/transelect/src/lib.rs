//! Test-set driven selection of parallel corpus subsets for machine
//! translation fine-tuning.
//!
//! Instead of describing a target domain abstractly, the selectors here use
//! the test set itself as the query: rank the sentence pairs of one or more
//! parallel corpora by how useful they look for exactly that input, keep
//! the best slice, and fine-tune on it. Three rankers are provided — TF-IDF
//! cosine retrieval, infrequent n-gram recovery, and feature decay — plus
//! byte-pair subword preprocessing, provenance reporting, and a batch CLI
//! wrapping the lot.
//!
//! ## Start with the examples
//!
//! Each major capability has one runnable walk-through under `examples/`:
//!
//! - **`load_and_concat`** — parallel corpora, pools, provenance lookups
//! - **`tfidf_selection`** — similarity retrieval, global and per-sentence
//! - **`inr_selection`** — threshold-bounded coverage, seeding, early exhaustion
//! - **`fda_selection`** — decay configurations and per-feature init hooks
//! - **`bpe_roundtrip`** — learn, segment, restore, codec file format
//! - **`score_and_report`** — score dumps, composition tables, histograms
//! - **`full_pipeline`** — files in, selected and subword-encoded files out
//!
//! ```bash
//! cargo run -p transelect --example tfidf_selection
//! ```
//!
//! ## Module map
//!
//! - [`corpus`] — sentences, parallel corpora, candidate pools, selection files
//! - [`features`] — n-gram extraction, document frequencies, sparse vectors
//! - [`selection`] — the three selectors and their shared greedy engine
//! - [`bpe`] — byte-pair encoding: learn, apply, unapply, merge tables
//! - [`report`] — per-corpus composition and score histograms
//! - [`cli`] — the `transelect` binary's argument handling and subcommands
//!
//! ## A complete run in a dozen lines
//!
//! ```
//! use transelect::corpus::{concat_corpora, ParallelCorpus, TestSet};
//! use transelect::selection::{fda_select, FdaConfig};
//!
//! # fn main() -> transelect::Result<()> {
//! let corpus = ParallelCorpus::from_lines(
//!     "news",
//!     vec!["the weather tomorrow", "parliament adjourned"],
//!     vec!["das wetter morgen", "das parlament vertagte sich"],
//! )?;
//! let pool = concat_corpora(vec![corpus])?;
//! let test = TestSet::from_lines(vec!["what is the weather tomorrow"])?;
//! let selection = fda_select(&pool, &test, 1, &FdaConfig::default())?;
//! assert_eq!(selection.entries()[0].source(), "the weather tomorrow");
//! # Ok(())
//! # }
//! ```
//!
//! Determinism is a design guarantee throughout: given the same inputs and
//! configuration, every selector, the learner, and the CLI produce
//! byte-identical output at any thread count.

pub mod bpe;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod features;
pub mod report;
pub mod selection;

pub use error::{Error, Result};

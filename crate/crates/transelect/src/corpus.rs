//! Parallel corpus ingestion, candidate pools, and selection output.
//!
//! Text is plain UTF-8, one sentence per line. Lines are kept byte-exact
//! except for a stripped trailing `\r`; tokenization is whitespace splitting
//! only, so upstream tokenizers decide what a token is.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::SplitWhitespace;

use crate::error::{Error, Result};
use crate::selection::Selection;

/// A single line of text with its 0-based position in the originating file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    raw: Box<str>,
    line_no: usize,
}

impl Sentence {
    pub fn new(raw: impl Into<Box<str>>, line_no: usize) -> Self {
        Sentence {
            raw: raw.into(),
            line_no,
        }
    }

    /// The original line, without its terminator.
    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn line_no(&self) -> usize {
        self.line_no
    }

    /// Tokens, obtained by splitting on runs of whitespace.
    pub fn tokens(&self) -> SplitWhitespace<'_> {
        self.raw.split_whitespace()
    }

    pub fn token_count(&self) -> usize {
        self.tokens().count()
    }
}

/// An aligned source/target corpus with a stable identifier.
#[derive(Debug, Clone)]
pub struct ParallelCorpus {
    id: String,
    source: Vec<Sentence>,
    target: Vec<Box<str>>,
}

impl ParallelCorpus {
    /// Build a corpus from in-memory lines. Source and target must have the
    /// same number of lines and the id must be non-empty.
    pub fn from_lines<S, T>(corpus_id: &str, source: Vec<S>, target: Vec<T>) -> Result<Self>
    where
        S: Into<Box<str>>,
        T: Into<Box<str>>,
    {
        if corpus_id.is_empty() {
            return Err(Error::Config("corpus id must be non-empty".into()));
        }
        if source.len() != target.len() {
            return Err(Error::AlignmentMismatch {
                corpus_id: corpus_id.to_string(),
                source_lines: source.len(),
                target_lines: target.len(),
            });
        }
        Ok(ParallelCorpus {
            id: corpus_id.to_string(),
            source: source
                .into_iter()
                .enumerate()
                .map(|(i, raw)| Sentence::new(raw, i))
                .collect(),
            target: target.into_iter().map(Into::into).collect(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    pub fn source(&self) -> &[Sentence] {
        &self.source
    }

    pub fn target_line(&self, line_no: usize) -> &str {
        &self.target[line_no]
    }
}

/// The source side of the text the selection is being made for.
#[derive(Debug, Clone)]
pub struct TestSet {
    sentences: Vec<Sentence>,
}

impl TestSet {
    /// Build a test set from in-memory lines; must be non-empty.
    pub fn from_lines<S: Into<Box<str>>>(lines: Vec<S>) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::Precondition("test set is empty".into()));
        }
        Ok(TestSet {
            sentences: lines
                .into_iter()
                .enumerate()
                .map(|(i, raw)| Sentence::new(raw, i))
                .collect(),
        })
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Concatenated candidate corpora with a global line order.
///
/// Global candidate indexes are assigned in corpus order then line order, so
/// index `g` maps to exactly one `(corpus_id, line_no)` pair and back.
#[derive(Debug, Clone)]
pub struct CandidatePool {
    corpora: Vec<ParallelCorpus>,
    /// `offsets[i]` is the global index of corpus `i`'s first line;
    /// `offsets[corpora.len()]` is the pool size.
    offsets: Vec<usize>,
}

impl CandidatePool {
    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn corpora(&self) -> &[ParallelCorpus] {
        &self.corpora
    }

    /// Source sentence at a global index.
    pub fn candidate(&self, global_index: usize) -> &Sentence {
        let (c, line) = self.split_index(global_index);
        &self.corpora[c].source()[line]
    }

    /// Target line aligned with `candidate(global_index)`.
    pub fn target_line(&self, global_index: usize) -> &str {
        let (c, line) = self.split_index(global_index);
        self.corpora[c].target_line(line)
    }

    /// Resolve a global index to `(corpus_id, line_no)`.
    pub fn locate(&self, global_index: usize) -> (&str, usize) {
        let (c, line) = self.split_index(global_index);
        (self.corpora[c].id(), line)
    }

    /// Inverse of [`locate`](Self::locate).
    pub fn global_index(&self, corpus_id: &str, line_no: usize) -> Option<usize> {
        let c = self.corpora.iter().position(|cp| cp.id() == corpus_id)?;
        (line_no < self.corpora[c].len()).then(|| self.offsets[c] + line_no)
    }

    /// All source sentences in global order.
    pub fn candidates(&self) -> impl Iterator<Item = &Sentence> {
        self.corpora.iter().flat_map(|c| c.source().iter())
    }

    fn split_index(&self, global_index: usize) -> (usize, usize) {
        assert!(global_index < self.len(), "global index out of range");
        // offsets is sorted; find the corpus whose range contains the index
        let c = self.offsets.partition_point(|&o| o <= global_index) - 1;
        (c, global_index - self.offsets[c])
    }
}

/// Concatenate corpora into a candidate pool, preserving provenance.
///
/// Corpus ids must be pairwise distinct.
pub fn concat_corpora(corpora: Vec<ParallelCorpus>) -> Result<CandidatePool> {
    for (i, c) in corpora.iter().enumerate() {
        if corpora[..i].iter().any(|other| other.id() == c.id()) {
            return Err(Error::Config(format!("duplicate corpus id `{}`", c.id())));
        }
    }
    let mut offsets = Vec::with_capacity(corpora.len() + 1);
    let mut total = 0usize;
    for c in &corpora {
        offsets.push(total);
        total += c.len();
    }
    offsets.push(total);
    Ok(CandidatePool { corpora, offsets })
}

/// Read a file as UTF-8 lines. `\n` terminators are removed, as is one
/// trailing `\r` per line; a trailing newline on the final line is optional.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut lines = Vec::new();
    for (i, chunk) in bytes.split(|&b| b == b'\n').enumerate() {
        let chunk = chunk.strip_suffix(b"\r").unwrap_or(chunk);
        let line = std::str::from_utf8(chunk).map_err(|_| Error::Encoding {
            path: path.to_path_buf(),
            line: i + 1,
        })?;
        lines.push(line.to_string());
    }
    // a trailing newline produces one empty final chunk; drop it
    if lines.last().is_some_and(|l| l.is_empty()) && bytes.last() == Some(&b'\n') {
        lines.pop();
    }
    Ok(lines)
}

/// Load an aligned parallel corpus from a source file and a target file.
pub fn load_parallel_corpus(
    source_path: &Path,
    target_path: &Path,
    corpus_id: &str,
) -> Result<ParallelCorpus> {
    let source = read_lines(source_path)?;
    let target = read_lines(target_path)?;
    ParallelCorpus::from_lines(corpus_id, source, target)
}

/// Load a test set (source language only, one sentence per line).
pub fn load_test_set(path: &Path) -> Result<TestSet> {
    TestSet::from_lines(read_lines(path)?)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut os = prefix.as_os_str().to_owned();
    os.push(suffix);
    PathBuf::from(os)
}

/// Header row of the `.meta.tsv` file written next to a selection.
pub(crate) const META_HEADER: &str = "rank\tscore\tcorpus_id\tline_no";

/// Write a selection as `<prefix>.src`, `<prefix>.tgt`, and `<prefix>.meta.tsv`.
///
/// The text files carry the selected pairs in rank order, one per line. The
/// meta file has a header row followed by `rank\tscore\tcorpus_id\tline_no`
/// per entry, scores rendered with 6 decimal places.
pub fn write_selection(selection: &Selection, out_prefix: &Path) -> Result<()> {
    if selection.entries().is_empty() {
        return Err(Error::Precondition("selection is empty".into()));
    }
    let src_path = with_suffix(out_prefix, ".src");
    let tgt_path = with_suffix(out_prefix, ".tgt");
    let meta_path = with_suffix(out_prefix, ".meta.tsv");

    let mut src = String::new();
    let mut tgt = String::new();
    let mut meta = format!("{META_HEADER}\n");
    for entry in selection.entries() {
        src.push_str(entry.source());
        src.push('\n');
        tgt.push_str(entry.target());
        tgt.push('\n');
        meta.push_str(&format!(
            "{}\t{:.6}\t{}\t{}\n",
            entry.rank(),
            entry.score(),
            entry.corpus_id(),
            entry.line_no()
        ));
    }

    write_file(&src_path, src.as_bytes())?;
    write_file(&tgt_path, tgt.as_bytes())?;
    write_file(&meta_path, meta.as_bytes())?;
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(bytes).map_err(|e| Error::io(path, e))?;
    Ok(())
}

//! The three selectors: TF-IDF similarity ranking, infrequent n-gram
//! coverage, and feature decay. All three consume a [`CandidatePool`] and a
//! [`TestSet`] and produce a ranked [`Selection`] with per-entry provenance.
//!
//! TF-IDF scores each candidate once (no feedback); the other two are
//! iterative greedy methods that damp an n-gram's value as copies of it
//! accumulate in the selected pool, driving the selection toward n-gram
//! variety. Outputs are deterministic for a given input and configuration,
//! at any thread count.

mod engine;
mod tfidf;

use std::collections::HashMap;
use std::sync::Arc;

use crate::corpus::{CandidatePool, TestSet};
use crate::error::{Error, Result};
use crate::features::NgramConfig;

use engine::{run_greedy, FdaScorer, FeatureMatrix, InrScorer};

/// Which selector produced a [`Selection`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMethod {
    Tfidf,
    Inr,
    Fda,
}

impl std::fmt::Display for SelectionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SelectionMethod::Tfidf => "tfidf",
            SelectionMethod::Inr => "inr",
            SelectionMethod::Fda => "fda",
        })
    }
}

/// How selecting a sentence updates the selected-pool count of the n-grams
/// it contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountMode {
    /// Add the n-gram's occurrence count within the selected sentence.
    #[default]
    Occurrences,
    /// Add 1 per selected sentence containing the n-gram.
    PerSentence,
}

/// Configuration for infrequent n-gram coverage selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InrConfig {
    t: u32,
    ngram: NgramConfig,
    count_mode: CountMode,
}

impl InrConfig {
    /// `t` is the occurrence threshold below which a test n-gram still
    /// carries value; must be at least 1.
    pub fn new(t: u32, ngram: NgramConfig) -> Result<Self> {
        if t < 1 {
            return Err(Error::Config("threshold must be at least 1".into()));
        }
        Ok(InrConfig {
            t,
            ngram,
            count_mode: CountMode::default(),
        })
    }

    pub fn with_count_mode(mut self, mode: CountMode) -> Self {
        self.count_mode = mode;
        self
    }

    pub fn threshold(&self) -> u32 {
        self.t
    }

    pub fn ngram(&self) -> &NgramConfig {
        &self.ngram
    }

    pub fn count_mode(&self) -> CountMode {
        self.count_mode
    }
}

/// Configuration for feature decay selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdaConfig {
    d: f64,
    c: f64,
    init: f64,
    ngram: NgramConfig,
    count_mode: CountMode,
}

impl FdaConfig {
    /// `d` is the exponential decay base in `(0, 1]`, `c` the polynomial
    /// decay exponent (`>= 0`), `init` the uniform initial feature value
    /// (`> 0`).
    pub fn new(d: f64, c: f64, init: f64, ngram: NgramConfig) -> Result<Self> {
        if !(d > 0.0 && d <= 1.0) {
            return Err(Error::Config(format!(
                "decay base must be in (0, 1], got {d}"
            )));
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::Config(format!(
                "decay exponent must be finite and non-negative, got {c}"
            )));
        }
        if !(init > 0.0 && init.is_finite()) {
            return Err(Error::Config(format!(
                "initial feature value must be finite and positive, got {init}"
            )));
        }
        Ok(FdaConfig {
            d,
            c,
            init,
            ngram,
            count_mode: CountMode::default(),
        })
    }

    pub fn with_count_mode(mut self, mode: CountMode) -> Self {
        self.count_mode = mode;
        self
    }

    pub fn decay_base(&self) -> f64 {
        self.d
    }

    pub fn decay_exponent(&self) -> f64 {
        self.c
    }

    pub fn init_value(&self) -> f64 {
        self.init
    }

    pub fn ngram(&self) -> &NgramConfig {
        &self.ngram
    }

    pub fn count_mode(&self) -> CountMode {
        self.count_mode
    }
}

impl Default for FdaConfig {
    /// Exponential halving (`d = 0.5`), no polynomial decay (`c = 0`),
    /// uniform unit initial values, n-gram orders 1–3.
    fn default() -> Self {
        FdaConfig {
            d: 0.5,
            c: 0.0,
            init: 1.0,
            ngram: NgramConfig::default(),
            count_mode: CountMode::default(),
        }
    }
}

/// Full parameter record of the selector that produced a [`Selection`].
#[derive(Debug, Clone, PartialEq)]
pub enum SelectorConfig {
    Tfidf {
        ngram: NgramConfig,
        per_sentence: bool,
    },
    Inr(InrConfig),
    Fda(FdaConfig),
}

impl SelectorConfig {
    pub fn method(&self) -> SelectionMethod {
        match self {
            SelectorConfig::Tfidf { .. } => SelectionMethod::Tfidf,
            SelectorConfig::Inr(_) => SelectionMethod::Inr,
            SelectorConfig::Fda(_) => SelectionMethod::Fda,
        }
    }
}

/// Selected-pool n-gram counts, keyed by the n-gram string.
///
/// During a greedy run these counts drive score decay; a pre-populated state
/// can be passed to [`inr_select_seeded`] to act as if its sentences had
/// already been selected.
#[derive(Debug, Clone, Default)]
pub struct DecayState {
    counts: HashMap<String, u32>,
}

impl DecayState {
    pub fn new() -> Self {
        DecayState::default()
    }

    /// Count every n-gram occurrence in the given sentences.
    pub fn from_sentences<'a>(
        lines: impl IntoIterator<Item = &'a str>,
        ngram: &NgramConfig,
    ) -> Self {
        let mut counts: HashMap<String, u32> = HashMap::new();
        for line in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            crate::features::for_each_ngram(&tokens, ngram, |gram| {
                match counts.get_mut(gram) {
                    Some(c) => *c = c.saturating_add(1),
                    None => {
                        counts.insert(gram.to_string(), 1);
                    }
                }
            });
        }
        DecayState { counts }
    }

    pub fn count(&self, gram: &str) -> u32 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    /// Add occurrences of one n-gram.
    pub fn add(&mut self, gram: impl Into<String>, occurrences: u32) {
        let slot = self.counts.entry(gram.into()).or_insert(0);
        *slot = slot.saturating_add(occurrences);
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    fn to_feature_counts(&self, matrix: &FeatureMatrix) -> Vec<u32> {
        let mut counts = vec![0u32; matrix.feature_count()];
        for (gram, &c) in &self.counts {
            if let Some(fid) = matrix.feature_id(gram) {
                counts[fid as usize] = c;
            }
        }
        counts
    }
}

/// One selected sentence pair with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionEntry {
    rank: usize,
    global_index: usize,
    score: f64,
    corpus_id: Arc<str>,
    line_no: usize,
    source: Box<str>,
    target: Box<str>,
}

impl SelectionEntry {
    /// 0-based position in the ranked selection.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Position of the sentence in the concatenated candidate pool.
    pub fn global_index(&self) -> usize {
        self.global_index
    }

    /// Score at the moment the sentence was selected.
    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn corpus_id(&self) -> &str {
        &self.corpus_id
    }

    /// 0-based line number within the originating corpus.
    pub fn line_no(&self) -> usize {
        self.line_no
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn target(&self) -> &str {
        &self.target
    }
}

/// A ranked selection of sentence pairs, with the configuration that
/// produced it.
#[derive(Debug, Clone)]
pub struct Selection {
    entries: Vec<SelectionEntry>,
    config: SelectorConfig,
    requested: usize,
    exhausted_early: bool,
}

impl Selection {
    pub fn entries(&self) -> &[SelectionEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn method(&self) -> SelectionMethod {
        self.config.method()
    }

    pub fn config(&self) -> &SelectorConfig {
        &self.config
    }

    /// The selection size that was asked for.
    pub fn requested(&self) -> usize {
        self.requested
    }

    /// True when the selection stopped short of the requested size — either
    /// the pool was too small or (for the iterative methods) no candidate
    /// with a positive score remained.
    pub fn exhausted_early(&self) -> bool {
        self.exhausted_early
    }

    #[cfg(test)]
    pub(crate) fn for_tests(rows: Vec<(usize, f64, &str, usize, &str, &str)>) -> Selection {
        let requested = rows.len();
        let entries = rows
            .into_iter()
            .enumerate()
            .map(
                |(rank, (global_index, score, corpus_id, line_no, source, target))| {
                    SelectionEntry {
                        rank,
                        global_index,
                        score,
                        corpus_id: Arc::from(corpus_id),
                        line_no,
                        source: source.into(),
                        target: target.into(),
                    }
                },
            )
            .collect();
        Selection {
            entries,
            config: SelectorConfig::Tfidf {
                ngram: NgramConfig::default(),
                per_sentence: false,
            },
            requested,
            exhausted_early: false,
        }
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::Config("selection size must be at least 1".into()));
    }
    Ok(())
}

fn assemble(
    pool: &CandidatePool,
    picks: Vec<(usize, f64)>,
    config: SelectorConfig,
    requested: usize,
    exhausted_early: bool,
) -> Selection {
    let mut ids: HashMap<&str, Arc<str>> = HashMap::new();
    let entries = picks
        .into_iter()
        .enumerate()
        .map(|(rank, (global_index, score))| {
            let (corpus_id, line_no) = pool.locate(global_index);
            let corpus_id = ids
                .entry(corpus_id)
                .or_insert_with(|| Arc::from(corpus_id))
                .clone();
            SelectionEntry {
                rank,
                global_index,
                score,
                corpus_id,
                line_no,
                source: pool.candidate(global_index).raw().into(),
                target: pool.target_line(global_index).into(),
            }
        })
        .collect();
    Selection {
        entries,
        config,
        requested,
        exhausted_early,
    }
}

/// Select the `n` candidates most similar to the test set.
///
/// Each candidate is scored once as its maximum TF-IDF cosine similarity to
/// any test sentence; the top `n` by score are returned (ties → smaller
/// index). If the pool holds fewer than `n` sentences, all of them are
/// returned.
pub fn tfidf_select(
    pool: &CandidatePool,
    test: &TestSet,
    n: usize,
    ngram: &NgramConfig,
) -> Result<Selection> {
    check_size(n)?;
    let scores = tfidf::score_all(pool, test, ngram)?;
    let picks = tfidf::top_n(&scores, n);
    let exhausted_early = picks.len() < n;
    Ok(assemble(
        pool,
        picks,
        SelectorConfig::Tfidf {
            ngram: *ngram,
            per_sentence: false,
        },
        n,
        exhausted_early,
    ))
}

/// TF-IDF selection that retrieves the best candidates for each test
/// sentence separately.
///
/// Takes the top `ceil(n / |test|)` candidates per test sentence (ranked by
/// similarity to that sentence alone), concatenates the per-sentence lists
/// in test order, and truncates to `n`. Unlike [`tfidf_select`], the same
/// candidate may appear multiple times — once per test sentence that
/// retrieves it — which some fine-tuning setups prefer.
pub fn tfidf_select_per_sentence(
    pool: &CandidatePool,
    test: &TestSet,
    n: usize,
    ngram: &NgramConfig,
) -> Result<Selection> {
    check_size(n)?;
    let picks = tfidf::select_per_sentence(pool, test, n, ngram)?;
    let exhausted_early = picks.len() < n;
    Ok(assemble(
        pool,
        picks,
        SelectorConfig::Tfidf {
            ngram: *ngram,
            per_sentence: true,
        },
        n,
        exhausted_early,
    ))
}

/// Greedily select up to `n` candidates that cover infrequent test n-grams.
///
/// A candidate's score is the sum, over the distinct test n-grams it shares
/// with the test set, of how far each n-gram still is from the threshold:
/// `max(0, t - count)` where `count` is the n-gram's accumulated occurrence
/// count in the already-selected sentences. Selection stops early once no
/// candidate scores above zero.
pub fn inr_select(
    pool: &CandidatePool,
    test: &TestSet,
    n: usize,
    cfg: &InrConfig,
) -> Result<Selection> {
    inr_select_seeded(pool, test, n, cfg, &DecayState::new())
}

/// [`inr_select`] with pre-seeded n-gram counts, as if the sentences behind
/// `seed` had already been selected.
pub fn inr_select_seeded(
    pool: &CandidatePool,
    test: &TestSet,
    n: usize,
    cfg: &InrConfig,
    seed: &DecayState,
) -> Result<Selection> {
    check_size(n)?;
    let matrix = FeatureMatrix::build(pool, test, &cfg.ngram);
    let scorer = InrScorer { t: cfg.t };
    let outcome = run_greedy(
        &matrix,
        &scorer,
        seed.to_feature_counts(&matrix),
        n,
        cfg.count_mode,
    )?;
    Ok(assemble(
        pool,
        outcome.picks,
        SelectorConfig::Inr(*cfg),
        n,
        outcome.exhausted_early,
    ))
}

/// Greedily select up to `n` candidates by decaying feature value.
///
/// A candidate's score is the sum over its distinct test n-grams of
/// `init * d^count / (1 + count)^c`, divided by the candidate's token count;
/// `count` is the n-gram's accumulated occurrence count in the
/// already-selected sentences. Selection stops early once no candidate
/// scores above zero.
pub fn fda_select(pool: &CandidatePool, test: &TestSet, n: usize, cfg: &FdaConfig) -> Result<Selection> {
    fda_select_impl(pool, test, n, cfg, None)
}

/// [`fda_select`] with per-feature initial values.
///
/// `init` is consulted once per distinct test n-gram and replaces the
/// uniform initial value from the configuration. Values must be finite and
/// non-negative; a zero masks the feature out entirely.
pub fn fda_select_with_init(
    pool: &CandidatePool,
    test: &TestSet,
    n: usize,
    cfg: &FdaConfig,
    init: impl Fn(&str) -> f64,
) -> Result<Selection> {
    fda_select_impl(pool, test, n, cfg, Some(&init))
}

fn fda_init_values(
    cfg: &FdaConfig,
    matrix: &FeatureMatrix,
    init: Option<&dyn Fn(&str) -> f64>,
) -> Result<Vec<f64>> {
    match init {
        None => Ok(vec![cfg.init; matrix.feature_count()]),
        Some(f) => matrix
            .feature_names()
            .iter()
            .map(|name| {
                let v = f(name);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Config(format!(
                        "initial value for feature `{name}` must be finite and non-negative, got {v}"
                    )));
                }
                Ok(v)
            })
            .collect(),
    }
}

fn fda_select_impl(
    pool: &CandidatePool,
    test: &TestSet,
    n: usize,
    cfg: &FdaConfig,
    init: Option<&dyn Fn(&str) -> f64>,
) -> Result<Selection> {
    check_size(n)?;
    let matrix = FeatureMatrix::build(pool, test, &cfg.ngram);
    let scorer = FdaScorer {
        d: cfg.d,
        c: cfg.c,
        init: fda_init_values(cfg, &matrix, init)?,
    };
    let outcome = run_greedy(
        &matrix,
        &scorer,
        vec![0; matrix.feature_count()],
        n,
        cfg.count_mode,
    )?;
    Ok(assemble(
        pool,
        outcome.picks,
        SelectorConfig::Fda(*cfg),
        n,
        outcome.exhausted_early,
    ))
}

/// Every candidate's initial score — the score it would carry in the first
/// selection round — without performing any selection.
pub fn score_dump(pool: &CandidatePool, test: &TestSet, cfg: &SelectorConfig) -> Result<Vec<f64>> {
    use engine::DecayScorer;
    match cfg {
        SelectorConfig::Tfidf { ngram, .. } => tfidf::score_all(pool, test, ngram),
        SelectorConfig::Inr(c) => {
            let matrix = FeatureMatrix::build(pool, test, &c.ngram);
            let scorer = InrScorer { t: c.t };
            let counts = vec![0u32; matrix.feature_count()];
            Ok((0..matrix.candidate_count())
                .map(|i| scorer.score(matrix.row(i), matrix.token_count(i), &counts))
                .collect())
        }
        SelectorConfig::Fda(c) => {
            let matrix = FeatureMatrix::build(pool, test, &c.ngram);
            let scorer = FdaScorer {
                d: c.d,
                c: c.c,
                init: vec![c.init; matrix.feature_count()],
            };
            let counts = vec![0u32; matrix.feature_count()];
            Ok((0..matrix.candidate_count())
                .map(|i| scorer.score(matrix.row(i), matrix.token_count(i), &counts))
                .collect())
        }
    }
}

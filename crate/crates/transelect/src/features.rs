//! N-gram feature extraction, TF-IDF weighting, and the test-feature index.
//!
//! Terms are token n-grams rendered as the tokens joined by single spaces.
//! Weights follow `w_k = tf_k * ln(idf_k)` with `idf_k = N / df_k`, each
//! candidate sentence counting as one document. All summations over sparse
//! vectors run in lexicographic term order so that scores are reproducible
//! bit-for-bit across runs and thread counts.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet};

use crate::corpus::{CandidatePool, TestSet};
use crate::error::{Error, Result};

/// Range of n-gram orders used as features.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NgramConfig {
    min_order: usize,
    max_order: usize,
}

impl NgramConfig {
    pub fn new(min_order: usize, max_order: usize) -> Result<Self> {
        if min_order < 1 {
            return Err(Error::Config("minimum n-gram order must be >= 1".into()));
        }
        if max_order < min_order {
            return Err(Error::Config(format!(
                "maximum n-gram order {max_order} is below minimum {min_order}"
            )));
        }
        Ok(NgramConfig {
            min_order,
            max_order,
        })
    }

    pub fn min_order(&self) -> usize {
        self.min_order
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }
}

impl Default for NgramConfig {
    /// Orders 1 through 3.
    fn default() -> Self {
        NgramConfig {
            min_order: 1,
            max_order: 3,
        }
    }
}

/// Call `f` with every n-gram of `tokens` in the configured order range,
/// with multiplicity. Reuses one scratch buffer; unigrams are passed through
/// without copying.
pub(crate) fn for_each_ngram<F: FnMut(&str)>(tokens: &[&str], cfg: &NgramConfig, mut f: F) {
    let mut buf = String::new();
    for order in cfg.min_order..=cfg.max_order {
        if order > tokens.len() {
            break;
        }
        if order == 1 {
            for tok in tokens {
                f(tok);
            }
            continue;
        }
        for window in tokens.windows(order) {
            buf.clear();
            for (i, tok) in window.iter().enumerate() {
                if i > 0 {
                    buf.push(' ');
                }
                buf.push_str(tok);
            }
            f(&buf);
        }
    }
}

/// All contiguous n-grams of `tokens` with order in the configured range,
/// with multiplicity.
pub fn extract_ngrams(tokens: &[&str], cfg: &NgramConfig) -> Vec<String> {
    let mut out = Vec::new();
    for_each_ngram(tokens, cfg, |gram| out.push(gram.to_string()));
    out
}

/// Document-frequency statistics over a candidate pool.
///
/// Each candidate sentence is one document; test sentences never contribute.
#[derive(Debug, Clone)]
pub struct IdfTable {
    doc_count: usize,
    df: HashMap<String, u32>,
}

impl IdfTable {
    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    /// Number of distinct terms observed in the pool.
    pub fn vocabulary_size(&self) -> usize {
        self.df.len()
    }

    /// Document frequency of a term, if it occurs in the pool.
    pub fn df(&self, term: &str) -> Option<u32> {
        self.df.get(term).copied()
    }

    /// Inverse document frequency `N / df`. Terms absent from the pool are
    /// treated as maximally informative (`df = 1`).
    pub fn idf(&self, term: &str) -> f64 {
        let df = self.df.get(term).copied().unwrap_or(1).max(1);
        self.doc_count as f64 / df as f64
    }
}

/// Count document frequencies of every n-gram in the pool.
pub fn compute_idf(pool: &CandidatePool, cfg: &NgramConfig) -> Result<IdfTable> {
    if pool.is_empty() {
        return Err(Error::Precondition(
            "cannot compute document frequencies over an empty pool".into(),
        ));
    }
    let mut df: HashMap<String, u32> = HashMap::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut tokens: Vec<&str> = Vec::new();
    for sentence in pool.candidates() {
        tokens.clear();
        tokens.extend(sentence.tokens());
        seen.clear();
        for_each_ngram(&tokens, cfg, |gram| {
            if !seen.contains(gram) {
                seen.insert(gram.to_string());
                *df.entry(gram.to_string()).or_insert(0) += 1;
            }
        });
    }
    Ok(IdfTable {
        doc_count: pool.len(),
        df,
    })
}

/// A sparse TF-IDF vector with its Euclidean norm cached.
///
/// Entries are kept in lexicographic term order; zero weights are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    entries: BTreeMap<String, f64>,
    norm: f64,
}

impl SparseVector {
    /// Build from raw term weights. Zero weights are dropped; the norm is
    /// accumulated in lexicographic term order.
    pub fn from_weights(weights: impl IntoIterator<Item = (String, f64)>) -> Self {
        let entries: BTreeMap<String, f64> =
            weights.into_iter().filter(|(_, w)| *w != 0.0).collect();
        let mut sq = 0.0f64;
        for w in entries.values() {
            sq += w * w;
        }
        SparseVector {
            entries,
            norm: sq.sqrt(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(t, &w)| (t.as_str(), w))
    }

    pub fn get(&self, term: &str) -> Option<f64> {
        self.entries.get(term).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }
}

/// TF-IDF vector of a token sequence under the given statistics.
pub fn tfidf_vector(tokens: &[&str], idf: &IdfTable, cfg: &NgramConfig) -> SparseVector {
    let mut tf: BTreeMap<String, u32> = BTreeMap::new();
    for_each_ngram(tokens, cfg, |gram| match tf.entry(gram.to_string()) {
        Entry::Occupied(mut e) => *e.get_mut() += 1,
        Entry::Vacant(e) => {
            e.insert(1);
        }
    });
    SparseVector::from_weights(
        tf.into_iter()
            .map(|(term, count)| {
                let w = count as f64 * idf.idf(&term).ln();
                (term, w)
            })
            .collect::<Vec<_>>(),
    )
}

/// Cosine similarity `u·v / (|u||v|)`, in `[0, 1]` for non-negative weights.
/// Returns 0 when either norm is zero.
pub fn cosine_sim(u: &SparseVector, v: &SparseVector) -> f64 {
    if u.norm == 0.0 || v.norm == 0.0 {
        return 0.0;
    }
    // merge-walk both sorted entry lists; the dot product accumulates in
    // lexicographic term order regardless of argument order
    let mut dot = 0.0f64;
    let mut iu = u.entries.iter();
    let mut iv = v.entries.iter();
    let mut cu = iu.next();
    let mut cv = iv.next();
    while let (Some((tu, wu)), Some((tv, wv))) = (cu, cv) {
        match tu.cmp(tv) {
            std::cmp::Ordering::Less => cu = iu.next(),
            std::cmp::Ordering::Greater => cv = iv.next(),
            std::cmp::Ordering::Equal => {
                dot += wu * wv;
                cu = iu.next();
                cv = iv.next();
            }
        }
    }
    dot / (u.norm * v.norm)
}

/// Inverted index from test-set n-grams to the candidates containing them.
#[derive(Debug, Clone)]
pub struct FeatureIndex {
    postings: HashMap<String, Vec<usize>>,
    test_feature_count: usize,
}

impl FeatureIndex {
    /// Candidates containing the given test n-gram, in increasing global
    /// index order. `None` when the n-gram occurs in no candidate (or is not
    /// a test n-gram at all).
    pub fn postings(&self, gram: &str) -> Option<&[usize]> {
        self.postings.get(gram).map(|v| v.as_slice())
    }

    /// Number of distinct n-grams in the test set, whether or not any
    /// candidate contains them.
    pub fn test_feature_count(&self) -> usize {
        self.test_feature_count
    }

    /// Number of test n-grams that occur in at least one candidate.
    pub fn matched_feature_count(&self) -> usize {
        self.postings.len()
    }
}

/// Build the inverted index of test-set n-grams over a candidate pool.
pub fn build_feature_index(pool: &CandidatePool, test: &TestSet, cfg: &NgramConfig) -> FeatureIndex {
    let mut test_grams: HashSet<String> = HashSet::new();
    let mut tokens: Vec<&str> = Vec::new();
    for sentence in test.sentences() {
        tokens.clear();
        tokens.extend(sentence.tokens());
        for_each_ngram(&tokens, cfg, |gram| {
            if !test_grams.contains(gram) {
                test_grams.insert(gram.to_string());
            }
        });
    }
    let test_feature_count = test_grams.len();

    let mut postings: HashMap<String, Vec<usize>> = HashMap::new();
    for (idx, sentence) in pool.candidates().enumerate() {
        tokens.clear();
        tokens.extend(sentence.tokens());
        for_each_ngram(&tokens, cfg, |gram| {
            if let Some(gram_owned) = test_grams.get(gram) {
                let list = postings.entry(gram_owned.clone()).or_default();
                if list.last() != Some(&idx) {
                    list.push(idx);
                }
            }
        });
    }
    FeatureIndex {
        postings,
        test_feature_count,
    }
}

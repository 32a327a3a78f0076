//! Shared helpers for the integration suites: random data generators and
//! deliberately naive reference implementations of every algorithm in the
//! crate. The references re-derive everything from scratch each round, with
//! no incremental state, no heaps, and no shared code with the engine
//! beyond the input types — disagreement between the two is a bug by
//! definition.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use transelect::corpus::{concat_corpora, CandidatePool, ParallelCorpus, TestSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Random corpus generation
// ---------------------------------------------------------------------------

/// A random sentence of `min_len..=max_len` words drawn uniformly from a
/// `vocab`-word vocabulary.
pub fn random_sentence(
    rng: &mut ChaCha8Rng,
    vocab: usize,
    min_len: usize,
    max_len: usize,
) -> String {
    let len = rng.random_range(min_len..=max_len);
    (0..len)
        .map(|_| format!("w{}", rng.random_range(0..vocab)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn random_lines(
    rng: &mut ChaCha8Rng,
    count: usize,
    vocab: usize,
    min_len: usize,
    max_len: usize,
) -> Vec<String> {
    (0..count)
        .map(|_| random_sentence(rng, vocab, min_len, max_len))
        .collect()
}

/// Random single-space-separated lines free of the reserved subword
/// markers, over a small alphabet that includes multi-byte characters.
pub fn random_text_lines(rng: &mut ChaCha8Rng, count: usize) -> Vec<String> {
    const ALPHABET: [char; 11] = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'é', 'ø', 'ß'];
    (0..count)
        .map(|_| {
            let words = rng.random_range(1..=12);
            (0..words)
                .map(|_| {
                    let len = rng.random_range(1..=8);
                    (0..len)
                        .map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())])
                        .collect::<String>()
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

/// A single-corpus candidate pool over the given source lines, with
/// placeholder target lines.
pub fn pool_from_lines(lines: &[String]) -> CandidatePool {
    let targets: Vec<String> = lines.iter().map(|l| format!("t {l}")).collect();
    let corpus = ParallelCorpus::from_lines("pool", lines.to_vec(), targets).unwrap();
    concat_corpora(vec![corpus]).unwrap()
}

pub fn test_from_lines(lines: &[String]) -> TestSet {
    TestSet::from_lines(lines.to_vec()).unwrap()
}

pub fn write_lines(path: &Path, lines: &[String]) {
    let mut text = lines.join("\n");
    text.push('\n');
    std::fs::write(path, text).unwrap();
}

/// Path to the compiled command-line binary.
pub fn cli_bin() -> std::process::Command {
    std::process::Command::new(env!("CARGO_BIN_EXE_transelect"))
}

// ---------------------------------------------------------------------------
// Naive n-gram machinery
// ---------------------------------------------------------------------------

/// All n-gram occurrences of `line` for orders `min_o..=max_o`, in order of
/// ascending n-gram order and left-to-right position.
pub fn ngram_occurrences(line: &str, min_o: usize, max_o: usize) -> Vec<String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let mut grams = Vec::new();
    for order in min_o..=max_o {
        if order > tokens.len() {
            break;
        }
        for window in tokens.windows(order) {
            grams.push(window.join(" "));
        }
    }
    grams
}

/// A re-derived scoring instance for the decay selectors: the distinct
/// n-grams of the test set, and for every candidate its distinct test
/// n-grams (in lexicographic order) with their occurrence counts.
pub struct NaiveInstance {
    /// gram -> dense id; BTreeMap iteration order makes id order lexicographic.
    pub features: BTreeMap<String, usize>,
    /// Per candidate: (feature id, occurrences in the candidate), ascending id.
    pub rows: Vec<Vec<(usize, u32)>>,
    pub token_counts: Vec<usize>,
}

pub fn build_naive_instance(
    pool_lines: &[String],
    test_lines: &[String],
    min_o: usize,
    max_o: usize,
) -> NaiveInstance {
    let mut test_grams: BTreeSet<String> = BTreeSet::new();
    for line in test_lines {
        test_grams.extend(ngram_occurrences(line, min_o, max_o));
    }
    let features: BTreeMap<String, usize> = test_grams
        .into_iter()
        .enumerate()
        .map(|(id, gram)| (gram, id))
        .collect();
    let rows = pool_lines
        .iter()
        .map(|line| {
            let mut row: BTreeMap<usize, u32> = BTreeMap::new();
            for gram in ngram_occurrences(line, min_o, max_o) {
                if let Some(&id) = features.get(&gram) {
                    *row.entry(id).or_insert(0) += 1;
                }
            }
            row.into_iter().collect()
        })
        .collect();
    let token_counts = pool_lines
        .iter()
        .map(|line| line.split_whitespace().count())
        .collect();
    NaiveInstance {
        features,
        rows,
        token_counts,
    }
}

// ---------------------------------------------------------------------------
// Naive greedy decay selectors (full re-scoring every round)
// ---------------------------------------------------------------------------

/// Greedy coverage selection, recomputing every candidate's score from the
/// running counts each round. Ties go to the smaller index; a best score of
/// zero stops the run. Returns the picks and whether the run stopped short
/// of `n`.
fn naive_greedy(
    inst: &NaiveInstance,
    n: usize,
    score_one: impl Fn(&[(usize, u32)], usize, &[u32]) -> f64,
) -> (Vec<(usize, f64)>, bool) {
    let mut counts = vec![0u32; inst.features.len()];
    let mut selected = vec![false; inst.rows.len()];
    let mut picks = Vec::new();
    while picks.len() < n {
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in inst.rows.iter().enumerate() {
            if selected[i] {
                continue;
            }
            let score = score_one(row, inst.token_counts[i], &counts);
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((i, score));
            }
        }
        let Some((i, score)) = best else {
            break;
        };
        if score <= 0.0 {
            break;
        }
        selected[i] = true;
        picks.push((i, score));
        for &(id, occ) in &inst.rows[i] {
            counts[id] = counts[id].saturating_add(occ);
        }
    }
    let exhausted_early = picks.len() < n;
    (picks, exhausted_early)
}

/// Coverage scores counting how far each shared test n-gram still is from
/// the occurrence threshold `t`.
pub fn naive_inr_select(
    inst: &NaiveInstance,
    t: u32,
    n: usize,
) -> (Vec<(usize, f64)>, bool) {
    naive_greedy(inst, n, |row, _tokens, counts| {
        naive_inr_score(row, t, counts)
    })
}

pub fn naive_inr_score(row: &[(usize, u32)], t: u32, counts: &[u32]) -> f64 {
    let mut total: u64 = 0;
    for &(id, _) in row {
        let c = counts[id];
        if c < t {
            total += (t - c) as u64;
        }
    }
    total as f64
}

/// Length-normalized decayed feature sums.
pub fn naive_fda_select(
    inst: &NaiveInstance,
    d: f64,
    c: f64,
    init: f64,
    n: usize,
) -> (Vec<(usize, f64)>, bool) {
    naive_greedy(inst, n, |row, tokens, counts| {
        naive_fda_score(row, tokens, d, c, init, counts)
    })
}

pub fn naive_fda_score(
    row: &[(usize, u32)],
    tokens: usize,
    d: f64,
    c: f64,
    init: f64,
    counts: &[u32],
) -> f64 {
    if tokens == 0 {
        return 0.0;
    }
    let mut total = 0.0f64;
    for &(id, _) in row {
        let cl = counts[id];
        total += init * d.powi(cl as i32) / (1.0 + cl as f64).powf(c);
    }
    total / tokens as f64
}

// ---------------------------------------------------------------------------
// Naive TF-IDF retrieval (all candidate/test pairs)
// ---------------------------------------------------------------------------

/// A term-weight map with its Euclidean norm, both derived in lexicographic
/// term order.
pub struct NaiveVector {
    pub weights: BTreeMap<String, f64>,
    pub norm: f64,
}

fn naive_vector(line: &str, df: &HashMap<String, usize>, n_docs: usize, min_o: usize, max_o: usize) -> NaiveVector {
    let mut tf: BTreeMap<String, u32> = BTreeMap::new();
    for gram in ngram_occurrences(line, min_o, max_o) {
        *tf.entry(gram).or_insert(0) += 1;
    }
    let mut weights = BTreeMap::new();
    for (gram, count) in tf {
        let docs_with = df.get(&gram).copied().unwrap_or(1).max(1);
        let w = count as f64 * (n_docs as f64 / docs_with as f64).ln();
        if w != 0.0 {
            weights.insert(gram, w);
        }
    }
    let mut sq = 0.0f64;
    for w in weights.values() {
        sq += w * w;
    }
    NaiveVector {
        weights,
        norm: sq.sqrt(),
    }
}

pub fn naive_cosine(u: &NaiveVector, v: &NaiveVector) -> f64 {
    if u.norm == 0.0 || v.norm == 0.0 {
        return 0.0;
    }
    let mut dot = 0.0f64;
    for (gram, wu) in &u.weights {
        if let Some(wv) = v.weights.get(gram) {
            dot += wu * wv;
        }
    }
    dot / (u.norm * v.norm)
}

/// Every candidate's maximum similarity to any test sentence, computed over
/// all candidate/test pairs from scratch.
pub fn naive_tfidf_scores(
    pool_lines: &[String],
    test_lines: &[String],
    min_o: usize,
    max_o: usize,
) -> Vec<f64> {
    let n_docs = pool_lines.len();
    let mut df: HashMap<String, usize> = HashMap::new();
    for line in pool_lines {
        let distinct: BTreeSet<String> =
            ngram_occurrences(line, min_o, max_o).into_iter().collect();
        for gram in distinct {
            *df.entry(gram).or_insert(0) += 1;
        }
    }
    let test_vectors: Vec<NaiveVector> = test_lines
        .iter()
        .map(|line| naive_vector(line, &df, n_docs, min_o, max_o))
        .collect();
    pool_lines
        .iter()
        .map(|line| {
            let v = naive_vector(line, &df, n_docs, min_o, max_o);
            let mut best = 0.0f64;
            for t in &test_vectors {
                let sim = naive_cosine(&v, t);
                if sim > best {
                    best = sim;
                }
            }
            best
        })
        .collect()
}

/// Rank all candidates by (score descending, index ascending) and keep the
/// first `n`.
pub fn naive_top_n(scores: &[f64], n: usize) -> Vec<(usize, f64)> {
    let mut order: Vec<(usize, f64)> = scores.iter().copied().enumerate().collect();
    order.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .expect("scores are finite")
            .then(a.0.cmp(&b.0))
    });
    order.truncate(n);
    order
}

// ---------------------------------------------------------------------------
// Naive byte pair encoding (recount every iteration, one pass per rule)
// ---------------------------------------------------------------------------

/// A word as its initial symbol sequence: one symbol per character, the
/// last carrying the end-of-word marker.
pub fn naive_word_symbols(word: &str) -> Vec<String> {
    let chars: Vec<char> = word.chars().collect();
    chars
        .iter()
        .enumerate()
        .map(|(i, ch)| {
            if i + 1 == chars.len() {
                format!("{ch}</w>")
            } else {
                ch.to_string()
            }
        })
        .collect()
}

/// One canonical left-to-right, non-overlapping merge pass of `pair` over a
/// symbol sequence.
pub fn naive_merge_pass(seq: &[String], pair: &(String, String)) -> Vec<String> {
    let mut out = Vec::with_capacity(seq.len());
    let mut i = 0;
    while i < seq.len() {
        if i + 1 < seq.len() && seq[i] == pair.0 && seq[i + 1] == pair.1 {
            out.push(format!("{}{}", pair.0, pair.1));
            i += 2;
        } else {
            out.push(seq[i].clone());
            i += 1;
        }
    }
    out
}

/// Learn merge operations by recounting every adjacent pair across the
/// whole vocabulary from scratch each iteration. The most frequent pair
/// wins, ties going to the lexicographically smallest; pairs below
/// frequency 2 or already in the table are never chosen.
pub fn naive_bpe_learn<S: AsRef<str>>(tokens: &[S], num_merges: usize) -> Vec<(String, String)> {
    let mut word_freqs: BTreeMap<String, u64> = BTreeMap::new();
    for token in tokens {
        let token = token.as_ref();
        if token.is_empty() {
            continue;
        }
        *word_freqs.entry(token.to_string()).or_insert(0) += 1;
    }
    let mut words: Vec<(Vec<String>, u64)> = word_freqs
        .iter()
        .map(|(word, &freq)| (naive_word_symbols(word), freq))
        .collect();
    let mut merges: Vec<(String, String)> = Vec::new();
    let mut done: BTreeSet<(String, String)> = BTreeSet::new();
    while merges.len() < num_merges {
        let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
        for (seq, freq) in &words {
            for adj in seq.windows(2) {
                *counts
                    .entry((adj[0].clone(), adj[1].clone()))
                    .or_insert(0) += freq;
            }
        }
        let mut best: Option<((String, String), u64)> = None;
        for (pair, &count) in &counts {
            if count < 2 || done.contains(pair) {
                continue;
            }
            // ascending lexicographic iteration + strict > keeps the
            // smallest pair among equal counts
            if best.as_ref().is_none_or(|(_, b)| count > *b) {
                best = Some((pair.clone(), count));
            }
        }
        let Some((pair, _)) = best else {
            break;
        };
        for (seq, _) in &mut words {
            *seq = naive_merge_pass(seq, &pair);
        }
        done.insert(pair.clone());
        merges.push(pair);
    }
    merges
}

/// Segment one word by running one full pass per rule, in table order.
pub fn naive_bpe_apply_word(word: &str, merges: &[(String, String)]) -> Vec<String> {
    if word.is_empty() {
        return Vec::new();
    }
    let mut seq = naive_word_symbols(word);
    for pair in merges {
        seq = naive_merge_pass(&seq, pair);
    }
    let last = seq.len() - 1;
    seq.iter()
        .enumerate()
        .map(|(i, sym)| {
            if i == last {
                sym.strip_suffix("</w>").unwrap_or(sym).to_string()
            } else {
                format!("{sym}@@")
            }
        })
        .collect()
}

pub fn naive_bpe_apply_line(line: &str, merges: &[(String, String)]) -> String {
    line.split_whitespace()
        .flat_map(|word| naive_bpe_apply_word(word, merges))
        .collect::<Vec<_>>()
        .join(" ")
}

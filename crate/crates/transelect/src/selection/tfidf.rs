//! TF-IDF similarity selection: score every candidate once against the test
//! set and keep the top of the ranking. No feedback from already-selected
//! sentences, so scoring is a single parallel pass.
//!
//! Scores are computed with the exact same vector and cosine routines exposed
//! by [`crate::features`], which keeps results identical to a direct
//! all-pairs computation.

use rayon::prelude::*;

use crate::corpus::{CandidatePool, TestSet};
use crate::error::Result;
use crate::features::{compute_idf, cosine_sim, tfidf_vector, NgramConfig, SparseVector};

fn test_vectors(
    test: &TestSet,
    idf: &crate::features::IdfTable,
    ngram: &NgramConfig,
) -> Vec<SparseVector> {
    test.sentences()
        .iter()
        .map(|s| {
            let tokens: Vec<&str> = s.tokens().collect();
            tfidf_vector(&tokens, idf, ngram)
        })
        .collect()
}

/// Every candidate's score: the maximum cosine similarity to any test
/// sentence. Document frequencies come from the candidate pool alone.
pub(crate) fn score_all(
    pool: &CandidatePool,
    test: &TestSet,
    ngram: &NgramConfig,
) -> Result<Vec<f64>> {
    if pool.is_empty() {
        return Ok(Vec::new());
    }
    let idf = compute_idf(pool, ngram)?;
    let test_vecs = test_vectors(test, &idf, ngram);
    let scores: Vec<f64> = (0..pool.len())
        .into_par_iter()
        .map(|i| {
            let tokens: Vec<&str> = pool.candidate(i).tokens().collect();
            let v = tfidf_vector(&tokens, &idf, ngram);
            let mut best = 0.0f64;
            for tv in &test_vecs {
                let sim = cosine_sim(&v, tv);
                if sim > best {
                    best = sim;
                }
            }
            best
        })
        .collect();
    Ok(scores)
}

/// Rank candidate indices by `(score desc, index asc)` and keep the first
/// `n`.
pub(crate) fn top_n(scores: &[f64], n: usize) -> Vec<(usize, f64)> {
    let mut order: Vec<u32> = (0..scores.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        scores[b as usize]
            .partial_cmp(&scores[a as usize])
            .expect("similarity scores are finite")
            .then_with(|| a.cmp(&b))
    });
    order
        .into_iter()
        .take(n)
        .map(|i| (i as usize, scores[i as usize]))
        .collect()
}

/// Per-test-sentence variant: the top `ceil(n / |test|)` candidates for each
/// test sentence in turn, concatenated in test order and truncated to `n`.
/// A candidate close to several test sentences appears once per sentence, so
/// the result may contain repeats; each entry records the similarity to the
/// test sentence that retrieved it.
pub(crate) fn select_per_sentence(
    pool: &CandidatePool,
    test: &TestSet,
    n: usize,
    ngram: &NgramConfig,
) -> Result<Vec<(usize, f64)>> {
    if pool.is_empty() {
        return Ok(Vec::new());
    }
    let idf = compute_idf(pool, ngram)?;
    let per_sentence = n.div_ceil(test.len());
    let mut picks: Vec<(usize, f64)> = Vec::new();
    for sentence in test.sentences() {
        let tokens: Vec<&str> = sentence.tokens().collect();
        let tv = tfidf_vector(&tokens, &idf, ngram);
        let sims: Vec<f64> = (0..pool.len())
            .into_par_iter()
            .map(|i| {
                let tokens: Vec<&str> = pool.candidate(i).tokens().collect();
                cosine_sim(&tfidf_vector(&tokens, &idf, ngram), &tv)
            })
            .collect();
        picks.extend(top_n(&sims, per_sentence));
        if picks.len() >= n {
            break;
        }
    }
    picks.truncate(n);
    Ok(picks)
}

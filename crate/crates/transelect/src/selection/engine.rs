//! Shared machinery for the iterative greedy selectors: a compact per-candidate
//! feature matrix, the two decay scorers, and a lazy greedy loop over a stale
//! max-priority queue.
//!
//! Determinism contract: feature ids are assigned in lexicographic n-gram
//! order and every candidate's feature row is sorted by id, so any scorer that
//! accumulates over a row visits terms in the same order as a naive
//! implementation that iterates sorted n-gram strings. Combined with the
//! fixed smaller-index tie-break this makes selections reproducible
//! bit-for-bit at any thread count.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::collections::HashMap;

use rayon::prelude::*;

use crate::corpus::{CandidatePool, TestSet};
use crate::error::{Error, Result};
use crate::features::{for_each_ngram, NgramConfig};
use crate::selection::CountMode;

/// One feature occurrence in a candidate: which test n-gram, and how many
/// times it occurs in the sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct FeatureEntry {
    pub fid: u32,
    pub count: u32,
}

/// Candidate-by-feature occurrence matrix restricted to test-set n-grams,
/// in compressed sparse row layout.
#[derive(Debug)]
pub(crate) struct FeatureMatrix {
    /// Feature id → n-gram, sorted lexicographically (ids follow that order).
    names: Vec<String>,
    ids: HashMap<String, u32>,
    offsets: Vec<usize>,
    entries: Vec<FeatureEntry>,
    token_counts: Vec<u32>,
}

impl FeatureMatrix {
    /// Extract every candidate's test n-gram occurrences.
    pub fn build(pool: &CandidatePool, test: &TestSet, ngram: &NgramConfig) -> Self {
        let mut names: Vec<String> = Vec::new();
        {
            let mut tokens: Vec<&str> = Vec::new();
            for sentence in test.sentences() {
                tokens.clear();
                tokens.extend(sentence.tokens());
                for_each_ngram(&tokens, ngram, |gram| names.push(gram.to_string()));
            }
            names.sort_unstable();
            names.dedup();
        }
        let ids: HashMap<String, u32> = names
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as u32))
            .collect();

        let candidate_count = pool.len();
        let rows: Vec<(Vec<FeatureEntry>, u32)> = (0..candidate_count)
            .into_par_iter()
            .map(|i| {
                let tokens: Vec<&str> = pool.candidate(i).tokens().collect();
                let mut fids: Vec<u32> = Vec::new();
                for_each_ngram(&tokens, ngram, |gram| {
                    if let Some(&fid) = ids.get(gram) {
                        fids.push(fid);
                    }
                });
                fids.sort_unstable();
                let mut row: Vec<FeatureEntry> = Vec::new();
                for &fid in &fids {
                    match row.last_mut() {
                        Some(last) if last.fid == fid => last.count += 1,
                        _ => row.push(FeatureEntry { fid, count: 1 }),
                    }
                }
                (row, tokens.len() as u32)
            })
            .collect();

        let mut offsets = Vec::with_capacity(candidate_count + 1);
        let mut entries = Vec::new();
        let mut token_counts = Vec::with_capacity(candidate_count);
        offsets.push(0);
        for (row, tc) in rows {
            entries.extend_from_slice(&row);
            offsets.push(entries.len());
            token_counts.push(tc);
        }

        FeatureMatrix {
            names,
            ids,
            offsets,
            entries,
            token_counts,
        }
    }

    pub fn candidate_count(&self) -> usize {
        self.token_counts.len()
    }

    pub fn feature_count(&self) -> usize {
        self.names.len()
    }

    /// Feature names in id order (lexicographic).
    pub fn feature_names(&self) -> &[String] {
        &self.names
    }

    pub fn feature_id(&self, gram: &str) -> Option<u32> {
        self.ids.get(gram).copied()
    }

    /// The candidate's feature entries, sorted by feature id.
    pub fn row(&self, candidate: usize) -> &[FeatureEntry] {
        &self.entries[self.offsets[candidate]..self.offsets[candidate + 1]]
    }

    pub fn token_count(&self, candidate: usize) -> u32 {
        self.token_counts[candidate]
    }
}

/// A per-candidate scoring rule whose scores never increase as the selected
/// pool's n-gram counts grow.
pub(crate) trait DecayScorer: Sync {
    /// Score a candidate row under the current selected-pool counts.
    /// `counts` is indexed by feature id.
    fn score(&self, row: &[FeatureEntry], token_count: u32, counts: &[u32]) -> f64;
}

/// Coverage scorer: each shared test n-gram still below the threshold
/// contributes its remaining deficit `t - count`.
pub(crate) struct InrScorer {
    pub t: u32,
}

impl DecayScorer for InrScorer {
    fn score(&self, row: &[FeatureEntry], _token_count: u32, counts: &[u32]) -> f64 {
        let mut total: u64 = 0;
        for e in row {
            let c = counts[e.fid as usize];
            if c < self.t {
                total += (self.t - c) as u64;
            }
        }
        total as f64
    }
}

/// Decay scorer: each shared test n-gram contributes
/// `init * d^count / (1 + count)^c`, and the sum is divided by the
/// candidate's token count. Zero-length candidates score 0.
pub(crate) struct FdaScorer {
    pub d: f64,
    pub c: f64,
    /// Initial feature values, indexed by feature id.
    pub init: Vec<f64>,
}

impl DecayScorer for FdaScorer {
    fn score(&self, row: &[FeatureEntry], token_count: u32, counts: &[u32]) -> f64 {
        if token_count == 0 {
            return 0.0;
        }
        let mut total = 0.0f64;
        for e in row {
            let cl = counts[e.fid as usize];
            let pow = cl.min(i32::MAX as u32) as i32;
            total += self.init[e.fid as usize] * self.d.powi(pow)
                / (1.0 + cl as f64).powf(self.c);
        }
        total / token_count as f64
    }
}

/// Max-heap key: higher score first, then smaller candidate index.
#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapEntry {
    score: f64,
    index: u32,
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .partial_cmp(&other.score)
            .expect("candidate scores are finite")
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Result of a greedy run: `(global_index, score at selection time)` in
/// selection order, plus whether the run stopped short of the request.
#[derive(Debug)]
pub(crate) struct GreedyOutcome {
    pub picks: Vec<(usize, f64)>,
    pub exhausted_early: bool,
}

fn check_score(score: f64) -> Result<f64> {
    if !score.is_finite() || score < 0.0 {
        return Err(Error::Internal(format!(
            "candidate score {score} is not a finite non-negative number"
        )));
    }
    Ok(score)
}

/// Greedy selection of up to `n` candidates by repeatedly taking the current
/// best score (ties → smaller index), updating the selected-pool counts after
/// each pick.
///
/// Implemented lazily: cached scores live in a max-heap and are only
/// recomputed when popped. Because scores never increase, a popped candidate
/// whose recomputed score equals its cached one is still the true maximum —
/// and for equal cached scores the heap already yields the smaller index —
/// so the outcome matches full re-scoring every round exactly, including tie
/// order. Candidates that reach score 0 are dropped, so every pick has a
/// positive score and selection ends early once nothing positive remains.
pub(crate) fn run_greedy<S: DecayScorer>(
    matrix: &FeatureMatrix,
    scorer: &S,
    mut counts: Vec<u32>,
    n: usize,
    count_mode: CountMode,
) -> Result<GreedyOutcome> {
    debug_assert_eq!(counts.len(), matrix.feature_count());
    let initial: Vec<f64> = (0..matrix.candidate_count())
        .into_par_iter()
        .map(|i| scorer.score(matrix.row(i), matrix.token_count(i), &counts))
        .collect();

    let mut heap_entries = Vec::new();
    for (i, &score) in initial.iter().enumerate() {
        check_score(score)?;
        if score > 0.0 {
            heap_entries.push(HeapEntry {
                score,
                index: i as u32,
            });
        }
    }
    let mut heap = BinaryHeap::from(heap_entries);

    let mut picks: Vec<(usize, f64)> = Vec::new();
    while picks.len() < n {
        let Some(top) = heap.pop() else { break };
        let idx = top.index as usize;
        let current = check_score(scorer.score(matrix.row(idx), matrix.token_count(idx), &counts))?;
        if current > top.score {
            return Err(Error::Internal(format!(
                "candidate {idx} score increased during selection ({} -> {current})",
                top.score
            )));
        }
        if current == top.score {
            picks.push((idx, current));
            for e in matrix.row(idx) {
                let inc = match count_mode {
                    CountMode::Occurrences => e.count,
                    CountMode::PerSentence => 1,
                };
                let slot = &mut counts[e.fid as usize];
                *slot = slot.saturating_add(inc);
            }
        } else if current > 0.0 {
            // stale entry: put it back at its current score
            heap.push(HeapEntry {
                score: current,
                index: top.index,
            });
        }
    }

    let exhausted_early = picks.len() < n;
    Ok(GreedyOutcome {
        picks,
        exhausted_early,
    })
}

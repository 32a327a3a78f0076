//! Byte-pair-encoding subword segmentation: learn merge operations from a
//! token stream, apply them to text, and undo the segmentation.
//!
//! Words are decomposed into characters with the reserved marker `</w>`
//! appended to the final character, so `("a", "b")` and `("a", "b</w>")` are
//! distinct pairs. Applied output strips `</w>` and marks every non-final
//! subword of a word with the `@@` continuation suffix; [`unapply_bpe`]
//! inverts that rendering. The round trip is the identity for input free of
//! both reserved markers.

use std::collections::{BinaryHeap, HashMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};

/// End-of-word marker carried by the final symbol of each word.
pub const END_OF_WORD: &str = "</w>";

/// Continuation marker suffixed to non-final subwords in rendered output.
pub const CONTINUATION: &str = "@@";

/// True when the text contains either reserved marker, which would make a
/// later round trip ambiguous.
pub fn has_reserved_markers(text: &str) -> bool {
    text.contains(CONTINUATION) || text.contains(END_OF_WORD)
}

/// An ordered list of learned merge operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeTable {
    merges: Vec<(String, String)>,
}

impl MergeTable {
    /// Build a table from explicit pairs; pairs must be unique.
    pub fn new(merges: Vec<(String, String)>) -> Result<Self> {
        let mut seen: HashSet<(&str, &str)> = HashSet::new();
        for (l, r) in &merges {
            if !seen.insert((l, r)) {
                return Err(Error::Config(format!("duplicate merge pair `{l} {r}`")));
            }
        }
        Ok(MergeTable { merges })
    }

    pub fn empty() -> Self {
        MergeTable { merges: Vec::new() }
    }

    /// Number of merge operations.
    pub fn len(&self) -> usize {
        self.merges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.merges.is_empty()
    }

    /// Pairs in learning order (most frequent first).
    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    /// The table truncated to its first `n` merges.
    pub fn truncated(&self, n: usize) -> MergeTable {
        MergeTable {
            merges: self.merges[..n.min(self.merges.len())].to_vec(),
        }
    }

    /// Write as a codec file: a `#` comment header, then one `left right`
    /// pair per line in learning order. Output is byte-deterministic.
    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut out = String::from("# bpe merge table v1\n");
        for (l, r) in &self.merges {
            out.push_str(l);
            out.push(' ');
            out.push_str(r);
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    /// Read a codec file written by [`write_to`](Self::write_to).
    pub fn read_from(path: &Path) -> Result<Self> {
        let lines = crate::corpus::read_lines(path)?;
        let parse_err = |line: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut iter = lines.iter().enumerate();
        match iter.next() {
            Some((_, first)) if first.starts_with('#') => {}
            Some((i, _)) => {
                return Err(parse_err(i + 1, "expected a `#` header comment".into()));
            }
            None => return Err(parse_err(1, "file is empty".into())),
        }
        let mut merges: Vec<(String, String)> = Vec::new();
        let mut seen: HashSet<(String, String)> = HashSet::new();
        for (i, line) in iter {
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(' ');
            let (Some(l), Some(r), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(parse_err(
                    i + 1,
                    format!("expected `left right`, got `{line}`"),
                ));
            };
            if l.is_empty() || r.is_empty() {
                return Err(parse_err(i + 1, "empty merge symbol".into()));
            }
            if !seen.insert((l.to_string(), r.to_string())) {
                return Err(parse_err(i + 1, format!("duplicate merge pair `{l} {r}`")));
            }
            merges.push((l.to_string(), r.to_string()));
        }
        Ok(MergeTable { merges })
    }
}

/// Replace every adjacent, non-overlapping `(left, right)` occurrence with
/// `merged`, scanning left to right — one pass of one merge rule.
fn merge_pass(seq: &mut Vec<u32>, left: u32, right: u32, merged: u32) -> bool {
    if !seq
        .windows(2)
        .any(|w| w[0] == left && w[1] == right)
    {
        return false;
    }
    let mut out = Vec::with_capacity(seq.len());
    let mut i = 0;
    while i < seq.len() {
        if i + 1 < seq.len() && seq[i] == left && seq[i + 1] == right {
            out.push(merged);
            i += 2;
        } else {
            out.push(seq[i]);
            i += 1;
        }
    }
    *seq = out;
    true
}

/// Interned symbol strings.
#[derive(Debug, Default)]
struct SymbolTable {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl SymbolTable {
    fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }
}

/// Decompose a word into interned character symbols, the last carrying the
/// end-of-word marker.
fn word_symbols(word: &str, symbols: &mut SymbolTable) -> Vec<u32> {
    let chars: Vec<char> = word.chars().collect();
    let mut seq = Vec::with_capacity(chars.len());
    let mut buf = String::new();
    for (i, ch) in chars.iter().enumerate() {
        buf.clear();
        buf.push(*ch);
        if i + 1 == chars.len() {
            buf.push_str(END_OF_WORD);
        }
        seq.push(symbols.intern(&buf));
    }
    seq
}

#[derive(Debug, PartialEq, Eq)]
struct PairCandidate {
    count: u64,
    left: String,
    right: String,
    lid: u32,
    rid: u32,
}

impl Ord for PairCandidate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap: highest count first, then lexicographically smallest pair
        self.count
            .cmp(&other.count)
            .then_with(|| (&other.left, &other.right).cmp(&(&self.left, &self.right)))
    }
}

impl PartialOrd for PairCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Learn `num_merges` merge operations from a stream of word tokens.
///
/// Pair frequencies are weighted by word frequency. Each round merges the
/// most frequent adjacent symbol pair (ties broken lexicographically) in
/// every word that contains it; learning stops early once no pair occurs at
/// least twice. A pair recorded once is never recorded again, so the
/// resulting table has unique entries even when later merges recreate an
/// already-merged pair's adjacency.
///
/// Counting is incremental: merging a pair only recounts the words that
/// contain it, and candidate pairs sit in a priority queue whose stale
/// entries are re-checked against the exact counts when popped.
pub fn learn_bpe<I, S>(tokens: I, num_merges: usize) -> MergeTable
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut word_freqs: HashMap<String, u64> = HashMap::new();
    for token in tokens {
        let token = token.as_ref();
        if token.is_empty() {
            continue;
        }
        *word_freqs.entry(token.to_string()).or_insert(0) += 1;
    }
    let mut word_types: Vec<(String, u64)> = word_freqs.into_iter().collect();
    word_types.sort_unstable();

    let mut symbols = SymbolTable::default();
    let mut words: Vec<(Vec<u32>, u64)> = word_types
        .iter()
        .map(|(w, f)| (word_symbols(w, &mut symbols), *f))
        .collect();

    let mut stats: HashMap<(u32, u32), u64> = HashMap::new();
    let mut occurs_in: HashMap<(u32, u32), HashSet<u32>> = HashMap::new();
    for (wi, (seq, freq)) in words.iter().enumerate() {
        for w in seq.windows(2) {
            *stats.entry((w[0], w[1])).or_insert(0) += freq;
            occurs_in.entry((w[0], w[1])).or_default().insert(wi as u32);
        }
    }

    let mut heap: BinaryHeap<PairCandidate> = stats
        .iter()
        .filter(|(_, &c)| c >= 2)
        .map(|(&(l, r), &count)| PairCandidate {
            count,
            left: symbols.name(l).to_string(),
            right: symbols.name(r).to_string(),
            lid: l,
            rid: r,
        })
        .collect();

    let mut merged_pairs: HashSet<(u32, u32)> = HashSet::new();
    let mut merges: Vec<(String, String)> = Vec::new();

    while merges.len() < num_merges {
        let Some(top) = heap.pop() else { break };
        let pair = (top.lid, top.rid);
        let current = stats.get(&pair).copied().unwrap_or(0);
        if current != top.count {
            // stale cached count; re-queue at the exact one if still viable
            if current >= 2 && !merged_pairs.contains(&pair) {
                heap.push(PairCandidate {
                    count: current,
                    ..top
                });
            }
            continue;
        }
        if merged_pairs.contains(&pair) {
            // an earlier merge already consumed this rule; later merges
            // recreated the adjacency, but the table must stay unique
            continue;
        }

        let merged_name = format!("{}{}", top.left, top.right);
        let merged_id = symbols.intern(&merged_name);
        merges.push((top.left, top.right));
        merged_pairs.insert(pair);

        let mut affected: Vec<u32> = occurs_in
            .remove(&pair)
            .map(|s| s.into_iter().collect())
            .unwrap_or_default();
        affected.sort_unstable();

        let mut touched: HashSet<(u32, u32)> = HashSet::new();
        for wi in affected {
            let (seq, freq) = &mut words[wi as usize];
            let freq = *freq;
            if !seq.windows(2).any(|w| (w[0], w[1]) == pair) {
                continue; // stale index entry
            }
            for w in seq.windows(2) {
                let p = (w[0], w[1]);
                let remaining = {
                    let slot = stats.get_mut(&p).expect("pair was counted");
                    *slot -= freq;
                    *slot
                };
                if remaining == 0 {
                    stats.remove(&p);
                }
                touched.insert(p);
            }
            merge_pass(seq, pair.0, pair.1, merged_id);
            for w in seq.windows(2) {
                let p = (w[0], w[1]);
                *stats.entry(p).or_insert(0) += freq;
                occurs_in.entry(p).or_default().insert(wi);
                touched.insert(p);
            }
        }
        debug_assert!(!stats.contains_key(&pair), "merged pair should be fully consumed");
        for p in touched {
            if p == pair || merged_pairs.contains(&p) {
                continue;
            }
            if let Some(&count) = stats.get(&p) {
                if count >= 2 {
                    heap.push(PairCandidate {
                        count,
                        left: symbols.name(p.0).to_string(),
                        right: symbols.name(p.1).to_string(),
                        lid: p.0,
                        rid: p.1,
                    });
                }
            }
        }
    }

    MergeTable { merges }
}

/// Reusable applier that caches each distinct word's segmentation.
#[derive(Debug)]
pub struct BpeApplier<'a> {
    merges: &'a MergeTable,
    symbols: SymbolTable,
    /// rank → (left id, right id, merged id)
    rules: Vec<(u32, u32, u32)>,
    /// (left id, right id) → rank of the first rule merging it
    rule_ranks: HashMap<(u32, u32), u32>,
    cache: HashMap<String, Vec<String>>,
}

impl<'a> BpeApplier<'a> {
    pub fn new(merges: &'a MergeTable) -> Self {
        let mut symbols = SymbolTable::default();
        let mut rules = Vec::with_capacity(merges.len());
        let mut rule_ranks = HashMap::with_capacity(merges.len());
        for (rank, (l, r)) in merges.merges().iter().enumerate() {
            let lid = symbols.intern(l);
            let rid = symbols.intern(r);
            let merged = symbols.intern(&format!("{l}{r}"));
            rules.push((lid, rid, merged));
            rule_ranks.entry((lid, rid)).or_insert(rank as u32);
        }
        BpeApplier {
            merges,
            symbols,
            rules,
            rule_ranks,
            cache: HashMap::new(),
        }
    }

    pub fn merges(&self) -> &MergeTable {
        self.merges
    }

    /// Segment one word into rendered subwords (`@@` continuations, no
    /// end-of-word marker).
    pub fn segment_word(&mut self, word: &str) -> Vec<String> {
        if let Some(cached) = self.cache.get(word) {
            return cached.clone();
        }
        let segments = self.segment_uncached(word);
        self.cache.insert(word.to_string(), segments.clone());
        segments
    }

    /// Apply to a whitespace-tokenized line; subwords are joined with single
    /// spaces.
    pub fn apply_line(&mut self, line: &str) -> String {
        let mut out = String::new();
        for word in line.split_whitespace() {
            for segment in self.segment_word(word) {
                if !out.is_empty() {
                    out.push(' ');
                }
                out.push_str(&segment);
            }
        }
        out
    }

    fn segment_uncached(&mut self, word: &str) -> Vec<String> {
        let mut seq = word_symbols(word, &mut self.symbols);
        if seq.is_empty() {
            return Vec::new();
        }
        // run merge rules in table order; between passes, jump straight to
        // the lowest-ranked rule that actually matches an adjacency, which
        // is exactly equivalent to one pass per rule over the full table
        let mut next_rank: u32 = 0;
        loop {
            let mut best: Option<u32> = None;
            for w in seq.windows(2) {
                if let Some(&rank) = self.rule_ranks.get(&(w[0], w[1])) {
                    if rank >= next_rank && best.is_none_or(|b| rank < b) {
                        best = Some(rank);
                    }
                }
            }
            let Some(rank) = best else { break };
            let (l, r, merged) = self.rules[rank as usize];
            merge_pass(&mut seq, l, r, merged);
            next_rank = rank + 1;
        }

        let last = seq.len() - 1;
        seq.iter()
            .enumerate()
            .map(|(i, &id)| {
                let name = self.symbols.name(id);
                if i == last {
                    name.strip_suffix(END_OF_WORD).unwrap_or(name).to_string()
                } else {
                    format!("{name}{CONTINUATION}")
                }
            })
            .collect()
    }
}

/// Segment a token sequence into subword tokens.
///
/// Each word is decomposed into characters (final character marked with
/// `</w>`), the merge rules are applied in table order — one left-to-right
/// pass per rule — and the result is rendered with `@@` continuation
/// markers. Empty tokens are skipped. For repeated application over many
/// lines, [`BpeApplier`] caches per-word results.
pub fn apply_bpe(tokens: &[&str], merges: &MergeTable) -> Vec<String> {
    let mut applier = BpeApplier::new(merges);
    let mut out = Vec::new();
    for word in tokens {
        if word.is_empty() {
            continue;
        }
        out.extend(applier.segment_word(word));
    }
    out
}

/// Undo [`apply_bpe`]'s rendering: each maximal run of `@@`-suffixed tokens
/// is joined with the following token.
///
/// Fails when the final token still carries the continuation marker, since
/// the word it belongs to is incomplete.
pub fn unapply_bpe<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut buf = String::new();
    for token in tokens {
        let token = token.as_ref();
        match token.strip_suffix(CONTINUATION) {
            Some(prefix) => buf.push_str(prefix),
            None => {
                buf.push_str(token);
                out.push(std::mem::take(&mut buf));
            }
        }
    }
    if !buf.is_empty() {
        return Err(Error::MalformedSubword(format!(
            "dangling continuation marker at end of input (`{buf}{CONTINUATION}`)"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn table(pairs: &[(&str, &str)]) -> MergeTable {
        MergeTable::new(
            pairs
                .iter()
                .map(|(l, r)| (l.to_string(), r.to_string()))
                .collect(),
        )
        .unwrap()
    }

    fn pairs_of(t: &MergeTable) -> Vec<(&str, &str)> {
        t.merges()
            .iter()
            .map(|(l, r)| (l.as_str(), r.as_str()))
            .collect()
    }

    /// Reference learner: decompose to string symbols and recount every pair
    /// from scratch each round.
    fn naive_learn(word_freqs: &[(&str, u64)], num_merges: usize) -> Vec<(String, String)> {
        fn string_pass(seq: &[String], pair: &(String, String), merged: &str) -> Vec<String> {
            let mut out = Vec::new();
            let mut i = 0;
            while i < seq.len() {
                if i + 1 < seq.len() && seq[i] == pair.0 && seq[i + 1] == pair.1 {
                    out.push(merged.to_string());
                    i += 2;
                } else {
                    out.push(seq[i].clone());
                    i += 1;
                }
            }
            out
        }

        let mut vocab: Vec<(Vec<String>, u64)> = word_freqs
            .iter()
            .map(|&(w, f)| {
                let chars: Vec<char> = w.chars().collect();
                let seq = chars
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        if i + 1 == chars.len() {
                            format!("{c}{END_OF_WORD}")
                        } else {
                            c.to_string()
                        }
                    })
                    .collect();
                (seq, f)
            })
            .collect();

        let mut merges: Vec<(String, String)> = Vec::new();
        let mut done: HashSet<(String, String)> = HashSet::new();
        for _ in 0..num_merges {
            let mut counts: std::collections::BTreeMap<(String, String), u64> =
                std::collections::BTreeMap::new();
            for (seq, f) in &vocab {
                for w in seq.windows(2) {
                    *counts.entry((w[0].clone(), w[1].clone())).or_insert(0) += f;
                }
            }
            // iterate in lexicographic order with a strict > so the first
            // maximum wins: that is the lexicographically smallest tie
            let mut best: Option<((String, String), u64)> = None;
            for (pair, &c) in &counts {
                if c >= 2
                    && !done.contains(pair)
                    && best.as_ref().is_none_or(|&(_, bc)| c > bc)
                {
                    best = Some((pair.clone(), c));
                }
            }
            let Some((pair, _)) = best else { break };
            let merged = format!("{}{}", pair.0, pair.1);
            for (seq, _) in &mut vocab {
                *seq = string_pass(seq, &pair, &merged);
            }
            done.insert(pair.clone());
            merges.push(pair);
        }
        merges
    }

    /// Reference applier: literally one pass per rule, over string symbols.
    fn naive_apply(word: &str, merges: &MergeTable) -> Vec<String> {
        let chars: Vec<char> = word.chars().collect();
        let mut seq: Vec<String> = chars
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i + 1 == chars.len() {
                    format!("{c}{END_OF_WORD}")
                } else {
                    c.to_string()
                }
            })
            .collect();
        for (l, r) in merges.merges() {
            let merged = format!("{l}{r}");
            let mut out = Vec::new();
            let mut i = 0;
            while i < seq.len() {
                if i + 1 < seq.len() && &seq[i] == l && &seq[i + 1] == r {
                    out.push(merged.clone());
                    i += 2;
                } else {
                    out.push(seq[i].clone());
                    i += 1;
                }
            }
            seq = out;
        }
        let last = seq.len().saturating_sub(1);
        seq.iter()
            .enumerate()
            .map(|(i, s)| {
                if i == last {
                    s.strip_suffix(END_OF_WORD).unwrap_or(s).to_string()
                } else {
                    format!("{s}{CONTINUATION}")
                }
            })
            .collect()
    }

    #[test]
    fn learn_single_repeated_word() {
        let t = learn_bpe(["aa", "aa", "aa"], 1);
        assert_eq!(pairs_of(&t), [("a", "a</w>")]);
    }

    #[test]
    fn learn_zero_merges_is_empty() {
        let t = learn_bpe(["aa", "aa"], 0);
        assert!(t.is_empty());
    }

    #[test]
    fn learn_picks_the_more_frequent_pair() {
        let t = learn_bpe(["ab", "ab", "ac"], 1);
        assert_eq!(pairs_of(&t), [("a", "b</w>")]);
    }

    #[test]
    fn learn_stops_below_frequency_two() {
        let t = learn_bpe(["ab"], 5);
        assert!(t.is_empty());
    }

    #[test]
    fn learn_breaks_frequency_ties_lexicographically() {
        let t = learn_bpe(["cd", "cd", "ab", "ab"], 2);
        assert_eq!(pairs_of(&t), [("a", "b</w>"), ("c", "d</w>")]);
    }

    #[test]
    fn learn_chains_merges_through_new_symbols() {
        let t = learn_bpe(["aaa", "aaa"], 5);
        assert_eq!(pairs_of(&t), [("a", "a"), ("aa", "a</w>")]);
    }

    #[test]
    fn learn_weights_pairs_by_word_frequency() {
        // "xy" appears 3 times, each contributing its single pair; the pairs
        // inside "pqr" appear twice each
        let t = learn_bpe(["xy", "xy", "xy", "pqr", "pqr"], 1);
        assert_eq!(pairs_of(&t), [("x", "y</w>")]);
    }

    #[test]
    fn learn_matches_naive_recount_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let alphabet = ['a', 'b', 'c'];
        for _ in 0..20 {
            let type_count = rng.random_range(1..=12);
            let word_freqs: Vec<(String, u64)> = (0..type_count)
                .map(|_| {
                    let len = rng.random_range(1..=5);
                    let w: String = (0..len)
                        .map(|_| alphabet[rng.random_range(0..alphabet.len())])
                        .collect();
                    (w, rng.random_range(1..=5))
                })
                .collect();
            // feed learn_bpe one token per occurrence
            let tokens: Vec<&str> = word_freqs
                .iter()
                .flat_map(|(w, f)| std::iter::repeat_n(w.as_str(), *f as usize))
                .collect();
            let num_merges = rng.random_range(0..=30);
            let fast = learn_bpe(tokens.iter().copied(), num_merges);
            let refs: Vec<(&str, u64)> =
                word_freqs.iter().map(|(w, f)| (w.as_str(), *f)).collect();
            let naive = naive_learn(&refs, num_merges);
            assert_eq!(
                fast.merges(),
                &naive[..],
                "learner mismatch on {word_freqs:?} with {num_merges} merges"
            );
        }
    }

    #[test]
    fn apply_follows_learned_merge() {
        let t = table(&[("a", "a</w>")]);
        assert_eq!(apply_bpe(&["aa"], &t), ["aa"]);
    }

    #[test]
    fn apply_empty_table_segments_to_characters() {
        let t = MergeTable::empty();
        assert_eq!(apply_bpe(&["ab"], &t), ["a@@", "b"]);
        assert_eq!(apply_bpe(&["a"], &t), ["a"]);
    }

    #[test]
    fn apply_renders_continuation_markers() {
        let t = table(&[("a", "b")]);
        assert_eq!(apply_bpe(&["abc"], &t), ["ab@@", "c"]);
    }

    #[test]
    fn apply_merges_left_to_right_without_overlap() {
        let t = table(&[("a", "a")]);
        assert_eq!(apply_bpe(&["aaa"], &t), ["aa@@", "a"]);
        // the final "a" carries the end-of-word marker, so only the first
        // two of the three leading plain "a" symbols merge in one pass
        assert_eq!(apply_bpe(&["aaaa"], &t), ["aa@@", "a@@", "a"]);
    }

    #[test]
    fn apply_never_revisits_earlier_rules() {
        // rule 0 consumes "x y</w>"; rule 1 then cannot apply because its
        // right-hand side is gone, and rule 0 is never re-run for pairs that
        // later rules might recreate
        let t = table(&[("x", "y</w>"), ("a", "x")]);
        assert_eq!(apply_bpe(&["axy"], &t), ["a@@", "xy"]);
        // with a non-final "x" the second rule does fire
        assert_eq!(apply_bpe(&["axz"], &t), ["ax@@", "z"]);
    }

    #[test]
    fn apply_spans_multiple_words() {
        let t = table(&[("a", "b</w>")]);
        assert_eq!(apply_bpe(&["ab", "cab"], &t), ["ab", "c@@", "ab"]);
    }

    #[test]
    fn apply_matches_naive_pass_per_rule_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        let alphabet = ['a', 'b', 'c'];
        for _ in 0..20 {
            let type_count = rng.random_range(1..=10);
            let tokens: Vec<String> = (0..type_count * 3)
                .map(|_| {
                    let len = rng.random_range(1..=6);
                    (0..len)
                        .map(|_| alphabet[rng.random_range(0..alphabet.len())])
                        .collect()
                })
                .collect();
            let t = learn_bpe(tokens.iter().map(|s| s.as_str()), rng.random_range(0..=15));
            for word in &tokens {
                assert_eq!(
                    apply_bpe(&[word.as_str()], &t),
                    naive_apply(word, &t),
                    "apply mismatch for `{word}` under {:?}",
                    t.merges()
                );
            }
        }
    }

    #[test]
    fn applier_cache_is_consistent() {
        let t = table(&[("a", "b")]);
        let mut applier = BpeApplier::new(&t);
        let first = applier.apply_line("abc abc xyz");
        let second = applier.apply_line("abc abc xyz");
        assert_eq!(first, second);
        assert_eq!(first, "ab@@ c ab@@ c x@@ y@@ z");
    }

    #[test]
    fn unapply_joins_continuation_runs() {
        assert_eq!(unapply_bpe(&["ab@@", "c"]).unwrap(), ["abc"]);
        assert_eq!(unapply_bpe(&["x", "y"]).unwrap(), ["x", "y"]);
        assert_eq!(
            unapply_bpe(&["a@@", "b@@", "c", "d"]).unwrap(),
            ["abc", "d"]
        );
        assert!(unapply_bpe::<&str>(&[]).unwrap().is_empty());
    }

    #[test]
    fn unapply_rejects_dangling_marker() {
        let err = unapply_bpe(&["x@@"]).unwrap_err();
        assert!(matches!(err, Error::MalformedSubword(_)));
        let err = unapply_bpe(&["a", "b@@"]).unwrap_err();
        assert!(matches!(err, Error::MalformedSubword(_)));
    }

    #[test]
    fn segment_counts_never_increase_with_more_merges() {
        let tokens = ["banana", "bananas", "cabana", "banana"];
        let t = learn_bpe(tokens, 20);
        for word in ["banana", "cabana", "ban"] {
            let mut prev = usize::MAX;
            for k in 0..=t.len() {
                let n = apply_bpe(&[word], &t.truncated(k)).len();
                assert!(n <= prev, "segment count grew at {k} merges for `{word}`");
                prev = n;
            }
        }
    }

    #[test]
    fn reserved_marker_detection() {
        assert!(has_reserved_markers("a@@b"));
        assert!(has_reserved_markers("x </w> y"));
        assert!(!has_reserved_markers("plain text"));
    }

    #[test]
    fn codec_round_trip_is_byte_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("codec.bpe");
        let t = learn_bpe(["banana", "banana", "bandana"], 10);
        assert!(!t.is_empty());
        t.write_to(&path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert!(bytes.starts_with(b"#"));
        let back = MergeTable::read_from(&path).unwrap();
        assert_eq!(back, t);
        back.write_to(&path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), bytes);
    }

    #[test]
    fn codec_rejects_malformed_files() {
        let dir = tempfile::tempdir().unwrap();
        let no_header = dir.path().join("no_header.bpe");
        std::fs::write(&no_header, "a b\n").unwrap();
        assert!(matches!(
            MergeTable::read_from(&no_header).unwrap_err(),
            Error::Parse { line: 1, .. }
        ));

        let bad_fields = dir.path().join("bad_fields.bpe");
        std::fs::write(&bad_fields, "# header\na b c\n").unwrap();
        assert!(matches!(
            MergeTable::read_from(&bad_fields).unwrap_err(),
            Error::Parse { line: 2, .. }
        ));

        let empty = dir.path().join("empty.bpe");
        std::fs::write(&empty, "").unwrap();
        assert!(MergeTable::read_from(&empty).is_err());
    }

    #[test]
    fn duplicate_pairs_are_rejected() {
        let err = MergeTable::new(vec![
            ("a".into(), "b".into()),
            ("a".into(), "b".into()),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    proptest! {
        // the full pipeline is reversible for marker-free input
        #[test]
        fn round_trip_is_identity(
            words in proptest::collection::vec("[a-f]{1,8}", 1..20),
            merge_count in 0usize..40,
        ) {
            let t = learn_bpe(words.iter().map(|s| s.as_str()), merge_count);
            let tokens: Vec<&str> = words.iter().map(|s| s.as_str()).collect();
            let encoded = apply_bpe(&tokens, &t);
            let decoded = unapply_bpe(&encoded).unwrap();
            prop_assert_eq!(decoded, words);
        }

        // applying any table to any marker-free word reconstructs it after
        // joining, regardless of whether the table was learned on that word
        #[test]
        fn unrelated_tables_still_round_trip(
            word in "[a-z]{1,12}",
            other in proptest::collection::vec("[a-z]{2,6}", 1..10),
        ) {
            let t = learn_bpe(other.iter().map(|s| s.as_str()), 30);
            let encoded = apply_bpe(&[word.as_str()], &t);
            let decoded = unapply_bpe(&encoded).unwrap();
            prop_assert_eq!(decoded, vec![word]);
        }
    }
}

//! Analytics over finished selections: which corpus each selected line came
//! from, and how the selection scores are distributed.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::selection::Selection;

/// One corpus's share of a selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenanceRow {
    corpus_id: String,
    count: usize,
    percent: u32,
}

impl ProvenanceRow {
    pub fn corpus_id(&self) -> &str {
        &self.corpus_id
    }

    /// Number of selected lines drawn from this corpus.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Share of the whole selection, rounded to a whole percent (half away
    /// from zero).
    pub fn percent(&self) -> u32 {
        self.percent
    }
}

/// Per-corpus line counts and rounded percentages for one selection.
///
/// Rows are sorted by corpus id, so the report is identical no matter how
/// the selection entries were ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenanceReport {
    rows: Vec<ProvenanceRow>,
    total: usize,
}

impl ProvenanceReport {
    /// Build a report from one corpus id per selected line.
    pub fn from_corpus_ids<'a>(ids: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        let mut total = 0usize;
        for id in ids {
            *counts.entry(id).or_insert(0) += 1;
            total += 1;
        }
        if total == 0 {
            return Err(Error::Precondition(
                "cannot report provenance of an empty selection".into(),
            ));
        }
        let mut rows: Vec<ProvenanceRow> = counts
            .into_iter()
            .map(|(corpus_id, count)| ProvenanceRow {
                corpus_id: corpus_id.to_string(),
                count,
                percent: (100.0 * count as f64 / total as f64).round() as u32,
            })
            .collect();
        rows.sort_unstable_by(|a, b| a.corpus_id.cmp(&b.corpus_id));
        Ok(ProvenanceReport { rows, total })
    }

    pub fn rows(&self) -> &[ProvenanceRow] {
        &self.rows
    }

    /// Selection size; the per-row counts sum to this.
    pub fn total(&self) -> usize {
        self.total
    }

    /// `corpus_id\tcount\tpercent` rows under a header line.
    pub fn render_tsv(&self) -> String {
        let mut out = String::from("corpus_id\tcount\tpercent\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                row.corpus_id, row.count, row.percent
            ));
        }
        out
    }

    /// Human-readable aligned table with a totals line.
    pub fn render_table(&self) -> String {
        let id_width = self
            .rows
            .iter()
            .map(|r| r.corpus_id.len())
            .chain(["corpus".len(), "total".len()])
            .max()
            .unwrap_or(0);
        let count_width = self
            .rows
            .iter()
            .map(|r| r.count.to_string().len())
            .chain([self.total.to_string().len(), "lines".len()])
            .max()
            .unwrap_or(0);
        let mut out = format!(
            "{:<id_width$}  {:>count_width$}  {:>7}\n",
            "corpus", "lines", "percent"
        );
        for row in &self.rows {
            out.push_str(&format!(
                "{:<id_width$}  {:>count_width$}  {:>6}%\n",
                row.corpus_id, row.count, row.percent
            ));
        }
        out.push_str(&format!(
            "{:<id_width$}  {:>count_width$}  {:>6}%\n",
            "total", self.total, 100
        ));
        out
    }
}

/// Per-corpus composition of a selection.
pub fn provenance_stats(selection: &Selection) -> Result<ProvenanceReport> {
    ProvenanceReport::from_corpus_ids(selection.entries().iter().map(|e| e.corpus_id()))
}

/// Counts of selection scores in `buckets` equal-width buckets spanning
/// `[min score, max score]`. When all scores are equal the first bucket
/// holds everything.
pub fn score_histogram(selection: &Selection, buckets: usize) -> Result<Vec<usize>> {
    if buckets < 1 {
        return Err(Error::Config("need at least one histogram bucket".into()));
    }
    let mut counts = vec![0usize; buckets];
    let scores: Vec<f64> = selection.entries().iter().map(|e| e.score()).collect();
    let Some((&first, rest)) = scores.split_first() else {
        return Ok(counts);
    };
    let (min, max) = rest.iter().fold((first, first), |(lo, hi), &s| {
        (lo.min(s), hi.max(s))
    });
    let width = max - min;
    for &s in &scores {
        let idx = if width == 0.0 {
            0
        } else {
            (((s - min) / width) * buckets as f64).min(buckets as f64 - 1.0) as usize
        };
        counts[idx] += 1;
    }
    Ok(counts)
}

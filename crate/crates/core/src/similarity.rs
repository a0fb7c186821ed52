//! Query-document scoring and ranking.
//!
//! Two scorers are available. [`Scorer::Cosine`] compares TF-IDF weight
//! vectors; [`Scorer::Set`] compares distinct-term sets as
//! `|X ∩ Y| / (|X|^½ · |Y|^½)`, which is the cosine of the 0/1 incidence
//! vectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::exec::ExecMode;
use crate::index::{Index, QueryTerms, QueryVector, TermId};

/// Sparse weight vector with entries sorted by term id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    entries: Vec<(TermId, f64)>,
}

impl SparseVector {
    /// Builds from arbitrary `(term, weight)` pairs; repeated terms are summed.
    pub fn new(entries: impl IntoIterator<Item = (TermId, f64)>) -> Self {
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_by_key(|&(t, _)| t);
        let mut merged: Vec<(TermId, f64)> = Vec::with_capacity(entries.len());
        for (t, w) in entries {
            match merged.last_mut() {
                Some((last, acc)) if *last == t => *acc += w,
                _ => merged.push((t, w)),
            }
        }
        Self { entries: merged }
    }

    pub(crate) fn from_sorted(entries: Vec<(TermId, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Self { entries }
    }

    pub fn entries(&self) -> &[(TermId, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, term: TermId) -> f64 {
        self.entries
            .binary_search_by_key(&term, |&(t, _)| t)
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    /// Sum of squared weights, accumulated in term order.
    pub fn norm(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, &(_, w)| acc + w * w).sqrt()
    }

    /// Dot product, accumulated over shared terms in ascending term order.
    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut i, mut j) = (0, 0);
        let mut acc = 0.0;
        while i < self.entries.len() && j < other.entries.len() {
            let (ta, wa) = self.entries[i];
            let (tb, wb) = other.entries[j];
            match ta.cmp(&tb) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    acc += wa * wb;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn scaled(&self, factor: f64) -> SparseVector {
        Self {
            entries: self.entries.iter().map(|&(t, w)| (t, w * factor)).collect(),
        }
    }
}

/// Distinct term ids, sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TermSet {
    ids: Vec<TermId>,
}

impl TermSet {
    pub fn new(ids: impl IntoIterator<Item = TermId>) -> Self {
        let mut ids: Vec<_> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        Self { ids }
    }

    pub fn ids(&self) -> &[TermId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn intersection_len(&self, other: &TermSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.ids.len() && j < other.ids.len() {
            match self.ids[i].cmp(&other.ids[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

/// `dot(x, y) / (‖x‖·‖y‖)`, or 0 when either vector is zero.
pub fn cosine_similarity(x: &SparseVector, y: &SparseVector) -> f64 {
    cosine_from_parts(x.dot(y), x.norm(), y.norm())
}

/// `|X ∩ Y| / (|X|^½ · |Y|^½)`, or 0 when either set is empty. The
/// denominator is taken as `sqrt(|X|·|Y|)`, which is exact for equal sets.
pub fn set_similarity(x: &TermSet, y: &TermSet) -> f64 {
    overlap_from_parts(x.intersection_len(y), x.len(), y.len())
}

fn cosine_from_parts(dot: f64, norm_x: f64, norm_y: f64) -> f64 {
    if norm_x == 0.0 || norm_y == 0.0 {
        return 0.0;
    }
    (dot / (norm_x * norm_y)).clamp(0.0, 1.0)
}

fn overlap_from_parts(shared: usize, len_x: usize, len_y: usize) -> f64 {
    if len_x == 0 || len_y == 0 {
        return 0.0;
    }
    (shared as f64 / ((len_x as f64) * (len_y as f64)).sqrt()).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Scorer {
    #[default]
    Cosine,
    Set,
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scorer::Cosine => "cosine",
            Scorer::Set => "set",
        })
    }
}

impl FromStr for Scorer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cosine" => Ok(Scorer::Cosine),
            "set" => Ok(Scorer::Set),
            other => Err(format!("unknown scorer `{other}` (expected cosine or set)")),
        }
    }
}

/// A query prepared against one index.
#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    Weighted(QueryVector),
    Terms(QueryTerms),
}

impl Query {
    pub fn scorer(&self) -> Scorer {
        match self {
            Query::Weighted(_) => Scorer::Cosine,
            Query::Terms(_) => Scorer::Set,
        }
    }

    pub fn dropped_terms(&self) -> &[String] {
        match self {
            Query::Weighted(q) => &q.dropped_terms,
            Query::Terms(q) => &q.dropped_terms,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Query::Weighted(q) => q.vector.is_empty(),
            Query::Terms(q) => q.set.is_empty(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankParams {
    /// Only scores strictly above this are kept.
    pub threshold: f64,
    pub top_k: Option<usize>,
}

impl Default for RankParams {
    fn default() -> Self {
        Self {
            threshold: 0.0,
            top_k: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SearchParams {
    pub scorer: Scorer,
    pub rank: RankParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hit {
    pub rank: usize,
    pub case_id: String,
    pub title: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedResults {
    pub scorer: Scorer,
    pub threshold: f64,
    pub hits: Vec<Hit>,
    /// Matches above the threshold before `top_k` truncation.
    pub total_matches: usize,
    pub dropped_terms: Vec<String>,
    /// Set when nothing in the query could be scored, as opposed to a
    /// scorable query that matched nothing.
    pub empty_query: bool,
}

impl RankedResults {
    pub fn top(&self) -> Option<&Hit> {
        self.hits.first()
    }

    pub fn top_score(&self) -> f64 {
        self.top().map_or(0.0, |h| h.score)
    }
}

impl Index {
    pub fn prepare_query(&self, text: &str, scorer: Scorer) -> Query {
        let tokens = self.tokenize(text);
        match scorer {
            Scorer::Cosine => Query::Weighted(self.vectorize_query(&tokens)),
            Scorer::Set => Query::Terms(self.query_terms(&tokens)),
        }
    }

    pub fn search(&self, text: &str, params: &SearchParams) -> RankedResults {
        rank(self, &self.prepare_query(text, params.scorer), &params.rank)
    }
}

/// Scores every document reachable through the postings of the query's
/// terms, keeps scores above the threshold and orders them by descending
/// score, then ascending case id.
pub fn rank(index: &Index, query: &Query, params: &RankParams) -> RankedResults {
    let scored = match query {
        Query::Weighted(q) => score_weighted(index, q),
        Query::Terms(q) => score_terms(index, q),
    };
    let mut matches: Vec<(u32, f64)> = scored
        .into_iter()
        .filter(|&(_, s)| s > params.threshold)
        .collect();
    matches.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| index.doc_at(a.0).case_id().cmp(index.doc_at(b.0).case_id()))
    });
    let total_matches = matches.len();
    if let Some(k) = params.top_k {
        matches.truncate(k);
    }
    let hits = matches
        .into_iter()
        .enumerate()
        .map(|(i, (doc, score))| {
            let d = index.doc_at(doc);
            Hit {
                rank: i + 1,
                case_id: d.case_id().to_owned(),
                title: d.title().to_owned(),
                score,
            }
        })
        .collect();
    RankedResults {
        scorer: query.scorer(),
        threshold: params.threshold,
        hits,
        total_matches,
        dropped_terms: query.dropped_terms().to_vec(),
        empty_query: query.is_empty(),
    }
}

/// Ranks a batch of queries, fanning out across threads in parallel mode.
pub fn rank_batch(
    index: &Index,
    queries: &[Query],
    params: &RankParams,
    exec: ExecMode,
) -> Vec<RankedResults> {
    exec.map(queries, |q| rank(index, q, params))
}

// Accumulation visits query terms in ascending id order so each document's
// dot product sums in the same order as `SparseVector::dot`.
fn score_weighted(index: &Index, query: &QueryVector) -> Vec<(u32, f64)> {
    let query_norm = query.vector.norm();
    if query_norm == 0.0 {
        return Vec::new();
    }
    let mut acc = vec![0.0f64; index.corpus_size()];
    let mut touched: Vec<u32> = Vec::new();
    let mut seen = vec![false; index.corpus_size()];
    for &(term, qw) in query.vector.entries() {
        for p in index.postings(term) {
            let slot = p.doc as usize;
            if !seen[slot] {
                seen[slot] = true;
                touched.push(p.doc);
            }
            acc[slot] += qw * p.weight;
        }
    }
    touched
        .into_iter()
        .map(|doc| {
            let d = index.doc_at(doc);
            (doc, cosine_from_parts(acc[doc as usize], query_norm, d.norm()))
        })
        .collect()
}

fn score_terms(index: &Index, query: &QueryTerms) -> Vec<(u32, f64)> {
    if query.set.is_empty() {
        return Vec::new();
    }
    let mut shared = vec![0usize; index.corpus_size()];
    let mut touched: Vec<u32> = Vec::new();
    for &term in query.set.ids() {
        for p in index.postings(term) {
            let slot = p.doc as usize;
            if shared[slot] == 0 {
                touched.push(p.doc);
            }
            shared[slot] += 1;
        }
    }
    touched
        .into_iter()
        .map(|doc| {
            let d = index.doc_at(doc);
            (
                doc,
                overlap_from_parts(shared[doc as usize], query.set.len(), d.distinct_terms()),
            )
        })
        .collect()
}

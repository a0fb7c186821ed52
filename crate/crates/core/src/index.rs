//! TF-IDF vector space over a case corpus.
//!
//! Term frequency is a term's count divided by the document's token total,
//! idf is `log10(|D| / df)`, and a weight is their product. Weights are
//! computed once at build time and stored in both the per-document vectors
//! and the inverted postings.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::preprocess::{tokenize, PreprocessConfig, TokenList};
use crate::similarity::SparseVector;

pub type TermId = u32;

/// One stored case: a title (the problem description) and an optional
/// solution payload that Reuse hands back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub id: String,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, String>,
}

impl Case {
    pub fn new(id: impl Into<String>, title: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            title: title.into(),
            solution: None,
            meta: BTreeMap::new(),
        }
    }

    pub fn with_solution(mut self, solution: impl Into<String>) -> Self {
        self.solution = Some(solution.into());
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TfMode {
    /// count / token_total
    #[default]
    Normalized,
    /// bare count
    RawCount,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdfBase {
    #[default]
    Log10,
    Natural,
}

/// TF and IDF variants. Cosine scores do not depend on either choice; the
/// alternatives exist so that property can be checked.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weighting {
    pub tf: TfMode,
    pub idf_base: IdfBase,
}

impl Weighting {
    pub fn tf(&self, count: u32, token_total: u32) -> f64 {
        match self.tf {
            TfMode::Normalized => f64::from(count) / f64::from(token_total),
            TfMode::RawCount => f64::from(count),
        }
    }

    pub fn idf(&self, corpus_size: usize, document_frequency: u32) -> f64 {
        let ratio = corpus_size as f64 / f64::from(document_frequency);
        match self.idf_base {
            IdfBase::Log10 => ratio.log10(),
            IdfBase::Natural => ratio.ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub weighting: Weighting,
    pub exec: ExecMode,
}

/// Term table with document frequencies. Ids are dense and assigned in
/// first-occurrence order over the corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    lookup: HashMap<String, TermId>,
    doc_freq: Vec<u32>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_id(&self, term: &str) -> Option<TermId> {
        self.lookup.get(term).copied()
    }

    pub fn term(&self, id: TermId) -> Option<&str> {
        self.terms.get(id as usize).map(String::as_str)
    }

    pub fn document_frequency(&self, id: TermId) -> u32 {
        self.doc_freq.get(id as usize).copied().unwrap_or(0)
    }

    /// `(term_id, term, document_frequency)` in id order.
    pub fn iter(&self) -> impl Iterator<Item = (TermId, &str, u32)> + '_ {
        self.terms
            .iter()
            .zip(&self.doc_freq)
            .enumerate()
            .map(|(i, (t, &df))| (i as TermId, t.as_str(), df))
    }

    fn intern(&mut self, term: &str) -> TermId {
        if let Some(&id) = self.lookup.get(term) {
            return id;
        }
        let id = self.terms.len() as TermId;
        self.terms.push(term.to_owned());
        self.lookup.insert(term.to_owned(), id);
        id
    }

    pub(crate) fn from_terms(terms: Vec<String>) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if lookup.insert(t.clone(), i as TermId).is_some() {
                return Err(Error::CorruptIndex(format!("term `{t}` listed twice")));
            }
        }
        Ok(Self {
            doc_freq: vec![0; terms.len()],
            terms,
            lookup,
        })
    }
}

/// Weighted bag-of-words for one indexed case.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentVector {
    pub(crate) case_id: String,
    pub(crate) title: String,
    pub(crate) token_total: u32,
    pub(crate) counts: Vec<(TermId, u32)>,
    pub(crate) weights: SparseVector,
    pub(crate) norm: f64,
}

impl DocumentVector {
    pub fn case_id(&self) -> &str {
        &self.case_id
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn token_total(&self) -> u32 {
        self.token_total
    }

    /// Raw counts sorted by term id.
    pub fn counts(&self) -> &[(TermId, u32)] {
        &self.counts
    }

    pub fn count(&self, term: TermId) -> u32 {
        self.counts
            .binary_search_by_key(&term, |&(t, _)| t)
            .map(|i| self.counts[i].1)
            .unwrap_or(0)
    }

    pub fn weights(&self) -> &SparseVector {
        &self.weights
    }

    /// L2 norm of the weight vector.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn distinct_terms(&self) -> usize {
        self.counts.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Posting {
    /// Ordinal of the document within the index.
    pub doc: u32,
    pub weight: f64,
}

/// Raw per-document data from which everything else is derived.
#[derive(Debug, Clone)]
pub(crate) struct RawDoc {
    pub case_id: String,
    pub title: String,
    pub counts: Vec<(TermId, u32)>,
}

/// Immutable TF-IDF snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct Index {
    pub(crate) config: PreprocessConfig,
    pub(crate) weighting: Weighting,
    pub(crate) vocabulary: Vocabulary,
    pub(crate) idf: Vec<f64>,
    pub(crate) docs: Vec<DocumentVector>,
    pub(crate) postings: Vec<Vec<Posting>>,
    by_id: HashMap<String, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedCase {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub indexed: usize,
    pub skipped: Vec<SkippedCase>,
    pub vocabulary_size: usize,
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cases indexed: {}", self.indexed)?;
        writeln!(f, "cases skipped: {}", self.skipped.len())?;
        writeln!(f, "vocabulary size: {}", self.vocabulary_size)?;
        for s in &self.skipped {
            writeln!(f, "warning: skipped case `{}`: {}", s.id, s.reason)?;
        }
        Ok(())
    }
}

pub fn build_index(cases: &[Case], config: &PreprocessConfig) -> Result<(Index, IngestReport)> {
    build_index_with(cases, config, &BuildOptions::default())
}

pub fn build_index_with(
    cases: &[Case],
    config: &PreprocessConfig,
    options: &BuildOptions,
) -> Result<(Index, IngestReport)> {
    check_ids(cases)?;

    let token_lists = options.exec.map(cases, |c| tokenize(&c.title, config));

    let mut vocabulary = Vocabulary::default();
    let mut raw = Vec::with_capacity(cases.len());
    let mut skipped = Vec::new();
    for (case, tokens) in cases.iter().zip(&token_lists) {
        if tokens.is_empty() {
            skipped.push(SkippedCase {
                id: case.id.clone(),
                reason: "title tokenizes to empty".into(),
            });
            continue;
        }
        let ids: Vec<TermId> = tokens.iter().map(|t| vocabulary.intern(t)).collect();
        raw.push(RawDoc {
            case_id: case.id.clone(),
            title: case.title.clone(),
            counts: count_terms(ids),
        });
    }
    if raw.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let index = Index::assemble(config.clone(), options.weighting, vocabulary, raw, options.exec);
    let report = IngestReport {
        indexed: index.corpus_size(),
        skipped,
        vocabulary_size: index.vocabulary.len(),
    };
    Ok((index, report))
}

pub(crate) fn check_ids(cases: &[Case]) -> Result<()> {
    let mut seen = HashSet::with_capacity(cases.len());
    for c in cases {
        if c.id.is_empty() {
            return Err(Error::EmptyId);
        }
        if !seen.insert(c.id.as_str()) {
            return Err(Error::DuplicateId(c.id.clone()));
        }
    }
    Ok(())
}

fn count_terms(mut ids: Vec<TermId>) -> Vec<(TermId, u32)> {
    ids.sort_unstable();
    let mut counts: Vec<(TermId, u32)> = Vec::new();
    for id in ids {
        match counts.last_mut() {
            Some((t, c)) if *t == id => *c += 1,
            _ => counts.push((id, 1)),
        }
    }
    counts
}

impl Index {
    /// Derives document frequencies, idf, weights, norms and postings from
    /// raw counts. `vocabulary` frequencies are overwritten.
    pub(crate) fn assemble(
        config: PreprocessConfig,
        weighting: Weighting,
        mut vocabulary: Vocabulary,
        raw: Vec<RawDoc>,
        exec: ExecMode,
    ) -> Index {
        let corpus_size = raw.len();
        let mut doc_freq = vec![0u32; vocabulary.len()];
        for doc in &raw {
            for &(t, _) in &doc.counts {
                doc_freq[t as usize] += 1;
            }
        }
        let idf: Vec<f64> = doc_freq
            .iter()
            .map(|&df| weighting.idf(corpus_size, df))
            .collect();
        vocabulary.doc_freq = doc_freq;

        let docs: Vec<DocumentVector> = exec.map(&raw, |doc| {
            let token_total: u32 = doc.counts.iter().map(|&(_, c)| c).sum();
            let weights = SparseVector::from_sorted(
                doc.counts
                    .iter()
                    .map(|&(t, c)| (t, weighting.tf(c, token_total) * idf[t as usize]))
                    .collect(),
            );
            let norm = weights.norm();
            DocumentVector {
                case_id: doc.case_id.clone(),
                title: doc.title.clone(),
                token_total,
                counts: doc.counts.clone(),
                weights,
                norm,
            }
        });

        let mut postings = vec![Vec::new(); vocabulary.len()];
        for (ordinal, doc) in docs.iter().enumerate() {
            for &(t, w) in doc.weights.entries() {
                postings[t as usize].push(Posting {
                    doc: ordinal as u32,
                    weight: w,
                });
            }
        }

        let by_id = docs
            .iter()
            .enumerate()
            .map(|(i, d)| (d.case_id.clone(), i as u32))
            .collect();

        Index {
            config,
            weighting,
            vocabulary,
            idf,
            docs,
            postings,
            by_id,
        }
    }

    pub fn config(&self) -> &PreprocessConfig {
        &self.config
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    /// |D|, the number of indexed documents.
    pub fn corpus_size(&self) -> usize {
        self.docs.len()
    }

    pub fn documents(&self) -> &[DocumentVector] {
        &self.docs
    }

    pub fn document(&self, case_id: &str) -> Option<&DocumentVector> {
        self.by_id.get(case_id).map(|&i| &self.docs[i as usize])
    }

    pub(crate) fn doc_at(&self, ordinal: u32) -> &DocumentVector {
        &self.docs[ordinal as usize]
    }

    pub fn postings(&self, term: TermId) -> &[Posting] {
        self.postings
            .get(term as usize)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn idf_by_id(&self, term: TermId) -> Option<f64> {
        self.idf.get(term as usize).copied()
    }

    pub fn tokenize(&self, text: &str) -> TokenList {
        tokenize(text, &self.config)
    }

    fn lookup_doc(&self, case_id: &str) -> Result<&DocumentVector> {
        self.document(case_id)
            .ok_or_else(|| Error::UnknownCase(case_id.to_owned()))
    }

    /// TF component of `term` in a document: 0 when the document lacks it.
    pub fn term_frequency(&self, term: &str, case_id: &str) -> Result<f64> {
        let doc = self.lookup_doc(case_id)?;
        Ok(match self.vocabulary.term_id(term) {
            Some(t) => match doc.count(t) {
                0 => 0.0,
                c => self.weighting.tf(c, doc.token_total),
            },
            None => 0.0,
        })
    }

    /// `log(|D| / df)`. Terms never seen in the corpus have no idf.
    pub fn inverse_document_frequency(&self, term: &str) -> Result<f64> {
        self.vocabulary
            .term_id(term)
            .map(|t| self.idf[t as usize])
            .ok_or_else(|| Error::TermNotIndexed(term.to_owned()))
    }

    /// Stored TF-IDF weight of `term` in a document.
    pub fn tfidf_weight(&self, term: &str, case_id: &str) -> Result<f64> {
        let doc = self.lookup_doc(case_id)?;
        let t = self
            .vocabulary
            .term_id(term)
            .ok_or_else(|| Error::TermNotIndexed(term.to_owned()))?;
        Ok(doc.weights.get(t))
    }

    /// Weights query tokens the same way documents are weighted: TF over
    /// the query's own tokens times the corpus idf. Unknown terms and
    /// terms with zero idf are reported in `dropped_terms`.
    pub fn vectorize_query(&self, tokens: &TokenList) -> QueryVector {
        let token_total = tokens.len() as u32;
        let mut counts: BTreeMap<TermId, u32> = BTreeMap::new();
        let mut dropped: Vec<String> = Vec::new();
        for tok in tokens {
            match self.vocabulary.term_id(tok) {
                Some(t) if self.idf[t as usize] > 0.0 => *counts.entry(t).or_default() += 1,
                _ => dropped.push(tok.clone()),
            }
        }
        dropped.sort_unstable();
        dropped.dedup();
        let vector = SparseVector::from_sorted(
            counts
                .into_iter()
                .map(|(t, c)| (t, self.weighting.tf(c, token_total) * self.idf[t as usize]))
                .collect(),
        );
        QueryVector {
            vector,
            dropped_terms: dropped,
        }
    }

    /// Distinct in-vocabulary terms of the query, for the set-overlap
    /// scorer. Only unknown terms are dropped.
    pub fn query_terms(&self, tokens: &TokenList) -> QueryTerms {
        let mut ids = Vec::new();
        let mut dropped = Vec::new();
        for tok in tokens {
            match self.vocabulary.term_id(tok) {
                Some(t) => ids.push(t),
                None => dropped.push(tok.clone()),
            }
        }
        dropped.sort_unstable();
        dropped.dedup();
        QueryTerms {
            set: crate::similarity::TermSet::new(ids),
            dropped_terms: dropped,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryVector {
    pub vector: SparseVector,
    /// Sorted, deduplicated.
    pub dropped_terms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryTerms {
    pub set: crate::similarity::TermSet,
    pub dropped_terms: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_doc() -> Index {
        let cases = [Case::new("d1", "a b"), Case::new("d2", "a c"), Case::new("d3", "b c")];
        build_index(&cases, &PreprocessConfig::default()).unwrap().0
    }

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn three_doc_frequencies_and_idf() {
        let idx = three_doc();
        assert_eq!(idx.corpus_size(), 3);
        for term in ["a", "b", "c"] {
            let id = idx.vocabulary().term_id(term).unwrap();
            assert_eq!(idx.vocabulary().document_frequency(id), 2);
            assert!(approx(idx.inverse_document_frequency(term).unwrap(), 0.176_091_259_055_681_24));
        }
    }

    #[test]
    fn term_ids_follow_first_occurrence() {
        let idx = three_doc();
        let order: Vec<_> = idx.vocabulary().iter().map(|(_, t, _)| t.to_owned()).collect();
        assert_eq!(order, ["a", "b", "c"]);
    }

    #[test]
    fn term_in_every_document_has_zero_weight() {
        let cases = [Case::new("d1", "a"), Case::new("d2", "a")];
        let (idx, _) = build_index(&cases, &PreprocessConfig::default()).unwrap();
        assert_eq!(idx.inverse_document_frequency("a").unwrap(), 0.0);
        assert_eq!(idx.tfidf_weight("a", "d1").unwrap(), 0.0);
        assert_eq!(idx.document("d2").unwrap().norm(), 0.0);
    }

    #[test]
    fn empty_titles_are_skipped_with_report() {
        let cases = [Case::new("d1", ""), Case::new("d2", "x")];
        let (idx, report) = build_index(&cases, &PreprocessConfig::default()).unwrap();
        assert_eq!(idx.corpus_size(), 1);
        assert!(idx.document("d1").is_none());
        assert_eq!(report.indexed, 1);
        assert_eq!(report.skipped.len(), 1);
        assert_eq!(report.skipped[0].id, "d1");
        assert!(report.to_string().contains("warning: skipped case `d1`"));
    }

    #[test]
    fn build_errors() {
        let cfg = PreprocessConfig::default();
        let dup = [Case::new("x", "a"), Case::new("x", "b")];
        assert!(matches!(build_index(&dup, &cfg), Err(Error::DuplicateId(id)) if id == "x"));
        let empty = [Case::new("x", "?!")];
        assert!(matches!(build_index(&empty, &cfg), Err(Error::EmptyCorpus)));
        assert!(matches!(build_index(&[], &cfg), Err(Error::EmptyCorpus)));
        assert!(matches!(build_index(&[Case::new("", "a")], &cfg), Err(Error::EmptyId)));
    }

    #[test]
    fn term_frequency_examples() {
        let cases = [Case::new("x", "a b a"), Case::new("y", "a"), Case::new("z", "q")];
        let (idx, _) = build_index(&cases, &PreprocessConfig::default()).unwrap();
        assert!(approx(idx.term_frequency("a", "x").unwrap(), 2.0 / 3.0));
        assert_eq!(idx.term_frequency("z", "x").unwrap(), 0.0);
        assert_eq!(idx.term_frequency("q", "x").unwrap(), 0.0);
        assert_eq!(idx.term_frequency("a", "y").unwrap(), 1.0);
        assert!(matches!(idx.term_frequency("a", "nope"), Err(Error::UnknownCase(_))));
    }

    #[test]
    fn idf_of_unknown_term() {
        let idx = three_doc();
        assert!(matches!(
            idx.inverse_document_frequency("zzz"),
            Err(Error::TermNotIndexed(t)) if t == "zzz"
        ));
    }

    #[test]
    fn weight_is_tf_times_idf() {
        let idx = three_doc();
        let w = idx.tfidf_weight("a", "d1").unwrap();
        assert!(approx(w, 0.5 * 1.5f64.log10()));
        assert_eq!(
            w,
            idx.term_frequency("a", "d1").unwrap() * idx.inverse_document_frequency("a").unwrap()
        );
        assert_eq!(idx.tfidf_weight("c", "d1").unwrap(), 0.0);
    }

    #[test]
    fn postings_list_exactly_containing_docs() {
        let idx = three_doc();
        let a = idx.vocabulary().term_id("a").unwrap();
        let docs: Vec<_> = idx.postings(a).iter().map(|p| idx.doc_at(p.doc).case_id()).collect();
        assert_eq!(docs, ["d1", "d2"]);
    }

    #[test]
    fn query_vector_drops_unknown_terms() {
        let idx = three_doc();
        let q = idx.vectorize_query(&idx.tokenize("zzz"));
        assert!(q.vector.is_empty());
        assert_eq!(q.dropped_terms, ["zzz"]);

        let q = idx.vectorize_query(&idx.tokenize("a zzz"));
        let a = idx.vocabulary().term_id("a").unwrap();
        assert_eq!(q.vector.entries().len(), 1);
        assert_eq!(q.vector.entries()[0].0, a);
        assert!(approx(q.vector.get(a), 0.5 * 1.5f64.log10()));
        assert_eq!(q.dropped_terms, ["zzz"]);
    }

    #[test]
    fn query_vector_drops_zero_idf_terms() {
        let cases = [Case::new("d1", "a b"), Case::new("d2", "a c")];
        let (idx, _) = build_index(&cases, &PreprocessConfig::default()).unwrap();
        let q = idx.vectorize_query(&idx.tokenize("a b"));
        assert_eq!(q.dropped_terms, ["a"]);
        assert_eq!(q.vector.entries().len(), 1);
    }

    #[test]
    fn own_title_query_is_parallel_to_document() {
        let idx = three_doc();
        let q = idx.vectorize_query(&idx.tokenize("a b"));
        assert_eq!(&q.vector, idx.document("d1").unwrap().weights());
    }

    #[test]
    fn sequential_and_parallel_builds_match() {
        let cases: Vec<Case> = (0..500)
            .map(|i| Case::new(format!("c{i}"), format!("w{} w{} w{}", i % 7, i % 11, i % 13)))
            .collect();
        let cfg = PreprocessConfig::default();
        let seq = build_index_with(
            &cases,
            &cfg,
            &BuildOptions { exec: ExecMode::Sequential, ..Default::default() },
        )
        .unwrap();
        let par = build_index_with(
            &cases,
            &cfg,
            &BuildOptions { exec: ExecMode::Parallel, ..Default::default() },
        )
        .unwrap();
        assert_eq!(seq, par);
    }
}

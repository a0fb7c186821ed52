//! The retrieve / reuse / revise / retain cycle over a TF-IDF index.
//!
//! A [`CaseBase`] is a value: `revise` and `retain` return a new base with a
//! freshly built index and leave the original untouched. Adding or editing
//! one case changes |D| or document frequencies, so every idf and weight is
//! recomputed rather than patched.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::index::{build_index_with, BuildOptions, Case, Index, IngestReport};
use crate::preprocess::{tokenize, PreprocessConfig};
use crate::similarity::{Hit, RankedResults, SearchParams};

#[derive(Debug, Clone)]
pub struct CaseBase {
    cases: Vec<Case>,
    index: Option<Arc<Index>>,
    config: PreprocessConfig,
    options: BuildOptions,
}

/// Result of the retrieve phase: the ranking plus the full record of the
/// best-ranked case.
#[derive(Debug, Clone)]
pub struct RetrievalOutcome {
    pub results: RankedResults,
    pub top_case: Option<Case>,
}

/// A proposed solution taken from the best retrieved case.
#[derive(Debug, Clone, PartialEq)]
pub struct Reuse {
    pub case_id: String,
    pub payload: String,
    pub score: f64,
    /// The case had no stored solution, so `payload` is its title.
    pub title_only: bool,
}

/// Field edits for [`CaseBase::revise`]. `None` leaves a field unchanged.
#[derive(Debug, Clone, Default)]
pub struct CaseEdit {
    /// Must equal the revised case's id if given.
    pub id: Option<String>,
    pub title: Option<String>,
    pub solution: Option<Option<String>>,
    pub meta: Option<BTreeMap<String, String>>,
}

impl CaseBase {
    pub fn empty(config: PreprocessConfig) -> Self {
        Self {
            cases: Vec::new(),
            index: None,
            config,
            options: BuildOptions::default(),
        }
    }

    pub fn new(cases: Vec<Case>, config: PreprocessConfig) -> Result<(Self, IngestReport)> {
        Self::with_options(cases, config, BuildOptions::default())
    }

    pub fn with_options(
        cases: Vec<Case>,
        config: PreprocessConfig,
        options: BuildOptions,
    ) -> Result<(Self, IngestReport)> {
        let (index, report) = build_index_with(&cases, &config, &options)?;
        let cb = Self {
            cases,
            index: Some(Arc::new(index)),
            config,
            options,
        };
        Ok((cb, report))
    }

    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    pub fn case(&self, id: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.id == id)
    }

    /// Current snapshot; `None` only for a base with no cases.
    pub fn index(&self) -> Option<&Arc<Index>> {
        self.index.as_ref()
    }

    pub fn config(&self) -> &PreprocessConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn retrieve(&self, query_text: &str, params: &SearchParams) -> Result<RetrievalOutcome> {
        let index = self.index.as_ref().ok_or(Error::EmptyCaseBase)?;
        let results = index.search(query_text, params);
        let top_case = results
            .top()
            .map(|h: &Hit| self.case(&h.case_id).cloned().expect("indexed case is stored"));
        Ok(RetrievalOutcome { results, top_case })
    }

    pub fn revise(&self, case_id: &str, edits: CaseEdit) -> Result<CaseBase> {
        let pos = self
            .cases
            .iter()
            .position(|c| c.id == case_id)
            .ok_or_else(|| Error::UnknownCase(case_id.to_owned()))?;
        if let Some(new_id) = edits.id {
            if new_id != case_id {
                return Err(Error::IdChange {
                    from: case_id.to_owned(),
                    to: new_id,
                });
            }
        }
        let mut edited = self.cases[pos].clone();
        if let Some(title) = edits.title {
            if tokenize(&title, &self.config).is_empty() {
                return Err(Error::EmptyTitle(case_id.to_owned()));
            }
            edited.title = title;
        }
        if let Some(solution) = edits.solution {
            edited.solution = solution;
        }
        if let Some(meta) = edits.meta {
            edited.meta = meta;
        }
        let mut cases = self.cases.clone();
        cases[pos] = edited;
        self.rebuilt(cases)
    }

    pub fn retain(&self, new_case: Case) -> Result<CaseBase> {
        if new_case.id.is_empty() {
            return Err(Error::EmptyId);
        }
        if self.case(&new_case.id).is_some() {
            return Err(Error::DuplicateId(new_case.id));
        }
        if tokenize(&new_case.title, &self.config).is_empty() {
            return Err(Error::EmptyTitle(new_case.id));
        }
        let mut cases = self.cases.clone();
        cases.push(new_case);
        self.rebuilt(cases)
    }

    fn rebuilt(&self, cases: Vec<Case>) -> Result<CaseBase> {
        let (index, _) = build_index_with(&cases, &self.config, &self.options)?;
        Ok(CaseBase {
            cases,
            index: Some(Arc::new(index)),
            config: self.config.clone(),
            options: self.options,
        })
    }
}

impl RetrievalOutcome {
    /// Proposes the top case's solution, falling back to its title when it
    /// has none.
    pub fn reuse(&self) -> Result<Reuse> {
        let (hit, case) = self
            .results
            .top()
            .zip(self.top_case.as_ref())
            .ok_or(Error::NothingToReuse)?;
        Ok(match &case.solution {
            Some(s) => Reuse {
                case_id: case.id.clone(),
                payload: s.clone(),
                score: hit.score,
                title_only: false,
            },
            None => Reuse {
                case_id: case.id.clone(),
                payload: case.title.clone(),
                score: hit.score,
                title_only: true,
            },
        })
    }
}

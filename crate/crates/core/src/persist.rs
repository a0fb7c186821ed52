//! On-disk index format.
//!
//! The file is a JSON document holding raw counts only. Weights, norms and
//! postings are recomputed on load and the recomputed weight table must hash
//! to the stored `weight_checksum`.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::index::{Index, RawDoc, TermId, Vocabulary, Weighting};
use crate::preprocess::PreprocessConfig;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexFile {
    format_version: u64,
    config_fingerprint: String,
    preprocess: PreprocessConfig,
    weighting: Weighting,
    corpus_size: usize,
    vocabulary: Vec<TermEntry>,
    documents: Vec<DocEntry>,
    weight_checksum: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermEntry {
    term: String,
    term_id: TermId,
    document_frequency: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocEntry {
    id: String,
    title: String,
    token_total: u32,
    counts: Vec<(TermId, u32)>,
}

/// SHA-256 over every document's `(term_id, weight bits)` pairs in order.
pub fn weight_checksum(index: &Index) -> String {
    let mut hasher = Sha256::new();
    for (ordinal, doc) in index.documents().iter().enumerate() {
        hasher.update((ordinal as u64).to_le_bytes());
        hasher.update((doc.weights().len() as u64).to_le_bytes());
        for &(t, w) in doc.weights().entries() {
            hasher.update(t.to_le_bytes());
            hasher.update(w.to_bits().to_le_bytes());
        }
    }
    hex::encode(hasher.finalize())
}

impl Index {
    pub fn to_json(&self) -> String {
        let file = IndexFile {
            format_version: FORMAT_VERSION,
            config_fingerprint: self.config.fingerprint(),
            preprocess: self.config.clone(),
            weighting: self.weighting,
            corpus_size: self.corpus_size(),
            vocabulary: self
                .vocabulary
                .iter()
                .map(|(term_id, term, document_frequency)| TermEntry {
                    term: term.to_owned(),
                    term_id,
                    document_frequency,
                })
                .collect(),
            documents: self
                .docs
                .iter()
                .map(|d| DocEntry {
                    id: d.case_id.clone(),
                    title: d.title.clone(),
                    token_total: d.token_total,
                    counts: d.counts.clone(),
                })
                .collect(),
            weight_checksum: weight_checksum(self),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("index serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Index> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::CorruptIndex(e.to_string()))?;
        let version = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::CorruptIndex("missing format_version".into()))?;
        if version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion {
                found: version,
                supported: FORMAT_VERSION,
            });
        }
        let file: IndexFile =
            serde_json::from_value(value).map_err(|e| Error::CorruptIndex(e.to_string()))?;
        decode(file)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let write_err = |source| Error::Write {
            path: path.to_owned(),
            source,
        };
        let mut f = fs::File::create(path).map_err(write_err)?;
        f.write_all(self.to_json().as_bytes()).map_err(write_err)?;
        f.sync_all().map_err(write_err)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Index> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_owned(),
            source,
        })?;
        Index::from_json(&text)
    }
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::CorruptIndex(msg.into())
}

fn decode(file: IndexFile) -> Result<Index> {
    let config = PreprocessConfig::new(
        file.preprocess.casefold(),
        file.preprocess.stopwords().iter().cloned(),
        file.preprocess.min_token_length(),
    )
    .map_err(|e| corrupt(e.to_string()))?;
    if config != file.preprocess {
        return Err(corrupt("stopwords are not in normalized form"));
    }
    if config.fingerprint() != file.config_fingerprint {
        return Err(corrupt("preprocess config does not match its fingerprint"));
    }
    if file.corpus_size != file.documents.len() {
        return Err(corrupt(format!(
            "corpus_size {} but {} documents",
            file.corpus_size,
            file.documents.len()
        )));
    }
    if file.documents.is_empty() {
        return Err(corrupt("no documents"));
    }

    let mut terms = Vec::with_capacity(file.vocabulary.len());
    for (i, entry) in file.vocabulary.iter().enumerate() {
        if entry.term_id as usize != i {
            return Err(corrupt(format!("term ids not dense at position {i}")));
        }
        terms.push(entry.term.clone());
    }
    let vocab_len = terms.len();
    let vocabulary = Vocabulary::from_terms(terms)?;

    let mut raw = Vec::with_capacity(file.documents.len());
    let mut ids = std::collections::HashSet::new();
    for doc in file.documents {
        if doc.id.is_empty() || !ids.insert(doc.id.clone()) {
            return Err(corrupt(format!("bad or repeated document id `{}`", doc.id)));
        }
        if doc.counts.is_empty() {
            return Err(corrupt(format!("document `{}` has no terms", doc.id)));
        }
        let ordered = doc.counts.windows(2).all(|w| w[0].0 < w[1].0);
        let in_range = doc.counts.iter().all(|&(t, c)| (t as usize) < vocab_len && c > 0);
        if !ordered || !in_range {
            return Err(corrupt(format!("document `{}` has malformed counts", doc.id)));
        }
        let total: u64 = doc.counts.iter().map(|&(_, c)| u64::from(c)).sum();
        if total != u64::from(doc.token_total) {
            return Err(corrupt(format!(
                "document `{}` token_total {} but counts sum to {total}",
                doc.id, doc.token_total
            )));
        }
        raw.push(RawDoc {
            case_id: doc.id,
            title: doc.title,
            counts: doc.counts,
        });
    }

    let index = Index::assemble(config, file.weighting, vocabulary, raw, ExecMode::default());

    for entry in &file.vocabulary {
        let df = index.vocabulary().document_frequency(entry.term_id);
        if df != entry.document_frequency {
            return Err(corrupt(format!(
                "term `{}` stores document_frequency {} but appears in {df} documents",
                entry.term, entry.document_frequency
            )));
        }
    }

    let computed = weight_checksum(&index);
    if computed != file.weight_checksum {
        return Err(Error::ChecksumMismatch {
            stored: file.weight_checksum,
            computed,
        });
    }
    Ok(index)
}

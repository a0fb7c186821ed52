//! Text normalization shared by titles and queries.
//!
//! A token is a maximal run of Unicode letters or digits. Every other
//! character separates tokens. Pieces are lowercased with the simple
//! (one-to-one) mapping, then stopwords and short pieces are dropped.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    casefold: bool,
    stopwords: BTreeSet<String>,
    min_token_length: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            casefold: true,
            stopwords: BTreeSet::new(),
            min_token_length: 1,
        }
    }
}

impl PreprocessConfig {
    pub fn new(
        casefold: bool,
        stopwords: impl IntoIterator<Item = String>,
        min_token_length: usize,
    ) -> Result<Self> {
        if min_token_length == 0 {
            return Err(Error::Config("min_token_length must be at least 1".into()));
        }
        let stopwords = stopwords
            .into_iter()
            .map(|w| if casefold { fold(&w) } else { w })
            .filter(|w| !w.is_empty())
            .collect();
        Ok(Self {
            casefold,
            stopwords,
            min_token_length,
        })
    }

    pub fn with_stopwords(self, stopwords: impl IntoIterator<Item = String>) -> Self {
        let casefold = self.casefold;
        let mut out = self;
        out.stopwords = stopwords
            .into_iter()
            .map(|w| if casefold { fold(&w) } else { w })
            .filter(|w| !w.is_empty())
            .collect();
        out
    }

    pub fn with_min_token_length(self, min_token_length: usize) -> Result<Self> {
        if min_token_length == 0 {
            return Err(Error::Config("min_token_length must be at least 1".into()));
        }
        Ok(Self {
            min_token_length,
            ..self
        })
    }

    pub fn casefold(&self) -> bool {
        self.casefold
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn min_token_length(&self) -> usize {
        self.min_token_length
    }

    /// Stable hex digest identifying this configuration. Two configs with
    /// the same fingerprint tokenize every input identically.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"casefold=");
        hasher.update([u8::from(self.casefold)]);
        hasher.update(b";min_token_length=");
        hasher.update((self.min_token_length as u64).to_le_bytes());
        hasher.update(b";stopwords=");
        for word in &self.stopwords {
            hasher.update((word.len() as u64).to_le_bytes());
            hasher.update(word.as_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

/// Preprocessed text: tokens in surface order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenList {
    tokens: Vec<String>,
}

impl TokenList {
    pub fn as_slice(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.tokens.iter()
    }

    pub fn into_vec(self) -> Vec<String> {
        self.tokens
    }

    pub fn join(&self, sep: &str) -> String {
        self.tokens.join(sep)
    }
}

impl<'a> IntoIterator for &'a TokenList {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.tokens.iter()
    }
}

// Simple lowercase mapping: `char::to_lowercase` only expands U+0130, and
// the first char of that expansion is its simple mapping.
fn fold_char(c: char) -> char {
    c.to_lowercase().next().unwrap_or(c)
}

fn fold(word: &str) -> String {
    word.chars().map(fold_char).collect()
}

pub fn tokenize(text: &str, config: &PreprocessConfig) -> TokenList {
    let tokens = text
        .split(|c: char| !c.is_alphanumeric())
        .filter(|piece| !piece.is_empty())
        .map(|piece| {
            if config.casefold {
                fold(piece)
            } else {
                piece.to_owned()
            }
        })
        .filter(|tok| tok.chars().count() >= config.min_token_length)
        .filter(|tok| !config.stopwords.contains(tok))
        .collect();
    TokenList { tokens }
}

/// Reads a newline-delimited stopword list. Blank lines and lines starting
/// with `#` are skipped; entries are casefolded and deduplicated.
pub fn load_stopwords(path: impl AsRef<Path>) -> Result<BTreeSet<String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_owned(),
        source,
    })?;
    Ok(parse_stopwords(&text))
}

pub(crate) fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(fold)
        .collect()
}

//! Two-stage word-order experiment.
//!
//! Stage 1 queries each title verbatim. Stage 2 shuffles the title's
//! whitespace-separated words and queries again. A bag-of-words ranker must
//! find the same number of titles in both stages, and a title that is stored
//! verbatim must come back with a top score of 1.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exec::ExecMode;
use crate::index::Index;
use crate::similarity::{rank_batch, Query, RankParams, Scorer};

/// Tolerance for the verbatim-title top score check.
pub const TOP_SCORE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub original_query: String,
    pub permuted_query: String,
    pub found_count_stage1: usize,
    pub found_count_stage2: usize,
    pub top_score_stage2: f64,
    /// The original title is stored verbatim in the index.
    pub in_corpus: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub seed: u64,
    pub scorer: Scorer,
    pub rows: Vec<EvalRow>,
}

impl EvalReport {
    /// Mean stage-2 top score; 0 for an empty report.
    pub fn mean_top_score(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().map(|r| r.top_score_stage2).sum::<f64>() / self.rows.len() as f64
    }

    /// Human-readable descriptions of every row that breaks the
    /// order-invariance property. Empty when the property holds.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            if row.found_count_stage1 != row.found_count_stage2 {
                out.push(format!(
                    "row {}: stage-1 found {} but stage-2 found {}",
                    i + 1,
                    row.found_count_stage1,
                    row.found_count_stage2
                ));
            }
            if row.in_corpus && (row.top_score_stage2 - 1.0).abs() > TOP_SCORE_TOLERANCE {
                out.push(format!(
                    "row {}: stored title scored {:.6} after permutation, expected 1.0",
                    i + 1,
                    row.top_score_stage2
                ));
            }
        }
        out
    }

    pub fn holds(&self) -> bool {
        self.violations().is_empty()
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed: {}", self.seed)?;
        writeln!(f, "scorer: {}", self.scorer)?;
        writeln!(f)?;
        writeln!(f, "stage 1")?;
        writeln!(f, "row\tfound\tkeyword")?;
        for (i, r) in self.rows.iter().enumerate() {
            writeln!(f, "{}\t{}\t{}", i + 1, r.found_count_stage1, r.original_query)?;
        }
        writeln!(f)?;
        writeln!(f, "stage 2")?;
        writeln!(f, "row\tfound\ttop_score\tkeyword")?;
        for (i, r) in self.rows.iter().enumerate() {
            writeln!(
                f,
                "{}\t{}\t{:.6}\t{}",
                i + 1,
                r.found_count_stage2,
                r.top_score_stage2,
                r.permuted_query
            )?;
        }
        writeln!(f)?;
        writeln!(f, "rows: {}", self.rows.len())?;
        writeln!(f, "mean top score (stage 2): {:.6}", self.mean_top_score())?;
        let violations = self.violations();
        if violations.is_empty() {
            writeln!(f, "order invariance: holds")?;
        } else {
            writeln!(f, "order invariance: VIOLATED")?;
            for v in violations {
                writeln!(f, "  {v}")?;
            }
        }
        Ok(())
    }
}

/// Shuffles the whitespace-separated words of `title`. The shuffle is
/// seeded by `seed` and uses `row` as the stream, so every row gets an
/// independent, reproducible permutation.
pub fn permute_words(title: &str, seed: u64, row: u64) -> String {
    let mut words: Vec<&str> = title.split_whitespace().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(row);
    words.shuffle(&mut rng);
    words.join(" ")
}

pub fn run_two_stage(
    index: &Index,
    titles: &[String],
    seed: u64,
    scorer: Scorer,
    exec: ExecMode,
) -> EvalReport {
    let params = RankParams::default();
    let permuted = exec.map_indexed(titles, |row, t| permute_words(t, seed, row as u64));

    let prepare = |texts: &[String]| -> Vec<Query> {
        exec.map(texts, |t| index.prepare_query(t, scorer))
    };
    let stage1 = rank_batch(index, &prepare(titles), &params, exec);
    let stage2 = rank_batch(index, &prepare(&permuted), &params, exec);

    let rows = titles
        .iter()
        .zip(permuted)
        .zip(stage1.iter().zip(&stage2))
        .map(|((original, permuted), (s1, s2))| {
            let needle = original.trim();
            EvalRow {
                in_corpus: index.documents().iter().any(|d| d.title().trim() == needle),
                original_query: original.clone(),
                permuted_query: permuted,
                found_count_stage1: s1.total_matches,
                found_count_stage2: s2.total_matches,
                top_score_stage2: s2.top_score(),
            }
        })
        .collect();

    EvalReport { seed, scorer, rows }
}

use std::collections::HashMap;

/// TF/IDF variants mirrored from the engine, restated here from the
/// formulas rather than imported.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleWeighting {
    pub raw_count_tf: bool,
    pub natural_log: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleScorer {
    Cosine,
    Set,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleHit {
    pub id: String,
    pub score: f64,
}

/// Dense document-term matrix built by direct counting.
#[derive(Debug, Clone)]
pub struct DenseOracle {
    pub ids: Vec<String>,
    pub terms: Vec<String>,
    pub term_index: HashMap<String, usize>,
    /// counts[d][t]
    pub counts: Vec<Vec<u32>>,
    pub doc_freq: Vec<u32>,
    pub idf: Vec<f64>,
    /// weights[d][t]
    pub weights: Vec<Vec<f64>>,
    weighting: OracleWeighting,
}

impl DenseOracle {
    /// Documents with no tokens are left out, as the engine does.
    pub fn build(docs: &[(String, Vec<String>)], weighting: OracleWeighting) -> Self {
        let docs: Vec<&(String, Vec<String>)> = docs.iter().filter(|(_, t)| !t.is_empty()).collect();
        let mut terms: Vec<String> = Vec::new();
        let mut term_index: HashMap<String, usize> = HashMap::new();
        for (_, tokens) in &docs {
            for tok in tokens {
                if !term_index.contains_key(tok) {
                    term_index.insert(tok.clone(), terms.len());
                    terms.push(tok.clone());
                }
            }
        }
        let v = terms.len();
        let n = docs.len();

        let mut counts = vec![vec![0u32; v]; n];
        for (d, (_, tokens)) in docs.iter().enumerate() {
            for tok in tokens {
                counts[d][term_index[tok]] += 1;
            }
        }

        let mut doc_freq = vec![0u32; v];
        for t in 0..v {
            doc_freq[t] = (0..n).filter(|&d| counts[d][t] > 0).count() as u32;
        }

        let idf: Vec<f64> = doc_freq
            .iter()
            .map(|&df| {
                let ratio = n as f64 / df as f64;
                if weighting.natural_log {
                    ratio.ln()
                } else {
                    ratio.log10()
                }
            })
            .collect();

        let weights = counts
            .iter()
            .map(|row| {
                let total: u32 = row.iter().sum();
                row.iter()
                    .enumerate()
                    .map(|(t, &c)| tf(c, total, weighting) * idf[t])
                    .collect()
            })
            .collect();

        Self {
            ids: docs.iter().map(|(id, _)| id.clone()).collect(),
            terms,
            term_index,
            counts,
            doc_freq,
            idf,
            weights,
            weighting,
        }
    }

    pub fn doc_position(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Dense query weights; unknown and zero-idf terms get weight 0.
    pub fn query_weights(&self, tokens: &[String]) -> Vec<f64> {
        let total = tokens.len() as u32;
        let mut counts = vec![0u32; self.terms.len()];
        for tok in tokens {
            if let Some(&t) = self.term_index.get(tok) {
                if self.idf[t] > 0.0 {
                    counts[t] += 1;
                }
            }
        }
        counts
            .iter()
            .enumerate()
            .map(|(t, &c)| if c == 0 { 0.0 } else { tf(c, total, self.weighting) * self.idf[t] })
            .collect()
    }

    /// Scores every document, keeps scores above `threshold`, sorts by
    /// descending score then ascending id.
    pub fn rank(&self, tokens: &[String], scorer: OracleScorer, threshold: f64) -> Vec<OracleHit> {
        let mut hits: Vec<OracleHit> = (0..self.ids.len())
            .map(|d| OracleHit {
                id: self.ids[d].clone(),
                score: match scorer {
                    OracleScorer::Cosine => dense_cosine(&self.query_weights(tokens), &self.weights[d]),
                    OracleScorer::Set => self.set_score(tokens, d),
                },
            })
            .filter(|h| h.score > threshold)
            .collect();
        hits.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.id.cmp(&b.id)));
        hits
    }

    fn set_score(&self, tokens: &[String], d: usize) -> f64 {
        let mut query: Vec<usize> = tokens.iter().filter_map(|t| self.term_index.get(t).copied()).collect();
        query.sort_unstable();
        query.dedup();
        let doc: Vec<usize> = (0..self.terms.len()).filter(|&t| self.counts[d][t] > 0).collect();
        let shared = query.iter().filter(|t| doc.contains(t)).count();
        if query.is_empty() || doc.is_empty() {
            return 0.0;
        }
        (shared as f64 / ((query.len() * doc.len()) as f64).sqrt()).clamp(0.0, 1.0)
    }
}

fn tf(count: u32, total: u32, weighting: OracleWeighting) -> f64 {
    if weighting.raw_count_tf {
        count as f64
    } else {
        count as f64 / total as f64
    }
}

/// Cosine over dense vectors, summed in index order; 0 for a zero vector.
pub fn dense_cosine(x: &[f64], y: &[f64]) -> f64 {
    let dot: f64 = x.iter().zip(y).fold(0.0, |acc, (a, b)| acc + a * b);
    let nx = x.iter().fold(0.0, |acc, a| acc + a * a).sqrt();
    let ny = y.iter().fold(0.0, |acc, b| acc + b * b).sqrt();
    if nx == 0.0 || ny == 0.0 {
        return 0.0;
    }
    (dot / (nx * ny)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, text: &str) -> (String, Vec<String>) {
        (id.into(), text.split(' ').map(str::to_owned).collect())
    }

    #[test]
    fn hand_checked_three_doc_values() {
        let o = DenseOracle::build(
            &[doc("d1", "a b"), doc("d2", "a c"), doc("d3", "b c")],
            OracleWeighting::default(),
        );
        assert_eq!(o.doc_freq, [2, 2, 2]);
        for idf in &o.idf {
            assert!((idf - 0.176_091_259_055_681_24).abs() < 1e-15);
        }
        assert!((o.weights[0][0] - 0.5 * 1.5f64.log10()).abs() < 1e-15);
        let hits = o.rank(&["a".to_string()], OracleScorer::Cosine, 0.0);
        assert_eq!(hits.iter().map(|h| h.id.as_str()).collect::<Vec<_>>(), ["d1", "d2"]);
    }

    #[test]
    fn dense_cosine_half() {
        assert!((dense_cosine(&[1.0, 1.0, 0.0], &[1.0, 0.0, 1.0]) - 0.5).abs() < 1e-15);
    }
}

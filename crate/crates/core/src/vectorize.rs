//! TF-IDF vocabulary fitting and sparse, L2-normalized document vectors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::features::{FeatureCounts, FeatureId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabEntry {
    pub col: usize,
    pub df: usize,
}

/// Column assignment and document frequencies learned from a training set.
/// Columns follow the lexicographic order of feature keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub features: BTreeMap<FeatureId, VocabEntry>,
    pub n_docs: usize,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Smoothed inverse document frequency `ln((1 + N) / (1 + df)) + 1`.
    pub fn idf(&self, df: usize) -> f64 {
        ((1.0 + self.n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
    }

    /// Hex SHA-256 over the serialized vocabulary; ties exported models to
    /// the column space they were trained on.
    pub fn checksum(&self) -> String {
        let json = serde_json::to_vec(self).expect("vocabulary serializes");
        let digest = Sha256::digest(&json);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let vocab: Vocabulary = serde_json::from_str(s)?;
        let mut cols: Vec<usize> = vocab.features.values().map(|e| e.col).collect();
        cols.sort_unstable();
        if cols.iter().enumerate().any(|(i, &c)| i != c) {
            return Err(Error::Data("vocabulary columns are not 0..n".into()));
        }
        if vocab
            .features
            .values()
            .any(|e| e.df == 0 || e.df > vocab.n_docs)
        {
            return Err(Error::Data("vocabulary df outside 1..=n_docs".into()));
        }
        Ok(vocab)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    /// `(column, weight)` pairs with strictly increasing columns.
    pub entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn new(mut entries: Vec<(usize, f64)>) -> Self {
        entries.sort_by_key(|&(c, _)| c);
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVector { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }

    /// Dot product with a dense vector; columns beyond `dense` are ignored.
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.entries
            .iter()
            .filter_map(|&(c, v)| dense.get(c).map(|w| w * v))
            .sum()
    }

    pub fn squared_norm(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v * v).sum()
    }

    /// Copy with an extra constant column.
    pub fn with_bias(&self, col: usize, value: f64) -> SparseVector {
        let mut entries = self.entries.clone();
        entries.push((col, value));
        SparseVector::new(entries)
    }

    pub fn max_col(&self) -> Option<usize> {
        self.entries.last().map(|&(c, _)| c)
    }
}

pub fn fit_tfidf(train: &[FeatureCounts]) -> Result<Vocabulary> {
    if train.is_empty() {
        return Err(Error::Data(
            "cannot fit a vocabulary on zero documents".into(),
        ));
    }
    let mut df: BTreeMap<FeatureId, usize> = BTreeMap::new();
    for doc in train {
        for (id, &n) in &doc.counts {
            if n > 0 {
                *df.entry(id.clone()).or_insert(0) += 1;
            }
        }
    }
    let features = df
        .into_iter()
        .enumerate()
        .map(|(col, (id, df))| (id, VocabEntry { col, df }))
        .collect();
    Ok(Vocabulary {
        features,
        n_docs: train.len(),
    })
}

/// Raw-count tf times smoothed idf, then divided by the Euclidean norm.
/// Features outside the vocabulary are dropped.
pub fn transform(counts: &FeatureCounts, vocab: &Vocabulary) -> SparseVector {
    let mut entries: Vec<(usize, f64)> = counts
        .counts
        .iter()
        .filter(|(_, &n)| n > 0)
        .filter_map(|(id, &n)| {
            vocab
                .features
                .get(id)
                .map(|e| (e.col, f64::from(n) * vocab.idf(e.df)))
        })
        .collect();
    // BTreeMap iteration order equals column order.
    let norm = entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (_, v) in &mut entries {
            *v /= norm;
        }
    }
    SparseVector { entries }
}

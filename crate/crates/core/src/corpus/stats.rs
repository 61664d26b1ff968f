use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Document, L1Label};
use crate::text::turkish_fold;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L1Stats {
    pub docs: usize,
    pub tokens: usize,
    /// Distinct case-folded forms over all of the L1's tokens, divided by tokens.
    pub ttr: f64,
    pub avg_words: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub rows: BTreeMap<L1Label, L1Stats>,
}

impl CorpusStats {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l1,docs,tokens,ttr,avg_words\n");
        for (l1, row) in &self.rows {
            out.push_str(&format!(
                "{l1},{},{},{:.4},{:.1}\n",
                row.docs, row.tokens, row.ttr, row.avg_words
            ));
        }
        out
    }
}

pub fn corpus_stats(documents: &[Document]) -> CorpusStats {
    let mut grouped: BTreeMap<&L1Label, (usize, usize, BTreeSet<String>)> = BTreeMap::new();
    for doc in documents {
        let (docs, tokens, types) = grouped.entry(&doc.l1).or_default();
        *docs += 1;
        *tokens += doc.token_count;
        types.extend(doc.tokens().map(|t| turkish_fold(&t.form)));
    }
    let rows = grouped
        .into_iter()
        .map(|(l1, (docs, tokens, types))| {
            let ttr = if tokens == 0 {
                0.0
            } else {
                types.len() as f64 / tokens as f64
            };
            let row = L1Stats {
                docs,
                tokens,
                ttr,
                avg_words: tokens as f64 / docs as f64,
            };
            (l1.clone(), row)
        })
        .collect();
    CorpusStats { rows }
}

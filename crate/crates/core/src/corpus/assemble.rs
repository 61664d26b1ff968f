use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{AnnotatedSentence, Document, L1Label, LearnerText};
use crate::error::{Error, Result};

/// Pool the sentences of every L1, shuffle each pool with a seeded generator
/// and pack it into documents of roughly `target_tokens` tokens.
///
/// L1 pools are processed in label order, so the output is a pure function
/// of the text order and `seed`.
pub fn assemble_documents(
    texts: &[LearnerText],
    target_tokens: usize,
    seed: u64,
) -> Result<Vec<Document>> {
    if target_tokens == 0 {
        return Err(Error::Config("target_tokens must be positive".into()));
    }

    let mut pools: BTreeMap<&L1Label, Vec<&AnnotatedSentence>> = BTreeMap::new();
    for text in texts {
        pools.entry(&text.l1).or_default().extend(&text.sentences);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut documents = Vec::new();
    for (l1, mut pool) in pools {
        if pool.is_empty() {
            return Err(Error::Data(format!("L1 `{l1}` has no sentences")));
        }
        pool.shuffle(&mut rng);
        let groups = pack_sentences(pool.iter().map(|s| s.len()), target_tokens);
        if groups.is_empty() {
            log::warn!(
                "L1 `{l1}` has fewer than {} tokens; no documents produced",
                target_tokens / 2
            );
        }
        for (i, range) in groups.into_iter().enumerate() {
            let group: Vec<AnnotatedSentence> = pool[range].iter().map(|s| (*s).clone()).collect();
            documents.push(Document::new(
                format!("{l1}-{:04}", i + 1),
                l1.clone(),
                group,
            ));
        }
    }
    Ok(documents)
}

/// Greedy packing over sentence lengths in the given order. A group closes at
/// the first sentence that brings it to at least `target` tokens; a trailing
/// group shorter than `target / 2` is dropped. Returns index ranges.
pub fn pack_sentences(
    lengths: impl IntoIterator<Item = usize>,
    target: usize,
) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    let mut tokens = 0;
    let mut end = 0;
    for (i, len) in lengths.into_iter().enumerate() {
        tokens += len;
        end = i + 1;
        if tokens >= target {
            groups.push(start..end);
            start = end;
            tokens = 0;
        }
    }
    if end > start && 2 * tokens >= target {
        groups.push(start..end);
    }
    groups
}

use nli_core::corpus::{assemble_documents, L1Label};
use nli_core::eval::{cross_validate, cross_validate_counts, CvConfig};
use nli_core::features::{FeatureCounts, FeatureId, FunctionWordLexicon};
use nli_core::svm::grid_search_c;
use nli_core::synthetic::SyntheticCorpus;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CLASSES: [&str; 5] = ["AFG", "AL", "ARA", "AZ", "IR"];

/// Five classes whose documents draw keys from disjoint pools.
fn disjoint_blobs(per_class: usize, seed: u64) -> (Vec<FeatureCounts>, Vec<L1Label>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = Vec::new();
    let mut labels = Vec::new();
    for (k, class) in CLASSES.iter().enumerate() {
        for i in 0..per_class {
            let mut c = FeatureCounts::new(format!("{class}-{i}"));
            for _ in 0..8 {
                let key = rng.gen_range(0..10);
                c.add(
                    FeatureId::from_raw(format!("x:{k}-{key}")),
                    rng.gen_range(1..4),
                );
            }
            counts.push(c);
            labels.push(L1Label::new(*class));
        }
    }
    (counts, labels)
}

#[test]
fn disjoint_blobs_are_separated() {
    let (counts, labels) = disjoint_blobs(20, 5);
    let report = cross_validate_counts(&counts, &labels, &CvConfig::default()).unwrap();
    assert!(report.accuracy >= 0.95, "accuracy {}", report.accuracy);
    assert_eq!(report.micro_f1, report.accuracy);
}

#[test]
fn shuffled_labels_fall_to_chance() {
    let (counts, mut labels) = disjoint_blobs(60, 8);
    labels.shuffle(&mut ChaCha8Rng::seed_from_u64(3));
    let report = cross_validate_counts(&counts, &labels, &CvConfig::default()).unwrap();
    // 300 documents: binomial sd around 0.023.
    assert!(
        (report.accuracy - 0.2).abs() < 0.08,
        "accuracy {}",
        report.accuracy
    );
}

#[test]
fn cross_validation_is_reproducible() {
    let texts = SyntheticCorpus {
        texts_per_class: 6,
        sentences_per_text: 10,
        ..Default::default()
    }
    .generate();
    let docs = assemble_documents(&texts, 40, 1).unwrap();
    let lexicon = FunctionWordLexicon::default_turkish();
    let config = CvConfig {
        k: 5,
        seed: 77,
        ..CvConfig::default()
    };
    let a = cross_validate(&docs, &config, &lexicon).unwrap();
    let b = cross_validate(&docs, &config, &lexicon).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert_eq!(
        a.confusion.trace() as f64 / a.confusion.total() as f64,
        a.accuracy
    );
    assert_eq!(a.confusion.total(), docs.len());
}

#[test]
fn grid_search_prefers_largest_c_on_plateau() {
    let (counts, labels) = disjoint_blobs(12, 2);
    // Build documents whose only content is irrelevant; reuse the counts path instead.
    let config = CvConfig {
        k: 4,
        ..CvConfig::default()
    };
    let grid = [1e-3, 0.1, 1.0, 10.0];
    let accs: Vec<f64> = grid
        .iter()
        .map(|&c| {
            cross_validate_counts(
                &counts,
                &labels,
                &CvConfig {
                    c,
                    ..config.clone()
                },
            )
            .unwrap()
            .accuracy
        })
        .collect();
    assert_eq!(accs[2], accs[3], "plateau expected at large C: {accs:?}");

    let texts = SyntheticCorpus {
        texts_per_class: 4,
        sentences_per_text: 10,
        signal: 0.9,
        ..Default::default()
    }
    .generate();
    let docs = assemble_documents(&texts, 30, 4).unwrap();
    let lexicon = FunctionWordLexicon::default_turkish();
    let single = grid_search_c(&docs, &config, &[1.0], &lexicon).unwrap();
    assert_eq!(single.best_c, 1.0);
    assert_eq!(single.table.len(), 1);

    let result = grid_search_c(&docs, &config, &[0.1, 1.0, 10.0, 100.0], &lexicon).unwrap();
    let best = result.table.iter().map(|r| r.1).fold(f64::MIN, f64::max);
    let largest_best = result
        .table
        .iter()
        .filter(|r| r.1 == best)
        .map(|r| r.0)
        .fold(0.0, f64::max);
    assert_eq!(result.best_c, largest_best);
    assert_eq!(result.best_accuracy, best);
}

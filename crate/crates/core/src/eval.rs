//! Stratified K-fold cross-validation and classification metrics.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Document, L1Label};
use crate::error::{Error, Result};
use crate::features::{combine_features, FeatureConfig, FeatureCounts, FunctionWordLexicon};
use crate::svm::{predict, train_multiclass, SvmParams, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::vectorize::{fit_tfidf, transform};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    /// doc_id → fold index in `0..k`.
    pub assignments: BTreeMap<String, usize>,
}

impl FoldPlan {
    /// Largest difference, over classes, between the per-fold counts of that class.
    pub fn max_class_imbalance(&self, labels: &[(String, L1Label)]) -> usize {
        let mut per_class: BTreeMap<&L1Label, Vec<usize>> = BTreeMap::new();
        for (doc_id, l1) in labels {
            let counts = per_class.entry(l1).or_insert_with(|| vec![0; self.k]);
            if let Some(&f) = self.assignments.get(doc_id) {
                counts[f] += 1;
            }
        }
        per_class
            .values()
            .map(|c| c.iter().max().unwrap_or(&0) - c.iter().min().unwrap_or(&0))
            .max()
            .unwrap_or(0)
    }

    pub fn fold_of(&self, doc_id: &str) -> Option<usize> {
        self.assignments.get(doc_id).copied()
    }
}

/// Shuffle each class's documents with a seeded generator and deal them
/// round-robin to folds. The dealing position carries over from one class to
/// the next (classes in label order) so that total fold sizes stay balanced.
pub fn stratified_kfold(labels: &[(String, L1Label)], k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Config(format!("K must be at least 2, got {k}")));
    }
    if labels.is_empty() {
        return Err(Error::Data("no documents to split into folds".into()));
    }
    let mut seen = HashSet::new();
    let mut by_class: BTreeMap<&L1Label, Vec<&str>> = BTreeMap::new();
    for (doc_id, l1) in labels {
        if !seen.insert(doc_id.as_str()) {
            return Err(Error::Data(format!("duplicate document id `{doc_id}`")));
        }
        by_class.entry(l1).or_default().push(doc_id);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = BTreeMap::new();
    let mut next = 0;
    for (l1, mut ids) in by_class {
        if ids.len() < k {
            log::warn!(
                "class `{l1}` has {} documents, fewer than K = {k}",
                ids.len()
            );
        }
        ids.shuffle(&mut rng);
        for id in ids {
            assignments.insert(id.to_owned(), next);
            next = (next + 1) % k;
        }
    }
    Ok(FoldPlan {
        k,
        seed,
        assignments,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<L1Label>,
    /// `cells[i][j]`: documents of true class `i` predicted as class `j`.
    pub cells: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.cells.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..self.classes.len()).map(|i| self.cells[i][i]).sum()
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.cells[i].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> usize {
        self.cells.iter().map(|r| r[j]).sum()
    }

    /// CSV with a header row and a leading column of class codes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("true\\predicted");
        for c in &self.classes {
            out.push(',');
            out.push_str(c.as_str());
        }
        out.push('\n');
        for (class, row) in self.classes.iter().zip(&self.cells) {
            out.push_str(class.as_str());
            for n in row {
                out.push_str(&format!(",{n}"));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: L1Label,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub macro_avg: Averages,
    pub micro_f1: f64,
    pub confusion: ConfusionMatrix,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else if p == r {
        p
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Per-class and averaged precision, recall and F1. Any 0/0 is taken as 0.
pub fn compute_metrics(
    y_true: &[L1Label],
    y_pred: &[L1Label],
    classes: &[L1Label],
) -> Result<Metrics> {
    if y_true.len() != y_pred.len() {
        return Err(Error::Data(format!(
            "{} true labels but {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(Error::Data("no predictions to score".into()));
    }
    let index: BTreeMap<&L1Label, usize> =
        classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let lookup = |l: &L1Label| {
        index
            .get(l)
            .copied()
            .ok_or_else(|| Error::Data(format!("label `{l}` is not among the evaluated classes")))
    };

    let n = classes.len();
    let mut cells = vec![vec![0usize; n]; n];
    for (t, p) in y_true.iter().zip(y_pred) {
        cells[lookup(t)?][lookup(p)?] += 1;
    }
    let confusion = ConfusionMatrix {
        classes: classes.to_vec(),
        cells,
    };

    let per_class: Vec<ClassMetrics> = (0..n)
        .map(|i| {
            let tp = confusion.cells[i][i];
            let precision = ratio(tp, confusion.col_sum(i));
            let recall = ratio(tp, confusion.row_sum(i));
            ClassMetrics {
                class: classes[i].clone(),
                precision,
                recall,
                f1: harmonic(precision, recall),
                support: confusion.row_sum(i),
            }
        })
        .collect();

    let mean = |f: fn(&ClassMetrics) -> f64| {
        if n == 0 {
            0.0
        } else {
            per_class.iter().map(f).sum::<f64>() / n as f64
        }
    };
    let macro_avg = Averages {
        precision: mean(|m| m.precision),
        recall: mean(|m| m.recall),
        f1: mean(|m| m.f1),
    };

    let total = confusion.total();
    let correct = confusion.trace();
    // Pooled over classes, FP and FN both equal the number of errors.
    let errors = total - correct;
    let micro_p = ratio(correct, correct + errors);
    let micro_r = ratio(correct, correct + errors);

    Ok(Metrics {
        accuracy: ratio(correct, total),
        per_class,
        macro_avg,
        micro_f1: harmonic(micro_p, micro_r),
        confusion,
    })
}

/// Expected accuracy of uniform random guessing.
pub fn random_baseline(classes: &[L1Label]) -> f64 {
    1.0 / classes.len().max(1) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CvConfig {
    pub features: FeatureConfig,
    pub c: f64,
    pub k: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            features: FeatureConfig::full(),
            c: 1.0,
            k: 10,
            seed: 0,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocPrediction {
    pub doc_id: String,
    pub fold: usize,
    pub gold: L1Label,
    pub predicted: L1Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub config: CvConfig,
    pub n_documents: usize,
    pub accuracy: f64,
    pub random_baseline: f64,
    pub per_class: Vec<ClassMetrics>,
    pub macro_avg: Averages,
    pub micro_f1: f64,
    pub confusion: ConfusionMatrix,
    /// Binary sub-problems that hit the epoch cap, summed over folds.
    pub non_converged: usize,
    pub folds: FoldPlan,
    pub predictions: Vec<DocPrediction>,
}

/// Extract features for every document.
pub fn extract_all(
    documents: &[Document],
    features: &FeatureConfig,
    lexicon: &FunctionWordLexicon,
) -> Result<Vec<FeatureCounts>> {
    documents
        .par_iter()
        .map(|d| combine_features(d, features, lexicon))
        .collect()
}

pub fn cross_validate(
    documents: &[Document],
    config: &CvConfig,
    lexicon: &FunctionWordLexicon,
) -> Result<EvalReport> {
    let counts = extract_all(documents, &config.features, lexicon)?;
    let labels: Vec<L1Label> = documents.iter().map(|d| d.l1.clone()).collect();
    cross_validate_counts(&counts, &labels, config)
}

/// Pooled K-fold evaluation over precomputed feature counts. Each fold fits
/// its own vocabulary and model on the remaining folds only.
pub fn cross_validate_counts(
    counts: &[FeatureCounts],
    labels: &[L1Label],
    config: &CvConfig,
) -> Result<EvalReport> {
    if counts.len() != labels.len() {
        return Err(Error::Data(format!(
            "{} feature maps but {} labels",
            counts.len(),
            labels.len()
        )));
    }
    let mut classes = labels.to_vec();
    classes.sort();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::Data(
            "cross-validation needs at least 2 classes".into(),
        ));
    }

    let keyed: Vec<(String, L1Label)> = counts
        .iter()
        .zip(labels)
        .map(|(c, l)| (c.doc_id.clone(), l.clone()))
        .collect();
    let plan = stratified_kfold(&keyed, config.k, config.seed)?;
    let fold_of: Vec<usize> = counts.iter().map(|c| plan.assignments[&c.doc_id]).collect();

    let fold_results: Vec<(Vec<(usize, L1Label)>, usize)> = (0..config.k)
        .into_par_iter()
        .map(|fold| -> Result<_> {
            let (test, train): (Vec<usize>, Vec<usize>) =
                (0..counts.len()).partition(|&i| fold_of[i] == fold);
            if test.is_empty() {
                return Ok((Vec::new(), 0));
            }
            let train_counts: Vec<FeatureCounts> =
                train.iter().map(|&i| counts[i].clone()).collect();
            let vocab = fit_tfidf(&train_counts)?;
            let x: Vec<_> = train_counts.iter().map(|c| transform(c, &vocab)).collect();
            let y: Vec<L1Label> = train.iter().map(|&i| labels[i].clone()).collect();
            let params = SvmParams {
                c: config.c,
                tol: config.tol,
                max_iter: config.max_iter,
                seed: crate::derive_seed(config.seed, fold as u64 + 1),
            };
            let model = train_multiclass(&x, &y, vocab.len(), &params)?;
            let predictions = test
                .iter()
                .map(|&i| (i, predict(&model, &transform(&counts[i], &vocab)).label))
                .collect();
            let stalled = model.converged.iter().filter(|&&c| !c).count();
            Ok((predictions, stalled))
        })
        .collect::<Result<_>>()?;

    let mut predicted: Vec<Option<L1Label>> = vec![None; counts.len()];
    let mut non_converged = 0;
    for (preds, stalled) in fold_results {
        non_converged += stalled;
        for (i, label) in preds {
            predicted[i] = Some(label);
        }
    }
    let predicted: Vec<L1Label> = predicted
        .into_iter()
        .map(|p| p.expect("every document is held out exactly once"))
        .collect();

    let metrics = compute_metrics(labels, &predicted, &classes)?;
    let predictions = counts
        .iter()
        .zip(labels)
        .zip(&predicted)
        .zip(&fold_of)
        .map(|(((c, gold), pred), &fold)| DocPrediction {
            doc_id: c.doc_id.clone(),
            fold,
            gold: gold.clone(),
            predicted: pred.clone(),
        })
        .collect();

    Ok(EvalReport {
        config: config.clone(),
        n_documents: counts.len(),
        accuracy: metrics.accuracy,
        random_baseline: random_baseline(&classes),
        per_class: metrics.per_class,
        macro_avg: metrics.macro_avg,
        micro_f1: metrics.micro_f1,
        confusion: metrics.confusion,
        non_converged,
        folds: plan,
        predictions,
    })
}

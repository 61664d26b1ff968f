//! L2-regularized hinge-loss linear SVM trained by dual coordinate descent,
//! with a one-vs-rest multi-class wrapper.

mod grid;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::L1Label;
use crate::error::{Error, Result};
use crate::vectorize::SparseVector;

pub use grid::{grid_search_c, GridSearchResult, DEFAULT_C_GRID};

pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_MAX_ITER: usize = 5000;

/// A binary problem `min ½‖w‖² + C Σ max(0, 1 − yᵢ w·xᵢ)`. A bias, if wanted,
/// must already be present in `x` as a constant column.
#[derive(Debug, Clone)]
pub struct BinaryProblem<'a> {
    pub x: &'a [SparseVector],
    /// Labels in {+1, −1}.
    pub y: &'a [f64],
    pub n_features: usize,
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl BinaryProblem<'_> {
    fn validate(&self) -> Result<()> {
        if self.x.len() != self.y.len() {
            return Err(Error::Data(format!(
                "{} vectors but {} labels",
                self.x.len(),
                self.y.len()
            )));
        }
        if self.x.len() < 2 {
            return Err(Error::Data(
                "a binary problem needs at least 2 points".into(),
            ));
        }
        if self.y.iter().any(|&y| y != 1.0 && y != -1.0) {
            return Err(Error::Data("binary labels must be +1 or -1".into()));
        }
        if !(self.y.contains(&1.0) && self.y.contains(&-1.0)) {
            return Err(Error::Data("binary problem has a single class".into()));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::Config(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Config(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be positive".into()));
        }
        for v in self.x {
            if v.entries.iter().any(|(_, w)| !w.is_finite()) {
                return Err(Error::Data("non-finite feature value".into()));
            }
            if v.max_col().is_some_and(|c| c >= self.n_features) {
                return Err(Error::Data(format!(
                    "feature column beyond n_features = {}",
                    self.n_features
                )));
            }
        }
        Ok(())
    }

    /// Dual objective `½‖Σ αᵢyᵢxᵢ‖² − Σ αᵢ` (to be minimized).
    pub fn dual_objective(&self, alpha: &[f64]) -> f64 {
        let w = self.primal_from_dual(alpha);
        0.5 * dot_dense(&w, &w) - alpha.iter().sum::<f64>()
    }

    pub fn primal_objective(&self, w: &[f64]) -> f64 {
        let hinge: f64 = self
            .x
            .iter()
            .zip(self.y)
            .map(|(x, &y)| (1.0 - y * x.dot(w)).max(0.0))
            .sum();
        0.5 * dot_dense(w, w) + self.c * hinge
    }

    pub fn primal_from_dual(&self, alpha: &[f64]) -> Vec<f64> {
        let mut w = vec![0.0; self.n_features];
        for ((x, &y), &a) in self.x.iter().zip(self.y).zip(alpha) {
            axpy(&mut w, a * y, x);
        }
        w
    }

    /// Largest projected-gradient magnitude of the dual at `alpha`, with `w`
    /// the matching primal vector.
    pub fn max_violation(&self, alpha: &[f64], w: &[f64]) -> f64 {
        self.x
            .iter()
            .zip(self.y)
            .zip(alpha)
            .map(|((x, &y), &a)| projected_gradient(y * x.dot(w) - 1.0, a, self.c).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinarySolution {
    pub w: Vec<f64>,
    pub alpha: Vec<f64>,
    pub epochs: usize,
    pub converged: bool,
}

fn projected_gradient(g: f64, alpha: f64, c: f64) -> f64 {
    if alpha <= 0.0 {
        g.min(0.0)
    } else if alpha >= c {
        g.max(0.0)
    } else {
        g
    }
}

fn dot_dense(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(w: &mut [f64], scale: f64, x: &SparseVector) {
    for &(c, v) in &x.entries {
        w[c] += scale * v;
    }
}

/// Dual coordinate descent over `α ∈ [0, C]ⁿ`, visiting coordinates in a
/// fresh seeded permutation each epoch. Stops once the largest
/// projected-gradient violation, re-measured on the final iterate, is below
/// `tol`, or after `max_iter` epochs.
pub fn train_binary(p: &BinaryProblem<'_>) -> Result<BinarySolution> {
    p.validate()?;
    let n = p.x.len();
    let qd: Vec<f64> = p.x.iter().map(SparseVector::squared_norm).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; p.n_features];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);

    for epoch in 1..=p.max_iter {
        order.shuffle(&mut rng);
        let mut max_pg = 0.0f64;
        for &i in &order {
            let x = &p.x[i];
            let y = p.y[i];
            let g = y * x.dot(&w) - 1.0;
            let pg = projected_gradient(g, alpha[i], p.c);
            max_pg = max_pg.max(pg.abs());
            if pg == 0.0 {
                continue;
            }
            let old = alpha[i];
            // A zero vector has a linear dual term; g = -1 drives it to C.
            let new = if qd[i] > 0.0 {
                (old - g / qd[i]).clamp(0.0, p.c)
            } else {
                p.c
            };
            if new != old {
                alpha[i] = new;
                axpy(&mut w, (new - old) * y, x);
            }
        }
        if max_pg < p.tol && p.max_violation(&alpha, &w) < p.tol {
            return Ok(BinarySolution {
                w,
                alpha,
                epochs: epoch,
                converged: true,
            });
        }
    }
    Ok(BinarySolution {
        w,
        alpha,
        epochs: p.max_iter,
        converged: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            seed: 0,
        }
    }
}

/// One-vs-rest linear model. Each weight vector has `n_features + 1`
/// entries; the last one is the bias.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub classes: Vec<L1Label>,
    pub weights: Vec<Vec<f64>>,
    pub n_features: usize,
    pub c: f64,
    pub converged: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: L1Label,
    /// Decision values in `model.classes` order.
    pub scores: Vec<f64>,
}

/// Train one binary problem per class (that class +1, the rest −1) over
/// vectors augmented with a constant bias column.
pub fn train_multiclass(
    x: &[SparseVector],
    labels: &[L1Label],
    n_features: usize,
    params: &SvmParams,
) -> Result<SvmModel> {
    if x.len() != labels.len() {
        return Err(Error::Data(format!(
            "{} vectors but {} labels",
            x.len(),
            labels.len()
        )));
    }
    let mut classes: Vec<L1Label> = labels.to_vec();
    classes.sort();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::Data(
            "training data must contain at least 2 classes".into(),
        ));
    }

    let augmented: Vec<SparseVector> = x.iter().map(|v| v.with_bias(n_features, 1.0)).collect();
    let solutions: Vec<BinarySolution> = classes
        .par_iter()
        .enumerate()
        .map(|(k, class)| {
            let y: Vec<f64> = labels
                .iter()
                .map(|l| if l == class { 1.0 } else { -1.0 })
                .collect();
            let problem = BinaryProblem {
                x: &augmented,
                y: &y,
                n_features: n_features + 1,
                c: params.c,
                tol: params.tol,
                max_iter: params.max_iter,
                seed: crate::derive_seed(params.seed, k as u64),
            };
            let solution = train_binary(&problem)?;
            if !solution.converged {
                log::warn!(
                    "class `{class}` did not converge within {} epochs (C = {})",
                    params.max_iter,
                    params.c
                );
            }
            Ok(solution)
        })
        .collect::<Result<_>>()?;

    Ok(SvmModel {
        classes,
        converged: solutions.iter().map(|s| s.converged).collect(),
        weights: solutions.into_iter().map(|s| s.w).collect(),
        n_features,
        c: params.c,
    })
}

impl SvmModel {
    /// `w_c · x + b_c` for every class. Columns outside the model are ignored.
    pub fn decision_values(&self, x: &SparseVector) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| {
                let (features, bias) = w.split_at(self.n_features);
                x.dot(features) + bias[0]
            })
            .collect()
    }

    pub fn export(&self, vocabulary_checksum: impl Into<String>) -> ModelFile {
        ModelFile {
            classes: self.classes.clone(),
            weights: self
                .weights
                .iter()
                .map(|w| w[..self.n_features].to_vec())
                .collect(),
            bias: self.weights.iter().map(|w| w[self.n_features]).collect(),
            c: self.c,
            converged: self.converged.clone(),
            vocabulary_checksum: vocabulary_checksum.into(),
        }
    }
}

/// Argmax over decision values; ties go to the class listed first, which is
/// the lexicographically smallest.
pub fn predict(model: &SvmModel, x: &SparseVector) -> Prediction {
    let scores = model.decision_values(x);
    let label = model.classes[argmax_first(&scores)].clone();
    Prediction { label, scores }
}

pub(crate) fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Serialized form of an [`SvmModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub classes: Vec<L1Label>,
    /// Dense per-class weights over vocabulary columns.
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub c: f64,
    pub converged: Vec<bool>,
    pub vocabulary_checksum: String,
}

impl ModelFile {
    pub fn into_model(self) -> Result<SvmModel> {
        let k = self.classes.len();
        if self.weights.len() != k || self.bias.len() != k || self.converged.len() != k {
            return Err(Error::Data(
                "model arrays disagree on the number of classes".into(),
            ));
        }
        let n_features = self.weights.first().map_or(0, Vec::len);
        if self.weights.iter().any(|w| w.len() != n_features) {
            return Err(Error::Data("model weight vectors differ in length".into()));
        }
        let weights = self
            .weights
            .into_iter()
            .zip(&self.bias)
            .map(|(mut w, &b)| {
                w.push(b);
                w
            })
            .collect();
        Ok(SvmModel {
            classes: self.classes,
            weights,
            n_features,
            c: self.c,
            converged: self.converged,
        })
    }
}

//! Reference implementations that share no code path with the library:
//! a dense projected-gradient QP solver for the SVM dual, naive feature
//! extractors and a random annotated-document generator.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nli_core::corpus::{AnnotatedSentence, Document, L1Label, NodeBody, Token, TreeNode, Upos};
use rand::Rng;

/// Dense point for the oracle: `(x, y)` with `y` in {+1, −1}.
pub struct DensePoint {
    pub x: Vec<f64>,
    pub y: f64,
}

pub struct QpSolution {
    pub alpha: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

fn gram(points: &[DensePoint]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| a.y * b.y * a.x.iter().zip(&b.x).map(|(u, v)| u * v).sum::<f64>())
                .collect()
        })
        .collect()
}

fn objective(q: &[Vec<f64>], alpha: &[f64]) -> f64 {
    let mut quad = 0.0;
    for i in 0..alpha.len() {
        for j in 0..alpha.len() {
            quad += alpha[i] * q[i][j] * alpha[j];
        }
    }
    0.5 * quad - alpha.iter().sum::<f64>()
}

fn gradient(q: &[Vec<f64>], alpha: &[f64]) -> Vec<f64> {
    q.iter()
        .map(|row| row.iter().zip(alpha).map(|(a, b)| a * b).sum::<f64>() - 1.0)
        .collect()
}

/// Minimize `½αᵀQα − Σα` over the box `[0, C]ⁿ` with accelerated projected
/// gradient descent (FISTA with function-value restarts), run until the
/// projected-gradient residual is below 1e-12 or the iteration cap.
pub fn dual_qp(points: &[DensePoint], c: f64) -> QpSolution {
    let n = points.len();
    let q = gram(points);
    // Lipschitz constant: the trace bounds the top eigenvalue of a PSD matrix.
    let lipschitz = (0..n).map(|i| q[i][i]).sum::<f64>().max(1e-12);
    let step = 1.0 / lipschitz;
    let project = |v: f64| v.clamp(0.0, c);

    let mut alpha = vec![0.0; n];
    let mut momentum = alpha.clone();
    let mut t = 1.0f64;
    let mut f_prev = objective(&q, &alpha);
    let max_iter = 2_000_000;
    let mut iterations = 0;
    let residual = |alpha: &[f64]| {
        let g = gradient(&q, alpha);
        alpha
            .iter()
            .zip(&g)
            .map(|(&a, &gi)| (a - project(a - gi)).abs())
            .fold(0.0, f64::max)
    };
    for it in 0..max_iter {
        iterations = it + 1;
        if it % 32 == 0 && residual(&alpha) < 1e-12 {
            break;
        }
        let g = gradient(&q, &momentum);
        let next: Vec<f64> = momentum
            .iter()
            .zip(&g)
            .map(|(a, gi)| project(a - step * gi))
            .collect();
        let f_next = objective(&q, &next);
        if f_next > f_prev && t > 1.0 {
            // Objective went up: drop the momentum and retry from `alpha`.
            momentum = alpha.clone();
            t = 1.0;
            continue;
        }
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        momentum = next
            .iter()
            .zip(&alpha)
            .map(|(a, b)| project(a + (t - 1.0) / t_next * (a - b)))
            .collect();
        alpha = next;
        t = t_next;
        f_prev = f_next;
    }
    QpSolution {
        objective: objective(&q, &alpha),
        alpha,
        iterations,
    }
}

pub fn primal_from_dual(points: &[DensePoint], alpha: &[f64]) -> Vec<f64> {
    let d = points.first().map_or(0, |p| p.x.len());
    let mut w = vec![0.0; d];
    for (p, a) in points.iter().zip(alpha) {
        for (wj, xj) in w.iter_mut().zip(&p.x) {
            *wj += a * p.y * xj;
        }
    }
    w
}

/// POS n-grams by slicing each sentence's list of tag strings.
pub fn naive_pos_ngrams(doc: &Document, n: usize) -> BTreeMap<String, u32> {
    let mut out = BTreeMap::new();
    for sentence in &doc.sentences {
        let tags: Vec<String> = sentence.tokens.iter().map(|t| t.upos.to_string()).collect();
        let mut start = 0;
        while start + n <= tags.len() {
            let gram = tags[start..start + n].join("_");
            *out.entry(format!("pos{n}:{gram}")).or_insert(0) += 1;
            start += 1;
        }
    }
    out
}

fn walk(node: &TreeNode, out: &mut BTreeMap<String, u32>) {
    if let NodeBody::Children(children) = &node.body {
        let rhs: Vec<&str> = children.iter().map(|c| c.label.as_str()).collect();
        *out.entry(format!("cfg:{}→{}", node.label, rhs.join("_")))
            .or_insert(0) += 1;
        for child in children {
            walk(child, out);
        }
    }
}

/// CFG rules by recursive tree walk. Labels must not contain separators.
pub fn naive_cfg_rules(doc: &Document) -> BTreeMap<String, u32> {
    let mut out = BTreeMap::new();
    for tree in doc.sentences.iter().filter_map(|s| s.tree.as_ref()) {
        walk(tree, &mut out);
    }
    out
}

const LABELS: [&str; 6] = ["S", "NP", "VP", "PP", "ADJP", "CP"];

fn random_tree<R: Rng>(rng: &mut R, tokens: &[Token], depth: usize) -> TreeNode {
    if tokens.len() == 1 && (depth > 3 || rng.gen_bool(0.6)) {
        return TreeNode::preterminal(tokens[0].upos.as_str(), tokens[0].form.clone());
    }
    let label = LABELS[rng.gen_range(0..LABELS.len())];
    if tokens.len() == 1 {
        let child = random_tree(rng, tokens, depth + 1);
        return TreeNode::internal(label, vec![child]);
    }
    let parts = rng.gen_range(1..=tokens.len().min(4));
    let mut cuts: Vec<usize> = (1..tokens.len()).collect();
    let mut chosen = Vec::new();
    for _ in 1..parts {
        let i = rng.gen_range(0..cuts.len());
        chosen.push(cuts.swap_remove(i));
    }
    chosen.sort_unstable();
    let mut children = Vec::new();
    let mut start = 0;
    for end in chosen.into_iter().chain(std::iter::once(tokens.len())) {
        children.push(random_tree(rng, &tokens[start..end], depth + 1));
        start = end;
    }
    if children.len() == 1 && children[0].leaf_form().is_none() && rng.gen_bool(0.5) {
        return children.pop().unwrap();
    }
    TreeNode::internal(label, children)
}

/// A document of 1–6 sentences, 1–12 tokens each; about 80% of sentences get
/// a random tree whose leaves match the tokens.
pub fn random_document<R: Rng>(rng: &mut R, id: usize) -> Document {
    let n_sentences = rng.gen_range(1..=6);
    let sentences = (0..n_sentences)
        .map(|s| {
            let len = rng.gen_range(1..=12);
            let tokens: Vec<Token> = (0..len)
                .map(|i| {
                    let upos = Upos::ALL[rng.gen_range(0..Upos::ALL.len())];
                    Token::new(format!("w{}", i % 5), upos)
                })
                .collect();
            let tree = rng.gen_bool(0.8).then(|| random_tree(rng, &tokens, 0));
            AnnotatedSentence {
                sent_id: format!("{id}-{s}"),
                tokens,
                tree,
            }
        })
        .collect();
    Document::new(format!("doc{id}"), L1Label::new("AZ"), sentences)
}

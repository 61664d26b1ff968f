//! Content-independent feature families: function-word frequencies, POS
//! n-grams and delexicalized CFG production rules.

mod lexicon;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, NodeBody, TreeNode, Upos};
use crate::error::{Error, Result};
use crate::text::turkish_fold;

pub use lexicon::FunctionWordLexicon;

/// Highest POS n-gram order accepted.
pub const MAX_POS_ORDER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Namespace {
    Fw,
    Pos1,
    Pos2,
    Pos3,
    Cfg,
}

impl Namespace {
    pub fn as_str(self) -> &'static str {
        match self {
            Namespace::Fw => "fw",
            Namespace::Pos1 => "pos1",
            Namespace::Pos2 => "pos2",
            Namespace::Pos3 => "pos3",
            Namespace::Cfg => "cfg",
        }
    }
}

/// A namespaced feature key such as `pos2:NOUN_VERB` or `cfg:S→NP_VP`.
///
/// Ordering is plain string order on the rendered key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureId(String);

impl FeatureId {
    pub fn function_word(word: &str) -> Self {
        FeatureId(format!("fw:{}", escape(word)))
    }

    pub fn pos_ngram(tags: &[Upos]) -> Self {
        let mut key = format!("pos{}:", tags.len());
        for (i, tag) in tags.iter().enumerate() {
            if i > 0 {
                key.push('_');
            }
            key.push_str(tag.as_str());
        }
        FeatureId(key)
    }

    pub fn cfg_rule<'a>(lhs: &str, rhs: impl IntoIterator<Item = &'a str>) -> Self {
        let mut key = format!("cfg:{}→", escape(lhs));
        for (i, label) in rhs.into_iter().enumerate() {
            if i > 0 {
                key.push('_');
            }
            key.push_str(&escape(label));
        }
        FeatureId(key)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn namespace(&self) -> Option<Namespace> {
        let (ns, _) = self.0.split_once(':')?;
        [
            Namespace::Fw,
            Namespace::Pos1,
            Namespace::Pos2,
            Namespace::Pos3,
            Namespace::Cfg,
        ]
        .into_iter()
        .find(|n| n.as_str() == ns)
    }

    /// Raw constructor for keys that were already rendered, e.g. when
    /// reading an exported vocabulary.
    pub fn from_raw(key: impl Into<String>) -> Self {
        FeatureId(key.into())
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Backslash-escape the structural separators `\`, `_` and `→`.
fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if matches!(c, '\\' | '_' | '→') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// Raw feature counts of one document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureCounts {
    pub doc_id: String,
    pub counts: BTreeMap<FeatureId, u32>,
}

impl FeatureCounts {
    pub fn new(doc_id: impl Into<String>) -> Self {
        FeatureCounts {
            doc_id: doc_id.into(),
            counts: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, id: FeatureId, n: u32) {
        if n > 0 {
            *self.counts.entry(id).or_insert(0) += n;
        }
    }

    /// Add every count of `other` into `self`.
    pub fn merge(&mut self, other: FeatureCounts) {
        for (id, n) in other.counts {
            self.add(id, n);
        }
    }

    pub fn get(&self, id: &FeatureId) -> u32 {
        self.counts.get(id).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().map(|&n| u64::from(n)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }
}

/// Which feature families to extract.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureConfig {
    #[serde(default)]
    pub function_words: bool,
    #[serde(default)]
    pub pos_orders: BTreeSet<usize>,
    #[serde(default)]
    pub cfg_rules: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self::full()
    }
}

impl FeatureConfig {
    pub fn full() -> Self {
        FeatureConfig {
            function_words: true,
            pos_orders: (1..=MAX_POS_ORDER).collect(),
            cfg_rules: true,
        }
    }

    pub fn only(family: FeatureFamily) -> Self {
        let mut config = FeatureConfig {
            function_words: false,
            pos_orders: BTreeSet::new(),
            cfg_rules: false,
        };
        match family {
            FeatureFamily::FunctionWords => config.function_words = true,
            FeatureFamily::Pos(n) => {
                config.pos_orders.insert(n);
            }
            FeatureFamily::Cfg => config.cfg_rules = true,
        }
        config
    }

    pub fn validate(&self) -> Result<()> {
        validate_orders(&self.pos_orders)?;
        if self.families().is_empty() {
            return Err(Error::Config("no feature family enabled".into()));
        }
        Ok(())
    }

    /// Enabled families in reporting order: POS orders ascending, then
    /// function words, then CFG rules.
    pub fn families(&self) -> Vec<FeatureFamily> {
        let mut out: Vec<_> = self
            .pos_orders
            .iter()
            .map(|&n| FeatureFamily::Pos(n))
            .collect();
        if self.function_words {
            out.push(FeatureFamily::FunctionWords);
        }
        if self.cfg_rules {
            out.push(FeatureFamily::Cfg);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureFamily {
    FunctionWords,
    Pos(usize),
    Cfg,
}

impl FeatureFamily {
    /// Short identifier used in reports.
    pub fn id(&self) -> String {
        match self {
            FeatureFamily::FunctionWords => "fw".into(),
            FeatureFamily::Pos(n) => format!("pos{n}"),
            FeatureFamily::Cfg => "cfg".into(),
        }
    }

    pub fn description(&self) -> String {
        match self {
            FeatureFamily::FunctionWords => "Function Words".into(),
            FeatureFamily::Pos(n) => format!("POS {n}-grams"),
            FeatureFamily::Cfg => "CFG Production Rules".into(),
        }
    }
}

fn validate_orders(orders: &BTreeSet<usize>) -> Result<()> {
    match orders.iter().find(|&&n| n == 0 || n > MAX_POS_ORDER) {
        Some(n) => Err(Error::Config(format!(
            "POS n-gram order {n} is outside 1..={MAX_POS_ORDER}"
        ))),
        None => Ok(()),
    }
}

pub fn extract_function_words(doc: &Document, lexicon: &FunctionWordLexicon) -> FeatureCounts {
    let mut freq: HashMap<String, u32> = HashMap::new();
    for token in doc.tokens() {
        *freq.entry(turkish_fold(&token.form)).or_insert(0) += 1;
    }
    let mut out = FeatureCounts::new(&doc.doc_id);
    for word in lexicon.words() {
        if let Some(&n) = freq.get(word) {
            out.add(FeatureId::function_word(word), n);
        }
    }
    out
}

/// POS n-grams of the requested orders, taken inside sentence boundaries
/// without padding.
pub fn extract_pos_ngrams(doc: &Document, orders: &BTreeSet<usize>) -> Result<FeatureCounts> {
    validate_orders(orders)?;
    let mut out = FeatureCounts::new(&doc.doc_id);
    for sentence in &doc.sentences {
        let tags: Vec<Upos> = sentence.tokens.iter().map(|t| t.upos).collect();
        for &n in orders {
            for window in tags.windows(n) {
                out.add(FeatureId::pos_ngram(window), 1);
            }
        }
    }
    Ok(out)
}

/// One rule per constituent node (`LHS→child labels`). Preterminal-to-word
/// productions are never emitted.
pub fn extract_cfg_rules(doc: &Document) -> FeatureCounts {
    let mut out = FeatureCounts::new(&doc.doc_id);
    for tree in doc.sentences.iter().filter_map(|s| s.tree.as_ref()) {
        let mut stack: Vec<&TreeNode> = vec![tree];
        while let Some(node) = stack.pop() {
            if let NodeBody::Children(children) = &node.body {
                out.add(
                    FeatureId::cfg_rule(&node.label, children.iter().map(|c| c.label.as_str())),
                    1,
                );
                stack.extend(children.iter());
            }
        }
    }
    out
}

/// Union of the enabled families' counts. Namespaces keep the families disjoint.
pub fn combine_features(
    doc: &Document,
    config: &FeatureConfig,
    lexicon: &FunctionWordLexicon,
) -> Result<FeatureCounts> {
    config.validate()?;
    let mut out = FeatureCounts::new(&doc.doc_id);
    if config.function_words {
        out.merge(extract_function_words(doc, lexicon));
    }
    if !config.pos_orders.is_empty() {
        out.merge(extract_pos_ngrams(doc, &config.pos_orders)?);
    }
    if config.cfg_rules {
        out.merge(extract_cfg_rules(doc));
    }
    Ok(out)
}

//! Annotated learner corpus: readers for the CoNLL-U and bracketed-tree
//! carrier files, document assembly and per-L1 statistics.

mod assemble;
mod conllu;
mod manifest;
mod stats;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use assemble::{assemble_documents, pack_sentences};
pub use conllu::{parse_conllu, write_conllu};
pub use manifest::{load_corpus, Manifest, ManifestEntry};
pub use stats::{corpus_stats, CorpusStats, L1Stats};
pub use tree::{parse_trees, NodeBody, TreeNode, NO_PARSE};

/// The 17 Universal POS tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Upos {
    ADJ,
    ADP,
    ADV,
    AUX,
    CCONJ,
    DET,
    INTJ,
    NOUN,
    NUM,
    PART,
    PRON,
    PROPN,
    PUNCT,
    SCONJ,
    SYM,
    VERB,
    X,
}

impl Upos {
    pub const ALL: [Upos; 17] = [
        Upos::ADJ,
        Upos::ADP,
        Upos::ADV,
        Upos::AUX,
        Upos::CCONJ,
        Upos::DET,
        Upos::INTJ,
        Upos::NOUN,
        Upos::NUM,
        Upos::PART,
        Upos::PRON,
        Upos::PROPN,
        Upos::PUNCT,
        Upos::SCONJ,
        Upos::SYM,
        Upos::VERB,
        Upos::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Upos::ADJ => "ADJ",
            Upos::ADP => "ADP",
            Upos::ADV => "ADV",
            Upos::AUX => "AUX",
            Upos::CCONJ => "CCONJ",
            Upos::DET => "DET",
            Upos::INTJ => "INTJ",
            Upos::NOUN => "NOUN",
            Upos::NUM => "NUM",
            Upos::PART => "PART",
            Upos::PRON => "PRON",
            Upos::PROPN => "PROPN",
            Upos::PUNCT => "PUNCT",
            Upos::SCONJ => "SCONJ",
            Upos::SYM => "SYM",
            Upos::VERB => "VERB",
            Upos::X => "X",
        }
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownUpos(pub String);

impl fmt::Display for UnknownUpos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown universal POS tag `{}`", self.0)
    }
}

impl std::error::Error for UnknownUpos {}

impl FromStr for Upos {
    type Err = UnknownUpos;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Upos::ALL
            .iter()
            .copied()
            .find(|u| u.as_str() == s)
            .ok_or_else(|| UnknownUpos(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub form: String,
    pub upos: Upos,
}

impl Token {
    pub fn new(form: impl Into<String>, upos: Upos) -> Self {
        Token {
            form: form.into(),
            upos,
        }
    }
}

/// A sentence with POS-tagged tokens and, when the parser produced one, its
/// constituency tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    pub sent_id: String,
    pub tokens: Vec<Token>,
    pub tree: Option<TreeNode>,
}

impl AnnotatedSentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Attach `tree`, checking that its yield matches the token forms.
    pub fn attach_tree(&mut self, tree: TreeNode) -> Result<(), Error> {
        let leaves = tree.leaves();
        let aligned = leaves.len() == self.tokens.len()
            && leaves.iter().zip(&self.tokens).all(|(l, t)| *l == t.form);
        if !aligned {
            return Err(Error::Data(format!(
                "sentence `{}`: tree leaves [{}] do not match tokens [{}]",
                self.sent_id,
                leaves.join(" "),
                self.tokens
                    .iter()
                    .map(|t| t.form.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            )));
        }
        self.tree = Some(tree);
        Ok(())
    }
}

/// Native-language label, e.g. `ARA`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct L1Label(String);

impl L1Label {
    pub fn new(code: impl Into<String>) -> Self {
        L1Label(code.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for L1Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for L1Label {
    fn from(s: &str) -> Self {
        L1Label::new(s)
    }
}

/// The L1 groups used by default.
pub const DEFAULT_LABELS: [&str; 5] = ["AFG", "AL", "ARA", "AZ", "IR"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnerText {
    pub text_id: String,
    pub l1: L1Label,
    pub genre: String,
    pub sentences: Vec<AnnotatedSentence>,
}

/// A classification instance: sentences pooled from several texts of one L1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub l1: L1Label,
    pub sentences: Vec<AnnotatedSentence>,
    pub token_count: usize,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, l1: L1Label, sentences: Vec<AnnotatedSentence>) -> Self {
        let token_count = sentences.iter().map(AnnotatedSentence::len).sum();
        Document {
            doc_id: doc_id.into(),
            l1,
            sentences,
            token_count,
        }
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flat_map(|s| s.tokens.iter())
    }
}

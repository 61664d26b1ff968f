//! Seeded generator for annotated corpora with a controllable per-class
//! syntactic signature. Used by the test suites and `nli synth`.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{
    write_conllu, AnnotatedSentence, L1Label, LearnerText, Manifest, ManifestEntry, Token,
    TreeNode, Upos,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub labels: Vec<L1Label>,
    pub texts_per_class: usize,
    pub sentences_per_text: usize,
    /// Probability that a sentence carries its class's signature constituent.
    pub signal: f64,
    pub genre: String,
    pub seed: u64,
}

impl Default for SyntheticCorpus {
    fn default() -> Self {
        SyntheticCorpus {
            labels: crate::corpus::DEFAULT_LABELS
                .iter()
                .map(|&l| L1Label::new(l))
                .collect(),
            texts_per_class: 20,
            sentences_per_text: 20,
            signal: 0.4,
            genre: "essay".into(),
            seed: 1,
        }
    }
}

fn words(tag: Upos) -> &'static [&'static str] {
    match tag {
        Upos::NOUN => &[
            "ev", "okul", "zaman", "insan", "hayat", "şehir", "kitap", "aile", "iş", "dil",
        ],
        Upos::VERB => &[
            "geldim",
            "gidiyor",
            "yaşıyoruz",
            "okudu",
            "sevdim",
            "başladı",
            "öğreniyorum",
        ],
        Upos::ADJ => &["güzel", "büyük", "yeni", "zor", "mutlu", "eski"],
        Upos::ADV => &["çok", "şimdi", "hep", "bazen", "hızlı"],
        Upos::DET => &["bir", "bu", "her", "bazı"],
        Upos::ADP => &["için", "ile", "gibi", "kadar", "göre"],
        Upos::PRON => &["ben", "biz", "onlar", "o"],
        Upos::CCONJ => &["ve", "ama", "veya"],
        Upos::SCONJ => &["çünkü", "eğer", "ki"],
        Upos::AUX => &["değil", "idi", "imiş"],
        Upos::NUM => &["iki", "üç", "on"],
        Upos::INTJ => &["evet", "hayır"],
        Upos::PUNCT => &[".", ",", "!"],
        Upos::PROPN => &["Ankara", "Ali", "İstanbul"],
        _ => &["şey"],
    }
}

/// Signature constituent of the class at `index`.
fn signature(index: usize) -> (&'static str, &'static [Upos]) {
    const TABLE: [(&str, &[Upos]); 5] = [
        ("ADVP", &[Upos::ADV, Upos::ADV]),
        ("CP", &[Upos::SCONJ, Upos::VERB]),
        ("QP", &[Upos::NUM, Upos::NOUN, Upos::NOUN]),
        ("PRED", &[Upos::NOUN, Upos::AUX]),
        ("INTJP", &[Upos::INTJ, Upos::PUNCT]),
    ];
    TABLE[index % TABLE.len()]
}

struct Builder<'r> {
    rng: &'r mut ChaCha8Rng,
    tokens: Vec<Token>,
}

impl Builder<'_> {
    fn word(&mut self, tag: Upos) -> TreeNode {
        let form = *words(tag).choose(self.rng).expect("non-empty word list");
        self.tokens.push(Token::new(form, tag));
        TreeNode::preterminal(tag.as_str(), form)
    }

    fn phrase(&mut self, label: &str, tags: &[Upos]) -> TreeNode {
        let children = tags.iter().map(|&t| self.word(t)).collect();
        TreeNode::internal(label, children)
    }

    fn noun_phrase(&mut self) -> TreeNode {
        let mut tags = Vec::new();
        if self.rng.gen_bool(0.3) {
            tags.push(Upos::DET);
        }
        if self.rng.gen_bool(0.4) {
            tags.push(Upos::ADJ);
        }
        tags.push(if self.rng.gen_bool(0.15) {
            Upos::PRON
        } else {
            Upos::NOUN
        });
        self.phrase("NP", &tags)
    }

    fn verb_phrase(&mut self) -> TreeNode {
        let mut children = Vec::new();
        if self.rng.gen_bool(0.4) {
            children.push(self.noun_phrase());
        }
        if self.rng.gen_bool(0.3) {
            children.push(self.word(Upos::ADV));
        }
        children.push(self.word(Upos::VERB));
        TreeNode::internal("VP", children)
    }

    fn postpositional_phrase(&mut self) -> TreeNode {
        let np = self.noun_phrase();
        let adp = self.word(Upos::ADP);
        TreeNode::internal("PP", vec![np, adp])
    }
}

fn sentence(
    rng: &mut ChaCha8Rng,
    sent_id: String,
    class_index: usize,
    signal: f64,
) -> AnnotatedSentence {
    let mut b = Builder {
        rng,
        tokens: Vec::new(),
    };
    let mut children = Vec::new();
    let signed = b.rng.gen_bool(signal);
    let slot = b.rng.gen_range(0..3);
    for position in 0..3 {
        if signed && position == slot {
            let (label, tags) = signature(class_index);
            children.push(b.phrase(label, tags));
        }
        match position {
            0 => children.push(b.noun_phrase()),
            1 if b.rng.gen_bool(0.35) => children.push(b.postpositional_phrase()),
            1 if b.rng.gen_bool(0.2) => {
                let conj = b.word(Upos::CCONJ);
                let np = b.noun_phrase();
                children.push(conj);
                children.push(np);
            }
            2 => children.push(b.verb_phrase()),
            _ => {}
        }
    }
    children.push(b.word(Upos::PUNCT));
    let tree = TreeNode::internal("S", children);
    AnnotatedSentence {
        sent_id,
        tokens: b.tokens,
        tree: Some(tree),
    }
}

impl SyntheticCorpus {
    pub fn generate(&self) -> Vec<LearnerText> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut texts = Vec::new();
        for (class_index, l1) in self.labels.iter().enumerate() {
            for t in 0..self.texts_per_class {
                let text_id = format!("{l1}_{t:03}");
                let sentences = (0..self.sentences_per_text)
                    .map(|s| {
                        sentence(
                            &mut rng,
                            format!("{text_id}-{}", s + 1),
                            class_index,
                            self.signal,
                        )
                    })
                    .collect();
                texts.push(LearnerText {
                    text_id,
                    l1: l1.clone(),
                    genre: self.genre.clone(),
                    sentences,
                });
            }
        }
        texts
    }
}

/// Write texts as `<text_id>.conllu` / `<text_id>.trees` pairs under `dir`
/// plus a `manifest.json`; returns the manifest path.
pub fn write_corpus(dir: &Path, texts: &[LearnerText]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut manifest = Manifest::default();
    for text in texts {
        let conllu = dir.join(format!("{}.conllu", text.text_id));
        fs::write(&conllu, write_conllu(&text.sentences)).map_err(|e| Error::io(&conllu, e))?;
        let trees_path = dir.join(format!("{}.trees", text.text_id));
        let trees: String = text
            .sentences
            .iter()
            .map(|s| match &s.tree {
                Some(t) => format!("{t}\n"),
                None => format!("{}\n", crate::corpus::NO_PARSE),
            })
            .collect();
        fs::write(&trees_path, trees).map_err(|e| Error::io(&trees_path, e))?;
        manifest.texts.insert(
            text.text_id.clone(),
            ManifestEntry {
                l1: text.l1.clone(),
                genre: text.genre.clone(),
                stem: text.text_id.clone(),
            },
        );
    }
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest)?;
    fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

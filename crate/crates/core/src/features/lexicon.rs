use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::turkish_fold;

const DEFAULT_LEXICON: &str = include_str!("../../data/function_words_tr.txt");

/// Case-folded function words whose frequencies become `fw:` features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionWordLexicon {
    words: Vec<String>,
}

impl FunctionWordLexicon {
    /// The bundled 75-word list.
    pub fn default_turkish() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("bundled lexicon is valid")
    }

    /// One word per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut words = Vec::new();
        let mut seen = HashSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let word = turkish_fold(line);
            if !seen.insert(word.clone()) {
                return Err(Error::parse(
                    i + 1,
                    format!("duplicate function word `{word}`"),
                ));
            }
            words.push(word);
        }
        Self::from_words(words)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| e.in_file(path))
    }

    pub fn from_words<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for w in words {
            let w = turkish_fold(w.as_ref());
            if w.is_empty() {
                return Err(Error::Config("empty function word".into()));
            }
            if seen.insert(w.clone()) {
                out.push(w);
            } else {
                return Err(Error::Config(format!("duplicate function word `{w}`")));
            }
        }
        if out.is_empty() {
            return Err(Error::Config("function-word lexicon is empty".into()));
        }
        Ok(FunctionWordLexicon { words: out })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{parse_conllu, parse_trees, L1Label, LearnerText};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub l1: L1Label,
    pub genre: String,
    /// Path stem, relative to the manifest, of the `.conllu`/`.trees` pair.
    pub stem: String,
}

/// Corpus manifest: `text_id → {l1, genre, stem}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Manifest {
    pub texts: BTreeMap<String, ManifestEntry>,
}

impl Manifest {
    pub fn from_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_reader(BufReader::new(file))
            .map_err(|e| Error::parse(e.line(), format!("invalid manifest: {e}")).in_file(path))
    }
}

/// Load every manifest text whose genre matches `genre` (when given) and
/// whose L1 is in `labels`. The `.trees` file is optional; when present it
/// must hold exactly one line per CoNLL-U sentence.
pub fn load_corpus(
    manifest_path: &Path,
    genre: Option<&str>,
    labels: &[L1Label],
) -> Result<Vec<LearnerText>> {
    let manifest = Manifest::from_path(manifest_path)?;
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));

    let mut texts = Vec::new();
    for (text_id, entry) in manifest.texts {
        if genre.is_some_and(|g| g != entry.genre) {
            continue;
        }
        if !labels.contains(&entry.l1) {
            log::debug!("skipping `{text_id}`: L1 `{}` not in label set", entry.l1);
            continue;
        }
        let stem = base.join(&entry.stem);
        let conllu_path = with_suffix(&stem, "conllu");
        let file = File::open(&conllu_path).map_err(|e| Error::io(&conllu_path, e))?;
        let mut sentences =
            parse_conllu(BufReader::new(file)).map_err(|e| e.in_file(&conllu_path))?;
        if sentences.is_empty() {
            return Err(
                Error::Data(format!("text `{text_id}` has no sentences")).in_file(&conllu_path)
            );
        }

        let trees_path = with_suffix(&stem, "trees");
        if trees_path.exists() {
            let file = File::open(&trees_path).map_err(|e| Error::io(&trees_path, e))?;
            let trees = parse_trees(BufReader::new(file)).map_err(|e| e.in_file(&trees_path))?;
            if trees.len() != sentences.len() {
                return Err(Error::Data(format!(
                    "{} tree lines for {} sentences",
                    trees.len(),
                    sentences.len()
                ))
                .in_file(&trees_path));
            }
            for (sentence, tree) in sentences.iter_mut().zip(trees) {
                if let Some(tree) = tree {
                    sentence
                        .attach_tree(tree)
                        .map_err(|e| e.in_file(&trees_path))?;
                }
            }
        }

        texts.push(LearnerText {
            text_id,
            l1: entry.l1,
            genre: entry.genre,
            sentences,
        });
    }
    Ok(texts)
}

fn with_suffix(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

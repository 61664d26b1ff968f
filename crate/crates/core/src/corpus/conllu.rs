use std::io::BufRead;

use super::{AnnotatedSentence, Token, Upos};
use crate::error::{Error, Result};

const N_COLUMNS: usize = 10;

/// Read CoNLL-U sentences, keeping only the word form and universal POS tag
/// of each syntactic word. Multiword ranges (`1-2`) and empty nodes (`1.1`)
/// are skipped.
pub fn parse_conllu<R: BufRead>(input: R) -> Result<Vec<AnnotatedSentence>> {
    let mut sentences = Vec::new();
    let mut sent_id: Option<String> = None;
    let mut tokens: Vec<Token> = Vec::new();
    let mut block_start = 0;
    let mut line_no = 0;

    for line in input.lines() {
        line_no += 1;
        let line = line.map_err(|e| Error::parse(line_no, format!("unreadable input: {e}")))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);

        if line.trim().is_empty() {
            flush_block(&mut sent_id, &mut tokens, block_start, &mut sentences)?;
            continue;
        }
        if tokens.is_empty() && sent_id.is_none() {
            block_start = line_no;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "sent_id" {
                    sent_id = Some(value.trim().to_owned());
                }
            }
            continue;
        }

        let columns: Vec<&str> = line.split('\t').collect();
        if columns.len() != N_COLUMNS {
            return Err(Error::parse(
                line_no,
                format!(
                    "expected {N_COLUMNS} tab-separated columns, found {}",
                    columns.len()
                ),
            ));
        }
        match classify_id(columns[0]) {
            Some(IdKind::Word) => {}
            Some(IdKind::Range) | Some(IdKind::Empty) => continue,
            None => {
                return Err(Error::parse(
                    line_no,
                    format!("invalid token id `{}`", columns[0]),
                ))
            }
        }
        let form = columns[1];
        if form.is_empty() {
            return Err(Error::parse(line_no, "empty word form"));
        }
        let upos: Upos = columns[3]
            .parse()
            .map_err(|e: super::UnknownUpos| Error::parse(line_no, e.to_string()))?;
        tokens.push(Token::new(form, upos));
    }
    flush_block(&mut sent_id, &mut tokens, block_start, &mut sentences)?;

    Ok(sentences)
}

fn flush_block(
    sent_id: &mut Option<String>,
    tokens: &mut Vec<Token>,
    block_start: usize,
    sentences: &mut Vec<AnnotatedSentence>,
) -> Result<()> {
    if tokens.is_empty() {
        if sent_id.is_some() {
            return Err(Error::parse(block_start, "sentence block has no tokens"));
        }
        return Ok(());
    }
    let id = sent_id
        .take()
        .unwrap_or_else(|| (sentences.len() + 1).to_string());
    sentences.push(AnnotatedSentence {
        sent_id: id,
        tokens: std::mem::take(tokens),
        tree: None,
    });
    Ok(())
}

enum IdKind {
    Word,
    Range,
    Empty,
}

fn classify_id(id: &str) -> Option<IdKind> {
    let is_num = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if is_num(id) {
        Some(IdKind::Word)
    } else if let Some((a, b)) = id.split_once('-') {
        (is_num(a) && is_num(b)).then_some(IdKind::Range)
    } else if let Some((a, b)) = id.split_once('.') {
        (is_num(a) && is_num(b)).then_some(IdKind::Empty)
    } else {
        None
    }
}

/// Serialize sentences as CoNLL-U with columns 1, 2 and 4 populated.
pub fn write_conllu(sentences: &[AnnotatedSentence]) -> String {
    let mut out = String::new();
    for sentence in sentences {
        out.push_str("# sent_id = ");
        out.push_str(&sentence.sent_id);
        out.push('\n');
        for (i, token) in sentence.tokens.iter().enumerate() {
            out.push_str(&format!(
                "{}\t{}\t_\t{}\t_\t_\t_\t_\t_\t_\n",
                i + 1,
                token.form,
                token.upos
            ));
        }
        out.push('\n');
    }
    out
}

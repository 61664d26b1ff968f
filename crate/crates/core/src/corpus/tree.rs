use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tree line emitted by the annotator for a sentence it could not parse.
pub const NO_PARSE: &str = "(NOPARSE)";

/// A constituency tree node. Preterminals carry the word they dominate;
/// every other node has at least one child.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub label: String,
    pub body: NodeBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeBody {
    Children(Vec<TreeNode>),
    Leaf(String),
}

impl TreeNode {
    pub fn internal(label: impl Into<String>, children: Vec<TreeNode>) -> Self {
        TreeNode {
            label: label.into(),
            body: NodeBody::Children(children),
        }
    }

    pub fn preterminal(label: impl Into<String>, form: impl Into<String>) -> Self {
        TreeNode {
            label: label.into(),
            body: NodeBody::Leaf(form.into()),
        }
    }

    pub fn children(&self) -> &[TreeNode] {
        match &self.body {
            NodeBody::Children(c) => c,
            NodeBody::Leaf(_) => &[],
        }
    }

    pub fn leaf_form(&self) -> Option<&str> {
        match &self.body {
            NodeBody::Leaf(f) => Some(f),
            NodeBody::Children(_) => None,
        }
    }

    /// Word forms at the leaves, left to right.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match &node.body {
                NodeBody::Leaf(f) => out.push(f.as_str()),
                NodeBody::Children(c) => stack.extend(c.iter().rev()),
            }
        }
        out
    }
}

impl fmt::Display for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.label)?;
        match &self.body {
            NodeBody::Leaf(form) => write!(f, " {}", escape_leaf(form))?,
            NodeBody::Children(children) => {
                for child in children {
                    write!(f, " {child}")?;
                }
            }
        }
        f.write_str(")")
    }
}

fn escape_leaf(form: &str) -> String {
    form.replace('(', "-LRB-").replace(')', "-RRB-")
}

fn unescape_leaf(atom: &str) -> String {
    atom.replace("-LRB-", "(").replace("-RRB-", ")")
}

/// Read one bracketed tree per non-empty line. A `(NOPARSE)` line yields
/// `None`, so the result stays aligned with the sentences of the paired
/// CoNLL-U file.
pub fn parse_trees<R: BufRead>(input: R) -> Result<Vec<Option<TreeNode>>> {
    let mut trees = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::parse(line_no, format!("unreadable input: {e}")))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == NO_PARSE {
            trees.push(None);
            continue;
        }
        let tree = parse_line(line).map_err(|msg| Error::parse(line_no, msg))?;
        trees.push(Some(tree));
    }
    Ok(trees)
}

enum Lexeme<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn lex(line: &str) -> Vec<Lexeme<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Lexeme::Atom(&line[s..i]));
            }
            match c {
                '(' => out.push(Lexeme::Open),
                ')' => out.push(Lexeme::Close),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Lexeme::Atom(&line[s..]));
    }
    out
}

struct Partial {
    label: String,
    children: Vec<TreeNode>,
    words: Vec<String>,
}

impl Partial {
    fn finish(self) -> std::result::Result<TreeNode, String> {
        match (self.children.is_empty(), self.words.len()) {
            (true, 0) => Err(format!("node `{}` has no children", self.label)),
            (true, 1) => Ok(TreeNode::preterminal(
                self.label,
                self.words.into_iter().next().unwrap_or_default(),
            )),
            (true, _) => Err(format!(
                "preterminal `{}` dominates {} words",
                self.label,
                self.words.len()
            )),
            (false, 0) => Ok(TreeNode::internal(self.label, self.children)),
            (false, _) => Err(format!(
                "node `{}` mixes words and constituents",
                self.label
            )),
        }
    }
}

fn parse_line(line: &str) -> std::result::Result<TreeNode, String> {
    let lexemes = lex(line);
    let mut stack: Vec<Partial> = Vec::new();
    let mut root: Option<TreeNode> = None;
    let mut iter = lexemes.into_iter().peekable();

    while let Some(lexeme) = iter.next() {
        if root.is_some() {
            return Err("unexpected content after the end of the tree".into());
        }
        match lexeme {
            Lexeme::Open => {
                let label = match iter.next() {
                    Some(Lexeme::Atom(a)) => a.to_owned(),
                    _ => return Err("empty node label".into()),
                };
                stack.push(Partial {
                    label,
                    children: Vec::new(),
                    words: Vec::new(),
                });
            }
            Lexeme::Close => {
                let partial = stack
                    .pop()
                    .ok_or_else(|| "unbalanced parentheses: unexpected `)`".to_owned())?;
                let node = partial.finish()?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None => root = Some(node),
                }
            }
            Lexeme::Atom(a) => match stack.last_mut() {
                Some(parent) => parent.words.push(unescape_leaf(a)),
                None => return Err(format!("word `{a}` outside of any bracket")),
            },
        }
    }

    if !stack.is_empty() {
        return Err(format!(
            "unbalanced parentheses: {} unclosed bracket(s)",
            stack.len()
        ));
    }
    root.ok_or_else(|| "no tree on line".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Vec<Option<TreeNode>>> {
        parse_trees(s.as_bytes())
    }

    #[test]
    fn simple_tree() {
        let trees = parse("(S (NP (NOUN Ev)) (VP (VERB güzel)))\n").unwrap();
        assert_eq!(trees.len(), 1);
        let root = trees[0].as_ref().unwrap();
        assert_eq!(root.label, "S");
        let labels: Vec<_> = root.children().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["NP", "VP"]);
        let noun = &root.children()[0].children()[0];
        assert_eq!(noun.label, "NOUN");
        assert_eq!(noun.leaf_form(), Some("Ev"));
        assert_eq!(root.leaves(), ["Ev", "güzel"]);
    }

    #[test]
    fn blank_input() {
        assert!(parse("").unwrap().is_empty());
        assert!(parse("  \n\t\n").unwrap().is_empty());
    }

    #[test]
    fn unbalanced() {
        let err = parse("(S (NP (NOUN a)))\n(S (NP").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("unbalanced"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("(S (NOUN a)))").is_err());
    }

    #[test]
    fn empty_label() {
        let err = parse("( (S (NOUN a)))").unwrap_err();
        assert!(err.to_string().contains("empty node label"), "{err}");
    }

    #[test]
    fn noparse_sentinel() {
        let trees = parse("(S (NOUN a))\n(NOPARSE)\n(S (VERB b))\n").unwrap();
        assert_eq!(trees.len(), 3);
        assert!(trees[1].is_none());
    }

    #[test]
    fn bracket_escapes() {
        let trees = parse("(S (PUNCT -LRB-) (NOUN x) (PUNCT -RRB-))").unwrap();
        let root = trees[0].as_ref().unwrap();
        assert_eq!(root.leaves(), ["(", "x", ")"]);
        assert_eq!(root.to_string(), "(S (PUNCT -LRB-) (NOUN x) (PUNCT -RRB-))");
    }

    #[test]
    fn rejects_mixed_children() {
        assert!(parse("(S a (NOUN b))").is_err());
        assert!(parse("(NOUN a b)").is_err());
        assert!(parse("(S)").is_err());
        assert!(parse("(S (NOUN a)) (S (NOUN b))").is_err());
    }

    #[test]
    fn display_round_trip() {
        let line = "(S (NP (DET bir) (NOUN ev)) (VP (VERB gördüm)) (PUNCT .))";
        let tree = parse(line).unwrap().remove(0).unwrap();
        assert_eq!(tree.to_string(), line);
    }
}

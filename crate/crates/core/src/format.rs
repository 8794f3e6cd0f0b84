//! Text formats: grammar files (`.tag`), judgment corpora (`.tsv`) and token
//! strings.
//!
//! A grammar file holds one tree per line:
//!
//! ```text
//! # comment
//! tree en_on en initial (PP (P #on) DP^)
//! tree en_adjmod en auxiliary (NP AdjP^ NP*)
//! ```
//!
//! In the tree notation `(CAT child...)` is an internal node, `CAT^` a
//! substitution slot, `CAT*` a foot and `#surface` a lexical anchor. A `#`
//! at the start of a line, or after the closing parenthesis of a tree,
//! begins a comment.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::grammar::{Grammar, GrammarError};
use crate::tree::{validate_elementary, Category, ElementaryTree, LanguageTag, Node, Token, TreeType};

/// A diagnostic with a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl FormatError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        FormatError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Attested (derivable) or starred (underivable).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Judgment {
    Derivable,
    Underivable,
}

impl Judgment {
    pub fn as_str(self) -> &'static str {
        match self {
            Judgment::Derivable => "derivable",
            Judgment::Underivable => "underivable",
        }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Judgment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "derivable" => Ok(Judgment::Derivable),
            "underivable" => Ok(Judgment::Underivable),
            other => Err(format!("expected \"derivable\" or \"underivable\", found {other:?}")),
        }
    }
}

struct LineCursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl LineCursor {
    fn new(text: &str, line: usize) -> Self {
        LineCursor {
            chars: text.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, column: usize, message: impl Into<String>) -> FormatError {
        FormatError::new(self.line, column, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn at_end_or_comment(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), None | Some('#'))
    }

    /// Reads up to whitespace or a parenthesis.
    fn word(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| !c.is_whitespace() && c != '(' && c != ')') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn field(&mut self, what: &str) -> Result<(String, usize), FormatError> {
        self.skip_ws();
        let column = self.column();
        let w = self.word();
        if w.is_empty() {
            return Err(self.error(column, format!("expected {what}")));
        }
        Ok((w, column))
    }

    fn node(&mut self, language: &LanguageTag) -> Result<Node, FormatError> {
        self.skip_ws();
        let column = self.column();
        match self.peek() {
            None => Err(self.error(column, "unexpected end of line; expected a node")),
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                let cat_column = self.column();
                let label = self.word();
                if label.is_empty() {
                    return Err(self.error(cat_column, "expected a category after '('"));
                }
                let category = Category::new(&label).map_err(|e| self.error(cat_column, e.to_string()))?;
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        None => return Err(self.error(column, "unclosed parenthesis")),
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => children.push(self.node(language)?),
                    }
                }
                Ok(Node::internal(category, children))
            }
            Some(')') => Err(self.error(column, "unexpected ')'")),
            Some('#') => {
                self.pos += 1;
                let surface = self.word();
                if surface.is_empty() {
                    return Err(self.error(column, "empty anchor"));
                }
                let token = Token::new(&surface, language.clone()).map_err(|e| self.error(column, e.to_string()))?;
                Ok(Node::Anchor(token))
            }
            Some(_) => {
                let symbol = self.word();
                let (label, marker) = match symbol.char_indices().last() {
                    Some((i, c @ ('^' | '*'))) => (&symbol[..i], c),
                    _ => {
                        return Err(self.error(
                            column,
                            format!("bare category {symbol:?}; expected {symbol}^, {symbol}* or ({symbol} ...)"),
                        ))
                    }
                };
                let category = Category::new(label).map_err(|e| self.error(column, e.to_string()))?;
                Ok(if marker == '^' {
                    Node::Slot(category)
                } else {
                    Node::Foot(category)
                })
            }
        }
    }
}

fn is_tree_id(id: &str) -> bool {
    let mut chars = id.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphanumeric() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '\''))
}

fn parse_tree_line(text: &str, line: usize) -> Result<Option<ElementaryTree>, FormatError> {
    let mut cur = LineCursor::new(text, line);
    if cur.at_end_or_comment() {
        return Ok(None);
    }
    let (keyword, column) = cur.field("'tree'")?;
    if keyword != "tree" {
        return Err(cur.error(column, format!("expected 'tree', found {keyword:?}")));
    }
    let (id, column) = cur.field("a tree id")?;
    if !is_tree_id(&id) {
        return Err(cur.error(column, format!("invalid tree id {id:?}")));
    }
    let (lang, column) = cur.field("a language tag")?;
    let language = LanguageTag::new(&lang).map_err(|e| cur.error(column, e.to_string()))?;
    let (kind, column) = cur.field("'initial' or 'auxiliary'")?;
    let tree_type = match kind.as_str() {
        "initial" => TreeType::Initial,
        "auxiliary" => TreeType::Auxiliary,
        other => return Err(cur.error(column, format!("expected 'initial' or 'auxiliary', found {other:?}"))),
    };
    cur.skip_ws();
    if cur.peek() != Some('(') {
        let column = cur.column();
        return Err(cur.error(column, "expected '(' to open the tree"));
    }
    let root = cur.node(&language)?;
    if !cur.at_end_or_comment() {
        let column = cur.column();
        return Err(cur.error(column, "unexpected text after tree"));
    }
    Ok(Some(ElementaryTree::new(&id, language, tree_type, root)))
}

/// Syntax-only pass: every tree with its 1-based line number, unvalidated.
pub fn parse_trees(text: &str) -> Result<Vec<(usize, ElementaryTree)>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(tree) = parse_tree_line(line, i + 1)? {
            out.push((i + 1, tree));
        }
    }
    Ok(out)
}

/// Parses and validates a grammar file.
pub fn parse_grammar(text: &str) -> Result<Grammar, FormatError> {
    let trees = parse_trees(text)?;
    let line_of = |id: &str| trees.iter().find(|(_, t)| t.id == id).map_or(1, |(l, _)| *l);

    for (i, (line, tree)) in trees.iter().enumerate() {
        if trees[..i].iter().any(|(_, t)| t.id == tree.id) {
            return Err(FormatError::new(*line, 1, format!("duplicate tree id {:?}", tree.id)));
        }
        let violations = validate_elementary(tree);
        if !violations.is_empty() {
            let message = violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
            return Err(FormatError::new(*line, 1, format!("tree {:?}: {message}", tree.id)));
        }
    }
    Grammar::new(trees.iter().map(|(_, t)| t.clone())).map_err(|e| match &e {
        GrammarError::DuplicateId(id) | GrammarError::InvalidTree { id, .. } => {
            FormatError::new(line_of(id), 1, e.to_string())
        }
        GrammarError::UnanchoredCycle(cycle) => {
            let line = trees
                .iter()
                .find(|(_, t)| !t.is_anchored() && Some(t.root_category()) == cycle.first())
                .map_or(1, |(l, _)| *l);
            FormatError::new(line, 1, e.to_string())
        }
    })
}

/// Canonical text: trees sorted by id, one per line, single spaces.
pub fn serialize_grammar(grammar: &Grammar) -> String {
    let mut out = String::new();
    for tree in grammar.trees() {
        out.push_str(&format!(
            "tree {} {} {} {}\n",
            tree.id, tree.language, tree.tree_type, tree.root
        ));
    }
    out
}

/// Whitespace-separated `surface:lang` items.
pub fn parse_token_string(text: &str) -> Result<Vec<Token>, String> {
    text.split_whitespace()
        .map(|item| {
            let (surface, lang) = item
                .rsplit_once(':')
                .ok_or_else(|| format!("missing language tag in {item:?}"))?;
            if surface.is_empty() {
                return Err(format!("empty surface in {item:?}"));
            }
            if lang.is_empty() {
                return Err(format!("missing language tag in {item:?}"));
            }
            let language = LanguageTag::new(lang).map_err(|e| e.to_string())?;
            Token::new(surface, language).map_err(|e| e.to_string())
        })
        .collect()
}

pub fn format_tokens(tokens: &[Token]) -> String {
    tokens.iter().map(Token::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusItem {
    pub id: String,
    pub expected: Judgment,
    pub start: Category,
    pub tokens: Vec<Token>,
    pub note: String,
}

/// Five tab-separated fields per line: id, expected, start category, token
/// string, note. Blank lines and lines starting with `#` are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusItem>, FormatError> {
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(FormatError::new(
                line_no,
                1,
                format!("expected 5 tab-separated fields, found {}", fields.len()),
            ));
        }
        let column_of = |k: usize| fields[..k].iter().map(|f| f.chars().count() + 1).sum::<usize>() + 1;
        let id = fields[0].trim();
        if id.is_empty() {
            return Err(FormatError::new(line_no, 1, "empty item id"));
        }
        let expected = fields[1]
            .trim()
            .parse::<Judgment>()
            .map_err(|e| FormatError::new(line_no, column_of(1), e))?;
        let start =
            Category::new(fields[2].trim()).map_err(|e| FormatError::new(line_no, column_of(2), e.to_string()))?;
        let tokens = parse_token_string(fields[3]).map_err(|e| FormatError::new(line_no, column_of(3), e))?;
        if tokens.is_empty() {
            return Err(FormatError::new(line_no, column_of(3), "empty token string"));
        }
        items.push(CorpusItem {
            id: id.to_string(),
            expected,
            start,
            tokens,
            note: fields[4].to_string(),
        });
    }
    Ok(items)
}

//! Derivability decisions, derivation enumeration and string enumeration.
//!
//! [`Parser`] runs a memoized span chart (see `chart`). In
//! [`Mode::TwoStage`] the anchored trees selected by the input are fixed
//! first, and unanchored trees are admitted only where a selected tree has
//! a node of the matching category. [`oracle_parse`] is an independent
//! blind search used to check the chart.

mod chart;
mod compiled;
mod enumerate;
mod oracle;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::derivation::Derivation;
use crate::format::Judgment;
use crate::grammar::Grammar;
use crate::tree::{Category, Token, TreeType};

use chart::Chart;
use compiled::{CKind, Compiled};

pub use oracle::{oracle_enumerate, oracle_parse, ORACLE_MAX_TOKENS};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    SingleStage,
    TwoStage,
}

/// Upper bound on elementary-tree instances per derivation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TreeBound {
    /// `(2U + 3) * n + 1` for `U` unanchored trees and `n` tokens.
    #[default]
    Auto,
    Fixed(usize),
}

impl TreeBound {
    pub fn resolve(self, unanchored: usize, tokens: usize) -> usize {
        match self {
            TreeBound::Auto => auto_bound(unanchored, tokens),
            TreeBound::Fixed(n) => n,
        }
    }
}

pub fn auto_bound(unanchored: usize, tokens: usize) -> usize {
    (2 * unanchored + 3) * tokens + 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseConfig {
    pub start: Category,
    pub max_derivations: usize,
    pub max_trees: TreeBound,
    pub mode: Mode,
}

impl Default for ParseConfig {
    fn default() -> Self {
        ParseConfig {
            start: Category::new("S").expect("S is a category"),
            max_derivations: 100,
            max_trees: TreeBound::Auto,
            mode: Mode::SingleStage,
        }
    }
}

impl ParseConfig {
    pub fn with_start(start: Category) -> Self {
        ParseConfig {
            start,
            ..ParseConfig::default()
        }
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty token sequence")]
    EmptyInput,
    #[error("input of {0} tokens exceeds the limit of {1}")]
    TooLong(usize, usize),
    #[error("max_derivations must be at least 1")]
    NoWitnesses,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Judgment,
    /// First derivations in canonical order, at most `max_derivations`.
    pub witnesses: Vec<Derivation>,
    /// Number of derivations within the tree bound.
    pub total: u64,
    /// False when some analysis was cut by the tree bound.
    pub search_exhausted: bool,
}

/// Derivation set plus whether the tree bound cut anything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseOutcome {
    pub derivations: Vec<Derivation>,
    pub search_exhausted: bool,
}

const MAX_TOKENS: usize = 4096;

/// A grammar prepared for repeated parsing.
#[derive(Debug)]
pub struct Parser {
    compiled: Compiled,
}

impl Parser {
    pub fn new(grammar: &Grammar) -> Self {
        Parser {
            compiled: Compiled::new(grammar),
        }
    }

    fn check(&self, tokens: &[Token], cfg: &ParseConfig) -> Result<(), ParseError> {
        if tokens.is_empty() {
            return Err(ParseError::EmptyInput);
        }
        if tokens.len() > MAX_TOKENS {
            return Err(ParseError::TooLong(tokens.len(), MAX_TOKENS));
        }
        if cfg.max_derivations == 0 {
            return Err(ParseError::NoWitnesses);
        }
        Ok(())
    }

    /// Which trees may take part in a parse of `tokens`.
    fn usable(&self, tokens: &[Token], cfg: &ParseConfig) -> Vec<bool> {
        let selected: Vec<bool> = self
            .compiled
            .trees
            .iter()
            .map(|t| t.anchor.as_ref().is_some_and(|a| tokens.contains(a)))
            .collect();
        match cfg.mode {
            Mode::SingleStage => self
                .compiled
                .trees
                .iter()
                .zip(&selected)
                .map(|(t, &s)| s || !t.is_anchored())
                .collect(),
            Mode::TwoStage => self.license(selected, cfg),
        }
    }

    /// Second stage: admits unanchored trees whose root matches a node of an
    /// already admitted tree, repeated to a fixed point. Auxiliary trees are
    /// licensed by internal nodes, initial trees by slots (or the start
    /// category).
    fn license(&self, mut admitted: Vec<bool>, cfg: &ParseConfig) -> Vec<bool> {
        let g = &self.compiled;
        let ncat = g.categories.len();
        let mut sites = vec![false; ncat];
        let mut slots = vec![false; ncat];
        if let Some(start) = g.cat(&cfg.start) {
            slots[start] = true;
        }
        let mut changed = true;
        while changed {
            changed = false;
            for (t, tree) in g.trees.iter().enumerate() {
                if !admitted[t] {
                    continue;
                }
                for node in &tree.nodes {
                    match node.kind {
                        CKind::Internal { cat, .. } if !sites[cat] => {
                            sites[cat] = true;
                            changed = true;
                        }
                        CKind::Slot(cat) if !slots[cat] => {
                            slots[cat] = true;
                            changed = true;
                        }
                        _ => {}
                    }
                }
            }
            for (t, tree) in g.trees.iter().enumerate() {
                if admitted[t] || tree.is_anchored() {
                    continue;
                }
                let root = tree.root_cat();
                let licensed = match tree.tree_type {
                    TreeType::Auxiliary => sites[root],
                    TreeType::Initial => slots[root],
                };
                if licensed {
                    admitted[t] = true;
                    changed = true;
                }
            }
        }
        admitted
    }

    fn with_chart<R>(
        &self,
        tokens: &[Token],
        cfg: &ParseConfig,
        f: impl FnOnce(&mut Chart<'_>, Vec<(usize, usize)>) -> R,
    ) -> R {
        let usable = self.usable(tokens, cfg);
        let mut chart = Chart::new(&self.compiled, tokens, &usable);
        let roots = match self.compiled.cat(&cfg.start) {
            Some(start) => chart.roots(start),
            None => Vec::new(),
        };
        f(&mut chart, roots)
    }

    fn bound(&self, tokens: &[Token], cfg: &ParseConfig) -> usize {
        cfg.max_trees.resolve(self.compiled.unanchored, tokens.len())
    }

    /// Every complete derivation of `tokens` from `cfg.start` within the
    /// tree bound, in canonical order.
    pub fn parse_outcome(&self, tokens: &[Token], cfg: &ParseConfig) -> Result<ParseOutcome, ParseError> {
        self.check(tokens, cfg)?;
        let bound = self.bound(tokens, cfg);
        Ok(self.with_chart(tokens, cfg, |chart, roots| {
            let mut derivations = Vec::new();
            let mut exhausted = true;
            for (tree, item) in roots {
                for (d, size) in chart.derivations(tree, item) {
                    if size <= bound {
                        derivations.push(d);
                    } else {
                        exhausted = false;
                    }
                }
            }
            derivations.sort();
            derivations.dedup();
            ParseOutcome {
                derivations,
                search_exhausted: exhausted,
            }
        }))
    }

    pub fn parse(&self, tokens: &[Token], cfg: &ParseConfig) -> Result<Vec<Derivation>, ParseError> {
        self.parse_outcome(tokens, cfg).map(|o| o.derivations)
    }

    /// Number of derivations within the tree bound, computed on the packed
    /// chart without building them. The flag is false if the bound cut any.
    pub fn count(&self, tokens: &[Token], cfg: &ParseConfig) -> Result<(u64, bool), ParseError> {
        self.check(tokens, cfg)?;
        let bound = self.bound(tokens, cfg);
        Ok(self.with_chart(tokens, cfg, |chart, roots| {
            let mut within = 0u64;
            let mut beyond = 0u64;
            for (_, item) in roots {
                // Bucket k holds derivations attaching k trees below the root.
                let h = chart.counts(item, bound);
                for (k, &c) in h.iter().enumerate() {
                    if k < bound {
                        within = within.saturating_add(c);
                    } else {
                        beyond = beyond.saturating_add(c);
                    }
                }
            }
            (within, beyond == 0)
        }))
    }

    pub fn judge(&self, tokens: &[Token], cfg: &ParseConfig) -> Result<Verdict, ParseError> {
        let outcome = self.parse_outcome(tokens, cfg)?;
        let total = outcome.derivations.len() as u64;
        let mut witnesses = outcome.derivations;
        witnesses.truncate(cfg.max_derivations);
        Ok(Verdict {
            status: if total > 0 {
                Judgment::Derivable
            } else {
                Judgment::Underivable
            },
            witnesses,
            total,
            search_exhausted: outcome.search_exhausted,
        })
    }

    /// Yields of all complete derivations rooted `start` with at most
    /// `max_len` tokens.
    pub fn enumerate_strings(&self, start: &Category, max_len: usize) -> BTreeSet<Vec<Token>> {
        enumerate::strings(&self.compiled, start, max_len)
    }
}

pub fn parse(grammar: &Grammar, tokens: &[Token], cfg: &ParseConfig) -> Result<Vec<Derivation>, ParseError> {
    Parser::new(grammar).parse(tokens, cfg)
}

pub fn two_stage_parse(grammar: &Grammar, tokens: &[Token], cfg: &ParseConfig) -> Result<Vec<Derivation>, ParseError> {
    Parser::new(grammar).parse(tokens, &cfg.clone().mode(Mode::TwoStage))
}

pub fn judge(grammar: &Grammar, tokens: &[Token], cfg: &ParseConfig) -> Result<Verdict, ParseError> {
    Parser::new(grammar).judge(tokens, cfg)
}

pub fn enumerate_strings(grammar: &Grammar, start: &Category, max_len: usize) -> BTreeSet<Vec<Token>> {
    Parser::new(grammar).enumerate_strings(start, max_len)
}

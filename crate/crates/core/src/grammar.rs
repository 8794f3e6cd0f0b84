//! Validated grammars and grammar-level checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::tree::{validate_elementary, Category, ElementaryTree, LanguageTag, NodeAddress, TreeType, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("duplicate tree id {0:?}")]
    DuplicateId(String),
    #[error("tree {id:?} is invalid: {}", join(violations))]
    InvalidTree { id: String, violations: Vec<Violation> },
    #[error("unanchored trees form a substitution cycle: {}", cycle_text(.0))]
    UnanchoredCycle(Vec<Category>),
}

fn join(violations: &[Violation]) -> String {
    violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

fn cycle_text(cycle: &[Category]) -> String {
    cycle.iter().map(Category::as_str).collect::<Vec<_>>().join(" -> ")
}

/// A set of elementary trees keyed by id that passed [`validate_grammar`]
/// without errors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grammar {
    trees: BTreeMap<String, ElementaryTree>,
    unanchored: usize,
}

impl Grammar {
    pub fn new(trees: impl IntoIterator<Item = ElementaryTree>) -> Result<Self, GrammarError> {
        let mut map = BTreeMap::new();
        for tree in trees {
            if map.contains_key(&tree.id) {
                return Err(GrammarError::DuplicateId(tree.id));
            }
            map.insert(tree.id.clone(), tree);
        }
        for tree in map.values() {
            let violations = validate_elementary(tree);
            if !violations.is_empty() {
                return Err(GrammarError::InvalidTree {
                    id: tree.id.clone(),
                    violations,
                });
            }
        }
        if let Some(cycle) = unanchored_cycle(map.values()) {
            return Err(GrammarError::UnanchoredCycle(cycle));
        }
        let unanchored = map.values().filter(|t| !t.is_anchored()).count();
        Ok(Grammar { trees: map, unanchored })
    }

    pub fn empty() -> Self {
        Grammar::default()
    }

    pub fn get(&self, id: &str) -> Option<&ElementaryTree> {
        self.trees.get(id)
    }

    /// Trees in id order.
    pub fn trees(&self) -> impl Iterator<Item = &ElementaryTree> {
        self.trees.values()
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn languages(&self) -> BTreeSet<LanguageTag> {
        self.trees.values().map(|t| t.language.clone()).collect()
    }

    pub fn unanchored_count(&self) -> usize {
        self.unanchored
    }

    /// Union of two grammars; colliding ids are an error and the combined
    /// tree set is revalidated.
    pub fn union(&self, other: &Grammar) -> Result<Grammar, GrammarError> {
        if let Some(id) = other.trees.keys().find(|id| self.trees.contains_key(*id)) {
            return Err(GrammarError::DuplicateId(id.clone()));
        }
        Grammar::new(self.trees.values().chain(other.trees.values()).cloned())
    }

    /// Keeps only the trees accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&ElementaryTree) -> bool) -> Result<Grammar, GrammarError> {
        Grammar::new(self.trees.values().filter(|t| keep(t)).cloned())
    }

    pub fn validate(&self) -> ValidationReport {
        let trees: Vec<_> = self.trees.values().cloned().collect();
        validate_grammar(&trees)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub severity: Severity,
    pub tree: Option<String>,
    pub address: Option<NodeAddress>,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{level}")?;
        if let Some(tree) = &self.tree {
            write!(f, " {tree}")?;
        }
        if let Some(address) = &self.address {
            write!(f, " @{address}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.findings.iter().any(|f| f.severity == Severity::Error)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        Ok(())
    }
}

/// Checks a raw tree collection: per-tree invariants, duplicate ids and
/// unanchored substitution cycles as errors; slots that no initial tree can
/// fill as warnings.
pub fn validate_grammar(trees: &[ElementaryTree]) -> ValidationReport {
    let mut findings = Vec::new();
    let mut seen = BTreeSet::new();
    for tree in trees {
        if !seen.insert(tree.id.as_str()) {
            findings.push(Finding {
                severity: Severity::Error,
                tree: Some(tree.id.clone()),
                address: None,
                message: "duplicate tree id".into(),
            });
        }
        for v in validate_elementary(tree) {
            findings.push(Finding {
                severity: Severity::Error,
                tree: Some(tree.id.clone()),
                address: Some(v.address),
                message: v.message,
            });
        }
    }
    if let Some(cycle) = unanchored_cycle(trees.iter()) {
        findings.push(Finding {
            severity: Severity::Error,
            tree: None,
            address: None,
            message: format!("unanchored substitution cycle {}", cycle_text(&cycle)),
        });
    }

    let initial_roots: BTreeSet<&Category> = trees
        .iter()
        .filter(|t| t.tree_type == TreeType::Initial)
        .filter_map(|t| t.root.category())
        .collect();
    for tree in trees {
        for (address, node) in tree.root.walk() {
            if let crate::tree::Node::Slot(c) = node {
                if !initial_roots.contains(c) {
                    findings.push(Finding {
                        severity: Severity::Warning,
                        tree: Some(tree.id.clone()),
                        address: Some(address),
                        message: format!("unfillable slot {c}^: no initial tree is rooted {c}"),
                    });
                }
            }
        }
    }
    ValidationReport { findings }
}

/// Finds a cycle in the graph whose vertices are the root categories of
/// unanchored initial trees, with an edge from such a root to each of the
/// tree's slot categories that is itself such a root. Only these trees can
/// fill a slot without consuming a token.
fn unanchored_cycle<'a>(trees: impl Iterator<Item = &'a ElementaryTree>) -> Option<Vec<Category>> {
    let unanchored: Vec<&ElementaryTree> = trees
        .filter(|t| t.tree_type == TreeType::Initial && !t.is_anchored())
        .filter(|t| t.root.category().is_some())
        .collect();
    let vertices: BTreeSet<&Category> = unanchored.iter().map(|t| t.root_category()).collect();
    let mut edges: BTreeMap<&Category, BTreeSet<&Category>> = BTreeMap::new();
    for t in &unanchored {
        let out = edges.entry(t.root_category()).or_default();
        out.extend(t.slot_categories().into_iter().filter(|c| vertices.contains(c)));
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit<'a>(
        v: &'a Category,
        edges: &BTreeMap<&'a Category, BTreeSet<&'a Category>>,
        marks: &mut BTreeMap<&'a Category, Mark>,
        stack: &mut Vec<&'a Category>,
    ) -> Option<Vec<Category>> {
        match marks.get(v) {
            Some(Mark::Done) => return None,
            Some(Mark::Open) => {
                let start = stack.iter().position(|c| *c == v).unwrap_or(0);
                let mut cycle: Vec<Category> = stack[start..].iter().map(|c| (*c).clone()).collect();
                cycle.push(v.clone());
                return Some(cycle);
            }
            None => {}
        }
        marks.insert(v, Mark::Open);
        stack.push(v);
        for next in edges.get(v).into_iter().flatten() {
            if let Some(cycle) = visit(next, edges, marks, stack) {
                return Some(cycle);
            }
        }
        stack.pop();
        marks.insert(v, Mark::Done);
        None
    }

    let mut marks = BTreeMap::new();
    for v in &vertices {
        let mut stack = Vec::new();
        if let Some(cycle) = visit(v, &edges, &mut marks, &mut stack) {
            return Some(cycle);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_trees;

    fn trees(text: &str) -> Vec<ElementaryTree> {
        parse_trees(text).unwrap().into_iter().map(|(_, t)| t).collect()
    }

    #[test]
    fn two_cycle_is_an_error() {
        let t = trees(
            "tree x en initial (X Y^)\n\
             tree y en initial (Y X^)\n",
        );
        let report = validate_grammar(&t);
        assert!(report.has_errors());
        assert!(report.findings[0].message.contains("cycle X -> Y -> X"));
        assert_eq!(
            Grammar::new(t),
            Err(GrammarError::UnanchoredCycle(vec![
                Category::new("X").unwrap(),
                Category::new("Y").unwrap(),
                Category::new("X").unwrap()
            ]))
        );
    }

    #[test]
    fn anchored_trees_break_cycles() {
        // Y is rooted by an anchored tree only, so X -> Y is not an edge.
        let t = trees(
            "tree x en initial (X Y^)\n\
             tree y en initial (Y (W #w) X^)\n",
        );
        assert!(Grammar::new(t).is_ok());
    }

    #[test]
    fn self_slot_on_auxiliary_tree_is_fine() {
        let t = trees(
            "tree stack en auxiliary (AdjP AdjP^ AdjP*)\n\
             tree green en initial (AdjP (Adj #green))\n",
        );
        let g = Grammar::new(t).unwrap();
        assert!(g.validate().is_empty());
        assert_eq!(g.unanchored_count(), 1);
    }

    #[test]
    fn unfillable_slot_is_a_warning() {
        let t = trees("tree many en initial (NP QP^ (N #friends))\n");
        let report = validate_grammar(&t);
        assert_eq!(report.findings.len(), 1);
        assert_eq!(report.findings[0].severity, Severity::Warning);
        assert!(report.findings[0].message.starts_with("unfillable slot QP^"));
        assert!(!report.has_errors());
        assert!(Grammar::new(t).is_ok());
    }

    #[test]
    fn duplicates_are_rejected() {
        let t = trees(
            "tree a en initial (NP (N #a))\n\
             tree a en initial (NP (N #b))\n",
        );
        assert!(validate_grammar(&t).has_errors());
        assert_eq!(Grammar::new(t), Err(GrammarError::DuplicateId("a".into())));
    }

    #[test]
    fn union_checks_ids_and_cycles() {
        let a = Grammar::new(trees("tree x en initial (X Y^)\n")).unwrap();
        let b = Grammar::new(trees("tree y hi initial (Y X^)\n")).unwrap();
        assert!(matches!(a.union(&b), Err(GrammarError::UnanchoredCycle(_))));
        assert_eq!(a.union(&a), Err(GrammarError::DuplicateId("x".into())));
        let c = Grammar::new(trees("tree z hi initial (Y (N #z))\n")).unwrap();
        let u = a.union(&c).unwrap();
        assert_eq!(u.len(), 2);
        assert_eq!(u.languages().len(), 2);
    }
}

//! Derivation trees and their replay into derived trees.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::grammar::Grammar;
use crate::tree::{adjoin, substitute, DerivedTree, NodeAddress, TreeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operation {
    Substitute,
    Adjoin,
}

impl Operation {
    pub fn as_str(self) -> &'static str {
        match self {
            Operation::Substitute => "subst",
            Operation::Adjoin => "adjoin",
        }
    }
}

/// One elementary-tree instance and the operations performed on its nodes.
///
/// Step addresses refer to nodes of the instance's own elementary tree.
/// A derivation is canonical when every step list is sorted; the derived
/// `Ord` then matches the (host, address, child id) ordering.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Derivation {
    pub tree: String,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub address: NodeAddress,
    pub operation: Operation,
    pub child: Derivation,
}

impl Derivation {
    pub fn leaf(tree: &str) -> Self {
        Derivation {
            tree: tree.to_string(),
            steps: Vec::new(),
        }
    }

    pub fn canonicalize(&mut self) {
        for step in &mut self.steps {
            step.child.canonicalize();
        }
        self.steps.sort();
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }

    /// Number of elementary-tree instances.
    pub fn tree_count(&self) -> usize {
        1 + self.steps.iter().map(|s| s.child.tree_count()).sum::<usize>()
    }

    /// Canonical one-line form: `(id (op addr child)...)`.
    pub fn to_sexpr(&self) -> String {
        let mut out = String::new();
        self.write_sexpr(&mut out);
        out
    }

    fn write_sexpr(&self, out: &mut String) {
        out.push('(');
        out.push_str(&self.tree);
        for step in &self.steps {
            let _ = write!(out, " ({} {} ", step.operation.as_str(), step.address);
            step.child.write_sexpr(out);
            out.push(')');
        }
        out.push(')');
    }

    fn write_nested(&self, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(
                f,
                "{:indent$}{} {} @{}",
                "",
                step.child.tree,
                step.operation.as_str(),
                step.address,
                indent = 2 * (depth + 1)
            )?;
            step.child.write_nested(depth + 1, f)?;
        }
        Ok(())
    }
}

impl fmt::Display for Derivation {
    /// Nested listing, one step per line, two spaces per level.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.tree)?;
        self.write_nested(0, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("unknown tree id {0:?}")]
    UnknownTree(String),
    #[error("{operation} of {child} into {host} at @{address}: {source}")]
    Step {
        host: String,
        child: String,
        operation: &'static str,
        address: NodeAddress,
        source: Box<TreeError>,
    },
}

/// Builds the derived tree of `derivation`, children first.
pub fn replay(grammar: &Grammar, derivation: &Derivation) -> Result<DerivedTree, ReplayError> {
    let elementary = grammar
        .get(&derivation.tree)
        .ok_or_else(|| ReplayError::UnknownTree(derivation.tree.clone()))?;
    let mut tree = DerivedTree::from(elementary);

    let mut steps: Vec<&Step> = derivation.steps.iter().collect();
    // Deeper addresses first: an operation only rewrites the subtree at its
    // own address, so siblings and ancestors keep their paths.
    steps.sort_by(|a, b| b.address.cmp(&a.address));
    for step in steps {
        let child = replay(grammar, &step.child)?;
        let result = match step.operation {
            Operation::Substitute => substitute(&tree, &step.address, &child),
            Operation::Adjoin => adjoin(&tree, &step.address, &child),
        };
        tree = result.map_err(|source| ReplayError::Step {
            host: derivation.tree.clone(),
            child: step.child.tree.clone(),
            operation: step.operation.as_str(),
            address: step.address.clone(),
            source: Box::new(source),
        })?;
    }
    Ok(tree)
}

use std::collections::HashMap;

use crate::grammar::Grammar;
use crate::tree::{Category, ElementaryTree, Node, NodeAddress, Token, TreeType};

/// Flattened, index-based view of a grammar used by the chart and the
/// string enumerator.
#[derive(Debug)]
pub(crate) struct Compiled {
    pub trees: Vec<CTree>,
    pub categories: Vec<Category>,
    cat_index: HashMap<Category, usize>,
    pub initial_by_root: Vec<Vec<usize>>,
    pub aux_by_root: Vec<Vec<usize>>,
    pub unanchored: usize,
}

#[derive(Debug)]
pub(crate) struct CTree {
    pub id: String,
    pub tree_type: TreeType,
    pub anchor: Option<Token>,
    /// Pre-order; index 0 is the root.
    pub nodes: Vec<CNode>,
}

#[derive(Debug)]
pub(crate) struct CNode {
    pub kind: CKind,
    pub address: NodeAddress,
    pub has_foot: bool,
    /// Whether the tree's anchor lies at or below the node.
    pub has_anchor: bool,
    /// Fewest tokens the node can span, counting a foot as one.
    pub min_len: usize,
}

#[derive(Debug)]
pub(crate) enum CKind {
    Internal { cat: usize, children: Vec<usize> },
    Slot(usize),
    Foot,
    Anchor(Token),
}

impl CTree {
    pub fn root_cat(&self) -> usize {
        match self.nodes[0].kind {
            CKind::Internal { cat, .. } => cat,
            _ => unreachable!("validated roots are internal"),
        }
    }

    pub fn is_anchored(&self) -> bool {
        self.anchor.is_some()
    }
}

impl Compiled {
    pub fn new(grammar: &Grammar) -> Self {
        let mut compiled = Compiled {
            trees: Vec::new(),
            categories: Vec::new(),
            cat_index: HashMap::new(),
            initial_by_root: Vec::new(),
            aux_by_root: Vec::new(),
            unanchored: grammar.unanchored_count(),
        };
        for tree in grammar.trees() {
            let ctree = compiled.compile_tree(tree);
            compiled.trees.push(ctree);
        }
        let n = compiled.categories.len();
        compiled.initial_by_root = vec![Vec::new(); n];
        compiled.aux_by_root = vec![Vec::new(); n];
        for (t, tree) in compiled.trees.iter().enumerate() {
            let root = tree.root_cat();
            match tree.tree_type {
                TreeType::Initial => compiled.initial_by_root[root].push(t),
                TreeType::Auxiliary => compiled.aux_by_root[root].push(t),
            }
        }
        compiled
    }

    pub fn cat(&self, category: &Category) -> Option<usize> {
        self.cat_index.get(category).copied()
    }

    fn intern(&mut self, category: &Category) -> usize {
        if let Some(&i) = self.cat_index.get(category) {
            return i;
        }
        self.categories.push(category.clone());
        self.cat_index.insert(category.clone(), self.categories.len() - 1);
        self.categories.len() - 1
    }

    fn compile_tree(&mut self, tree: &ElementaryTree) -> CTree {
        let mut nodes = Vec::new();
        self.compile_node(&tree.root, NodeAddress::root(), &mut nodes);
        CTree {
            id: tree.id.clone(),
            tree_type: tree.tree_type,
            anchor: tree.anchor().cloned(),
            nodes,
        }
    }

    fn compile_node(&mut self, node: &Node, address: NodeAddress, out: &mut Vec<CNode>) -> usize {
        let index = out.len();
        let placeholder = CNode {
            kind: CKind::Foot,
            address: address.clone(),
            has_foot: false,
            has_anchor: false,
            min_len: 0,
        };
        out.push(placeholder);
        let (kind, has_foot, has_anchor, min_len) = match node {
            Node::Internal { category, children, .. } => {
                let cat = self.intern(category);
                let mut ids = Vec::with_capacity(children.len());
                for (i, child) in children.iter().enumerate() {
                    ids.push(self.compile_node(child, address.child(i + 1), out));
                }
                let has_foot = ids.iter().any(|&c| out[c].has_foot);
                let has_anchor = ids.iter().any(|&c| out[c].has_anchor);
                let min_len = ids.iter().map(|&c| out[c].min_len).sum();
                (CKind::Internal { cat, children: ids }, has_foot, has_anchor, min_len)
            }
            Node::Slot(c) => (CKind::Slot(self.intern(c)), false, false, 1),
            Node::Foot(c) => {
                self.intern(c);
                (CKind::Foot, true, false, 1)
            }
            Node::Anchor(t) => (CKind::Anchor(t.clone()), false, true, 1),
        };
        out[index] = CNode {
            kind,
            address,
            has_foot,
            has_anchor,
            min_len,
        };
        index
    }
}

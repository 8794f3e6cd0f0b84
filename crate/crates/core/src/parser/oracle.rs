//! Brute-force derivation search, kept independent of the chart.
//!
//! The search grows one derived tree at a time. At each step it takes the
//! first undecided node in pre-order: a slot must be filled by some initial
//! tree; an internal node either stays as it is or receives one auxiliary
//! tree. Everything left of that node is final, so the yield so far must be
//! a prefix of the input.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::derivation::{Derivation, Operation, Step};
use crate::grammar::Grammar;
use crate::tree::{Category, ElementaryTree, Node, NodeAddress, Token, TreeType};

use super::{auto_bound, ParseError};

/// Longest input `oracle_parse` accepts.
pub const ORACLE_MAX_TOKENS: usize = 8;

#[derive(Clone, Debug)]
enum Work {
    Internal {
        category: Category,
        owner: usize,
        address: NodeAddress,
        decided: bool,
        children: Vec<Rc<Work>>,
    },
    Slot {
        category: Category,
        owner: usize,
        address: NodeAddress,
    },
    Anchor(Token),
}

#[derive(Clone, Debug)]
struct Instance {
    tree: String,
    parent: Option<(usize, Operation, NodeAddress)>,
}

#[derive(Debug)]
struct Link {
    instance: Instance,
    prev: Option<Rc<Link>>,
}

/// Append-only list shared between search branches.
#[derive(Clone, Debug, Default)]
struct Instances {
    len: usize,
    last: Option<Rc<Link>>,
}

impl Instances {
    fn len(&self) -> usize {
        self.len
    }

    fn push(&mut self, instance: Instance) {
        let prev = self.last.take();
        self.last = Some(Rc::new(Link { instance, prev }));
        self.len += 1;
    }

    fn to_vec(&self) -> Vec<Instance> {
        let mut out = Vec::with_capacity(self.len);
        let mut cur = &self.last;
        while let Some(link) = cur {
            out.push(link.instance.clone());
            cur = &link.prev;
        }
        out.reverse();
        out
    }
}

#[derive(Clone, Debug)]
struct State {
    tree: Rc<Work>,
    instances: Instances,
}

enum Target<'a> {
    Tokens(&'a [Token]),
    MaxLen(usize),
}

/// One pre-order pass over a work tree: the first open node, and whether
/// the leaves can still grow into the target.
struct Scan {
    open: Option<Vec<usize>>,
    /// Leaves before the first open node.
    prefix: usize,
    /// Leaves from the first open node on.
    rest: usize,
    /// Input position the remaining leaves are embedded up to.
    cursor: usize,
    viable: bool,
}

/// Leaves from the first open node on must embed in the input after the
/// prefix: anchors in order, each slot taking at least one token, anything
/// else possibly inserted later.
fn scan(node: &Work, tokens: Option<&[Token]>) -> Scan {
    fn go(node: &Work, tokens: Option<&[Token]>, path: &mut Vec<usize>, s: &mut Scan) {
        let first_open = s.open.is_none();
        match node {
            Work::Anchor(t) if first_open => {
                if let Some(toks) = tokens {
                    s.viable &= toks.get(s.prefix) == Some(t);
                }
                s.prefix += 1;
            }
            Work::Anchor(t) => {
                s.rest += 1;
                if let Some(toks) = tokens {
                    match toks[s.cursor.min(toks.len())..].iter().position(|h| h == t) {
                        Some(k) => s.cursor += k + 1,
                        None => s.viable = false,
                    }
                }
            }
            Work::Slot { .. } => {
                if first_open {
                    s.open = Some(path.clone());
                    s.cursor = s.prefix;
                }
                s.rest += 1;
                s.cursor += 1;
                if let Some(toks) = tokens {
                    s.viable &= s.cursor <= toks.len();
                }
            }
            Work::Internal { decided, children, .. } => {
                if first_open && !decided {
                    s.open = Some(path.clone());
                    s.cursor = s.prefix;
                }
                for (i, c) in children.iter().enumerate() {
                    if !s.viable {
                        return;
                    }
                    path.push(i);
                    go(c, tokens, path, s);
                    path.pop();
                }
            }
        }
    }
    let mut s = Scan {
        open: None,
        prefix: 0,
        rest: 0,
        cursor: 0,
        viable: true,
    };
    go(node, tokens, &mut Vec::new(), &mut s);
    s
}

fn leaves(node: &Work, out: &mut Vec<Token>) {
    match node {
        Work::Anchor(t) => out.push(t.clone()),
        Work::Internal { children, .. } => children.iter().for_each(|c| leaves(c, out)),
        Work::Slot { .. } => unreachable!("complete trees have no slots"),
    }
}

fn at<'a>(node: &'a Rc<Work>, path: &[usize]) -> &'a Rc<Work> {
    let mut cur = node;
    for &i in path {
        cur = match &**cur {
            Work::Internal { children, .. } => &children[i],
            _ => unreachable!("paths come from scan"),
        };
    }
    cur
}

/// Unshares the nodes along `path`; siblings stay shared.
fn at_mut<'a>(node: &'a mut Rc<Work>, path: &[usize]) -> &'a mut Rc<Work> {
    let mut cur = node;
    for &i in path {
        cur = match Rc::make_mut(cur) {
            Work::Internal { children, .. } => &mut children[i],
            _ => unreachable!("paths come from scan"),
        };
    }
    cur
}

/// Copies an elementary tree into work nodes owned by `owner`; the foot, if
/// any, becomes `foot_content`.
fn instantiate(tree: &ElementaryTree, owner: usize, foot_content: Option<Rc<Work>>) -> Rc<Work> {
    fn go(node: &Node, owner: usize, address: NodeAddress, foot: &mut Option<Rc<Work>>) -> Rc<Work> {
        Rc::new(match node {
            Node::Internal { category, children, .. } => Work::Internal {
                category: category.clone(),
                owner,
                address: address.clone(),
                decided: false,
                children: children
                    .iter()
                    .enumerate()
                    .map(|(i, c)| go(c, owner, address.child(i + 1), foot))
                    .collect(),
            },
            Node::Slot(c) => Work::Slot {
                category: c.clone(),
                owner,
                address,
            },
            Node::Foot(_) => return foot.take().expect("one foot per auxiliary tree"),
            Node::Anchor(t) => Work::Anchor(t.clone()),
        })
    }
    let mut foot = foot_content;
    go(&tree.root, owner, NodeAddress::root(), &mut foot)
}

struct Search<'a> {
    grammar: &'a Grammar,
    target: Target<'a>,
    bound: usize,
    found: Vec<(Vec<Token>, Derivation)>,
}

impl Search<'_> {
    fn run(&mut self, state: State) {
        if state.instances.len() > self.bound {
            return;
        }
        let tokens = match self.target {
            Target::Tokens(tokens) => Some(tokens),
            Target::MaxLen(_) => None,
        };
        let s = scan(&state.tree, tokens);
        if !s.viable {
            return;
        }
        match self.target {
            Target::Tokens(tokens) => {
                if s.open.is_none() && s.prefix != tokens.len() {
                    return;
                }
            }
            Target::MaxLen(max) => {
                if s.prefix + s.rest > max {
                    return;
                }
            }
        }
        let Some(path) = s.open else {
            let mut tokens = Vec::with_capacity(s.prefix);
            leaves(&state.tree, &mut tokens);
            let derivation = build(&state.instances.to_vec());
            self.found.push((tokens, derivation));
            return;
        };

        let site = at(&state.tree, &path).clone();
        match &*site {
            Work::Slot {
                category,
                owner,
                address,
            } => {
                for tree in self.grammar.trees() {
                    if tree.tree_type != TreeType::Initial || tree.root.category() != Some(category) {
                        continue;
                    }
                    let mut next = state.clone();
                    let k = next.instances.len();
                    next.instances.push(Instance {
                        tree: tree.id.clone(),
                        parent: Some((*owner, Operation::Substitute, address.clone())),
                    });
                    *at_mut(&mut next.tree, &path) = instantiate(tree, k, None);
                    self.run(next);
                }
            }
            Work::Internal {
                category,
                owner,
                address,
                children,
                ..
            } => {
                let mut kept = state.clone();
                if let Work::Internal { decided, .. } = Rc::make_mut(at_mut(&mut kept.tree, &path)) {
                    *decided = true;
                }
                self.run(kept);

                let excised = Rc::new(Work::Internal {
                    category: category.clone(),
                    owner: *owner,
                    address: address.clone(),
                    decided: true,
                    children: children.clone(),
                });
                for tree in self.grammar.trees() {
                    if tree.tree_type != TreeType::Auxiliary || tree.root.category() != Some(category) {
                        continue;
                    }
                    let mut next = state.clone();
                    let k = next.instances.len();
                    next.instances.push(Instance {
                        tree: tree.id.clone(),
                        parent: Some((*owner, Operation::Adjoin, address.clone())),
                    });
                    *at_mut(&mut next.tree, &path) = instantiate(tree, k, Some(excised.clone()));
                    self.run(next);
                }
            }
            Work::Anchor(_) => unreachable!("anchors are never open"),
        }
    }

    fn start(&mut self, start: &Category) {
        for tree in self.grammar.trees() {
            if tree.tree_type == TreeType::Initial && tree.root.category() == Some(start) {
                let mut instances = Instances::default();
                instances.push(Instance {
                    tree: tree.id.clone(),
                    parent: None,
                });
                self.run(State {
                    tree: instantiate(tree, 0, None),
                    instances,
                });
            }
        }
    }
}

/// Anchors of trees that could occur in some derivation from `start`. A
/// category is reachable from the start category or from any node of a
/// tree rooted in a reachable category.
fn reachable_anchors<'a>(grammar: &'a Grammar, start: &'a Category) -> Vec<&'a Token> {
    fn visit<'a>(node: &'a Node, cats: &mut Vec<&'a Category>, anchors: &mut Vec<&'a Token>) {
        match node {
            Node::Internal { category, children, .. } => {
                if !cats.contains(&category) {
                    cats.push(category);
                }
                for c in children {
                    visit(c, cats, anchors);
                }
            }
            Node::Slot(category) => {
                if !cats.contains(&category) {
                    cats.push(category);
                }
            }
            Node::Anchor(t) => anchors.push(t),
            Node::Foot(_) => {}
        }
    }
    let mut cats = vec![start];
    let mut anchors = Vec::new();
    let trees: Vec<&ElementaryTree> = grammar.trees().collect();
    let mut visited = vec![false; trees.len()];
    let mut grown = true;
    while grown {
        grown = false;
        for (i, tree) in trees.iter().enumerate() {
            if !visited[i] && cats.contains(&tree.root_category()) {
                visited[i] = true;
                grown = true;
                visit(&tree.root, &mut cats, &mut anchors);
            }
        }
    }
    anchors
}

fn build(instances: &[Instance]) -> Derivation {
    fn go(k: usize, instances: &[Instance]) -> Derivation {
        let mut steps: Vec<Step> = instances
            .iter()
            .enumerate()
            .filter_map(|(c, inst)| match &inst.parent {
                Some((p, op, address)) if *p == k => Some(Step {
                    address: address.clone(),
                    operation: *op,
                    child: go(c, instances),
                }),
                _ => None,
            })
            .collect();
        steps.sort();
        Derivation {
            tree: instances[k].tree.clone(),
            steps,
        }
    }
    go(0, instances)
}

/// Every derivation of `tokens` from `start`, found by exhaustive search
/// under the automatic tree bound. Canonical order, no duplicates.
pub fn oracle_parse(grammar: &Grammar, tokens: &[Token], start: &Category) -> Result<Vec<Derivation>, ParseError> {
    if tokens.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    if tokens.len() > ORACLE_MAX_TOKENS {
        return Err(ParseError::TooLong(tokens.len(), ORACLE_MAX_TOKENS));
    }
    let reachable = reachable_anchors(grammar, start);
    if !tokens.iter().all(|t| reachable.contains(&t)) {
        return Ok(Vec::new());
    }
    let mut search = Search {
        grammar,
        target: Target::Tokens(tokens),
        bound: auto_bound(grammar.unanchored_count(), tokens.len()),
        found: Vec::new(),
    };
    search.start(start);
    let mut out: Vec<Derivation> = search.found.into_iter().map(|(_, d)| d).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Every derivation from `start` whose yield has at most `max_len` tokens,
/// grouped by yield.
pub fn oracle_enumerate(grammar: &Grammar, start: &Category, max_len: usize) -> BTreeMap<Vec<Token>, Vec<Derivation>> {
    let mut search = Search {
        grammar,
        target: Target::MaxLen(max_len),
        bound: auto_bound(grammar.unanchored_count(), max_len),
        found: Vec::new(),
    };
    if max_len > 0 {
        search.start(start);
    }
    let mut out: BTreeMap<Vec<Token>, Vec<Derivation>> = BTreeMap::new();
    for (tokens, d) in search.found {
        out.entry(tokens).or_default().push(d);
    }
    for ds in out.values_mut() {
        ds.sort();
        ds.dedup();
    }
    out
}

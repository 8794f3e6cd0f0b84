//! Bounded string enumeration over node yields, built up by exact length.
//!
//! Each node gets the set of yields it can produce: a plain token string,
//! or for nodes above the foot a pair (before foot, after foot). Yields of
//! length `L` are assembled from child yields of length at most `L`, so
//! levels below `L` are final when level `L` is computed. Within one level
//! only substitution and unary chains feed each other, and those are
//! settled by repeating the pass until nothing changes.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::tree::{Category, Token};

use super::compiled::{CKind, Compiled};

#[derive(Clone, PartialEq, Eq, Hash)]
struct Yield {
    left: Vec<u32>,
    /// Present for yields that still wrap a foot.
    right: Option<Vec<u32>>,
}

impl Yield {
    fn concat(&self, other: &Yield) -> Yield {
        match (&self.right, &other.right) {
            (None, None) => Yield {
                left: [self.left.as_slice(), &other.left].concat(),
                right: None,
            },
            (Some(r), None) => Yield {
                left: self.left.clone(),
                right: Some([r.as_slice(), &other.left].concat()),
            },
            (None, Some(r)) => Yield {
                left: [self.left.as_slice(), &other.left].concat(),
                right: Some(r.clone()),
            },
            (Some(_), Some(_)) => unreachable!("a tree has one foot"),
        }
    }

    /// Places `inner` at the foot of `self`.
    fn wrap(&self, inner: &Yield) -> Yield {
        let after = self.right.as_ref().expect("auxiliary yields wrap a foot");
        match &inner.right {
            None => Yield {
                left: [self.left.as_slice(), &inner.left, after].concat(),
                right: None,
            },
            Some(r) => Yield {
                left: [self.left.as_slice(), &inner.left].concat(),
                right: Some([r.as_slice(), after].concat()),
            },
        }
    }
}

/// Yield sets of one node, indexed by length.
type ByLength = Vec<HashSet<Yield>>;

struct Tables<'a> {
    g: &'a Compiled,
    max_len: usize,
    vocab: HashMap<&'a Token, u32>,
    /// Per tree, per node: fewest tokens the node yields, foot excluded.
    lower: Vec<Vec<usize>>,
    /// Per tree, per node: longest yield that can still fit in a string of
    /// at most `max_len` tokens from the start category.
    upper: Vec<Vec<Option<usize>>>,
    top: Vec<Vec<ByLength>>,
    bottom: Vec<Vec<ByLength>>,
}

impl<'a> Tables<'a> {
    fn new(g: &'a Compiled, start: usize, max_len: usize) -> Self {
        let mut vocab = HashMap::new();
        for tree in &g.trees {
            if let Some(a) = &tree.anchor {
                let next = vocab.len() as u32;
                vocab.entry(a).or_insert(next);
            }
        }
        let lower: Vec<Vec<usize>> = g
            .trees
            .iter()
            .map(|t| t.nodes.iter().map(|n| n.min_len - usize::from(n.has_foot)).collect())
            .collect();
        let upper = upper_bounds(g, &lower, start, max_len);
        let empty = || -> Vec<Vec<ByLength>> {
            g.trees
                .iter()
                .map(|t| vec![vec![HashSet::new(); max_len + 1]; t.nodes.len()])
                .collect()
        };
        Tables {
            g,
            max_len,
            vocab,
            lower,
            upper,
            top: empty(),
            bottom: empty(),
        }
    }

    /// A wrapped yield still needs at least one token at its foot.
    fn fits(&self, y: &Yield, len: usize) -> bool {
        len < self.max_len || y.right.is_none()
    }

    fn level(&mut self, len: usize) {
        let g = self.g;
        loop {
            let mut changed = false;
            for (t, tree) in g.trees.iter().enumerate() {
                // Children come after their parent in pre-order.
                for v in (0..tree.nodes.len()).rev() {
                    if self.upper[t][v].is_none_or(|u| len > u) {
                        continue;
                    }
                    let b: HashSet<Yield> = match &tree.nodes[v].kind {
                        CKind::Anchor(tok) if len == 1 => [Yield {
                            left: vec![self.vocab[tok]],
                            right: None,
                        }]
                        .into(),
                        CKind::Foot if len == 0 => [Yield {
                            left: Vec::new(),
                            right: Some(Vec::new()),
                        }]
                        .into(),
                        CKind::Slot(cat) => g.initial_by_root[*cat]
                            .iter()
                            .flat_map(|&f| self.top[f][0][len].iter().cloned())
                            .collect(),
                        CKind::Internal { children, .. } => {
                            let mut out = HashSet::new();
                            let start = Yield {
                                left: Vec::new(),
                                right: None,
                            };
                            self.split(t, children, len, start, &mut out);
                            out
                        }
                        _ => HashSet::new(),
                    };
                    let b: HashSet<Yield> = b.into_iter().filter(|y| self.fits(y, len)).collect();
                    let mut tp = b.clone();
                    if let CKind::Internal { cat, .. } = tree.nodes[v].kind {
                        // Material outside a foot is never empty, so the
                        // adjoined tree contributes at least one token.
                        for &aux in &g.aux_by_root[cat] {
                            for outer_len in 1..=len {
                                for outer in &self.top[aux][0][outer_len] {
                                    for inner in &self.bottom[t][v][len - outer_len] {
                                        let y = outer.wrap(inner);
                                        if self.fits(&y, len) {
                                            tp.insert(y);
                                        }
                                    }
                                }
                            }
                        }
                    }
                    changed |= b.len() != self.bottom[t][v][len].len() || tp.len() != self.top[t][v][len].len();
                    self.bottom[t][v][len] = b;
                    self.top[t][v][len] = tp;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// All concatenations of child yields totalling exactly `len`.
    fn split(&self, t: usize, children: &[usize], len: usize, acc: Yield, out: &mut HashSet<Yield>) {
        let Some((&c, rest)) = children.split_first() else {
            if len == 0 {
                out.insert(acc);
            }
            return;
        };
        let reserve: usize = rest.iter().map(|&r| self.lower[t][r]).sum();
        if reserve > len {
            return;
        }
        for l in self.lower[t][c]..=len - reserve {
            for y in &self.top[t][c][l] {
                self.split(t, rest, len - l, acc.concat(y), out);
            }
        }
    }
}

/// Longest useful yield per node, pushed down from the start category:
/// a child gets its parent's bound minus what its siblings need at least.
fn upper_bounds(g: &Compiled, lower: &[Vec<usize>], start: usize, max_len: usize) -> Vec<Vec<Option<usize>>> {
    let ncat = g.categories.len();
    // Longest yield wanted from an initial tree rooted at the category, and
    // at an internal node of the category.
    let mut subst: Vec<Option<usize>> = vec![None; ncat];
    let mut site: Vec<Option<usize>> = vec![None; ncat];
    subst[start] = Some(max_len);
    let mut upper: Vec<Vec<Option<usize>>> = g.trees.iter().map(|t| vec![None; t.nodes.len()]).collect();
    let raise = |slot: &mut Option<usize>, to: usize| -> bool {
        if slot.is_none_or(|s| s < to) {
            *slot = Some(to);
            true
        } else {
            false
        }
    };
    let mut changed = true;
    while changed {
        changed = false;
        for (t, tree) in g.trees.iter().enumerate() {
            let root = tree.root_cat();
            let from = match tree.tree_type {
                crate::tree::TreeType::Initial => subst[root],
                crate::tree::TreeType::Auxiliary => site[root],
            };
            upper[t][0] = from;
            for v in 0..tree.nodes.len() {
                let Some(u) = upper[t][v] else { continue };
                match &tree.nodes[v].kind {
                    CKind::Internal { cat, children } => {
                        changed |= raise(&mut site[*cat], u);
                        let need: usize = children.iter().map(|&c| lower[t][c]).sum();
                        for &c in children {
                            let room = (u + lower[t][c]).saturating_sub(need);
                            upper[t][c] = Some(upper[t][c].map_or(room, |x| x.max(room)));
                        }
                    }
                    CKind::Slot(cat) => changed |= raise(&mut subst[*cat], u),
                    _ => {}
                }
            }
        }
    }
    upper
}

pub(crate) fn strings(g: &Compiled, start: &Category, max_len: usize) -> BTreeSet<Vec<Token>> {
    let Some(start) = g.cat(start) else {
        return BTreeSet::new();
    };
    if max_len == 0 {
        return BTreeSet::new();
    }
    let mut tables = Tables::new(g, start, max_len);
    for len in 0..=max_len {
        tables.level(len);
    }
    let mut vocab = vec![None; tables.vocab.len()];
    for (tok, &i) in &tables.vocab {
        vocab[i as usize] = Some(*tok);
    }
    g.initial_by_root[start]
        .iter()
        .flat_map(|&t| tables.top[t][0].iter().flatten())
        .filter(|y| y.right.is_none() && !y.left.is_empty())
        .map(|y| {
            y.left
                .iter()
                .map(|&i| vocab[i as usize].expect("interned").clone())
                .collect()
        })
        .collect()
}

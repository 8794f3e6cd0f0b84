//! Memoized span chart over elementary-tree nodes.
//!
//! An item is a node of an elementary tree spanning tokens `i..j`; nodes
//! that dominate the foot also carry the foot's span as a gap. Bottom items
//! describe a node before adjunction, top items after at most one
//! adjunction. Every derivation tree corresponds to exactly one path
//! through the packed alternatives, so counting and enumeration never
//! produce duplicates.

use std::rc::Rc;

use rustc_hash::FxHashMap;

use crate::derivation::{Derivation, Operation, Step};
use crate::tree::Token;

use super::compiled::{CKind, Compiled};

pub(crate) type ItemId = usize;
type Gap = Option<(usize, usize)>;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    tree: u32,
    node: u32,
    i: u16,
    j: u16,
    gap: (u16, u16),
    top: bool,
}

const NO_GAP: (u16, u16) = (u16::MAX, u16::MAX);

#[derive(Debug)]
enum Alt {
    Leaf,
    Children(Vec<ItemId>),
    Subst { tree: usize, root: ItemId },
    Bare(ItemId),
    Adjoin { tree: usize, aux: ItemId, inner: ItemId },
}

#[derive(Debug)]
struct Item {
    tree: usize,
    node: usize,
    alts: Vec<Alt>,
}

/// Steps attached to one elementary-tree instance, plus the number of
/// instances they contain.
type Frag = Rc<(Vec<Step>, usize)>;

pub(crate) struct Chart<'a> {
    grammar: &'a Compiled,
    tokens: &'a [Token],
    usable: &'a [bool],
    /// Per usable anchored tree, an index into `anchor_prefix`.
    anchor_kind: Vec<Option<usize>>,
    /// Per distinct anchor, its occurrences among the first `k` tokens.
    anchor_prefix: Vec<Vec<u16>>,
    memo: FxHashMap<Key, Option<ItemId>>,
    items: Vec<Item>,
    frag_memo: Vec<Option<Rc<Vec<Frag>>>>,
    count_memo: Vec<Option<Rc<Vec<u64>>>>,
}

impl<'a> Chart<'a> {
    pub fn new(grammar: &'a Compiled, tokens: &'a [Token], usable: &'a [bool]) -> Self {
        let mut kinds: Vec<&Token> = Vec::new();
        let mut prefix: Vec<Vec<u16>> = Vec::new();
        let anchor_kind = grammar
            .trees
            .iter()
            .zip(usable)
            .map(|(t, &ok)| {
                let a = t.anchor.as_ref().filter(|_| ok)?;
                if let Some(k) = kinds.iter().position(|&x| x == a) {
                    return Some(k);
                }
                kinds.push(a);
                prefix.push(
                    std::iter::once(0)
                        .chain(tokens.iter().scan(0u16, |n, tok| {
                            *n += u16::from(tok == a);
                            Some(*n)
                        }))
                        .collect(),
                );
                Some(kinds.len() - 1)
            })
            .collect();
        Chart {
            grammar,
            tokens,
            usable,
            anchor_kind,
            anchor_prefix: prefix,
            memo: FxHashMap::default(),
            items: Vec::new(),
            frag_memo: Vec::new(),
            count_memo: Vec::new(),
        }
    }

    /// Top items for every usable initial tree rooted `start` spanning the
    /// whole input.
    pub fn roots(&mut self, start: usize) -> Vec<(usize, ItemId)> {
        let n = self.tokens.len();
        let candidates = self.grammar.initial_by_root[start].clone();
        candidates
            .into_iter()
            .filter(|&t| self.usable[t])
            .filter_map(|t| self.top(t, 0, 0, n, None).map(|item| (t, item)))
            .collect()
    }

    fn key(tree: usize, node: usize, i: usize, j: usize, gap: Gap, top: bool) -> Key {
        Key {
            tree: tree as u32,
            node: node as u32,
            i: i as u16,
            j: j as u16,
            gap: gap.map_or(NO_GAP, |(a, b)| (a as u16, b as u16)),
            top,
        }
    }

    fn admissible(&self, tree: usize, node: usize, i: usize, j: usize, gap: Gap) -> bool {
        let n = &self.grammar.trees[tree].nodes[node];
        if j < i || j - i < n.min_len || n.has_foot != gap.is_some() {
            return false;
        }
        if let Some((f1, f2)) = gap {
            if !(i <= f1 && f1 < f2 && f2 <= j) {
                return false;
            }
        }
        if n.has_anchor {
            let Some(k) = self.anchor_kind[tree] else {
                return false;
            };
            let pre = &self.anchor_prefix[k];
            let inside = pre[j] - pre[i];
            let in_gap = gap.map_or(0, |(f1, f2)| pre[f2] - pre[f1]);
            return inside > in_gap;
        }
        true
    }

    fn store(&mut self, key: Key, tree: usize, node: usize, alts: Vec<Alt>) -> Option<ItemId> {
        let result = if alts.is_empty() {
            None
        } else {
            self.items.push(Item { tree, node, alts });
            Some(self.items.len() - 1)
        };
        self.memo.insert(key, result);
        result
    }

    fn top(&mut self, tree: usize, node: usize, i: usize, j: usize, gap: Gap) -> Option<ItemId> {
        let grammar = self.grammar;
        let cat = match &grammar.trees[tree].nodes[node].kind {
            CKind::Internal { cat, .. } => *cat,
            _ => return self.bottom(tree, node, i, j, gap),
        };
        if !self.admissible(tree, node, i, j, gap) {
            return None;
        }
        let key = Self::key(tree, node, i, j, gap, true);
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        self.memo.insert(key, None);

        let mut alts = Vec::new();
        if let Some(b) = self.bottom(tree, node, i, j, gap) {
            alts.push(Alt::Bare(b));
        }
        for &aux in &grammar.aux_by_root[cat] {
            if !self.usable[aux] {
                continue;
            }
            // The auxiliary tree contributes every token outside the foot.
            let outside_min = grammar.trees[aux].nodes[0].min_len - 1;
            for k in i..j {
                for l in (k + 1)..=j {
                    if (k - i) + (j - l) < outside_min.max(1) {
                        continue;
                    }
                    if let Some((f1, f2)) = gap {
                        if !(k <= f1 && f2 <= l) {
                            continue;
                        }
                    }
                    let Some(inner) = self.bottom(tree, node, k, l, gap) else {
                        continue;
                    };
                    let Some(aux_item) = self.top(aux, 0, i, j, Some((k, l))) else {
                        continue;
                    };
                    alts.push(Alt::Adjoin {
                        tree: aux,
                        aux: aux_item,
                        inner,
                    });
                }
            }
        }
        self.store(key, tree, node, alts)
    }

    fn bottom(&mut self, tree: usize, node: usize, i: usize, j: usize, gap: Gap) -> Option<ItemId> {
        if !self.admissible(tree, node, i, j, gap) {
            return None;
        }
        let key = Self::key(tree, node, i, j, gap, false);
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        self.memo.insert(key, None);

        let grammar = self.grammar;
        let mut alts = Vec::new();
        match &grammar.trees[tree].nodes[node].kind {
            CKind::Anchor(token) => {
                if j == i + 1 && &self.tokens[i] == token {
                    alts.push(Alt::Leaf);
                }
            }
            CKind::Foot => {
                if gap == Some((i, j)) {
                    alts.push(Alt::Leaf);
                }
            }
            CKind::Slot(cat) => {
                for &filler in &grammar.initial_by_root[*cat] {
                    if !self.usable[filler] {
                        continue;
                    }
                    if let Some(root) = self.top(filler, 0, i, j, None) {
                        alts.push(Alt::Subst { tree: filler, root });
                    }
                }
            }
            CKind::Internal { children, .. } => {
                let mut acc = Vec::with_capacity(children.len());
                let mut out = Vec::new();
                self.sequence(tree, children, 0, i, j, gap, &mut acc, &mut out);
                alts.extend(out.into_iter().map(Alt::Children));
            }
        }
        self.store(key, tree, node, alts)
    }

    /// All ways to split `p..j` over `children[idx..]`.
    #[allow(clippy::too_many_arguments)]
    fn sequence(
        &mut self,
        tree: usize,
        children: &[usize],
        idx: usize,
        p: usize,
        j: usize,
        gap: Gap,
        acc: &mut Vec<ItemId>,
        out: &mut Vec<Vec<ItemId>>,
    ) {
        if idx == children.len() {
            if p == j {
                out.push(acc.clone());
            }
            return;
        }
        let nodes = &self.grammar.trees[tree].nodes;
        let child = children[idx];
        let rest_min: usize = children[idx + 1..].iter().map(|&c| nodes[c].min_len).sum();
        let child_min = nodes[child].min_len;
        let child_has_foot = nodes[child].has_foot;
        if p + child_min + rest_min > j {
            return;
        }
        let first = p + child_min;
        let last = j - rest_min;
        let range = if idx + 1 == children.len() { j..=j } else { first..=last };
        for q in range {
            let child_gap = if child_has_foot {
                match gap {
                    Some((f1, f2)) if p <= f1 && f2 <= q => gap,
                    _ => continue,
                }
            } else {
                if let Some((f1, f2)) = gap {
                    if !(q <= f1 || p >= f2) {
                        continue;
                    }
                }
                None
            };
            if let Some(item) = self.top(tree, child, p, q, child_gap) {
                acc.push(item);
                self.sequence(tree, children, idx + 1, q, j, gap, acc, out);
                acc.pop();
            }
        }
    }

    /// Number of derivations below `item`, bucketed by how many elementary
    /// trees they attach. Buckets at or beyond `cap` are merged into the last.
    pub fn counts(&mut self, item: ItemId, cap: usize) -> Rc<Vec<u64>> {
        self.count_memo.resize(self.items.len(), None);
        if let Some(hit) = &self.count_memo[item] {
            return hit.clone();
        }
        let mut total = vec![0u64; 1];
        let alts = std::mem::take(&mut self.items[item].alts);
        for alt in &alts {
            let h = match alt {
                Alt::Leaf => vec![1],
                Alt::Bare(b) => self.counts(*b, cap).to_vec(),
                Alt::Children(ids) => {
                    let mut acc = vec![1u64];
                    for &c in ids {
                        let hc = self.counts(c, cap);
                        acc = convolve(&acc, &hc, cap);
                    }
                    acc
                }
                Alt::Subst { root, .. } => shift(&self.counts(*root, cap), cap),
                Alt::Adjoin { aux, inner, .. } => {
                    let ha = shift(&self.counts(*aux, cap), cap);
                    let hi = self.counts(*inner, cap);
                    convolve(&hi, &ha, cap)
                }
            };
            add_into(&mut total, &h);
        }
        self.items[item].alts = alts;
        let rc = Rc::new(total);
        self.count_memo[item] = Some(rc.clone());
        rc
    }

    /// Every step list for `item`, with its instance count.
    fn frags(&mut self, item: ItemId) -> Rc<Vec<Frag>> {
        self.frag_memo.resize(self.items.len(), None);
        if let Some(hit) = &self.frag_memo[item] {
            return hit.clone();
        }
        let grammar = self.grammar;
        let (tree, node) = (self.items[item].tree, self.items[item].node);
        let address = &grammar.trees[tree].nodes[node].address;
        let alts = std::mem::take(&mut self.items[item].alts);
        let mut out: Vec<Frag> = Vec::new();
        for alt in &alts {
            match alt {
                Alt::Leaf => out.push(Rc::new((Vec::new(), 0))),
                Alt::Bare(b) => out.extend(self.frags(*b).iter().cloned()),
                Alt::Children(ids) => {
                    let mut acc: Vec<Frag> = vec![Rc::new((Vec::new(), 0))];
                    for &c in ids {
                        let fc = self.frags(c);
                        let mut next = Vec::with_capacity(acc.len() * fc.len());
                        for a in &acc {
                            for b in fc.iter() {
                                if b.0.is_empty() {
                                    next.push(a.clone());
                                } else if a.0.is_empty() {
                                    next.push(b.clone());
                                } else {
                                    let mut steps = a.0.clone();
                                    steps.extend(b.0.iter().cloned());
                                    next.push(Rc::new((steps, a.1 + b.1)));
                                }
                            }
                        }
                        acc = next;
                    }
                    out.extend(acc);
                }
                Alt::Subst { tree: child, root } => {
                    for f in self.frags(*root).iter() {
                        let step = Step {
                            address: address.clone(),
                            operation: Operation::Substitute,
                            child: instance(&grammar.trees[*child].id, f),
                        };
                        out.push(Rc::new((vec![step], f.1 + 1)));
                    }
                }
                Alt::Adjoin {
                    tree: aux,
                    aux: aux_item,
                    inner,
                } => {
                    let aux_frags = self.frags(*aux_item);
                    let inner_frags = self.frags(*inner);
                    for fa in aux_frags.iter() {
                        let child = instance(&grammar.trees[*aux].id, fa);
                        for fi in inner_frags.iter() {
                            let mut steps = fi.0.clone();
                            steps.push(Step {
                                address: address.clone(),
                                operation: Operation::Adjoin,
                                child: child.clone(),
                            });
                            out.push(Rc::new((steps, fi.1 + fa.1 + 1)));
                        }
                    }
                }
            }
        }
        self.items[item].alts = alts;
        let rc = Rc::new(out);
        self.frag_memo[item] = Some(rc.clone());
        rc
    }

    /// Complete derivations rooted at `tree` through its root item.
    pub fn derivations(&mut self, tree: usize, item: ItemId) -> Vec<(Derivation, usize)> {
        let id = self.grammar.trees[tree].id.clone();
        self.frags(item).iter().map(|f| (instance(&id, f), f.1 + 1)).collect()
    }
}

fn instance(id: &str, frag: &Frag) -> Derivation {
    let mut steps = frag.0.clone();
    steps.sort();
    Derivation {
        tree: id.to_string(),
        steps,
    }
}

fn shift(h: &[u64], cap: usize) -> Vec<u64> {
    let mut out = vec![0u64; (h.len() + 1).min(cap + 1)];
    for (k, &c) in h.iter().enumerate() {
        let at = (k + 1).min(cap);
        out[at] = out[at].saturating_add(c);
    }
    out
}

fn convolve(a: &[u64], b: &[u64], cap: usize) -> Vec<u64> {
    let mut out = vec![0u64; (a.len() + b.len() - 1).min(cap + 1)];
    for (x, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (y, &cb) in b.iter().enumerate() {
            let at = (x + y).min(cap);
            out[at] = out[at].saturating_add(ca.saturating_mul(cb));
        }
    }
    out
}

fn add_into(total: &mut Vec<u64>, h: &[u64]) {
    if total.len() < h.len() {
        total.resize(h.len(), 0);
    }
    for (t, &c) in total.iter_mut().zip(h) {
        *t = t.saturating_add(c);
    }
}

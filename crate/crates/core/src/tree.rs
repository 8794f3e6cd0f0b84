//! Elementary and derived trees, Gorn addresses, and the two composition
//! operations (substitution and adjunction).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Short lowercase language code such as `en` or `hi`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageTag(Arc<str>);

impl LanguageTag {
    pub fn new(code: &str) -> Result<Self, SymbolError> {
        let mut chars = code.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && (2..=8).contains(&code.len())
            && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit());
        if ok {
            Ok(LanguageTag(code.into()))
        } else {
            Err(SymbolError::Language(code.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Node label such as `NP`, `AdjP` or `S`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Category(Arc<str>);

impl Category {
    pub fn new(label: &str) -> Result<Self, SymbolError> {
        let mut chars = label.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '\'');
        if ok {
            Ok(Category(label.into()))
        } else {
            Err(SymbolError::Category(label.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("invalid language tag {0:?}")]
    Language(String),
    #[error("invalid category {0:?}")]
    Category(String),
    #[error("invalid surface {0:?}")]
    Surface(String),
}

/// A surface form tagged with its language. Comparison is exact on both fields.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token {
    surface: Arc<str>,
    language: LanguageTag,
}

impl Token {
    pub fn new(surface: &str, language: LanguageTag) -> Result<Self, SymbolError> {
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return Err(SymbolError::Surface(surface.to_string()));
        }
        Ok(Token {
            surface: surface.into(),
            language,
        })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn language(&self) -> &LanguageTag {
        &self.language
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.surface, self.language)
    }
}

/// Gorn address: 1-based child indices from the root. The empty path is the
/// root and renders as `r`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeAddress(Vec<usize>);

impl NodeAddress {
    pub fn root() -> Self {
        NodeAddress(Vec::new())
    }

    pub fn new(path: Vec<usize>) -> Result<Self, AddressParseError> {
        if path.contains(&0) {
            return Err(AddressParseError(format!("{path:?}")));
        }
        Ok(NodeAddress(path))
    }

    pub fn path(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: usize) -> Self {
        debug_assert!(index >= 1);
        let mut path = self.0.clone();
        path.push(index);
        NodeAddress(path)
    }

    pub fn is_prefix_of(&self, other: &NodeAddress) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for NodeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("r");
        }
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid node address {0:?}")]
pub struct AddressParseError(String);

impl FromStr for NodeAddress {
    type Err = AddressParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "r" {
            return Ok(NodeAddress::root());
        }
        let path = s
            .split('.')
            .map(|part| match part.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i),
                _ => Err(AddressParseError(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NodeAddress(path))
    }
}

/// A tree node. Slots, feet and anchors are leaves by construction.
///
/// `adjoined` is set on the node that was excised by an adjunction, so that a
/// second adjunction at the same node of the same elementary-tree instance is
/// rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Internal {
        category: Category,
        children: Vec<Node>,
        adjoined: bool,
    },
    Slot(Category),
    Foot(Category),
    Anchor(Token),
}

impl Node {
    pub fn internal(category: Category, children: Vec<Node>) -> Self {
        Node::Internal {
            category,
            children,
            adjoined: false,
        }
    }

    /// Category of the node; anchors have none.
    pub fn category(&self) -> Option<&Category> {
        match self {
            Node::Internal { category, .. } | Node::Slot(category) | Node::Foot(category) => Some(category),
            Node::Anchor(_) => None,
        }
    }

    pub fn children(&self) -> &[Node] {
        match self {
            Node::Internal { children, .. } => children,
            _ => &[],
        }
    }

    pub fn get(&self, address: &NodeAddress) -> Option<&Node> {
        let mut node = self;
        for &idx in address.path() {
            node = node.children().get(idx.checked_sub(1)?)?;
        }
        Some(node)
    }

    fn get_mut(&mut self, address: &NodeAddress) -> Option<&mut Node> {
        let mut node = self;
        for &idx in address.path() {
            node = match node {
                Node::Internal { children, .. } => children.get_mut(idx.checked_sub(1)?)?,
                _ => return None,
            };
        }
        Some(node)
    }

    /// Number of nodes in the subtree, the node itself included.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Node::size).sum::<usize>()
    }

    /// Pre-order walk yielding every node with its address.
    pub fn walk(&self) -> Vec<(NodeAddress, &Node)> {
        fn go<'a>(node: &'a Node, at: NodeAddress, out: &mut Vec<(NodeAddress, &'a Node)>) {
            out.push((at.clone(), node));
            for (i, child) in node.children().iter().enumerate() {
                go(child, at.child(i + 1), out);
            }
        }
        let mut out = Vec::new();
        go(self, NodeAddress::root(), &mut out);
        out
    }

    pub fn foot_address(&self) -> Option<NodeAddress> {
        self.walk()
            .into_iter()
            .find(|(_, n)| matches!(n, Node::Foot(_)))
            .map(|(a, _)| a)
    }

    /// Anchors and open leaves left to right.
    pub fn leaves(&self) -> Vec<&Node> {
        fn go<'a>(node: &'a Node, out: &mut Vec<&'a Node>) {
            match node {
                Node::Internal { children, .. } => children.iter().for_each(|c| go(c, out)),
                leaf => out.push(leaf),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }
}

impl fmt::Display for Node {
    /// Renders the node in grammar-file notation, e.g. `(PP (P #on) DP^)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Internal { category, children, .. } => {
                write!(f, "({category}")?;
                for child in children {
                    write!(f, " {child}")?;
                }
                f.write_str(")")
            }
            Node::Slot(c) => write!(f, "{c}^"),
            Node::Foot(c) => write!(f, "{c}*"),
            Node::Anchor(t) => write!(f, "#{}", t.surface()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeType {
    Initial,
    Auxiliary,
}

impl TreeType {
    pub fn as_str(self) -> &'static str {
        match self {
            TreeType::Initial => "initial",
            TreeType::Auxiliary => "auxiliary",
        }
    }
}

impl fmt::Display for TreeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A grammar entry. Construction does not validate; see [`validate_elementary`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementaryTree {
    pub id: String,
    pub tree_type: TreeType,
    pub language: LanguageTag,
    pub root: Node,
}

impl ElementaryTree {
    pub fn new(id: &str, language: LanguageTag, tree_type: TreeType, root: Node) -> Self {
        ElementaryTree {
            id: id.to_string(),
            tree_type,
            language,
            root,
        }
    }

    pub fn anchor(&self) -> Option<&Token> {
        self.root.walk().into_iter().find_map(|(_, n)| match n {
            Node::Anchor(t) => Some(t),
            _ => None,
        })
    }

    pub fn is_anchored(&self) -> bool {
        self.anchor().is_some()
    }

    pub fn root_category(&self) -> &Category {
        self.root
            .category()
            .expect("elementary tree root must carry a category")
    }

    pub fn slot_categories(&self) -> Vec<&Category> {
        self.root
            .walk()
            .into_iter()
            .filter_map(|(_, n)| match n {
                Node::Slot(c) => Some(c),
                _ => None,
            })
            .collect()
    }
}

/// One broken elementary-tree invariant, located at a node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub address: NodeAddress,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at @{}", self.message, self.address)
    }
}

/// Every elementary-tree invariant the tree breaks; empty means valid.
pub fn validate_elementary(tree: &ElementaryTree) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |address: &NodeAddress, message: &str| {
        out.push(Violation {
            address: address.clone(),
            message: message.to_string(),
        })
    };
    let root = NodeAddress::root();
    if !matches!(tree.root, Node::Internal { .. }) {
        push(&root, "root is not an internal node");
    }

    let nodes = tree.root.walk();
    let mut feet = Vec::new();
    let mut anchors = 0;
    let mut slots = 0;
    for (addr, node) in &nodes {
        match node {
            Node::Internal { children, adjoined, .. } => {
                if children.is_empty() {
                    push(addr, "internal node without children");
                }
                if *adjoined {
                    push(addr, "elementary node marked as adjoined");
                }
            }
            Node::Slot(_) => slots += 1,
            Node::Foot(c) => feet.push((addr, c)),
            Node::Anchor(t) => {
                anchors += 1;
                if t.language() != &tree.language {
                    push(addr, "anchor language differs from tree language");
                }
            }
        }
    }

    match tree.tree_type {
        TreeType::Initial => {
            for (addr, _) in &feet {
                push(addr, "initial tree contains foot");
            }
        }
        TreeType::Auxiliary => match feet.as_slice() {
            [] => push(&root, "auxiliary tree lacks foot"),
            [(addr, cat)] => {
                if tree.root.category() != Some(*cat) {
                    push(addr, "foot/root mismatch");
                }
            }
            [_, rest @ ..] => {
                for (addr, _) in rest {
                    push(addr, "auxiliary tree has more than one foot");
                }
            }
        },
    }
    if anchors > 1 {
        push(&root, "more than one anchor");
    }
    if anchors == 0 && slots == 0 {
        push(&root, "unanchored tree without slots");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("address @{0} does not resolve")]
    Unresolvable(NodeAddress),
    #[error("node @{0} is not a substitution slot")]
    NotASlot(NodeAddress),
    #[error("cannot adjoin at @{0}: node is a {1}")]
    NotAdjoinable(NodeAddress, &'static str),
    #[error("category mismatch: site is {site}, tree is rooted {root}")]
    CategoryMismatch { site: Category, root: Category },
    #[error("substituted tree does not derive from an initial tree")]
    FillerNotInitial,
    #[error("adjoined tree does not derive from an auxiliary tree with one foot")]
    NotAuxiliary,
    #[error("node @{0} already has an adjunction")]
    DuplicateAdjunction(NodeAddress),
    #[error("tree is incomplete: open {0} at @{1}")]
    Incomplete(&'static str, NodeAddress),
}

/// The result of composing elementary trees. `origin` is the type of the
/// elementary tree at the root; it decides which operation may consume it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DerivedTree {
    pub root: Node,
    pub origin: TreeType,
}

impl From<&ElementaryTree> for DerivedTree {
    fn from(tree: &ElementaryTree) -> Self {
        DerivedTree {
            root: tree.root.clone(),
            origin: tree.tree_type,
        }
    }
}

impl DerivedTree {
    pub fn size(&self) -> usize {
        self.root.size()
    }

    /// Complete iff no substitution slot and no foot remains.
    pub fn is_complete(&self) -> bool {
        self.first_open().is_none()
    }

    fn first_open(&self) -> Option<(&'static str, NodeAddress)> {
        self.root.walk().into_iter().find_map(|(a, n)| match n {
            Node::Slot(_) => Some(("slot", a)),
            Node::Foot(_) => Some(("foot", a)),
            _ => None,
        })
    }
}

impl fmt::Display for DerivedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

/// Replaces the slot at `address` with the root of `filler`.
pub fn substitute(host: &DerivedTree, address: &NodeAddress, filler: &DerivedTree) -> Result<DerivedTree, TreeError> {
    let site = host
        .root
        .get(address)
        .ok_or_else(|| TreeError::Unresolvable(address.clone()))?;
    let Node::Slot(site_cat) = site else {
        return Err(TreeError::NotASlot(address.clone()));
    };
    if filler.origin != TreeType::Initial {
        return Err(TreeError::FillerNotInitial);
    }
    let filler_cat = match &filler.root {
        Node::Internal { category, .. } => category,
        _ => return Err(TreeError::FillerNotInitial),
    };
    if filler_cat != site_cat {
        return Err(TreeError::CategoryMismatch {
            site: site_cat.clone(),
            root: filler_cat.clone(),
        });
    }
    let mut out = host.clone();
    *out.root.get_mut(address).expect("resolved above") = filler.root.clone();
    Ok(out)
}

/// Adjoins `aux` at the internal node at `address`: the node's subtree moves
/// to the foot of `aux`, and `aux` takes its place.
pub fn adjoin(host: &DerivedTree, address: &NodeAddress, aux: &DerivedTree) -> Result<DerivedTree, TreeError> {
    let site = host
        .root
        .get(address)
        .ok_or_else(|| TreeError::Unresolvable(address.clone()))?;
    let (site_cat, already) = match site {
        Node::Internal { category, adjoined, .. } => (category, *adjoined),
        Node::Slot(_) => return Err(TreeError::NotAdjoinable(address.clone(), "slot")),
        Node::Foot(_) => return Err(TreeError::NotAdjoinable(address.clone(), "foot")),
        Node::Anchor(_) => return Err(TreeError::NotAdjoinable(address.clone(), "anchor")),
    };
    if already {
        return Err(TreeError::DuplicateAdjunction(address.clone()));
    }
    if aux.origin != TreeType::Auxiliary {
        return Err(TreeError::NotAuxiliary);
    }
    let feet: Vec<_> = aux
        .root
        .walk()
        .into_iter()
        .filter(|(_, n)| matches!(n, Node::Foot(_)))
        .map(|(a, _)| a)
        .collect();
    let [foot] = feet.as_slice() else {
        return Err(TreeError::NotAuxiliary);
    };
    let aux_cat = aux.root.category().ok_or(TreeError::NotAuxiliary)?;
    if aux_cat != site_cat {
        return Err(TreeError::CategoryMismatch {
            site: site_cat.clone(),
            root: aux_cat.clone(),
        });
    }

    let mut excised = site.clone();
    if let Node::Internal { adjoined, .. } = &mut excised {
        *adjoined = true;
    }
    let mut planted = aux.root.clone();
    *planted.get_mut(foot).expect("foot address from walk") = excised;
    let mut out = host.clone();
    *out.root.get_mut(address).expect("resolved above") = planted;
    Ok(out)
}

/// Left-to-right anchor tokens of a complete tree.
pub fn yield_tokens(tree: &DerivedTree) -> Result<Vec<Token>, TreeError> {
    if let Some((what, at)) = tree.first_open() {
        return Err(TreeError::Incomplete(what, at));
    }
    Ok(tree
        .root
        .leaves()
        .into_iter()
        .filter_map(|n| match n {
            Node::Anchor(t) => Some(t.clone()),
            _ => None,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lang(s: &str) -> LanguageTag {
        LanguageTag::new(s).unwrap()
    }
    fn cat(s: &str) -> Category {
        Category::new(s).unwrap()
    }
    fn tok(s: &str, l: &str) -> Token {
        Token::new(s, lang(l)).unwrap()
    }
    fn anchored(c: &str, pre: &str, s: &str, l: &str) -> Node {
        Node::internal(cat(c), vec![Node::internal(cat(pre), vec![Node::Anchor(tok(s, l))])])
    }
    fn initial(node: Node) -> DerivedTree {
        DerivedTree {
            root: node,
            origin: TreeType::Initial,
        }
    }
    fn aux(node: Node) -> DerivedTree {
        DerivedTree {
            root: node,
            origin: TreeType::Auxiliary,
        }
    }
    fn addr(s: &str) -> NodeAddress {
        s.parse().unwrap()
    }
    // (NP AdjP^ NP*)
    fn pre_modifier() -> Node {
        Node::internal(cat("NP"), vec![Node::Slot(cat("AdjP")), Node::Foot(cat("NP"))])
    }
    // (NP NP* AdjP^)
    fn post_modifier() -> Node {
        Node::internal(cat("NP"), vec![Node::Foot(cat("NP")), Node::Slot(cat("AdjP"))])
    }
    fn surfaces(t: &DerivedTree) -> Vec<String> {
        yield_tokens(t).unwrap().into_iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn symbols_are_checked() {
        assert!(LanguageTag::new("en").is_ok());
        assert!(LanguageTag::new("e").is_err());
        assert!(LanguageTag::new("En").is_err());
        assert!(LanguageTag::new("abcdefghi").is_err());
        assert!(Category::new("AdjP").is_ok());
        assert!(Category::new("N'").is_ok());
        assert!(Category::new("np").is_err());
        assert!(Token::new("aataa_hai", lang("hi")).is_ok());
        assert!(Token::new("aataa hai", lang("hi")).is_err());
        assert!(Token::new("", lang("hi")).is_err());
    }

    #[test]
    fn addresses_render_and_parse() {
        assert_eq!(NodeAddress::root().to_string(), "r");
        assert_eq!(addr("2.1").path(), &[2, 1]);
        assert_eq!(addr("r"), NodeAddress::root());
        assert!("0".parse::<NodeAddress>().is_err());
        assert!("1..2".parse::<NodeAddress>().is_err());
        assert!(NodeAddress::new(vec![1, 0]).is_err());
    }

    #[test]
    fn modifier_tree_is_valid() {
        let t = ElementaryTree::new("en_adjmod", lang("en"), TreeType::Auxiliary, pre_modifier());
        assert!(validate_elementary(&t).is_empty());
        assert!(!t.is_anchored());
    }

    #[test]
    fn foot_root_mismatch_is_reported() {
        let root = Node::internal(cat("NP"), vec![Node::Slot(cat("AdjP")), Node::Foot(cat("N"))]);
        let t = ElementaryTree::new("bad", lang("en"), TreeType::Auxiliary, root);
        let v = validate_elementary(&t);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].message, "foot/root mismatch");
        assert_eq!(v[0].address, addr("2"));
    }

    #[test]
    fn unanchored_initial_without_slots_is_reported() {
        let root = Node::internal(cat("NP"), vec![Node::internal(cat("N"), vec![])]);
        let t = ElementaryTree::new("bad", lang("en"), TreeType::Initial, root);
        let messages: Vec<_> = validate_elementary(&t).into_iter().map(|v| v.message).collect();
        assert!(messages.contains(&"unanchored tree without slots".to_string()));
        assert!(messages.contains(&"internal node without children".to_string()));
    }

    #[test]
    fn other_violations() {
        let two_anchors = Node::internal(
            cat("VP"),
            vec![Node::Anchor(tok("a", "en")), Node::Anchor(tok("b", "fr"))],
        );
        let t = ElementaryTree::new("x", lang("en"), TreeType::Initial, two_anchors);
        let messages: Vec<_> = validate_elementary(&t).into_iter().map(|v| v.message).collect();
        assert_eq!(
            messages,
            vec!["anchor language differs from tree language", "more than one anchor"]
        );

        let initial_with_foot = ElementaryTree::new("x", lang("en"), TreeType::Initial, pre_modifier());
        assert_eq!(
            validate_elementary(&initial_with_foot)[0].message,
            "initial tree contains foot"
        );

        let slot_root = ElementaryTree::new("x", lang("en"), TreeType::Initial, Node::Slot(cat("NP")));
        assert_eq!(
            validate_elementary(&slot_root)[0].message,
            "root is not an internal node"
        );
    }

    #[test]
    fn substitute_postposition_object() {
        // (PP DP^ (P #par)) with (DP (N #time))
        let host = initial(Node::internal(
            cat("PP"),
            vec![
                Node::Slot(cat("DP")),
                Node::internal(cat("P"), vec![Node::Anchor(tok("par", "hi"))]),
            ],
        ));
        let filler = initial(anchored("DP", "N", "time", "en"));
        let out = substitute(&host, &addr("1"), &filler).unwrap();
        assert_eq!(surfaces(&out), ["time:en", "par:hi"]);
        assert_eq!(out.size(), host.size() + filler.size() - 1);
    }

    #[test]
    fn substitute_into_modifier_tree() {
        let host = aux(pre_modifier());
        let filler = initial(anchored("AdjP", "Adj", "smart", "en"));
        let out = substitute(&host, &addr("1"), &filler).unwrap();
        assert_eq!(out.to_string(), "(NP (AdjP (Adj #smart)) NP*)");
        assert_eq!(out.origin, TreeType::Auxiliary);
        assert!(!out.is_complete());
    }

    #[test]
    fn substitute_errors() {
        let host = aux(pre_modifier());
        let dp = initial(anchored("DP", "N", "time", "en"));
        assert!(matches!(
            substitute(&host, &addr("1"), &dp),
            Err(TreeError::CategoryMismatch { .. })
        ));
        assert_eq!(substitute(&host, &addr("2"), &dp), Err(TreeError::NotASlot(addr("2"))));
        assert_eq!(
            substitute(&host, &addr("3"), &dp),
            Err(TreeError::Unresolvable(addr("3")))
        );
        let adjp_aux = aux(Node::internal(
            cat("AdjP"),
            vec![Node::Slot(cat("AdjP")), Node::Foot(cat("AdjP"))],
        ));
        assert_eq!(
            substitute(&host, &addr("1"), &adjp_aux),
            Err(TreeError::FillerNotInitial)
        );
    }

    #[test]
    fn adjoin_pre_and_post_modifiers() {
        let friends = initial(anchored("NP", "N", "friends", "en"));
        let blanquito = initial(anchored("AdjP", "Adj", "blanquito", "es"));
        let modifier = substitute(&aux(pre_modifier()), &addr("1"), &blanquito).unwrap();
        let out = adjoin(&friends, &NodeAddress::root(), &modifier).unwrap();
        assert_eq!(surfaces(&out), ["blanquito:es", "friends:en"]);

        let paper = initial(anchored("NP", "N", "paper", "en"));
        let exceptionnel = initial(anchored("AdjP", "Adj", "exceptionnel", "fr"));
        let modifier = substitute(&aux(post_modifier()), &addr("2"), &exceptionnel).unwrap();
        let out = adjoin(&paper, &NodeAddress::root(), &modifier).unwrap();
        assert_eq!(surfaces(&out), ["paper:en", "exceptionnel:fr"]);
        assert_eq!(out.origin, TreeType::Initial);
    }

    #[test]
    fn adjoin_errors() {
        let friends = initial(anchored("NP", "N", "friends", "en"));
        let stack = aux(Node::internal(
            cat("AdjP"),
            vec![Node::Slot(cat("AdjP")), Node::Foot(cat("AdjP"))],
        ));
        assert!(matches!(
            adjoin(&friends, &NodeAddress::root(), &stack),
            Err(TreeError::CategoryMismatch { .. })
        ));
        assert_eq!(
            adjoin(&friends, &addr("1.1"), &stack),
            Err(TreeError::NotAdjoinable(addr("1.1"), "anchor"))
        );
        let modifier = aux(pre_modifier());
        assert_eq!(
            adjoin(&modifier, &addr("2"), &modifier),
            Err(TreeError::NotAdjoinable(addr("2"), "foot"))
        );
        assert_eq!(
            adjoin(&modifier, &addr("1"), &modifier),
            Err(TreeError::NotAdjoinable(addr("1"), "slot"))
        );
        assert_eq!(
            adjoin(&friends, &NodeAddress::root(), &friends),
            Err(TreeError::NotAuxiliary)
        );

        // The excised node sits at the foot position after adjunction and
        // refuses a second adjunction.
        let once = adjoin(&friends, &NodeAddress::root(), &modifier).unwrap();
        assert_eq!(
            adjoin(&once, &addr("2"), &modifier),
            Err(TreeError::DuplicateAdjunction(addr("2")))
        );
        // The new root belongs to the modifier instance and is open.
        assert!(adjoin(&once, &NodeAddress::root(), &modifier).is_ok());
    }

    #[test]
    fn yield_requires_completion() {
        let t = aux(pre_modifier());
        assert_eq!(yield_tokens(&t), Err(TreeError::Incomplete("slot", addr("1"))));
        let friends = initial(anchored("NP", "N", "friends", "en"));
        assert_eq!(surfaces(&friends), ["friends:en"]);
    }
}

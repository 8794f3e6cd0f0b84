//! Rival grammar hypotheses for adnominal adjectives and corpus judgment
//! runs.
//!
//! The shipped grammars introduce adjectives through unanchored auxiliary
//! trees on NP (modifier trees). Two alternative packagings are derived from
//! them: adjective-headed (each adjective anchors its own NP auxiliary tree,
//! placed by the adjective's language) and noun-headed (each noun anchors an
//! NP with an AdjP slot, placed by the noun's language).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::format::{format_tokens, CorpusItem, FormatError, Judgment};
use crate::grammar::{Grammar, GrammarError};
use crate::parser::{ParseConfig, ParseError, Parser};
use crate::tree::{Category, ElementaryTree, LanguageTag, Node, TreeType};

/// Relative order of an adnominal adjective and its noun.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderClass {
    AdjN,
    NAdj,
}

impl FromStr for OrderClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "adj-n" => Ok(OrderClass::AdjN),
            "n-adj" => Ok(OrderClass::NAdj),
            other => Err(format!("expected \"adj-n\" or \"n-adj\", found {other:?}")),
        }
    }
}

/// Per-language order classes, read from `languages.tsv` (`tag<TAB>class`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LanguageOrders(BTreeMap<LanguageTag, OrderClass>);

impl LanguageOrders {
    pub fn get(&self, language: &LanguageTag) -> Option<OrderClass> {
        self.0.get(language).copied()
    }

    pub fn insert(&mut self, language: LanguageTag, class: OrderClass) {
        self.0.insert(language, class);
    }
}

pub fn parse_languages(text: &str) -> Result<LanguageOrders, FormatError> {
    let mut out = LanguageOrders::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let err = |column, message: String| FormatError {
            line: line_no,
            column,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(err(
                1,
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        }
        let tag = LanguageTag::new(fields[0].trim()).map_err(|e| err(1, e.to_string()))?;
        let class = fields[1]
            .trim()
            .parse()
            .map_err(|e| err(fields[0].chars().count() + 2, e))?;
        out.insert(tag, class);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    ModifierTrees,
    AdjectiveHeaded,
    NounHeaded,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::ModifierTrees, Variant::AdjectiveHeaded, Variant::NounHeaded];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::ModifierTrees => "modifier-trees",
            Variant::AdjectiveHeaded => "adjective-headed",
            Variant::NounHeaded => "noun-headed",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("grammar has no {0}")]
    MissingFragment(&'static str),
    #[error("no adjective order class declared for language {0}")]
    UnknownOrder(LanguageTag),
    #[error("variant grammar is invalid: {0}")]
    Grammar(#[from] GrammarError),
    #[error("item {id}: {source}")]
    Item { id: String, source: ParseError },
}

fn np() -> Category {
    Category::new("NP").expect("valid category")
}

fn adjp() -> Category {
    Category::new("AdjP").expect("valid category")
}

fn is_np_modifier(t: &ElementaryTree) -> bool {
    t.tree_type == TreeType::Auxiliary && !t.is_anchored() && t.root_category() == &np()
}

fn anchored_initials<'a>(g: &'a Grammar, root: &'a Category) -> impl Iterator<Item = &'a ElementaryTree> {
    g.trees()
        .filter(move |t| t.tree_type == TreeType::Initial && t.is_anchored() && t.root_category() == root)
}

/// Builds the grammar for one head hypothesis. Only NP modifier trees are
/// removed and only NP/AdjP-rooted trees are added.
pub fn build_variant(g: &Grammar, orders: &LanguageOrders, variant: Variant) -> Result<Grammar, EvalError> {
    if !g.trees().any(is_np_modifier) {
        return Err(EvalError::MissingFragment("unanchored NP modifier tree"));
    }
    let (np, adjp) = (np(), adjp());
    if anchored_initials(g, &adjp).next().is_none() {
        return Err(EvalError::MissingFragment("anchored AdjP initial tree"));
    }
    if anchored_initials(g, &np).next().is_none() {
        return Err(EvalError::MissingFragment("anchored NP initial tree"));
    }
    let order = |t: &ElementaryTree| {
        orders
            .get(&t.language)
            .ok_or_else(|| EvalError::UnknownOrder(t.language.clone()))
    };

    let mut trees: Vec<ElementaryTree> = Vec::new();
    match variant {
        Variant::ModifierTrees => return Ok(g.clone()),
        Variant::AdjectiveHeaded => {
            for adj in anchored_initials(g, &adjp) {
                let foot = Node::Foot(np.clone());
                let children = match order(adj)? {
                    OrderClass::AdjN => vec![adj.root.clone(), foot],
                    OrderClass::NAdj => vec![foot, adj.root.clone()],
                };
                trees.push(ElementaryTree::new(
                    &format!("{}_adjhead", adj.id),
                    adj.language.clone(),
                    TreeType::Auxiliary,
                    Node::internal(np.clone(), children),
                ));
            }
        }
        Variant::NounHeaded => {
            for noun in anchored_initials(g, &np) {
                let mut children = noun.root.children().to_vec();
                match order(noun)? {
                    OrderClass::AdjN => children.insert(0, Node::Slot(adjp.clone())),
                    OrderClass::NAdj => children.push(Node::Slot(adjp.clone())),
                }
                trees.push(ElementaryTree::new(
                    &format!("{}_adjslot", noun.id),
                    noun.language.clone(),
                    TreeType::Initial,
                    Node::internal(np.clone(), children),
                ));
            }
        }
    }
    trees.extend(g.trees().filter(|t| !is_np_modifier(t)).cloned());
    Ok(Grammar::new(trees)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub id: String,
    pub expected: Judgment,
    pub observed: Judgment,
    pub witness_count: u64,
    /// First derivation in canonical order, as an s-expression.
    pub first_witness: Option<String>,
}

impl ReportRow {
    pub fn pass(&self) -> bool {
        self.expected == self.observed
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Totals {
    pub items: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub totals: Totals,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.totals.failed == 0
    }

    pub fn observed(&self, id: &str) -> Option<Judgment> {
        self.rows.iter().find(|r| r.id == id).map(|r| r.observed)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("id\texpected\tobserved\tpass\twitness_count\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                r.id,
                r.expected,
                r.observed,
                if r.pass() { "pass" } else { "FAIL" },
                r.witness_count
            ));
        }
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header = ["id", "expected", "observed", "result", "derivations"];
        let rows: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.id.clone(),
                    r.expected.to_string(),
                    r.observed.to_string(),
                    if r.pass() { "pass" } else { "FAIL" }.to_string(),
                    r.witness_count.to_string(),
                ]
            })
            .collect();
        write_table(f, &header, &rows)?;
        writeln!(
            f,
            "{} of {} items pass, {} fail",
            self.totals.passed, self.totals.items, self.totals.failed
        )
    }
}

fn write_table<const N: usize>(f: &mut fmt::Formatter<'_>, header: &[&str; N], rows: &[[String; N]]) -> fmt::Result {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(f, "{}", line(header.to_vec()))?;
    for row in rows {
        writeln!(f, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

/// Judges every item with the item's own start category.
pub fn run_corpus(parser: &Parser, corpus: &[CorpusItem], cfg: &ParseConfig) -> Result<Report, EvalError> {
    let mut rows = Vec::with_capacity(corpus.len());
    for item in corpus {
        let cfg = ParseConfig {
            start: item.start.clone(),
            ..cfg.clone()
        };
        let verdict = parser.judge(&item.tokens, &cfg).map_err(|source| EvalError::Item {
            id: item.id.clone(),
            source,
        })?;
        rows.push(ReportRow {
            id: item.id.clone(),
            expected: item.expected,
            observed: verdict.status,
            witness_count: verdict.total,
            first_witness: verdict.witnesses.first().map(|d| d.to_sexpr()),
        });
    }
    let passed = rows.iter().filter(|r| r.pass()).count();
    Ok(Report {
        totals: Totals {
            items: rows.len(),
            passed,
            failed: rows.len() - passed,
        },
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub id: String,
    pub expected: Judgment,
    pub tokens: String,
    /// Observed judgment per variant, in [`Variant::ALL`] order.
    pub observed: [Judgment; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    /// Variants whose judgments agree with every expected judgment.
    pub matching: Vec<Variant>,
}

impl Comparison {
    pub fn observed(&self, id: &str, variant: Variant) -> Option<Judgment> {
        let k = Variant::ALL.iter().position(|v| *v == variant)?;
        self.rows.iter().find(|r| r.id == id).map(|r| r.observed[k])
    }

    pub fn summary(&self) -> String {
        if self.matching.is_empty() {
            "no variant matches every judgment".to_string()
        } else {
            let names: Vec<_> = self.matching.iter().map(|v| v.as_str()).collect();
            format!("matches every judgment: {}", names.join(", "))
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("id\texpected");
        for v in Variant::ALL {
            out.push('\t');
            out.push_str(v.as_str());
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{}\t{}", r.id, r.expected));
            for j in r.observed {
                out.push('\t');
                out.push_str(j.as_str());
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header = [
            "id",
            "expected",
            "modifier-trees",
            "adjective-headed",
            "noun-headed",
            "tokens",
        ];
        let rows: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.id.clone(),
                    r.expected.to_string(),
                    r.observed[0].to_string(),
                    r.observed[1].to_string(),
                    r.observed[2].to_string(),
                    r.tokens.clone(),
                ]
            })
            .collect();
        write_table(f, &header, &rows)?;
        writeln!(f, "{}", self.summary())
    }
}

/// Judges the corpus under all three hypotheses.
pub fn compare_variants(
    g: &Grammar,
    orders: &LanguageOrders,
    corpus: &[CorpusItem],
    cfg: &ParseConfig,
) -> Result<Comparison, EvalError> {
    let mut reports = Vec::new();
    for variant in Variant::ALL {
        let grammar = build_variant(g, orders, variant)?;
        reports.push(run_corpus(&Parser::new(&grammar), corpus, cfg)?);
    }
    let rows = corpus
        .iter()
        .enumerate()
        .map(|(i, item)| ComparisonRow {
            id: item.id.clone(),
            expected: item.expected,
            tokens: format_tokens(&item.tokens),
            observed: [
                reports[0].rows[i].observed,
                reports[1].rows[i].observed,
                reports[2].rows[i].observed,
            ],
        })
        .collect();
    let matching = Variant::ALL
        .iter()
        .zip(&reports)
        .filter(|(_, r)| r.all_pass())
        .map(|(v, _)| *v)
        .collect();
    Ok(Comparison { rows, matching })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_corpus;
    use crate::sample;

    fn tree_text(g: &Grammar, id: &str) -> String {
        let t = g.get(id).unwrap_or_else(|| panic!("missing {id}"));
        format!("{} {} {}", t.language, t.tree_type, t.root)
    }

    #[test]
    fn language_manifest() {
        let orders = parse_languages("# tag\tclass\nen\tadj-n\nfr\tn-adj\n").unwrap();
        assert_eq!(orders.get(&LanguageTag::new("fr").unwrap()), Some(OrderClass::NAdj));
        let err = parse_languages("en\tadj-n\nga\tsometimes\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 4));
        assert!(parse_languages("en adj-n\n").is_err());
    }

    #[test]
    fn adjective_headed_trees() {
        let g = build_variant(&sample::grammar(), &sample::languages(), Variant::AdjectiveHeaded).unwrap();
        assert_eq!(
            tree_text(&g, "en_smart_adjhead"),
            "en auxiliary (NP (AdjP (Adj #smart)) NP*)"
        );
        assert_eq!(
            tree_text(&g, "es_blanquito_adjhead"),
            "es auxiliary (NP NP* (AdjP (Adj #blanquito)))"
        );
        assert!(g.trees().all(|t| !is_np_modifier(t)));
    }

    #[test]
    fn noun_headed_trees() {
        let g = build_variant(&sample::grammar(), &sample::languages(), Variant::NounHeaded).unwrap();
        assert_eq!(
            tree_text(&g, "en_friends_adjslot"),
            "en initial (NP AdjP^ (N #friends))"
        );
        assert_eq!(
            tree_text(&g, "it_italiani_adjslot"),
            "it initial (NP (N #italiani) AdjP^)"
        );
        assert!(g.get("en_friends").is_some());
    }

    #[test]
    fn modifier_trees_is_identity() {
        let s = sample::grammar();
        assert_eq!(
            build_variant(&s, &sample::languages(), Variant::ModifierTrees).unwrap(),
            s
        );
    }

    #[test]
    fn variants_leave_other_categories_alone() {
        let s = sample::grammar();
        let outside = |g: &Grammar| -> Vec<ElementaryTree> {
            g.trees()
                .filter(|t| t.root_category() != &np() && t.root_category() != &adjp())
                .cloned()
                .collect()
        };
        for v in Variant::ALL {
            let g = build_variant(&s, &sample::languages(), v).unwrap();
            assert_eq!(outside(&g), outside(&s), "{v}");
        }
    }

    #[test]
    fn missing_fragments_and_orders() {
        let bare = crate::format::parse_grammar("tree a en initial (NP (N #a))\n").unwrap();
        assert!(matches!(
            build_variant(&bare, &sample::languages(), Variant::NounHeaded),
            Err(EvalError::MissingFragment(_))
        ));
        let s = sample::grammar();
        assert!(matches!(
            build_variant(&s, &LanguageOrders::default(), Variant::AdjectiveHeaded),
            Err(EvalError::UnknownOrder(_))
        ));
    }

    #[test]
    fn sample_corpus_passes() {
        let report = run_corpus(
            &Parser::new(&sample::grammar()),
            &sample::corpus(),
            &ParseConfig::default(),
        )
        .unwrap();
        assert_eq!(
            report.totals,
            Totals {
                items: 9,
                passed: 9,
                failed: 0
            }
        );
        assert!(report
            .to_tsv()
            .starts_with("id\texpected\tobserved\tpass\twitness_count\nex3a\tderivable\tderivable\tpass\t"));
    }

    #[test]
    fn empty_corpus() {
        let report = run_corpus(&Parser::new(&sample::grammar()), &[], &ParseConfig::default()).unwrap();
        assert_eq!(report, Report::default());
        let cmp = compare_variants(&sample::grammar(), &sample::languages(), &[], &ParseConfig::default()).unwrap();
        assert!(cmp.rows.is_empty());
        assert_eq!(cmp.matching, Variant::ALL.to_vec());
    }

    #[test]
    fn adjective_headed_fails_exactly_8a_and_8c() {
        let corpus: Vec<_> = sample::corpus()
            .into_iter()
            .filter(|i| i.id.starts_with("ex8"))
            .collect();
        let g = build_variant(&sample::grammar(), &sample::languages(), Variant::AdjectiveHeaded).unwrap();
        let report = run_corpus(&Parser::new(&g), &corpus, &ParseConfig::default()).unwrap();
        let failed: Vec<_> = report
            .rows
            .iter()
            .filter(|r| !r.pass())
            .map(|r| r.id.as_str())
            .collect();
        assert_eq!(failed, ["ex8a", "ex8c"]);
        assert!(report
            .rows
            .iter()
            .filter(|r| !r.pass())
            .all(|r| r.observed == Judgment::Underivable));
    }

    #[test]
    fn comparison_on_adposition_items_is_uniform() {
        let corpus: Vec<_> = sample::corpus()
            .into_iter()
            .filter(|i| i.id.starts_with("ex3") || i.id.starts_with("ex4"))
            .collect();
        let cmp = compare_variants(
            &sample::grammar(),
            &sample::languages(),
            &corpus,
            &ParseConfig::default(),
        )
        .unwrap();
        for row in &cmp.rows {
            assert!(row.observed.iter().all(|j| *j == row.observed[0]), "{}", row.id);
        }
    }

    #[test]
    fn item_errors_name_the_item() {
        let corpus = parse_corpus("x1\tderivable\tNP\tfriends:en\tn\n").unwrap();
        let cfg = ParseConfig {
            max_derivations: 0,
            ..ParseConfig::default()
        };
        let err = run_corpus(&Parser::new(&sample::grammar()), &corpus, &cfg).unwrap_err();
        assert!(err.to_string().starts_with("item x1:"));
    }
}

//! Lexicalized tree-adjoining grammar engine for judging code-switched
//! token sequences.
//!
//! Grammars are sets of elementary trees, each tagged with a language.
//! A token sequence is judged derivable when some derivation from a start
//! category yields exactly that sequence.

pub mod derivation;
pub mod eval;
pub mod format;
pub mod grammar;
pub mod parser;
pub mod sample;
pub mod tree;

pub use derivation::{replay, Derivation, Operation, ReplayError, Step};
pub use eval::{
    build_variant, compare_variants, parse_languages, run_corpus, Comparison, EvalError, LanguageOrders, OrderClass,
    Report, Variant,
};
pub use format::{
    format_tokens, parse_corpus, parse_grammar, parse_token_string, parse_trees, serialize_grammar, CorpusItem,
    FormatError, Judgment,
};
pub use grammar::{validate_grammar, Grammar, GrammarError, Severity, ValidationReport};
pub use parser::{
    enumerate_strings, judge, oracle_enumerate, oracle_parse, parse, two_stage_parse, Mode, ParseConfig, ParseError,
    Parser, TreeBound, Verdict,
};
pub use tree::{
    adjoin, substitute, yield_tokens, Category, DerivedTree, ElementaryTree, LanguageTag, Node, NodeAddress, Token,
    TreeError, TreeType,
};

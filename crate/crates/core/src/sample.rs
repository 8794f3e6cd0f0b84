//! The shipped grammars, language manifest and judgment corpus, embedded at
//! build time.

use crate::eval::{parse_languages, LanguageOrders};
use crate::format::{parse_corpus, parse_grammar, CorpusItem};
use crate::grammar::Grammar;

pub const LANGUAGES: [&str; 6] = ["en", "hi", "es", "it", "ga", "fr"];

pub const LANGUAGES_TSV: &str = include_str!("../../../grammars/languages.tsv");
pub const CORPUS_TSV: &str = include_str!("../../../corpus/paper.tsv");

pub fn grammar_text(language: &str) -> Option<&'static str> {
    Some(match language {
        "en" => include_str!("../../../grammars/en.tag"),
        "hi" => include_str!("../../../grammars/hi.tag"),
        "es" => include_str!("../../../grammars/es.tag"),
        "it" => include_str!("../../../grammars/it.tag"),
        "ga" => include_str!("../../../grammars/ga.tag"),
        "fr" => include_str!("../../../grammars/fr.tag"),
        _ => return None,
    })
}

/// Union of the named shipped grammars.
///
/// # Panics
/// On an unknown language code.
pub fn grammar_for(languages: &[&str]) -> Grammar {
    languages.iter().fold(Grammar::empty(), |acc, lang| {
        let text = grammar_text(lang).unwrap_or_else(|| panic!("no shipped grammar for {lang}"));
        let g = parse_grammar(text).expect("shipped grammar parses");
        acc.union(&g).expect("shipped grammars combine")
    })
}

/// Union of all six shipped grammars.
pub fn grammar() -> Grammar {
    grammar_for(&LANGUAGES)
}

pub fn languages() -> LanguageOrders {
    parse_languages(LANGUAGES_TSV).expect("shipped manifest parses")
}

pub fn corpus() -> Vec<CorpusItem> {
    parse_corpus(CORPUS_TSV).expect("shipped corpus parses")
}

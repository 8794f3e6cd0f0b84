use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn cstag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cstag"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const EX3B: &str = "he:en always:en comes:en to:en the:en office:en time:en par:hi";
const EX7: &str = "he:en always:en office:en to:en time:en on:en comes:en";

const ALL: [&str; 12] = [
    "-g",
    "grammars/en.tag",
    "-g",
    "grammars/hi.tag",
    "-g",
    "grammars/es.tag",
    "-g",
    "grammars/it.tag",
    "-g",
    "grammars/ga.tag",
    "-g",
    "grammars/fr.tag",
];

fn with_all(cmd: &str, rest: &[&str]) -> Output {
    let mut args = vec![cmd];
    args.extend(ALL);
    args.extend(rest);
    cstag(&args)
}

#[test]
fn judge_derivable_prints_the_derivation() {
    let o = cstag(&[
        "judge",
        "-g",
        "grammars/en.tag",
        "-g",
        "grammars/hi.tag",
        "-s",
        "S",
        "-t",
        EX3B,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "DERIVABLE\n1 derivation(s)\n\nen_comes\n  en_he subst @1\n  en_always adjoin @2\n  en_to subst @2.2\n    \
         en_the subst @2\n      en_office subst @2\n  hi_par subst @2.3\n    en_time subst @1\n"
    );
}

#[test]
fn judge_underivable_exits_one() {
    let o = cstag(&["judge", "-g", "grammars/en.tag", "-s", "S", "-t", EX7]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "UNDERIVABLE\n");
}

#[test]
fn empty_tokens_are_a_usage_error() {
    let o = cstag(&["judge", "-g", "grammars/en.tag", "-t", ""]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("Usage: cstag judge"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["judge", "-t", "he:en"],
        vec!["judge", "-g", "grammars/en.tag", "-t", "he:en", "--mode", "fast"],
        vec!["judge", "-g", "grammars/en.tag", "-t", "he"],
        vec![
            "judge",
            "-g",
            "grammars/en.tag",
            "-t",
            "he:en",
            "--max-derivations",
            "0",
        ],
    ] {
        let o = cstag(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn data_errors_exit_two() {
    let o = cstag(&["judge", "-g", "grammars/missing.tag", "-t", "he:en"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grammars/missing.tag"));
    let o = cstag(&["judge", "-g", "grammars/en.tag", "-g", "grammars/en.tag", "-t", "he:en"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("duplicate"), "{}", stderr(&o));
}

#[test]
fn sexpr_and_tsv_output() {
    let args = [
        "-g",
        "grammars/en.tag",
        "-g",
        "grammars/ga.tag",
        "-s",
        "NP",
        "-t",
        "carr:ga light:en green:en",
    ];
    let mut v = vec!["parse", "--sexpr"];
    v.extend(args);
    let o = cstag(&v);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "2 derivation(s)\n\n\
         (ga_carr (adjoin r (ga_adjmod (adjoin r (ga_adjmod (subst 2 (en_green)))) (subst 2 (en_light)))))\n\
         (ga_carr (adjoin r (ga_adjmod (subst 2 (en_green (adjoin r (en_adjstack (subst 1 (en_light)))))))))\n"
    );
    let mut v = vec!["judge", "--tsv"];
    v.extend(args);
    assert_eq!(
        stdout(&cstag(&v)),
        "tokens\tstatus\tderivations\ncarr:ga light:en green:en\tderivable\t2\n"
    );
    let mut v = vec!["parse", "--tsv", "--max-derivations", "1"];
    v.extend(args);
    assert_eq!(
        stdout(&cstag(&v)),
        "rank\tderivation\n1\t(ga_carr (adjoin r (ga_adjmod (adjoin r (ga_adjmod (subst 2 (en_green)))) (subst 2 (en_light)))))\n"
    );
}

#[test]
fn two_stage_mode_matches() {
    let single = with_all("parse", &["-s", "NP", "-t", "paper:en exceptionnel:fr", "--sexpr"]);
    let two = with_all(
        "parse",
        &[
            "-s",
            "NP",
            "-t",
            "paper:en exceptionnel:fr",
            "--sexpr",
            "--mode",
            "two-stage",
        ],
    );
    assert_eq!(stdout(&single), stdout(&two));
    assert!(stdout(&single).starts_with("4 derivation(s)"));
}

#[test]
fn enumerate_lists_strings() {
    let o = cstag(&["enumerate", "-g", "grammars/en.tag", "-s", "PP", "-n", "2", "--tsv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "length\ttokens\n2\ton:en he:en\n2\ton:en time:en\n2\tto:en he:en\n2\tto:en time:en\n"
    );
    let o = cstag(&["enumerate", "-g", "grammars/en.tag", "-s", "PP", "-n", "0"]);
    assert_eq!(stdout(&o), "0 string(s)\n");
}

#[test]
fn corpus_reports_and_exit_status() {
    let o = with_all("corpus", &["-c", "corpus/paper.tsv", "--tsv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("id\texpected\tobserved\tpass\twitness_count\n"));
    assert_eq!(out.lines().count(), 10);

    let o = cstag(&[
        "corpus",
        "-g",
        "grammars/en.tag",
        "-g",
        "grammars/hi.tag",
        "-c",
        "corpus/paper.tsv",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("ex8a  derivable    underivable  FAIL"), "{out}");
    assert!(out.ends_with("5 of 9 items pass, 4 fail\n"), "{out}");
}

#[test]
fn variants_summary() {
    let o = with_all("variants", &["-c", "corpus/paper.tsv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("matches every judgment: modifier-trees\n"));
    let o = with_all(
        "variants",
        &["-c", "corpus/paper.tsv", "--languages", "corpus/paper.tsv"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_reports_findings() {
    let o = with_all("validate", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok: 30 tree(s) in 6 file(s)\n");

    let dir = std::env::temp_dir().join(format!("cstag-validate-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.tag");
    std::fs::write(
        &bad,
        "tree a en initial (A B^)\ntree b en initial (B A^)\ntree c en auxiliary (C (X #c))\ntree d en initial (D E^ (X #d))\n",
    )
    .unwrap();
    let o = cstag(&["validate", "-g", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("unanchored substitution cycle"), "{out}");
    assert!(out.contains("error c"), "{out}");
    assert!(out.contains("warning d @1: unfillable slot E^"), "{out}");

    std::fs::write(&bad, "tree a en initial (A (X #a)\n").unwrap();
    let o = cstag(&["validate", "-g", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("bad.tag: error: line 1, column"), "{}", stdout(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    for _ in 0..3 {
        let a = with_all("variants", &["-c", "corpus/paper.tsv", "--tsv"]);
        let b = with_all("variants", &["-c", "corpus/paper.tsv", "--tsv"]);
        assert_eq!(a.stdout, b.stdout);
    }
}

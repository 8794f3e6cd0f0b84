use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, Parser as ClapParser, Subcommand, ValueEnum};

use cstag::{
    compare_variants, format_tokens, parse_corpus, parse_grammar, parse_languages, parse_token_string, parse_trees,
    run_corpus, validate_grammar, Category, Derivation, Grammar, Judgment, Mode, ParseConfig, Parser,
};

/// Grammaticality judgments for code-switched token sequences with
/// lexicalized tree-adjoining grammars.
#[derive(ClapParser)]
#[command(name = "cstag", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GrammarArgs {
    /// Grammar file; repeat to take the union of several grammars.
    #[arg(short = 'g', long = "grammar", value_name = "FILE", required = true)]
    grammars: Vec<PathBuf>,
}

#[derive(clap::Args)]
struct QueryArgs {
    #[command(flatten)]
    grammar: GrammarArgs,
    /// Start category.
    #[arg(short = 's', long = "start", value_name = "CAT", default_value = "S")]
    start: String,
    /// Whitespace-separated `surface:lang` tokens.
    #[arg(short = 't', long = "tokens", value_name = "TOKENS")]
    tokens: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Single)]
    mode: ModeArg,
    /// Most derivations to print.
    #[arg(long, value_name = "N", default_value_t = 100)]
    max_derivations: usize,
    /// Print derivations as one-line s-expressions.
    #[arg(long)]
    sexpr: bool,
    /// Tab-separated output.
    #[arg(long)]
    tsv: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Single,
    TwoStage,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Single => Mode::SingleStage,
            ModeArg::TwoStage => Mode::TwoStage,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the tokens are derivable (exit 0) or not (exit 1).
    Judge(QueryArgs),
    /// List the derivations of the tokens.
    Parse(QueryArgs),
    /// List every derivable string up to a length.
    Enumerate {
        #[command(flatten)]
        grammar: GrammarArgs,
        #[arg(short = 's', long = "start", value_name = "CAT", default_value = "S")]
        start: String,
        /// Longest string, in tokens.
        #[arg(short = 'n', long = "max-len", value_name = "MAXLEN")]
        max_len: usize,
        #[arg(long)]
        tsv: bool,
    },
    /// Judge every item of a corpus; exit 1 if any judgment differs.
    Corpus {
        #[command(flatten)]
        grammar: GrammarArgs,
        #[arg(short = 'c', long = "corpus", value_name = "FILE")]
        corpus: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Single)]
        mode: ModeArg,
        #[arg(long)]
        tsv: bool,
    },
    /// Judge a corpus under the modifier-tree, adjective-headed and
    /// noun-headed grammars.
    Variants {
        #[command(flatten)]
        grammar: GrammarArgs,
        #[arg(short = 'c', long = "corpus", value_name = "FILE")]
        corpus: PathBuf,
        /// Adjective order per language; defaults to `languages.tsv` beside
        /// the first grammar file.
        #[arg(long, value_name = "FILE")]
        languages: Option<PathBuf>,
        #[arg(long)]
        tsv: bool,
    },
    /// Check grammar files; exit 1 on errors.
    Validate {
        #[command(flatten)]
        grammar: GrammarArgs,
    },
}

/// A failure reported on standard error with exit status 2.
struct Failure {
    message: String,
    usage: bool,
}

impl Failure {
    fn data(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            usage: false,
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            usage: true,
        }
    }
}

struct Output {
    stdout: String,
    code: u8,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn load_grammar(paths: &[PathBuf]) -> Result<Grammar, Failure> {
    let mut grammar = Grammar::empty();
    for path in paths {
        let g = parse_grammar(&read(path)?).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
        grammar = grammar
            .union(&g)
            .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    }
    Ok(grammar)
}

fn category(label: &str) -> Result<Category, Failure> {
    Category::new(label).map_err(|e| Failure::usage(e.to_string()))
}

fn write_derivations(out: &mut String, derivations: &[Derivation], sexpr: bool) {
    for (i, d) in derivations.iter().enumerate() {
        if sexpr {
            let _ = writeln!(out, "{}", d.to_sexpr());
        } else {
            if i > 0 {
                out.push('\n');
            }
            let _ = write!(out, "{d}");
        }
    }
}

fn query(args: &QueryArgs, judge_only: bool) -> Result<Output, Failure> {
    let tokens = parse_token_string(&args.tokens).map_err(Failure::usage)?;
    if tokens.is_empty() {
        return Err(Failure::usage("no tokens given"));
    }
    if args.max_derivations == 0 {
        return Err(Failure::usage("--max-derivations must be at least 1"));
    }
    let grammar = load_grammar(&args.grammar.grammars)?;
    let cfg = ParseConfig {
        start: category(&args.start)?,
        max_derivations: args.max_derivations,
        mode: args.mode.into(),
        ..ParseConfig::default()
    };
    let verdict = Parser::new(&grammar)
        .judge(&tokens, &cfg)
        .map_err(|e| Failure::data(e.to_string()))?;
    if !verdict.search_exhausted {
        eprintln!("note: some analyses exceed the tree bound and were not explored");
    }
    let derivable = verdict.status == Judgment::Derivable;
    let mut out = String::new();
    if args.tsv {
        if judge_only {
            out.push_str("tokens\tstatus\tderivations\n");
            let _ = writeln!(out, "{}\t{}\t{}", format_tokens(&tokens), verdict.status, verdict.total);
        } else {
            out.push_str("rank\tderivation\n");
            for (i, d) in verdict.witnesses.iter().enumerate() {
                let _ = writeln!(out, "{}\t{}", i + 1, d.to_sexpr());
            }
        }
    } else {
        if judge_only {
            out.push_str(if derivable { "DERIVABLE\n" } else { "UNDERIVABLE\n" });
        }
        let shown = verdict.witnesses.len() as u64;
        let _ = match (derivable || !judge_only, shown < verdict.total) {
            (false, _) => Ok(()),
            (true, false) => writeln!(out, "{} derivation(s)", verdict.total),
            (true, true) => writeln!(out, "{} derivation(s), showing the first {shown}", verdict.total),
        };
        if !verdict.witnesses.is_empty() {
            out.push('\n');
        }
        write_derivations(&mut out, &verdict.witnesses, args.sexpr);
    }
    let code = if judge_only && !derivable { 1 } else { 0 };
    Ok(Output { stdout: out, code })
}

fn run(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Judge(args) => query(args, true),
        Command::Parse(args) => query(args, false),
        Command::Enumerate {
            grammar,
            start,
            max_len,
            tsv,
        } => {
            let g = load_grammar(&grammar.grammars)?;
            let strings = Parser::new(&g).enumerate_strings(&category(start)?, *max_len);
            let mut out = String::new();
            if *tsv {
                out.push_str("length\ttokens\n");
            }
            for s in &strings {
                if *tsv {
                    let _ = writeln!(out, "{}\t{}", s.len(), format_tokens(s));
                } else {
                    let _ = writeln!(out, "{}", format_tokens(s));
                }
            }
            if !*tsv {
                let _ = writeln!(out, "{} string(s)", strings.len());
            }
            Ok(Output { stdout: out, code: 0 })
        }
        Command::Corpus {
            grammar,
            corpus,
            mode,
            tsv,
        } => {
            let g = load_grammar(&grammar.grammars)?;
            let items =
                parse_corpus(&read(corpus)?).map_err(|e| Failure::data(format!("{}: {e}", corpus.display())))?;
            let cfg = ParseConfig::default().mode((*mode).into());
            let report = run_corpus(&Parser::new(&g), &items, &cfg).map_err(|e| Failure::data(e.to_string()))?;
            let stdout = if *tsv { report.to_tsv() } else { report.to_string() };
            Ok(Output {
                stdout,
                code: if report.all_pass() { 0 } else { 1 },
            })
        }
        Command::Variants {
            grammar,
            corpus,
            languages,
            tsv,
        } => {
            let g = load_grammar(&grammar.grammars)?;
            let items =
                parse_corpus(&read(corpus)?).map_err(|e| Failure::data(format!("{}: {e}", corpus.display())))?;
            let manifest = match languages {
                Some(path) => path.clone(),
                None => grammar.grammars[0]
                    .parent()
                    .unwrap_or(Path::new("."))
                    .join("languages.tsv"),
            };
            let orders = parse_languages(&read(&manifest)?)
                .map_err(|e| Failure::data(format!("{}: {e}", manifest.display())))?;
            let table = compare_variants(&g, &orders, &items, &ParseConfig::default())
                .map_err(|e| Failure::data(e.to_string()))?;
            let stdout = if *tsv { table.to_tsv() } else { table.to_string() };
            Ok(Output { stdout, code: 0 })
        }
        Command::Validate { grammar } => {
            let mut trees = Vec::new();
            let mut out = String::new();
            let mut syntax_errors = false;
            for path in &grammar.grammars {
                match parse_trees(&read(path)?) {
                    Ok(found) => trees.extend(found.into_iter().map(|(_, t)| t)),
                    Err(e) => {
                        let _ = writeln!(out, "{}: error: {e}", path.display());
                        syntax_errors = true;
                    }
                }
            }
            let report = validate_grammar(&trees);
            out.push_str(&report.to_string());
            let failed = syntax_errors || report.has_errors();
            if !failed {
                let _ = writeln!(out, "ok: {} tree(s) in {} file(s)", trees.len(), grammar.grammars.len());
            }
            Ok(Output {
                stdout: out,
                code: u8::from(failed),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(output) => {
            print!("{}", output.stdout);
            ExitCode::from(output.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            if failure.usage {
                eprintln!();
                let name = match &cli.command {
                    Command::Judge(_) => "judge",
                    Command::Parse(_) => "parse",
                    _ => "",
                };
                let mut cmd = Cli::command();
                cmd.build();
                let usage = match cmd.find_subcommand_mut(name) {
                    Some(sub) => sub.render_usage(),
                    None => cmd.render_usage(),
                };
                eprintln!("{usage}");
            }
            ExitCode::from(2)
        }
    }
}

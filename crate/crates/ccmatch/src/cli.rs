//! Command line driver: argument parsing, target collection, and the
//! tokenize-scan-render pipeline with grep-style exit statuses
//! (0 = matched, 1 = no match, 2 = usage or fatal error).

use crate::lexer::{detect_language, tokenize, LangName, TokenStream};
use crate::matcher::{scan, BlindLevel, Match};
use crate::query::parse_query;
use crate::report::{render, OutputMode};
use clap::Parser;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;

pub const EXIT_MATCH: i32 = 0;
pub const EXIT_NO_MATCH: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Where the query text comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuerySource {
    Inline(String),
    File(PathBuf),
    Stdin,
}

/// All options of one run.
#[derive(Debug, Clone)]
pub struct Config {
    pub query: QuerySource,
    pub language_override: Option<LangName>,
    pub blind: BlindLevel,
    pub mode: OutputMode,
    pub recursive: bool,
    pub show_line_numbers: bool,
    /// Empty means: read the target code from standard input.
    pub targets: Vec<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(
    name = "ccmatch",
    disable_help_flag = false,
    about = "Find code snippets by token-level clone matching",
    override_usage = "ccmatch [OPTIONS] PATTERN [PATH ...]"
)]
struct Args {
    /// Query snippet (omit when using -f or -q)
    pattern: Option<String>,

    /// Target files or directories; none means standard input
    paths: Vec<PathBuf>,

    /// Search directories recursively
    #[arg(short = 'r')]
    recursive: bool,

    /// Target language (default java)
    #[arg(long = "lang", value_parser = ["java", "c"])]
    lang: Option<String>,

    /// Blind level: identifier/literal normalization
    #[arg(short = 'b', value_parser = ["none", "consistent", "full"], default_value = "consistent")]
    blind: String,

    /// Print per-file match counts
    #[arg(short = 'c', conflicts_with_all = ["files_only", "json"])]
    count: bool,

    /// Print only names of matching files
    #[arg(short = 'l', conflicts_with = "json")]
    files_only: bool,

    /// Print matches as one JSON document
    #[arg(long)]
    json: bool,

    /// Show line numbers
    #[arg(short = 'n')]
    line_numbers: bool,

    /// Read the query from FILE instead of the command line
    #[arg(short = 'f', value_name = "FILE", conflicts_with = "query_stdin")]
    query_file: Option<PathBuf>,

    /// Read the query from standard input (only '-' is accepted)
    #[arg(short = 'q', value_name = "-")]
    query_stdin: Option<String>,
}

/// Parse argv (not including the program name) into a [`Config`].
pub fn parse_args<I, S>(argv: I) -> Result<Config, String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = std::iter::once("ccmatch".to_string())
        .chain(argv.into_iter().map(Into::into))
        .collect();
    let args = Args::try_parse_from(argv).map_err(|e| e.to_string())?;

    let query = match (&args.query_file, &args.query_stdin, &args.pattern) {
        (Some(f), None, _) => QuerySource::File(f.clone()),
        (None, Some(s), _) if s == "-" => QuerySource::Stdin,
        (None, Some(s), _) => return Err(format!("-q accepts only '-', got '{s}'")),
        (None, None, Some(_)) => QuerySource::Inline(String::new()), // filled below
        (None, None, None) => return Err(usage("missing PATTERN")),
        (Some(_), Some(_), _) => unreachable!("clap conflict"),
    };
    // with -f/-q the first positional is a target path, not the pattern
    let (query, targets) = match query {
        QuerySource::Inline(_) => (
            QuerySource::Inline(args.pattern.clone().expect("checked above")),
            args.paths.clone(),
        ),
        other => {
            let mut targets: Vec<PathBuf> =
                args.pattern.iter().map(PathBuf::from).collect();
            targets.extend(args.paths.iter().cloned());
            (other, targets)
        }
    };
    if query == QuerySource::Stdin && targets.is_empty() {
        return Err(usage(
            "standard input cannot be both the query source and the target",
        ));
    }

    let blind = match args.blind.as_str() {
        "none" => BlindLevel::None,
        "consistent" => BlindLevel::Consistent,
        "full" => BlindLevel::Full,
        _ => unreachable!("clap value_parser"),
    };
    let mode = if args.json {
        OutputMode::Json
    } else if args.count {
        OutputMode::Count
    } else if args.files_only {
        OutputMode::FilesOnly
    } else {
        OutputMode::TopLine
    };
    let language_override = args.lang.as_deref().map(|l| match l {
        "java" => LangName::Java,
        "c" => LangName::C,
        _ => unreachable!("clap value_parser"),
    });

    Ok(Config {
        query,
        language_override,
        blind,
        mode,
        recursive: args.recursive,
        show_line_numbers: args.line_numbers,
        targets,
    })
}

fn usage(msg: &str) -> String {
    format!("{msg}\n\nUsage: ccmatch [OPTIONS] PATTERN [PATH ...]\nTry 'ccmatch --help' for details.")
}

/// Resolve the named paths into concrete (file, language) targets, sorted
/// by path. Unreadable or skipped entries produce diagnostics but never
/// abort the run.
pub fn collect_targets(
    paths: &[PathBuf],
    recursive: bool,
    language_override: Option<LangName>,
    diagnostics: &mut Vec<String>,
) -> Vec<(PathBuf, LangName)> {
    let effective = language_override.unwrap_or(LangName::Java);
    let mut out = Vec::new();
    for path in paths {
        if !path.exists() {
            diagnostics.push(format!("ccmatch: {}: no such file or directory", path.display()));
            continue;
        }
        if path.is_dir() {
            if !recursive {
                diagnostics.push(format!(
                    "ccmatch: {}: is a directory (use -r to search it)",
                    path.display()
                ));
                continue;
            }
            // follow_links stays off so symlink cycles cannot recurse
            for entry in walkdir::WalkDir::new(path).follow_links(false) {
                match entry {
                    Ok(e) if e.file_type().is_file() => {
                        let ext = e.path().extension().and_then(|x| x.to_str());
                        let lang = crate::lexer::Language::by_name(effective);
                        if ext.is_some_and(|x| lang.extensions.contains(&x)) {
                            out.push((e.path().to_path_buf(), effective));
                        }
                    }
                    Ok(_) => {}
                    Err(e) => diagnostics.push(format!("ccmatch: {e}")),
                }
            }
        } else {
            let lang = detect_language(&path.to_string_lossy(), language_override);
            out.push((path.clone(), lang.name));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn read_query_text(config: &Config) -> Result<String, String> {
    match &config.query {
        QuerySource::Inline(s) => Ok(s.clone()),
        QuerySource::File(path) => std::fs::read_to_string(path)
            .map_err(|e| format!("ccmatch: {}: {e}", path.display())),
        QuerySource::Stdin => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("ccmatch: standard input: {e}"))?;
            Ok(s)
        }
    }
}

/// Run a full search, writing results to `out` and diagnostics to `err`.
/// Returns the grep-style exit status.
pub fn run(config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let query_text = match read_query_text(config) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_ERROR;
        }
    };
    let query_lang =
        crate::lexer::Language::by_name(config.language_override.unwrap_or(LangName::Java));
    let pattern = match parse_query(&query_text, query_lang, config.blind) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "ccmatch: {e}");
            return EXIT_ERROR;
        }
    };

    // the scanned streams, in deterministic path order
    let streams: Vec<(TokenStream, Vec<Match>)> = if config.targets.is_empty() {
        let mut text = String::new();
        if let Err(e) = std::io::stdin().read_to_string(&mut text) {
            let _ = writeln!(err, "ccmatch: standard input: {e}");
            return EXIT_ERROR;
        }
        let lang =
            crate::lexer::Language::by_name(config.language_override.unwrap_or(LangName::Java));
        let stream = tokenize("<stdin>", &text, lang);
        let matches = scan(&pattern, &stream, config.blind);
        vec![(stream, matches)]
    } else {
        let mut diagnostics = Vec::new();
        let targets = collect_targets(
            &config.targets,
            config.recursive,
            config.language_override,
            &mut diagnostics,
        );
        for d in &diagnostics {
            let _ = writeln!(err, "{d}");
        }
        if targets.is_empty() && !diagnostics.is_empty() {
            let _ = writeln!(err, "ccmatch: no readable targets");
            return EXIT_ERROR;
        }
        // per-file pipelines are independent; collect preserves input order
        let results: Vec<Result<(TokenStream, Vec<Match>), String>> = targets
            .par_iter()
            .map(|(path, lang_name)| {
                let display = path.to_string_lossy().into_owned();
                let bytes = std::fs::read(path)
                    .map_err(|e| format!("ccmatch: {display}: {e}"))?;
                let text = String::from_utf8(bytes)
                    .map_err(|_| format!("ccmatch: {display}: not valid UTF-8, skipped"))?;
                let lang = crate::lexer::Language::by_name(*lang_name);
                let stream = tokenize(&display, &text, lang);
                let matches = scan(&pattern, &stream, config.blind);
                Ok((stream, matches))
            })
            .collect();
        let mut ok = Vec::new();
        for r in results {
            match r {
                Ok(pair) => ok.push(pair),
                Err(d) => {
                    let _ = writeln!(err, "{d}");
                }
            }
        }
        ok
    };

    let mut all_matches = Vec::new();
    let mut lines = BTreeMap::new();
    for (stream, matches) in &streams {
        for d in &stream.diagnostics {
            let _ = writeln!(err, "ccmatch: {d}");
        }
        lines.insert(stream.path.clone(), stream.lines.clone());
        all_matches.extend(matches.iter().cloned());
    }
    all_matches.sort_by(|a, b| (&a.path, a.token_start).cmp(&(&b.path, b.token_start)));

    let report = render(&all_matches, &lines, config.mode, config.show_line_numbers);
    for entry in &report.entries {
        let _ = writeln!(out, "{entry}");
    }
    if report.total_matches > 0 {
        EXIT_MATCH
    } else {
        EXIT_NO_MATCH
    }
}

/// Entry point used by the binary.
pub fn main_with_args<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    match parse_args(argv) {
        Ok(config) => {
            let stdout = std::io::stdout();
            let stderr = std::io::stderr();
            run(&config, &mut stdout.lock(), &mut stderr.lock())
        }
        Err(msg) => {
            eprintln!("{msg}");
            EXIT_ERROR
        }
    }
}

//! Rendering scan results.
//!
//! The default output is grep-shaped: `PATH:LINETEXT`, where the line is
//! the raw source line containing the first matched token (the matched top
//! line). Other modes print whole snippets, per-file counts, matching file
//! names, or one JSON document for tooling.

use crate::matcher::Match;
use serde::Serialize;
use std::collections::BTreeMap;

/// How matches are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputMode {
    /// `PATH:LINETEXT` for the first line of each match.
    #[default]
    TopLine,
    /// Every raw line the match spans.
    FullSnippet,
    /// `PATH:N` per file with at least one match.
    Count,
    /// Each matching path once.
    FilesOnly,
    /// One JSON array of match objects.
    Json,
}

/// Rendered output: one entry per output line (or a single JSON document).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub entries: Vec<String>,
    pub total_matches: usize,
}

#[derive(Serialize)]
struct JsonMatch<'a> {
    path: &'a str,
    line_start: u32,
    col_start: u32,
    line_end: u32,
    col_end: u32,
    token_start: usize,
    token_end: usize,
    bindings: JsonBindings<'a>,
}

#[derive(Serialize)]
struct JsonBindings<'a> {
    identifiers: &'a BTreeMap<String, String>,
    literals: &'a BTreeMap<String, String>,
}

/// Render matches. `lines` maps each file path to its raw line table;
/// every match must reference a known path and line (anything else is an
/// internal fault and panics).
pub fn render(
    matches: &[Match],
    lines: &BTreeMap<String, Vec<String>>,
    mode: OutputMode,
    show_line_numbers: bool,
) -> Report {
    let line_of = |path: &str, lineno: u32| -> &str {
        lines
            .get(path)
            .unwrap_or_else(|| panic!("render: no line table for {path}"))
            .get(lineno as usize - 1)
            .unwrap_or_else(|| panic!("render: {path} has no line {lineno}"))
    };
    let entries = match mode {
        OutputMode::TopLine => matches
            .iter()
            .map(|m| {
                let text = line_of(&m.path, m.span.line_start);
                if show_line_numbers {
                    format!("{}:{}:{}", m.path, m.span.line_start, text)
                } else {
                    format!("{}:{}", m.path, text)
                }
            })
            .collect(),
        OutputMode::FullSnippet => {
            let mut out = Vec::new();
            for m in matches {
                for lineno in m.span.line_start..=m.span.line_end {
                    let text = line_of(&m.path, lineno);
                    if show_line_numbers {
                        out.push(format!("{}:{}:{}", m.path, lineno, text));
                    } else {
                        out.push(format!("{}:{}", m.path, text));
                    }
                }
            }
            out
        }
        OutputMode::Count => {
            let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
            for m in matches {
                *counts.entry(&m.path).or_default() += 1;
            }
            // matches arrive sorted by path, so path order is preserved
            counts
                .iter()
                .map(|(path, n)| format!("{path}:{n}"))
                .collect()
        }
        OutputMode::FilesOnly => {
            let mut seen = Vec::new();
            for m in matches {
                if seen.last() != Some(&m.path) {
                    seen.push(m.path.clone());
                }
            }
            seen.dedup();
            seen
        }
        OutputMode::Json => {
            let objs: Vec<JsonMatch<'_>> = matches
                .iter()
                .map(|m| JsonMatch {
                    path: &m.path,
                    line_start: m.span.line_start,
                    col_start: m.span.col_start,
                    line_end: m.span.line_end,
                    col_end: m.span.col_end,
                    token_start: m.token_start,
                    token_end: m.token_end,
                    bindings: JsonBindings {
                        identifiers: m.bindings.identifiers(),
                        literals: m.bindings.literals(),
                    },
                })
                .collect();
            vec![serde_json::to_string_pretty(&objs).expect("match serialization")]
        }
    };
    Report {
        entries,
        total_matches: matches.len(),
    }
}

//! ccmatch: clone-aware, grep-like search for code snippets.
//!
//! A query is a code snippet in the target language (Java or C), optionally
//! containing `$`-meta-tokens, and matching happens on the token sequence:
//! comments, whitespace, and line breaks never matter. Depending on the
//! blind level, identifiers and literals match exactly (type-1 clones),
//! under a consistent bijective renaming (type-2 P-match, the default), or
//! freely (type-2 non-P-match). Wildcards and repetition operators cover
//! specified type-3 clones.
//!
//! ```
//! use ccmatch::lexer::{tokenize, Language};
//! use ccmatch::matcher::{scan, BlindLevel};
//! use ccmatch::query::parse_query;
//!
//! let stream = tokenize("demo.java", "amount = x < y ? x : y;", Language::java());
//! let pattern = parse_query("a < b ? a : b", Language::java(), BlindLevel::Consistent)?;
//! let matches = scan(&pattern, &stream, BlindLevel::Consistent);
//! assert_eq!(matches.len(), 1);
//! # Ok::<(), ccmatch::query::QueryError>(())
//! ```

pub mod cli;
pub mod lexer;
pub mod matcher;
pub mod query;
pub mod report;

#[doc(hidden)]
pub mod book;

//! Query parsing.
//!
//! A query is a code snippet in the target language, optionally containing
//! meta-tokens introduced by `$`:
//!
//! * `$name` / `$10` — pin an identifier or literal to that exact token
//! * `$.` — any single token
//! * `$#` — any (shortest) token sequence
//! * `$$` — like `$#` but skipping over balanced `{}`, `[]`, `()`
//! * `X $| Y` — alternation
//! * `X $*`, `X $+`, `X $?` — possessive repetition
//! * `$( ... $)` — grouping
//!
//! Plain identifiers and literals become *blind* elements that can stand
//! for any identifier or literal, subject to the run's blind level.

use crate::lexer::{is_ident_start, LangName, Language, Scanner, Token, TokenKind};
use crate::matcher::BlindLevel;
use std::fmt;
use thiserror::Error;

/// One element of a parsed query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternElement {
    /// A reserved word, delimiter, or pinned identifier/literal that must
    /// match the exact target token.
    Exact { kind: TokenKind, text: String },
    /// An unannotated identifier; matches any target identifier under the
    /// blind level in force.
    BlindIdentifier { symbol: String },
    /// An unannotated literal; matches any target literal.
    BlindLiteral { symbol: String },
    /// `$.`
    AnyOne,
    /// `$#`
    Gap,
    /// `$$`
    BalancedGap,
    /// `X $| Y`, lowest precedence within its group.
    Alternation(Vec<Vec<PatternElement>>),
    /// `X $*` (min 0), `X $+` (min 1), `X $?` (min 0, max 1). Always
    /// possessive: once iteration stops the count is fixed.
    Repetition {
        body: Vec<PatternElement>,
        min: u32,
        max: Option<u32>,
    },
    /// `$( ... $)` with no alternation or quantifier attached.
    Group(Vec<PatternElement>),
}

/// A parsed query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub elements: Vec<PatternElement>,
    pub language: LangName,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("query:{line}:{col}: {message}")]
pub struct QueryError {
    pub message: String,
    pub line: u32,
    pub col: u32,
}

impl QueryError {
    fn new(message: impl Into<String>, line: u32, col: u32) -> Self {
        QueryError {
            message: message.into(),
            line,
            col,
        }
    }
}

/// Raw query token: either a regular language token or a meta-token.
#[derive(Debug, Clone, PartialEq)]
enum QueryToken {
    Regular(Token),
    Pinned(Token),
    Meta(Meta, u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Meta {
    Dot,
    Gap,
    BalancedGap,
    Alt,
    Star,
    Plus,
    Question,
    Open,
    Close,
}

/// Tokenize query text: the language's lexer extended with the `$` meta
/// symbol. `$` must be immediately followed by its payload.
fn lex_query(text: &str, language: &'static Language) -> Result<Vec<QueryToken>, QueryError> {
    let mut scanner = Scanner::new("query", text, language);
    let mut out = Vec::new();
    while !scanner.at_end() {
        let (line, col) = scanner.position();
        if scanner.peek_char() == Some(b'$') {
            scanner.bump_char();
            let meta = match scanner.peek_char() {
                Some(b'.') => Some(Meta::Dot),
                Some(b'#') => Some(Meta::Gap),
                Some(b'$') => Some(Meta::BalancedGap),
                Some(b'|') => Some(Meta::Alt),
                Some(b'*') => Some(Meta::Star),
                Some(b'+') => Some(Meta::Plus),
                Some(b'?') => Some(Meta::Question),
                Some(b'(') => Some(Meta::Open),
                Some(b')') => Some(Meta::Close),
                _ => None,
            };
            if let Some(meta) = meta {
                scanner.bump_char();
                out.push(QueryToken::Meta(meta, line, col));
                continue;
            }
            match scanner.peek_char() {
                Some(b) if is_ident_start(b) => {
                    let mut tok = scanner
                        .next_regular_token()
                        .expect("identifier start implies a token");
                    if tok.kind == TokenKind::Reserved {
                        return Err(QueryError::new(
                            format!("'$' cannot pin reserved word '{}'", tok.text),
                            line,
                            col,
                        ));
                    }
                    tok.kind = TokenKind::Identifier;
                    out.push(QueryToken::Pinned(tok));
                }
                Some(b) if b.is_ascii_digit() || b == b'"' || b == b'\'' => {
                    let tok = scanner
                        .next_regular_token()
                        .expect("literal start implies a token");
                    debug_assert_eq!(tok.kind, TokenKind::Literal);
                    out.push(QueryToken::Pinned(tok));
                }
                _ => {
                    return Err(QueryError::new(
                        "'$' must be immediately followed by an identifier, a literal, \
                         or one of . # $ | * + ? ( )",
                        line,
                        col,
                    ));
                }
            }
        } else {
            let tok = scanner.next_regular_token().expect("not at end");
            out.push(QueryToken::Regular(tok));
        }
    }
    if let Some(d) = scanner.diagnostics.first() {
        return Err(QueryError::new(format!("bad query token: {d}"), 1, 1));
    }
    Ok(out)
}

/// Parse a query string into a [`Pattern`]. Under `BlindLevel::None`,
/// unannotated identifiers and literals are pinned (type-1 matching).
pub fn parse_query(
    text: &str,
    language: &'static Language,
    blind: BlindLevel,
) -> Result<Pattern, QueryError> {
    if text.trim().is_empty() {
        return Err(QueryError::new("empty query", 1, 1));
    }
    let tokens = lex_query(text, language)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        blind,
    };
    let elements = parser.parse_alternation()?;
    if let Some(t) = parser.peek() {
        let (line, col) = token_pos(t);
        return Err(QueryError::new("unbalanced '$)'", line, col));
    }
    if elements.is_empty() {
        return Err(QueryError::new("empty query", 1, 1));
    }
    check_no_trailing_gap(&elements, true)?;
    Ok(Pattern {
        elements,
        language: language.name,
    })
}

fn token_pos(t: &QueryToken) -> (u32, u32) {
    match t {
        QueryToken::Regular(t) | QueryToken::Pinned(t) => (t.span.line_start, t.span.col_start),
        QueryToken::Meta(_, l, c) => (*l, *c),
    }
}

struct Parser<'a> {
    tokens: &'a [QueryToken],
    pos: usize,
    blind: BlindLevel,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a QueryToken> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'a QueryToken> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// `alt := seq ($| seq)*`. A single branch collapses to the plain
    /// sequence; multiple branches become one Alternation element.
    fn parse_alternation(&mut self) -> Result<Vec<PatternElement>, QueryError> {
        let mut branches = vec![self.parse_sequence()?];
        while let Some(QueryToken::Meta(Meta::Alt, line, col)) = self.peek() {
            let (line, col) = (*line, *col);
            self.bump();
            let branch = self.parse_sequence()?;
            if branch.is_empty() {
                return Err(QueryError::new("empty alternation branch", line, col));
            }
            if branches[0].is_empty() {
                return Err(QueryError::new("empty alternation branch", line, col));
            }
            branches.push(branch);
        }
        if branches.len() == 1 {
            Ok(branches.pop().unwrap())
        } else {
            Ok(vec![PatternElement::Alternation(branches)])
        }
    }

    fn parse_sequence(&mut self) -> Result<Vec<PatternElement>, QueryError> {
        let mut elems = Vec::new();
        loop {
            match self.peek() {
                None
                | Some(QueryToken::Meta(Meta::Alt, ..))
                | Some(QueryToken::Meta(Meta::Close, ..)) => break,
                _ => elems.push(self.parse_postfix()?),
            }
        }
        Ok(elems)
    }

    fn parse_postfix(&mut self) -> Result<PatternElement, QueryError> {
        let mut elem = self.parse_primary()?;
        while let Some(QueryToken::Meta(m @ (Meta::Star | Meta::Plus | Meta::Question), line, col)) =
            self.peek()
        {
            let (m, line, col) = (*m, *line, *col);
            self.bump();
            if matches!(
                elem,
                PatternElement::Gap | PatternElement::BalancedGap | PatternElement::AnyOne
            ) {
                return Err(QueryError::new(
                    "wildcard tokens cannot be quantified",
                    line,
                    col,
                ));
            }
            let body = match elem {
                PatternElement::Group(body) => body,
                other => vec![other],
            };
            check_no_trailing_gap(&body, true).map_err(|_| {
                QueryError::new("wildcard requires a following token", line, col)
            })?;
            let (min, max) = match m {
                Meta::Star => (0, None),
                Meta::Plus => (1, None),
                Meta::Question => (0, Some(1)),
                _ => unreachable!(),
            };
            elem = PatternElement::Repetition { body, min, max };
        }
        Ok(elem)
    }

    fn parse_primary(&mut self) -> Result<PatternElement, QueryError> {
        let tok = self.bump().expect("caller checked non-empty");
        match tok {
            QueryToken::Regular(t) => Ok(match (t.kind, self.blind) {
                (TokenKind::Identifier, BlindLevel::None) | (TokenKind::Literal, BlindLevel::None) => {
                    PatternElement::Exact {
                        kind: t.kind,
                        text: t.text.clone(),
                    }
                }
                (TokenKind::Identifier, _) => PatternElement::BlindIdentifier {
                    symbol: t.text.clone(),
                },
                (TokenKind::Literal, _) => PatternElement::BlindLiteral {
                    symbol: t.text.clone(),
                },
                _ => PatternElement::Exact {
                    kind: t.kind,
                    text: t.text.clone(),
                },
            }),
            QueryToken::Pinned(t) => Ok(PatternElement::Exact {
                kind: t.kind,
                text: t.text.clone(),
            }),
            QueryToken::Meta(m, line, col) => match m {
                Meta::Dot => Ok(PatternElement::AnyOne),
                Meta::Gap => Ok(PatternElement::Gap),
                Meta::BalancedGap => Ok(PatternElement::BalancedGap),
                Meta::Open => {
                    let body = self.parse_alternation()?;
                    match self.bump() {
                        Some(QueryToken::Meta(Meta::Close, ..)) => {}
                        _ => {
                            return Err(QueryError::new("unbalanced '$('", *line, *col));
                        }
                    }
                    if body.is_empty() {
                        return Err(QueryError::new("empty group", *line, *col));
                    }
                    // a group that reduced to a lone alternation is the
                    // alternation itself
                    if body.len() == 1 && matches!(body[0], PatternElement::Alternation(_)) {
                        Ok(body.into_iter().next().unwrap())
                    } else {
                        Ok(PatternElement::Group(body))
                    }
                }
                Meta::Close => Err(QueryError::new("unbalanced '$)'", *line, *col)),
                Meta::Alt => Err(QueryError::new("empty alternation branch", *line, *col)),
                Meta::Star | Meta::Plus | Meta::Question => Err(QueryError::new(
                    "quantifier with no preceding element",
                    *line,
                    *col,
                )),
            },
        }
    }
}

/// A gap wildcard needs a following element: reject a gap in tail position
/// of the whole pattern, of any alternation branch, and of any repetition
/// body. `at_tail` says whether the end of `elems` is such a position.
fn check_no_trailing_gap(elems: &[PatternElement], at_tail: bool) -> Result<(), QueryError> {
    for (i, e) in elems.iter().enumerate() {
        let last = i + 1 == elems.len();
        match e {
            PatternElement::Gap | PatternElement::BalancedGap => {
                if at_tail && last {
                    return Err(QueryError::new("wildcard requires a following token", 1, 1));
                }
            }
            PatternElement::Group(body) => check_no_trailing_gap(body, at_tail && last)?,
            PatternElement::Alternation(branches) => {
                for b in branches {
                    // a branch end is a tail only in terms of the branch
                    // itself when nothing follows the alternation
                    check_no_trailing_gap(b, true)?;
                }
            }
            PatternElement::Repetition { body, .. } => {
                check_no_trailing_gap(body, true)?;
            }
            _ => {}
        }
    }
    Ok(())
}

impl fmt::Display for PatternElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternElement::Exact { kind, text } => match kind {
                TokenKind::Identifier | TokenKind::Literal => write!(f, "${text}"),
                _ => write!(f, "{text}"),
            },
            PatternElement::BlindIdentifier { symbol }
            | PatternElement::BlindLiteral { symbol } => write!(f, "{symbol}"),
            PatternElement::AnyOne => write!(f, "$."),
            PatternElement::Gap => write!(f, "$#"),
            PatternElement::BalancedGap => write!(f, "$$"),
            PatternElement::Alternation(branches) => {
                write!(f, "$( ")?;
                for (i, b) in branches.iter().enumerate() {
                    if i > 0 {
                        write!(f, " $| ")?;
                    }
                    write_seq(f, b)?;
                }
                write!(f, " $)")
            }
            PatternElement::Repetition { body, min, max } => {
                if body.len() == 1 {
                    write!(f, "{}", body[0])?;
                } else {
                    write!(f, "$( ")?;
                    write_seq(f, body)?;
                    write!(f, " $)")?;
                }
                match (min, max) {
                    (0, None) => write!(f, " $*"),
                    (1, None) => write!(f, " $+"),
                    (0, Some(1)) => write!(f, " $?"),
                    _ => unreachable!("parser only builds *, +, ?"),
                }
            }
            PatternElement::Group(body) => {
                write!(f, "$( ")?;
                write_seq(f, body)?;
                write!(f, " $)")
            }
        }
    }
}

fn write_seq(f: &mut fmt::Formatter<'_>, elems: &[PatternElement]) -> fmt::Result {
    for (i, e) in elems.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

impl fmt::Display for Pattern {
    /// Canonical query text; reparsing it yields a structurally equal
    /// pattern.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_seq(f, &self.elements)
    }
}

//! Token-sequence matching.
//!
//! The engine aligns a [`Pattern`] against a [`TokenStream`] with a naive
//! sequential search: exact and blind elements consume one token, gap
//! wildcards consume reluctantly (as few tokens as possible while the rest
//! of the pattern still matches), alternation branches are tried left to
//! right, and quantifiers are possessive (once iteration stops, the count
//! is fixed; the engine never backtracks into a repetition).
//!
//! Blind identifiers and literals are resolved through a [`BindingTable`]
//! realizing parameterized matching: under the default `Consistent` level
//! the query-to-target association must be a bijection, so equal query
//! names map to equal target names and vice versa.

use crate::lexer::{SourceSpan, Token, TokenKind, TokenStream};
use crate::query::{Pattern, PatternElement};
use std::collections::BTreeMap;

/// How blindly identifiers and literals match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlindLevel {
    /// Type-1: identifiers and literals match only the exact same token.
    None,
    /// Type-2 P-match (the default): consistent, bijective renaming.
    Consistent,
    /// Type-2 non-P-match: any identifier matches any identifier, any
    /// literal any literal.
    Full,
}

impl BlindLevel {
    pub const ALL: [BlindLevel; 3] = [BlindLevel::None, BlindLevel::Consistent, BlindLevel::Full];
}

/// Bijective association between query and target identifiers/literals.
/// Identifiers and literals live in separate namespaces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BindingTable {
    id_forward: BTreeMap<String, String>,
    id_reverse: BTreeMap<String, String>,
    lit_forward: BTreeMap<String, String>,
    lit_reverse: BTreeMap<String, String>,
}

impl BindingTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identifiers(&self) -> &BTreeMap<String, String> {
        &self.id_forward
    }

    pub fn literals(&self) -> &BTreeMap<String, String> {
        &self.lit_forward
    }

    fn bind(&mut self, kind: TokenKind, symbol: &str, target: &str, blind: BlindLevel) -> bool {
        match blind {
            BlindLevel::Full => true,
            BlindLevel::None => unreachable!("parser pins all tokens under BlindLevel::None"),
            BlindLevel::Consistent => {
                let (forward, reverse) = match kind {
                    TokenKind::Identifier => (&mut self.id_forward, &mut self.id_reverse),
                    TokenKind::Literal => (&mut self.lit_forward, &mut self.lit_reverse),
                    _ => unreachable!("only identifiers and literals are bound"),
                };
                match (forward.get(symbol), reverse.get(target)) {
                    (Some(t), _) => t == target,
                    (None, Some(_)) => false,
                    (None, None) => {
                        forward.insert(symbol.to_string(), target.to_string());
                        reverse.insert(target.to_string(), symbol.to_string());
                        true
                    }
                }
            }
        }
    }
}

/// A located match: token range, source extent, and the bindings that
/// witnessed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub path: String,
    /// Half-open token index range into the stream.
    pub token_start: usize,
    pub token_end: usize,
    pub span: SourceSpan,
    pub bindings: BindingTable,
}

/// Single-token decision: can query element `q` consume target token `t`?
/// Updates the table only on accept.
pub fn try_bind(q: &PatternElement, t: &Token, table: &mut BindingTable, blind: BlindLevel) -> bool {
    match q {
        PatternElement::Exact { kind, text } => *kind == t.kind && *text == t.text,
        PatternElement::BlindIdentifier { symbol } => {
            t.kind == TokenKind::Identifier && table.bind(TokenKind::Identifier, symbol, &t.text, blind)
        }
        PatternElement::BlindLiteral { symbol } => {
            t.kind == TokenKind::Literal && table.bind(TokenKind::Literal, symbol, &t.text, blind)
        }
        _ => unreachable!("try_bind takes token-level elements only"),
    }
}

fn is_open_bracket(t: &Token) -> bool {
    t.kind == TokenKind::Delimiter && matches!(t.text.as_str(), "(" | "[" | "{")
}

fn is_close_bracket(t: &Token) -> bool {
    t.kind == TokenKind::Delimiter && matches!(t.text.as_str(), ")" | "]" | "}")
}

/// Continuation: given a position and the bindings accumulated so far,
/// match whatever pattern remains beyond the current element slice.
type Cont<'c> = &'c dyn Fn(usize, BindingTable) -> Option<(usize, BindingTable)>;

fn match_elems(
    elems: &[PatternElement],
    tokens: &[Token],
    pos: usize,
    table: BindingTable,
    blind: BlindLevel,
    cont: Cont<'_>,
) -> Option<(usize, BindingTable)> {
    let Some((first, rest)) = elems.split_first() else {
        return cont(pos, table);
    };
    match first {
        PatternElement::Exact { .. }
        | PatternElement::BlindIdentifier { .. }
        | PatternElement::BlindLiteral { .. } => {
            let t = tokens.get(pos)?;
            let mut table = table;
            if try_bind(first, t, &mut table, blind) {
                match_elems(rest, tokens, pos + 1, table, blind, cont)
            } else {
                None
            }
        }
        PatternElement::AnyOne => {
            if pos < tokens.len() {
                match_elems(rest, tokens, pos + 1, table, blind, cont)
            } else {
                None
            }
        }
        PatternElement::Gap => {
            // reluctant: try the remainder at each extent, shortest first
            for next in pos..=tokens.len() {
                if let Some(hit) = match_elems(rest, tokens, next, table.clone(), blind, cont) {
                    return Some(hit);
                }
            }
            None
        }
        PatternElement::BalancedGap => {
            // like Gap, but the remainder is only tried where the bracket
            // depth opened since the gap start is zero; a closing bracket
            // at depth zero ends consumption
            let mut depth = 0i32;
            let mut next = pos;
            loop {
                if depth == 0 {
                    if let Some(hit) = match_elems(rest, tokens, next, table.clone(), blind, cont) {
                        return Some(hit);
                    }
                }
                let Some(t) = tokens.get(next) else {
                    return None;
                };
                if is_open_bracket(t) {
                    depth += 1;
                } else if is_close_bracket(t) {
                    if depth == 0 {
                        return None;
                    }
                    depth -= 1;
                }
                next += 1;
            }
        }
        PatternElement::Alternation(branches) => {
            for branch in branches {
                let hit = match_elems(branch, tokens, pos, table.clone(), blind, &|p, tb| {
                    match_elems(rest, tokens, p, tb, blind, cont)
                });
                if hit.is_some() {
                    return hit;
                }
            }
            None
        }
        PatternElement::Group(body) => {
            match_elems(body, tokens, pos, table, blind, &|p, tb| {
                match_elems(rest, tokens, p, tb, blind, cont)
            })
        }
        PatternElement::Repetition { body, min, max } => {
            // possessive: iterate the body standalone as many times as it
            // matches, then commit to that count
            let accept: Cont<'_> = &|p, tb| Some((p, tb));
            let mut count = 0u32;
            let mut cur = pos;
            let mut table = table;
            while max.map_or(true, |m| count < m) {
                match match_elems(body, tokens, cur, table.clone(), blind, accept) {
                    Some((end, tb)) if end > cur => {
                        cur = end;
                        table = tb;
                        count += 1;
                    }
                    // a zero-width body iteration would loop forever
                    Some(_) | None => break,
                }
            }
            if count < *min {
                return None;
            }
            match_elems(rest, tokens, cur, table, blind, cont)
        }
    }
}

/// Try to match the whole pattern starting exactly at token index `start`.
/// Returns the end index (one past the last consumed token) and the final
/// bindings of the first alignment found.
pub fn match_at(
    pattern: &Pattern,
    stream: &TokenStream,
    start: usize,
    blind: BlindLevel,
) -> Option<(usize, BindingTable)> {
    let accept: Cont<'_> = &|p, tb| Some((p, tb));
    match_elems(
        &pattern.elements,
        &stream.tokens,
        start,
        BindingTable::new(),
        blind,
        accept,
    )
}

/// Enumerate matches leftmost-first without overlap: scanning resumes at
/// the end of each match. Bindings are fresh for every attempt.
pub fn scan(pattern: &Pattern, stream: &TokenStream, blind: BlindLevel) -> Vec<Match> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < stream.tokens.len() {
        match match_at(pattern, stream, i, blind) {
            Some((end, bindings)) if end > i => {
                let first = &stream.tokens[i].span;
                let last = &stream.tokens[end - 1].span;
                out.push(Match {
                    path: stream.path.clone(),
                    token_start: i,
                    token_end: end,
                    span: SourceSpan {
                        path: stream.path.clone(),
                        line_start: first.line_start,
                        line_end: last.line_end,
                        col_start: first.col_start,
                        col_end: last.col_end,
                        byte_start: first.byte_start,
                        byte_end: last.byte_end,
                    },
                    bindings,
                });
                i = end;
            }
            _ => i += 1,
        }
    }
    out
}

//! Shared test machinery: random pattern/stream generators and a
//! brute-force matching oracle kept independent of the engine.

use ccmatch::lexer::{LangName, SourceSpan, Token, TokenKind, TokenStream};
use ccmatch::matcher::BlindLevel;
use ccmatch::query::{Pattern, PatternElement};
use rand::prelude::*;

pub const GEN_IDS: &[&str] = &["a", "b", "c", "d"];
pub const GEN_LITS: &[&str] = &["0", "1"];
pub const GEN_DELIMS: &[&str] = &["(", ")", "{", "}", "[", "]", ";", "=", "+"];
pub const GEN_RESERVED: &[&str] = &["if", "else", "while"];

/// Build a token with a fabricated span; the engine only reads spans when
/// constructing `Match` values, never while deciding acceptance.
pub fn tok(kind: TokenKind, text: &str, index: usize) -> Token {
    Token {
        kind,
        text: text.to_string(),
        span: SourceSpan {
            path: "<gen>".into(),
            line_start: 1,
            line_end: 1,
            col_start: index as u32 + 1,
            col_end: index as u32 + 2,
            byte_start: index,
            byte_end: index + 1,
        },
    }
}

pub fn stream_of(tokens: Vec<Token>) -> TokenStream {
    TokenStream {
        path: "<gen>".into(),
        tokens,
        lines: Vec::new(),
        diagnostics: Vec::new(),
    }
}

pub fn gen_token(rng: &mut impl Rng, index: usize) -> Token {
    match rng.gen_range(0..10) {
        0..=3 => tok(TokenKind::Identifier, GEN_IDS.choose(rng).unwrap(), index),
        4..=5 => tok(TokenKind::Literal, GEN_LITS.choose(rng).unwrap(), index),
        6..=8 => tok(TokenKind::Delimiter, GEN_DELIMS.choose(rng).unwrap(), index),
        _ => tok(TokenKind::Reserved, GEN_RESERVED.choose(rng).unwrap(), index),
    }
}

pub fn gen_stream(rng: &mut impl Rng, max_len: usize) -> TokenStream {
    let len = rng.gen_range(0..=max_len);
    stream_of((0..len).map(|i| gen_token(rng, i)).collect())
}

fn gen_leaf(rng: &mut impl Rng) -> PatternElement {
    match rng.gen_range(0..12) {
        0..=2 => PatternElement::Exact {
            kind: TokenKind::Delimiter,
            text: GEN_DELIMS.choose(rng).unwrap().to_string(),
        },
        3 => PatternElement::Exact {
            kind: TokenKind::Identifier,
            text: GEN_IDS.choose(rng).unwrap().to_string(),
        },
        4 => PatternElement::Exact {
            kind: TokenKind::Reserved,
            text: GEN_RESERVED.choose(rng).unwrap().to_string(),
        },
        5..=7 => PatternElement::BlindIdentifier {
            symbol: GEN_IDS.choose(rng).unwrap().to_string(),
        },
        8 => PatternElement::BlindLiteral {
            symbol: GEN_LITS.choose(rng).unwrap().to_string(),
        },
        9 => PatternElement::AnyOne,
        10 => PatternElement::Gap,
        _ => PatternElement::BalancedGap,
    }
}

fn is_gap_tail(e: &PatternElement) -> bool {
    match e {
        PatternElement::Gap | PatternElement::BalancedGap => true,
        PatternElement::Group(body) => body.last().map(is_gap_tail).unwrap_or(false),
        _ => false,
    }
}

/// Append a terminator while the sequence would leave a gap wildcard with
/// nothing to stop at.
fn terminate(seq: &mut Vec<PatternElement>, rng: &mut impl Rng) {
    while seq.last().map(is_gap_tail).unwrap_or(false) {
        seq.push(PatternElement::Exact {
            kind: TokenKind::Delimiter,
            text: GEN_DELIMS.choose(rng).unwrap().to_string(),
        });
    }
}

fn gen_seq(rng: &mut impl Rng, depth: u32, max_len: usize) -> Vec<PatternElement> {
    let len = rng.gen_range(1..=max_len);
    let mut seq: Vec<PatternElement> = (0..len).map(|_| gen_element(rng, depth)).collect();
    terminate(&mut seq, rng);
    seq
}

fn gen_element(rng: &mut impl Rng, depth: u32) -> PatternElement {
    if depth == 0 || rng.gen_range(0..4) > 0 {
        return gen_leaf(rng);
    }
    match rng.gen_range(0..3) {
        0 => {
            let branches = (0..rng.gen_range(2..=3))
                .map(|_| {
                    let mut b = gen_seq(rng, depth - 1, 3);
                    terminate(&mut b, rng);
                    b
                })
                .collect();
            PatternElement::Alternation(branches)
        }
        1 => {
            let mut body = gen_seq(rng, depth - 1, 3);
            terminate(&mut body, rng);
            // quantified wildcards are rejected by the parser; mirror that
            if body.len() == 1
                && matches!(
                    body[0],
                    PatternElement::AnyOne | PatternElement::Gap | PatternElement::BalancedGap
                )
            {
                body.push(gen_leaf(rng));
                terminate(&mut body, rng);
            }
            let (min, max) = *[(0, None), (1, None), (0, Some(1))].choose(rng).unwrap();
            PatternElement::Repetition { body, min, max }
        }
        _ => PatternElement::Group(gen_seq(rng, depth - 1, 3)),
    }
}

pub fn gen_pattern(rng: &mut impl Rng, depth: u32, max_len: usize) -> Pattern {
    let mut elements = gen_seq(rng, depth, max_len);
    terminate(&mut elements, rng);
    Pattern {
        elements,
        language: LangName::Java,
    }
}

/// Rewrite blind elements to exact ones, the transformation the query
/// parser applies under `BlindLevel::None`.
pub fn pin_all(elements: &[PatternElement]) -> Vec<PatternElement> {
    elements
        .iter()
        .map(|e| match e {
            PatternElement::BlindIdentifier { symbol } => PatternElement::Exact {
                kind: TokenKind::Identifier,
                text: symbol.clone(),
            },
            PatternElement::BlindLiteral { symbol } => PatternElement::Exact {
                kind: TokenKind::Literal,
                text: symbol.clone(),
            },
            PatternElement::Alternation(bs) => {
                PatternElement::Alternation(bs.iter().map(|b| pin_all(b)).collect())
            }
            PatternElement::Repetition { body, min, max } => PatternElement::Repetition {
                body: pin_all(body),
                min: *min,
                max: *max,
            },
            PatternElement::Group(body) => PatternElement::Group(pin_all(body)),
            other => other.clone(),
        })
        .collect()
}

pub mod oracle {
    //! Exhaustive enumeration of every alignment a pattern admits:
    //! all gap extents (respecting the bracket-depth rule), all
    //! alternation branches, and all bijective binding assignments,
    //! explored in the documented choice order. Repetition counts are
    //! fixed by the greedy possessive rule before the rest is enumerated.
    //!
    //! Bindings are held as flat pair lists here, on purpose: nothing in
    //! this module shares code with the engine's tables or continuations.

    use super::*;

    #[derive(Debug, Clone, Default, PartialEq, Eq)]
    pub struct Bind {
        pub ids: Vec<(String, String)>,
        pub lits: Vec<(String, String)>,
    }

    fn pair_bind(
        pairs: &mut Vec<(String, String)>,
        sym: &str,
        target: &str,
        blind: BlindLevel,
    ) -> bool {
        match blind {
            BlindLevel::Full => true,
            BlindLevel::None => panic!("blind elements cannot appear under BlindLevel::None"),
            BlindLevel::Consistent => {
                for (s, t) in pairs.iter() {
                    if s == sym {
                        return t == target;
                    }
                    if t == target {
                        return false;
                    }
                }
                pairs.push((sym.to_string(), target.to_string()));
                true
            }
        }
    }

    fn one_token_ok(e: &PatternElement, t: &Token, bind: &mut Bind, blind: BlindLevel) -> bool {
        match e {
            PatternElement::Exact { kind, text } => *kind == t.kind && *text == t.text,
            PatternElement::BlindIdentifier { symbol } => {
                t.kind == TokenKind::Identifier && pair_bind(&mut bind.ids, symbol, &t.text, blind)
            }
            PatternElement::BlindLiteral { symbol } => {
                t.kind == TokenKind::Literal && pair_bind(&mut bind.lits, symbol, &t.text, blind)
            }
            _ => unreachable!(),
        }
    }

    /// Every position where a balanced gap starting at `pos` may hand over
    /// to the rest of the pattern, in increasing order.
    fn balanced_stops(tokens: &[Token], pos: usize) -> Vec<usize> {
        let mut stops = Vec::new();
        let mut depth = 0i32;
        let mut i = pos;
        loop {
            if depth == 0 {
                stops.push(i);
            }
            let Some(t) = tokens.get(i) else {
                return stops;
            };
            let open = t.kind == TokenKind::Delimiter && matches!(t.text.as_str(), "(" | "[" | "{");
            let close = t.kind == TokenKind::Delimiter && matches!(t.text.as_str(), ")" | "]" | "}");
            if open {
                depth += 1;
            } else if close {
                if depth == 0 {
                    return stops;
                }
                depth -= 1;
            }
            i += 1;
        }
    }

    /// All `(end, bind)` outcomes of matching `elems` at `pos`, in the
    /// documented choice order (shortest gaps first, branches in order).
    pub fn outcomes(
        elems: &[PatternElement],
        tokens: &[Token],
        pos: usize,
        bind: &Bind,
        blind: BlindLevel,
    ) -> Vec<(usize, Bind)> {
        let Some((first, rest)) = elems.split_first() else {
            return vec![(pos, bind.clone())];
        };
        match first {
            PatternElement::Exact { .. }
            | PatternElement::BlindIdentifier { .. }
            | PatternElement::BlindLiteral { .. } => {
                let Some(t) = tokens.get(pos) else {
                    return Vec::new();
                };
                let mut b = bind.clone();
                if one_token_ok(first, t, &mut b, blind) {
                    outcomes(rest, tokens, pos + 1, &b, blind)
                } else {
                    Vec::new()
                }
            }
            PatternElement::AnyOne => {
                if pos < tokens.len() {
                    outcomes(rest, tokens, pos + 1, bind, blind)
                } else {
                    Vec::new()
                }
            }
            PatternElement::Gap => (pos..=tokens.len())
                .flat_map(|next| outcomes(rest, tokens, next, bind, blind))
                .collect(),
            PatternElement::BalancedGap => balanced_stops(tokens, pos)
                .into_iter()
                .flat_map(|next| outcomes(rest, tokens, next, bind, blind))
                .collect(),
            PatternElement::Alternation(branches) => branches
                .iter()
                .flat_map(|branch| {
                    outcomes(branch, tokens, pos, bind, blind)
                        .into_iter()
                        .flat_map(|(p, b)| outcomes(rest, tokens, p, &b, blind))
                        .collect::<Vec<_>>()
                })
                .collect(),
            PatternElement::Group(body) => outcomes(body, tokens, pos, bind, blind)
                .into_iter()
                .flat_map(|(p, b)| outcomes(rest, tokens, p, &b, blind))
                .collect(),
            PatternElement::Repetition { body, min, max } => {
                // greedy possessive rule: each iteration takes the first
                // standalone alignment of the body; the count is fixed
                let mut count = 0u32;
                let mut cur = pos;
                let mut b = bind.clone();
                while max.map_or(true, |m| count < m) {
                    match outcomes(body, tokens, cur, &b, blind).into_iter().next() {
                        Some((end, nb)) if end > cur => {
                            cur = end;
                            b = nb;
                            count += 1;
                        }
                        _ => break,
                    }
                }
                if count < *min {
                    Vec::new()
                } else {
                    outcomes(rest, tokens, cur, &b, blind)
                }
            }
        }
    }

    /// Oracle acceptance: does any alignment of the whole pattern exist
    /// starting exactly at `pos`?
    pub fn accepts(pattern: &Pattern, tokens: &[Token], pos: usize, blind: BlindLevel) -> bool {
        !outcomes(&pattern.elements, tokens, pos, &Bind::default(), blind).is_empty()
    }
}

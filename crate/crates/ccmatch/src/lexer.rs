//! Lexical analysis of target source files.
//!
//! A target file is turned into a flat sequence of tokens with source
//! positions. Comments and whitespace produce no tokens, so two files that
//! differ only in layout or commentary tokenize identically (up to spans).
//! Tokens are classified into four kinds: reserved words, delimiters,
//! identifiers, and literals. Primitive type names (`int`, `long`, ...) are
//! deliberately classified as identifiers, not reserved words, so a query
//! identifier can stand for "any type name".

use std::fmt;

/// The four token categories used for matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Reserved,
    Delimiter,
    Identifier,
    Literal,
}

/// Byte- and line-level location of a token in its file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub path: String,
    /// 1-based line numbers.
    pub line_start: u32,
    pub line_end: u32,
    /// 1-based byte columns.
    pub col_start: u32,
    pub col_end: u32,
    /// Byte offsets into the original file, half-open.
    pub byte_start: usize,
    pub byte_end: usize,
}

/// One lexical unit: kind, exact source text, and location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: SourceSpan,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text)
    }
}

/// The comment-free, whitespace-free token sequence of one file, together
/// with the raw line text needed to echo matched lines in the output.
#[derive(Debug, Clone)]
pub struct TokenStream {
    pub path: String,
    pub tokens: Vec<Token>,
    /// Raw text of each source line, without the trailing newline.
    /// `lines[0]` is line 1.
    pub lines: Vec<String>,
    /// Non-fatal problems found while tokenizing (unterminated comment or
    /// string literal). The stream itself is still usable.
    pub diagnostics: Vec<String>,
}

impl TokenStream {
    pub fn line(&self, lineno: u32) -> Option<&str> {
        self.lines.get(lineno as usize - 1).map(|s| s.as_str())
    }
}

/// Which language a [`Language`] table describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LangName {
    Java,
    C,
}

impl fmt::Display for LangName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LangName::Java => write!(f, "java"),
            LangName::C => write!(f, "c"),
        }
    }
}

/// Lexical tables for a target language.
pub struct Language {
    pub name: LangName,
    /// Keywords classified [`TokenKind::Reserved`].
    pub reserved_words: &'static [&'static str],
    /// Primitive type keywords, returned as [`TokenKind::Identifier`].
    pub type_keywords: &'static [&'static str],
    /// Operators and punctuators, longest first.
    pub delimiters: &'static [&'static str],
    /// File extensions (without the dot) handled by this language.
    pub extensions: &'static [&'static str],
    /// Whether backslash-newline is erased as whitespace (C line
    /// continuations).
    backslash_newline: bool,
}

// `int` etc. are absent here on purpose: they must lex as identifiers.
const JAVA_RESERVED: &[&str] = &[
    "abstract", "assert", "break", "case", "catch", "class", "const",
    "continue", "default", "do", "else", "enum", "extends", "final",
    "finally", "for", "goto", "if", "implements", "import", "instanceof",
    "interface", "native", "new", "package", "private", "protected",
    "public", "return", "static", "strictfp", "super", "switch",
    "synchronized", "this", "throw", "throws", "transient", "try",
    "volatile", "while",
];

const JAVA_TYPES: &[&str] = &[
    "boolean", "byte", "char", "double", "float", "int", "long", "short",
    "void",
];

// Ordered longest-first so a linear prefix scan is a longest match.
const JAVA_DELIMITERS: &[&str] = &[
    ">>>=", ">>>", ">>=", "<<=", "...", "->", "::", "==", "!=", "<=", ">=",
    "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<", ">>", "=", "<", ">", "!", "~", "?", ":", "+", "-", "*", "/", "%",
    "&", "|", "^", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@",
];

const C_RESERVED: &[&str] = &[
    "auto", "break", "case", "const", "continue", "default", "do", "else",
    "enum", "extern", "for", "goto", "if", "inline", "register", "restrict",
    "return", "sizeof", "static", "struct", "switch", "typedef", "union",
    "volatile", "while",
];

const C_TYPES: &[&str] = &[
    "_Bool", "_Complex", "char", "double", "float", "int", "long", "short",
    "signed", "unsigned", "void",
];

const C_DELIMITERS: &[&str] = &[
    "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==",
    "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|=", "##",
    "=", "<", ">", "!", "~", "?", ":", "+", "-", "*", "/", "%", "&", "|",
    "^", "(", ")", "{", "}", "[", "]", ";", ",", ".", "#",
];

static JAVA: Language = Language {
    name: LangName::Java,
    reserved_words: JAVA_RESERVED,
    type_keywords: JAVA_TYPES,
    delimiters: JAVA_DELIMITERS,
    extensions: &["java"],
    backslash_newline: false,
};

static C: Language = Language {
    name: LangName::C,
    reserved_words: C_RESERVED,
    type_keywords: C_TYPES,
    delimiters: C_DELIMITERS,
    extensions: &["c", "h"],
    backslash_newline: true,
};

impl Language {
    pub fn java() -> &'static Language {
        &JAVA
    }

    pub fn c() -> &'static Language {
        &C
    }

    pub fn by_name(name: LangName) -> &'static Language {
        match name {
            LangName::Java => &JAVA,
            LangName::C => &C,
        }
    }

    pub fn from_extension(ext: &str) -> Option<&'static Language> {
        [&JAVA, &C]
            .into_iter()
            .find(|l| l.extensions.contains(&ext))
    }

    fn classify_word(&self, word: &str) -> TokenKind {
        if self.reserved_words.contains(&word) {
            TokenKind::Reserved
        } else {
            TokenKind::Identifier
        }
    }
}

/// Pick the language for a file: an explicit override wins, then the file
/// extension, then the run default (Java).
pub fn detect_language(path: &str, over: Option<LangName>) -> &'static Language {
    if let Some(name) = over {
        return Language::by_name(name);
    }
    std::path::Path::new(path)
        .extension()
        .and_then(|e| e.to_str())
        .and_then(Language::from_extension)
        .unwrap_or(&JAVA)
}

/// Tokenize a whole file. Comments and whitespace are dropped; everything
/// else becomes a token. Never fails: malformed input is tokenized
/// best-effort and reported through `TokenStream::diagnostics`.
pub fn tokenize(path: &str, text: &str, language: &'static Language) -> TokenStream {
    let mut scanner = Scanner::new(path, text, language);
    let mut tokens = Vec::new();
    while let Some(tok) = scanner.next_regular_token() {
        tokens.push(tok);
    }
    TokenStream {
        path: path.to_string(),
        tokens,
        lines: text.lines().map(|l| l.to_string()).collect(),
        diagnostics: scanner.diagnostics,
    }
}

/// Character-level scanner shared by the target tokenizer and the query
/// tokenizer (the query module layers meta-token handling on top).
pub(crate) struct Scanner<'a> {
    path: &'a str,
    bytes: &'a [u8],
    lang: &'static Language,
    pos: usize,
    line: u32,
    /// Byte offset where the current line starts.
    line_start: usize,
    pub(crate) diagnostics: Vec<String>,
}

impl<'a> Scanner<'a> {
    pub(crate) fn new(path: &'a str, text: &'a str, lang: &'static Language) -> Self {
        Scanner {
            path,
            bytes: text.as_bytes(),
            lang,
            pos: 0,
            line: 1,
            line_start: 0,
            diagnostics: Vec::new(),
        }
    }

    pub(crate) fn position(&self) -> (u32, u32) {
        (self.line, (self.pos - self.line_start) as u32 + 1)
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<u8> {
        self.bytes.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.line_start = self.pos;
        }
        Some(b)
    }

    /// Skip whitespace, comments, and (for C) backslash-newline.
    pub(crate) fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'\\') if self.lang.backslash_newline && self.is_line_continuation() => {
                    self.bump(); // backslash
                    if self.peek() == Some(b'\r') {
                        self.bump();
                    }
                    self.bump(); // newline
                }
                Some(b'/') if self.peek_at(1) == Some(b'/') => {
                    while let Some(b) = self.peek() {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                Some(b'/') if self.peek_at(1) == Some(b'*') => {
                    let (line, col) = self.position();
                    self.bump();
                    self.bump();
                    let mut closed = false;
                    while let Some(b) = self.bump() {
                        if b == b'*' && self.peek() == Some(b'/') {
                            self.bump();
                            closed = true;
                            break;
                        }
                    }
                    if !closed {
                        self.diagnostics.push(format!(
                            "{}:{}:{}: unterminated block comment",
                            self.path, line, col
                        ));
                    }
                }
                _ => break,
            }
        }
    }

    fn is_line_continuation(&self) -> bool {
        matches!(self.peek_at(1), Some(b'\n'))
            || (self.peek_at(1) == Some(b'\r') && self.peek_at(2) == Some(b'\n'))
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_trivia();
        self.pos >= self.bytes.len()
    }

    /// Next regular token, or `None` at end of input.
    pub(crate) fn next_regular_token(&mut self) -> Option<Token> {
        self.skip_trivia();
        let b = self.peek()?;
        let start = self.pos;
        let (line_start, col_start) = self.position();
        let kind = if is_ident_start(b) {
            self.scan_word()
        } else if b.is_ascii_digit() || (b == b'.' && self.peek_at(1).is_some_and(|c| c.is_ascii_digit())) {
            self.scan_number();
            TokenKind::Literal
        } else if b == b'"' || b == b'\'' {
            self.scan_quoted(b);
            TokenKind::Literal
        } else {
            self.scan_delimiter()
        };
        let (line_end, col_end) = self.position();
        let text = std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("token boundaries fall on char boundaries")
            .to_string();
        Some(Token {
            kind,
            text,
            span: SourceSpan {
                path: self.path.to_string(),
                line_start,
                line_end,
                col_start,
                col_end,
                byte_start: start,
                byte_end: self.pos,
            },
        })
    }

    pub(crate) fn scan_word(&mut self) -> TokenKind {
        let start = self.pos;
        while self.peek().is_some_and(is_ident_continue) {
            self.bump();
        }
        let word = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        self.lang.classify_word(word)
    }

    pub(crate) fn scan_number(&mut self) {
        if self.peek() == Some(b'0')
            && matches!(self.peek_at(1), Some(b'x') | Some(b'X') | Some(b'b') | Some(b'B'))
        {
            self.bump();
            self.bump();
            while self.peek().is_some_and(|b| b.is_ascii_hexdigit() || b == b'_' || b == b'.') {
                self.bump();
            }
            // hex float exponent
            if matches!(self.peek(), Some(b'p') | Some(b'P')) {
                self.bump();
                if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                    self.bump();
                }
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.bump();
                }
            }
        } else {
            while self.peek().is_some_and(|b| b.is_ascii_digit() || b == b'_') {
                self.bump();
            }
            if self.peek() == Some(b'.') && self.peek_at(1).is_some_and(|b| b.is_ascii_digit()) {
                self.bump();
                while self.peek().is_some_and(|b| b.is_ascii_digit() || b == b'_') {
                    self.bump();
                }
            } else if self.peek() == Some(b'.')
                && !self.peek_at(1).is_some_and(|b| b == b'.' || is_ident_start(b))
            {
                // trailing-dot float like "1."
                self.bump();
            }
            if matches!(self.peek(), Some(b'e') | Some(b'E')) {
                if self.peek_at(1).is_some_and(|b| b.is_ascii_digit())
                    || (matches!(self.peek_at(1), Some(b'+') | Some(b'-'))
                        && self.peek_at(2).is_some_and(|b| b.is_ascii_digit()))
                {
                    self.bump();
                    if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                        self.bump();
                    }
                    while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                        self.bump();
                    }
                }
            }
        }
        // type suffixes: 10L, 1.5f, 3u, 0x10UL ...
        while self
            .peek()
            .is_some_and(|b| matches!(b, b'l' | b'L' | b'u' | b'U' | b'f' | b'F' | b'd' | b'D'))
        {
            self.bump();
        }
    }

    /// String or character literal, quotes included. Stops at an unescaped
    /// closing quote, or best-effort at end of line / end of file.
    pub(crate) fn scan_quoted(&mut self, quote: u8) {
        let (line, col) = self.position();
        self.bump(); // opening quote
        loop {
            match self.peek() {
                None | Some(b'\n') => {
                    self.diagnostics.push(format!(
                        "{}:{}:{}: unterminated {} literal",
                        self.path,
                        line,
                        col,
                        if quote == b'"' { "string" } else { "character" }
                    ));
                    return;
                }
                Some(b'\\') => {
                    self.bump();
                    if self.peek() != Some(b'\n') {
                        self.bump();
                    }
                }
                Some(b) => {
                    self.bump();
                    if b == quote {
                        return;
                    }
                }
            }
        }
    }

    /// Longest-match delimiter lookup; an unknown byte becomes a
    /// single-character delimiter token so that lexing never aborts.
    fn scan_delimiter(&mut self) -> TokenKind {
        let rest = &self.bytes[self.pos..];
        for d in self.lang.delimiters {
            if rest.starts_with(d.as_bytes()) {
                for _ in 0..d.len() {
                    self.bump();
                }
                return TokenKind::Delimiter;
            }
        }
        // unknown character: take one whole UTF-8 char
        let mut len = 1;
        while self.pos + len < self.bytes.len() && (self.bytes[self.pos + len] & 0xC0) == 0x80 {
            len += 1;
        }
        for _ in 0..len {
            self.bump();
        }
        TokenKind::Delimiter
    }

    /// Remaining input check and raw peek, used by the query tokenizer.
    pub(crate) fn peek_char(&self) -> Option<u8> {
        self.peek()
    }

    pub(crate) fn bump_char(&mut self) {
        self.bump();
    }
}

pub(crate) fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

pub(crate) fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

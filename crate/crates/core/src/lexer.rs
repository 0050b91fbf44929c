//! Lossless Solidity lexer.
//!
//! Splits a source file into tokens that cover every input byte, so that
//! concatenating the token texts reproduces the file exactly. Comments and
//! whitespace are kept as tokens of their own; mutants are produced by
//! splicing byte spans, and byte-accurate spans are what makes that safe.
//!
//! The lexer works on raw bytes. Non-UTF8 bytes are accepted and pass
//! through untouched inside string literals and comments.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Half-open byte range `[start, end)` into the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// True when `self` lies entirely within `other`.
    pub fn within(&self, other: Span) -> bool {
        self.start >= other.start && self.end <= other.end
    }

    /// True when the two spans share at least one byte.
    pub fn overlaps(&self, other: Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenKind {
    Keyword,
    Identifier,
    NumberLiteral,
    StringLiteral,
    /// `0x` followed by exactly 40 hex digits: an inline address constant.
    HexAddressLiteral,
    OperatorSymbol,
    Punctuation,
    Comment,
    Whitespace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

impl Token {
    pub fn text<'a>(&self, src: &'a [u8]) -> &'a [u8] {
        &src[self.span.start..self.span.end]
    }

    /// Token text as UTF-8, for tokens known to be ASCII (everything except
    /// string literals and comments, which may hold arbitrary bytes).
    pub fn text_str<'a>(&self, src: &'a [u8]) -> &'a str {
        std::str::from_utf8(self.text(src)).unwrap_or("")
    }

    pub fn is(&self, src: &[u8], text: &str) -> bool {
        self.text(src) == text.as_bytes()
    }

    /// Comments and whitespace carry no syntax.
    pub fn is_trivia(&self) -> bool {
        matches!(self.kind, TokenKind::Comment | TokenKind::Whitespace)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexError {
    #[error("unterminated string literal opened at byte {offset}")]
    UnterminatedString { offset: usize },
    #[error("unterminated comment opened at byte {offset}")]
    UnterminatedComment { offset: usize },
}

/// Keywords the structural scanner and the operator matchers care about.
/// Anything else that looks like a word lexes as an identifier, which is
/// harmless: matchers compare token text, not kind, wherever it matters.
const KEYWORDS: &[&str] = &[
    "pragma", "import", "contract", "interface", "library", "function", "modifier", "constructor",
    "public", "private", "internal", "external", "pure", "view", "payable", "constant",
    "immutable", "virtual", "override", "returns", "return", "if", "else", "for", "while", "do",
    "break", "continue", "new", "delete", "emit", "event", "struct", "enum", "mapping", "memory",
    "storage", "calldata", "address", "bool", "string", "bytes", "byte", "true", "false", "is",
    "using", "indexed", "anonymous", "throw", "assembly", "unchecked", "receive", "fallback",
];

fn is_type_keyword(word: &[u8]) -> bool {
    let rest = if let Some(r) = word.strip_prefix(b"uint") {
        r
    } else if let Some(r) = word.strip_prefix(b"int") {
        r
    } else if let Some(r) = word.strip_prefix(b"bytes") {
        r
    } else {
        return false;
    };
    rest.is_empty() || (rest.len() <= 3 && rest.iter().all(u8::is_ascii_digit))
}

fn is_keyword(word: &[u8]) -> bool {
    KEYWORDS.iter().any(|k| k.as_bytes() == word) || is_type_keyword(word)
}

/// Multi-byte operators, longest first so maximal munch wins.
const OPERATORS: &[&str] = &[
    ">>=", "<<=", "**", "++", "--", "+=", "-=", "*=", "/=", "%=", "&&", "||", "==", "!=", "<=",
    ">=", "=>", "->", "&=", "|=", "^=", "<<", ">>", "+", "-", "*", "/", "%", "!", "~", "^", "&",
    "|", "<", ">", "=", "?", ":",
];

const PUNCTUATION: &[u8] = b"(){}[];,.";

fn is_ident_start(b: u8) -> bool {
    b == b'_' || b == b'$' || b.is_ascii_alphabetic()
}

fn is_ident_continue(b: u8) -> bool {
    b == b'_' || b == b'$' || b.is_ascii_alphanumeric()
}

/// Tokenize `src` into a lossless stream: token spans are strictly
/// increasing, non-overlapping, and cover every byte of the input.
pub fn lex(src: &[u8]) -> Result<Vec<Token>, LexError> {
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let start = i;
        let b = src[i];
        let (kind, end) = if b.is_ascii_whitespace() {
            while i < src.len() && src[i].is_ascii_whitespace() {
                i += 1;
            }
            (TokenKind::Whitespace, i)
        } else if src[i..].starts_with(b"//") {
            while i < src.len() && src[i] != b'\n' {
                i += 1;
            }
            (TokenKind::Comment, i)
        } else if src[i..].starts_with(b"/*") {
            i += 2;
            loop {
                if i + 1 >= src.len() {
                    return Err(LexError::UnterminatedComment { offset: start });
                }
                if src[i] == b'*' && src[i + 1] == b'/' {
                    i += 2;
                    break;
                }
                i += 1;
            }
            (TokenKind::Comment, i)
        } else if b == b'"' || b == b'\'' {
            let quote = b;
            i += 1;
            loop {
                if i >= src.len() || src[i] == b'\n' {
                    return Err(LexError::UnterminatedString { offset: start });
                }
                if src[i] == b'\\' && i + 1 < src.len() {
                    i += 2;
                    continue;
                }
                if src[i] == quote {
                    i += 1;
                    break;
                }
                i += 1;
            }
            (TokenKind::StringLiteral, i)
        } else if b.is_ascii_digit() {
            i = lex_number(src, i);
            let text = &src[start..i];
            if text.starts_with(b"0x") && text.len() == 42 {
                (TokenKind::HexAddressLiteral, i)
            } else {
                (TokenKind::NumberLiteral, i)
            }
        } else if is_ident_start(b) {
            while i < src.len() && is_ident_continue(src[i]) {
                i += 1;
            }
            let word = &src[start..i];
            if is_keyword(word) {
                (TokenKind::Keyword, i)
            } else {
                (TokenKind::Identifier, i)
            }
        } else if let Some(op) = OPERATORS
            .iter()
            .find(|op| src[i..].starts_with(op.as_bytes()))
        {
            i += op.len();
            (TokenKind::OperatorSymbol, i)
        } else if PUNCTUATION.contains(&b) {
            i += 1;
            (TokenKind::Punctuation, i)
        } else {
            // Unknown byte: pass it through as punctuation so the stream
            // stays lossless.
            i += 1;
            (TokenKind::Punctuation, i)
        };
        tokens.push(Token {
            kind,
            span: Span::new(start, end),
        });
    }
    Ok(tokens)
}

fn lex_number(src: &[u8], mut i: usize) -> usize {
    if src[i..].starts_with(b"0x") || src[i..].starts_with(b"0X") {
        i += 2;
        while i < src.len() && (src[i].is_ascii_hexdigit() || src[i] == b'_') {
            i += 1;
        }
        return i;
    }
    while i < src.len() && (src[i].is_ascii_digit() || src[i] == b'_') {
        i += 1;
    }
    // fractional part
    if i + 1 < src.len() && src[i] == b'.' && src[i + 1].is_ascii_digit() {
        i += 1;
        while i < src.len() && (src[i].is_ascii_digit() || src[i] == b'_') {
            i += 1;
        }
    }
    // exponent
    if i < src.len() && (src[i] == b'e' || src[i] == b'E') {
        let mut j = i + 1;
        if j < src.len() && (src[j] == b'+' || src[j] == b'-') {
            j += 1;
        }
        if j < src.len() && src[j].is_ascii_digit() {
            i = j;
            while i < src.len() && src[i].is_ascii_digit() {
                i += 1;
            }
        }
    }
    i
}

/// Concatenate token texts back into the original byte string.
pub fn detokenize(src: &[u8], tokens: &[Token]) -> Vec<u8> {
    let mut out = Vec::with_capacity(src.len());
    for t in tokens {
        out.extend_from_slice(t.text(src));
    }
    out
}

/// Canonical text form used to compare sources for equality: comments are
/// dropped and the remaining token texts are joined by single spaces. Two
/// sources normalize equal exactly when their token streams match.
pub fn normalize(src: &[u8]) -> Result<String, LexError> {
    let tokens = lex(src)?;
    let mut out = String::new();
    for t in &tokens {
        if t.is_trivia() {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&String::from_utf8_lossy(t.text(src)));
    }
    Ok(out)
}

/// True for a decimal integer literal (no fraction, no exponent, not hex).
pub fn is_integer_literal(text: &[u8]) -> bool {
    !text.is_empty()
        && text[0].is_ascii_digit()
        && !text.starts_with(b"0x")
        && !text.starts_with(b"0X")
        && text.iter().all(|&b| b.is_ascii_digit() || b == b'_')
}

/// Parse a decimal integer literal, ignoring `_` separators. Returns None
/// for values that do not fit in u128.
pub fn parse_integer_literal(text: &[u8]) -> Option<u128> {
    if !is_integer_literal(text) {
        return None;
    }
    let digits: String = text
        .iter()
        .filter(|&&b| b != b'_')
        .map(|&b| b as char)
        .collect();
    digits.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(src: &str) -> Vec<String> {
        lex(src.as_bytes())
            .unwrap()
            .iter()
            .filter(|t| !t.is_trivia())
            .map(|t| t.text_str(src.as_bytes()).to_string())
            .collect()
    }

    #[test]
    fn three_token_smoke() {
        let toks = lex(b"a+b").unwrap();
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[0].kind, TokenKind::Identifier);
        assert_eq!(toks[1].kind, TokenKind::OperatorSymbol);
        assert_eq!(toks[2].kind, TokenKind::Identifier);
        assert_eq!(detokenize(b"a+b", &toks), b"a+b");
    }

    #[test]
    fn unterminated_comment_reports_opening_offset() {
        assert_eq!(
            lex(b"/* open"),
            Err(LexError::UnterminatedComment { offset: 0 })
        );
        assert_eq!(
            lex(b"x = 1; /* open"),
            Err(LexError::UnterminatedComment { offset: 7 })
        );
    }

    #[test]
    fn unterminated_string_reports_opening_offset() {
        assert_eq!(
            lex(b"s = \"abc"),
            Err(LexError::UnterminatedString { offset: 4 })
        );
    }

    #[test]
    fn string_escapes_and_comments_are_single_tokens() {
        let src = b"\"a\\\"b\" // tail";
        let toks = lex(src).unwrap();
        assert_eq!(toks[0].kind, TokenKind::StringLiteral);
        assert_eq!(toks[0].text(src), b"\"a\\\"b\"");
        assert_eq!(toks.last().unwrap().kind, TokenKind::Comment);
    }

    #[test]
    fn maximal_munch_operators() {
        assert_eq!(texts("a>>=b"), vec!["a", ">>=", "b"]);
        assert_eq!(texts("a<=b"), vec!["a", "<=", "b"]);
        assert_eq!(texts("a++ + b"), vec!["a", "++", "+", "b"]);
        assert_eq!(texts("x+=1"), vec!["x", "+=", "1"]);
        assert_eq!(texts("a=>b"), vec!["a", "=>", "b"]);
    }

    #[test]
    fn address_literal_kind() {
        let src = b"a = 0xe0f5206bbd039e7b0592d8918820024e2a7437b9; b = 0x12; c = 10;";
        let toks = lex(src).unwrap();
        let kinds: Vec<TokenKind> = toks
            .iter()
            .filter(|t| !t.is_trivia())
            .map(|t| t.kind)
            .collect();
        assert!(kinds.contains(&TokenKind::HexAddressLiteral));
        let hex: Vec<&Token> = toks
            .iter()
            .filter(|t| t.kind == TokenKind::HexAddressLiteral)
            .collect();
        assert_eq!(hex.len(), 1);
        assert_eq!(hex[0].span.len(), 42);
    }

    #[test]
    fn type_keywords_lex_as_keywords() {
        for w in ["uint", "uint256", "int8", "bytes32", "uint24"] {
            let toks = lex(w.as_bytes()).unwrap();
            assert_eq!(toks[0].kind, TokenKind::Keyword, "{w}");
        }
        // digits out of range stay identifiers
        let toks = lex(b"uint2560").unwrap();
        assert_eq!(toks[0].kind, TokenKind::Identifier);
    }

    #[test]
    fn non_utf8_bytes_pass_through_in_strings() {
        let src: Vec<u8> = [b"s = \"".as_ref(), &[0xff, 0xfe], b"\";"].concat();
        let toks = lex(&src).unwrap();
        assert_eq!(detokenize(&src, &toks), src);
    }

    #[test]
    fn normalize_collapses_whitespace_and_comments() {
        assert_eq!(normalize(b"a   +  b // hi").unwrap(), "a + b");
        assert_eq!(normalize(b"a\n\t+\n/*x*/b").unwrap(), "a + b");
    }

    #[test]
    fn normalize_is_idempotent() {
        let src = b"contract C { function f() public { x = 1; /* c */ } }";
        let once = normalize(src).unwrap();
        let twice = normalize(once.as_bytes()).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn normalize_preserves_token_stream_distinctions() {
        // different token streams never normalize equal
        assert_ne!(normalize(b"a + b").unwrap(), normalize(b"a - b").unwrap());
        assert_ne!(normalize(b"ab").unwrap(), normalize(b"a b").unwrap());
    }

    #[test]
    fn integer_literal_helpers() {
        assert!(is_integer_literal(b"100"));
        assert!(is_integer_literal(b"1_000"));
        assert!(!is_integer_literal(b"0x10"));
        assert!(!is_integer_literal(b"1.5"));
        assert_eq!(parse_integer_literal(b"1_000"), Some(1000));
        assert_eq!(parse_integer_literal(b"99999999999999999999999999999999999999999"), None);
    }

    proptest! {
        // Lossless round trip and span discipline over arbitrary printable
        // input (plus newlines/tabs); lex errors are fine, but any stream we
        // do produce must reproduce the input exactly.
        #[test]
        fn lossless_round_trip(s in "[ -~\n\t]{0,200}") {
            if let Ok(toks) = lex(s.as_bytes()) {
                prop_assert_eq!(detokenize(s.as_bytes(), &toks), s.as_bytes());
                let mut pos = 0;
                for t in &toks {
                    prop_assert_eq!(t.span.start, pos);
                    prop_assert!(t.span.end > t.span.start);
                    pos = t.span.end;
                }
                prop_assert_eq!(pos, s.len());
            }
        }

        #[test]
        fn normalize_idempotent_prop(s in "[a-z0-9+*/%=<>&|!(){};, \n]{0,120}") {
            if let Ok(once) = normalize(s.as_bytes()) {
                prop_assert_eq!(normalize(once.as_bytes()).unwrap(), once);
            }
        }
    }
}

//! Structural index over a lexed Solidity file.
//!
//! Discovers contracts, functions, modifiers, and state variables by keyword
//! scanning and balanced-bracket matching. There is no symbol resolution and
//! no type checking; type-level mistakes in generated mutants are the
//! validity filter's job. Both the 0.5+ `constructor` keyword and the legacy
//! name-equals-contract constructor style are recognized.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::lexer::{lex, LexError, Span, Token, TokenKind};

#[derive(Debug, Error)]
pub enum StructureError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("unbalanced brace at byte {offset}")]
    UnbalancedBrace { offset: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractKind {
    Contract,
    Interface,
    Library,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    Public,
    External,
    Internal,
    Private,
    Unspecified,
}

impl Visibility {
    pub fn keyword(self) -> Option<&'static str> {
        match self {
            Visibility::Public => Some("public"),
            Visibility::External => Some("external"),
            Visibility::Internal => Some("internal"),
            Visibility::Private => Some("private"),
            Visibility::Unspecified => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Regular,
    /// Declared with the `constructor` keyword.
    Constructor,
    /// `function()` without a name, or the `fallback` keyword form.
    Fallback,
    /// The `receive` keyword form.
    Receive,
}

/// A named variable discovered lexically (parameter or local).
#[derive(Debug, Clone)]
pub struct VarDecl {
    pub name: String,
    pub name_span: Span,
    pub type_text: String,
}

impl VarDecl {
    /// Declared with a signed or unsigned integer type.
    pub fn is_integer(&self) -> bool {
        self.type_text.starts_with("uint") || self.type_text.starts_with("int")
    }

    /// Declared with a signed integer type.
    pub fn is_signed_integer(&self) -> bool {
        self.type_text.starts_with("int")
    }
}

#[derive(Debug, Clone)]
pub struct StateVar {
    pub name: String,
    pub name_span: Span,
    pub type_text: String,
    pub span: Span,
    pub is_constant: bool,
    pub initializer_span: Option<Span>,
}

impl StateVar {
    pub fn is_integer(&self) -> bool {
        self.type_text.starts_with("uint") || self.type_text.starts_with("int")
    }
}

#[derive(Debug, Clone)]
pub struct FunctionDecl {
    /// Declared name; empty for fallback functions and keyword constructors.
    pub name: String,
    pub name_span: Option<Span>,
    pub kind: FunctionKind,
    /// True for the `constructor` keyword form or when the name equals the
    /// enclosing contract name (legacy constructors).
    pub is_constructor: bool,
    pub visibility: Visibility,
    pub visibility_span: Option<Span>,
    pub modifiers_invoked: Vec<String>,
    /// Whole declaration, keyword through body (or `;`).
    pub span: Span,
    pub params_span: Span,
    /// `{ ... }` including braces; None for body-less declarations.
    pub body_span: Option<Span>,
    /// Top-level statement spans inside the body.
    pub statements: Vec<Span>,
    pub params: Vec<VarDecl>,
    /// Locals declared at any nesting depth in the body, in source order.
    pub locals: Vec<VarDecl>,
}

#[derive(Debug, Clone)]
pub struct ModifierDecl {
    pub name: String,
    pub name_span: Span,
    pub span: Span,
    pub body_span: Span,
    /// Condition inside the first `require`/`assert` of the body, if any.
    pub guard_condition_span: Option<Span>,
}

#[derive(Debug, Clone)]
pub struct ContractDecl {
    pub name: String,
    pub name_span: Span,
    pub kind: ContractKind,
    pub span: Span,
    pub body_span: Span,
    pub functions: Vec<FunctionDecl>,
    pub modifiers: Vec<ModifierDecl>,
    pub state_vars: Vec<StateVar>,
}

impl ContractDecl {
    /// Constructor declaration, keyword or legacy style, if present.
    pub fn constructor(&self) -> Option<&FunctionDecl> {
        self.functions.iter().find(|f| f.is_constructor)
    }
}

/// Tokenized source plus the structural index the mutation operators need.
#[derive(Debug, Clone)]
pub struct SourceModel {
    pub path: PathBuf,
    pub text: Vec<u8>,
    pub tokens: Vec<Token>,
    pub contracts: Vec<ContractDecl>,
    pub pragma_version: Option<String>,
    /// `pragma`/`import` directive spans; no mutation sites inside these.
    pub directive_spans: Vec<Span>,
}

impl SourceModel {
    /// Lex and structure-parse a source file already read into memory.
    pub fn parse(path: impl AsRef<Path>, text: Vec<u8>) -> Result<Self, StructureError> {
        let tokens = lex(&text)?;
        parse_structure(path.as_ref().to_path_buf(), text, tokens)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, crate::Error> {
        let path = path.as_ref();
        let text = std::fs::read(path).map_err(|e| crate::Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Ok(Self::parse(path, text)?)
    }

    pub fn slice(&self, span: Span) -> &[u8] {
        &self.text[span.start..span.end]
    }

    pub fn slice_string(&self, span: Span) -> String {
        String::from_utf8_lossy(self.slice(span)).into_owned()
    }

    pub fn token_text(&self, idx: usize) -> &[u8] {
        self.tokens[idx].text(&self.text)
    }

    /// Next non-trivia token index strictly after `idx`.
    pub fn next_nt(&self, idx: usize) -> Option<usize> {
        self.tokens[idx + 1..]
            .iter()
            .position(|t| !t.is_trivia())
            .map(|off| idx + 1 + off)
    }

    /// Previous non-trivia token index strictly before `idx`.
    pub fn prev_nt(&self, idx: usize) -> Option<usize> {
        self.tokens[..idx].iter().rposition(|t| !t.is_trivia())
    }

    /// True when the span intersects a pragma or import directive.
    pub fn in_directive(&self, span: Span) -> bool {
        self.directive_spans.iter().any(|d| span.overlaps(*d))
    }

    pub fn contract_at(&self, pos: usize) -> Option<&ContractDecl> {
        self.contracts
            .iter()
            .find(|c| pos >= c.span.start && pos < c.span.end)
    }

    pub fn function_at(&self, pos: usize) -> Option<(&ContractDecl, &FunctionDecl)> {
        let c = self.contract_at(pos)?;
        c.functions
            .iter()
            .find(|f| pos >= f.span.start && pos < f.span.end)
            .map(|f| (c, f))
    }
}

struct Scanner<'a> {
    src: &'a [u8],
    tokens: &'a [Token],
}

impl<'a> Scanner<'a> {
    fn text(&self, i: usize) -> &'a [u8] {
        self.tokens[i].text(self.src)
    }

    fn is(&self, i: usize, s: &str) -> bool {
        self.text(i) == s.as_bytes()
    }

    fn next_nt(&self, i: usize) -> Option<usize> {
        self.tokens[i + 1..]
            .iter()
            .position(|t| !t.is_trivia())
            .map(|off| i + 1 + off)
    }

    /// Index of the token matching the opening bracket at `open`.
    fn matching(&self, open: usize) -> Result<usize, StructureError> {
        let open_text = self.text(open);
        let close: &[u8] = match open_text {
            b"{" => b"}",
            b"(" => b")",
            b"[" => b"]",
            _ => unreachable!("matching() called on non-bracket"),
        };
        let mut depth = 0usize;
        for i in open..self.tokens.len() {
            let t = self.text(i);
            if t == open_text {
                depth += 1;
            } else if t == close {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
        }
        Err(StructureError::UnbalancedBrace {
            offset: self.tokens[open].span.start,
        })
    }

    /// First token index at or after `i` whose text is `s`, not descending
    /// into brackets opened after `i`.
    fn find_at_level(&self, mut i: usize, s: &str) -> Option<usize> {
        while i < self.tokens.len() {
            let t = self.text(i);
            if t == s.as_bytes() {
                return Some(i);
            }
            if t == b"{" || t == b"(" || t == b"[" {
                i = self.matching(i).ok()? + 1;
                continue;
            }
            if t == b"}" || t == b")" || t == b"]" {
                return None;
            }
            i += 1;
        }
        None
    }
}

/// Build the structural index from a token stream.
pub fn parse_structure(
    path: PathBuf,
    text: Vec<u8>,
    tokens: Vec<Token>,
) -> Result<SourceModel, StructureError> {
    check_balance(&text, &tokens)?;
    let sc = Scanner {
        src: &text,
        tokens: &tokens,
    };

    let mut contracts = Vec::new();
    let mut pragma_version = None;
    let mut directive_spans = Vec::new();

    let mut i = 0;
    while i < tokens.len() {
        if tokens[i].is_trivia() {
            i += 1;
            continue;
        }
        let t = sc.text(i);
        if t == b"pragma" || t == b"import" {
            let start = tokens[i].span.start;
            let semi = sc.find_at_level(i, ";");
            let end_idx = semi.unwrap_or(tokens.len() - 1);
            directive_spans.push(Span::new(start, tokens[end_idx].span.end));
            if t == b"pragma" {
                if let Some(kind_idx) = sc.next_nt(i) {
                    if sc.is(kind_idx, "solidity") {
                        let vspan = Span::new(
                            tokens[kind_idx].span.end,
                            tokens[end_idx].span.start,
                        );
                        let v = String::from_utf8_lossy(&text[vspan.start..vspan.end])
                            .trim()
                            .to_string();
                        if !v.is_empty() {
                            pragma_version = Some(v);
                        }
                    }
                }
            }
            i = end_idx + 1;
            continue;
        }
        if t == b"contract" || t == b"interface" || t == b"library" {
            let kind = match t {
                b"contract" => ContractKind::Contract,
                b"interface" => ContractKind::Interface,
                _ => ContractKind::Library,
            };
            let (decl, next) = parse_contract(&sc, i, kind)?;
            contracts.push(decl);
            i = next;
            continue;
        }
        // skip bracket groups so nothing inside is mistaken for a declaration
        if t == b"{" || t == b"(" || t == b"[" {
            i = sc.matching(i)? + 1;
            continue;
        }
        i += 1;
    }

    Ok(SourceModel {
        path,
        text,
        tokens,
        contracts,
        pragma_version,
        directive_spans,
    })
}

fn check_balance(src: &[u8], tokens: &[Token]) -> Result<(), StructureError> {
    let mut stack = Vec::new();
    for t in tokens {
        if t.kind != TokenKind::Punctuation {
            continue;
        }
        match t.text(src) {
            b"{" => stack.push(t.span.start),
            b"}" if stack.pop().is_none() => {
                return Err(StructureError::UnbalancedBrace {
                    offset: t.span.start,
                });
            }
            _ => {}
        }
    }
    if let Some(offset) = stack.pop() {
        return Err(StructureError::UnbalancedBrace { offset });
    }
    Ok(())
}

fn parse_contract(
    sc: &Scanner,
    kw: usize,
    kind: ContractKind,
) -> Result<(ContractDecl, usize), StructureError> {
    let tokens = sc.tokens;
    let name_idx = sc.next_nt(kw).filter(|&i| {
        matches!(
            tokens[i].kind,
            TokenKind::Identifier | TokenKind::Keyword
        )
    });
    let (name, name_span) = match name_idx {
        Some(i) => (
            String::from_utf8_lossy(sc.text(i)).into_owned(),
            tokens[i].span,
        ),
        None => (String::new(), tokens[kw].span),
    };

    // skip the inheritance clause up to the body
    let mut j = kw;
    let open = loop {
        match sc.next_nt(j) {
            Some(n) if sc.is(n, "{") => break n,
            Some(n) if sc.is(n, "(") => j = sc.matching(n)?,
            Some(n) => j = n,
            None => {
                return Err(StructureError::UnbalancedBrace {
                    offset: tokens[kw].span.start,
                })
            }
        }
    };
    let close = sc.matching(open)?;
    let body_span = Span::new(tokens[open].span.start, tokens[close].span.end);
    let span = Span::new(tokens[kw].span.start, tokens[close].span.end);

    let mut functions = Vec::new();
    let mut modifiers = Vec::new();
    let mut state_vars = Vec::new();

    let mut i = open + 1;
    while i < close {
        if tokens[i].is_trivia() {
            i += 1;
            continue;
        }
        let t = sc.text(i);
        if t == b"function" || t == b"constructor" || t == b"receive" || t == b"fallback" {
            // `receive`/`fallback` only start a declaration when followed by `(`
            let is_decl = t == b"function"
                || t == b"constructor"
                || sc.next_nt(i).map(|n| sc.is(n, "(")).unwrap_or(false);
            if is_decl {
                let (f, next) = parse_function(sc, i, &name)?;
                functions.push(f);
                i = next;
                continue;
            }
        }
        if t == b"modifier" {
            let (m, next) = parse_modifier(sc, i)?;
            modifiers.push(m);
            i = next;
            continue;
        }
        if t == b"struct" || t == b"enum" {
            let open = match sc.find_at_level(i, "{") {
                Some(o) => o,
                None => break,
            };
            i = sc.matching(open)? + 1;
            continue;
        }
        if t == b"event" || t == b"using" || t == b"error" {
            i = match sc.find_at_level(i, ";") {
                Some(s) => s + 1,
                None => break,
            };
            continue;
        }
        // state variable (or something shaped like one): runs to `;`
        let semi = match sc.find_at_level(i, ";") {
            Some(s) => s,
            None => break,
        };
        if let Some(v) = parse_state_var(sc, i, semi) {
            state_vars.push(v);
        }
        i = semi + 1;
    }

    let decl = ContractDecl {
        name,
        name_span,
        kind,
        span,
        body_span,
        functions,
        modifiers,
        state_vars,
    };
    Ok((decl, close + 1))
}

const MUTABILITY_KEYWORDS: &[&str] = &[
    "public", "private", "internal", "external", "pure", "view", "payable", "constant",
    "virtual", "override",
];

fn parse_function(
    sc: &Scanner,
    kw: usize,
    contract_name: &str,
) -> Result<(FunctionDecl, usize), StructureError> {
    let tokens = sc.tokens;
    let kw_text = sc.text(kw);
    let mut kind = match kw_text {
        b"constructor" => FunctionKind::Constructor,
        b"receive" => FunctionKind::Receive,
        b"fallback" => FunctionKind::Fallback,
        _ => FunctionKind::Regular,
    };

    let mut name = String::new();
    let mut name_span = None;
    let mut after = kw;
    if kw_text == b"function" {
        if let Some(n) = sc.next_nt(kw) {
            if matches!(tokens[n].kind, TokenKind::Identifier | TokenKind::Keyword)
                && !sc.is(n, "(")
            {
                name = String::from_utf8_lossy(sc.text(n)).into_owned();
                name_span = Some(tokens[n].span);
                after = n;
            }
        }
        if name.is_empty() {
            kind = FunctionKind::Fallback;
        }
    }

    let open_paren = sc
        .next_nt(after)
        .filter(|&n| sc.is(n, "("))
        .ok_or(StructureError::UnbalancedBrace {
            offset: tokens[kw].span.start,
        })?;
    let close_paren = sc.matching(open_paren)?;
    let params_span = Span::new(tokens[open_paren].span.end, tokens[close_paren].span.start);
    let params = parse_var_list(sc, open_paren + 1, close_paren);

    // header: everything between the parameter list and `{` or `;`
    let mut visibility = Visibility::Unspecified;
    let mut visibility_span = None;
    let mut modifiers_invoked = Vec::new();
    let mut i = close_paren;
    let (body_open, end_idx) = loop {
        let n = match sc.next_nt(i) {
            Some(n) => n,
            None => break (None, i),
        };
        let t = sc.text(n);
        if t == b"{" {
            break (Some(n), sc.matching(n)?);
        }
        if t == b";" {
            break (None, n);
        }
        match t {
            b"public" => {
                visibility = Visibility::Public;
                visibility_span = Some(tokens[n].span);
            }
            b"external" => {
                visibility = Visibility::External;
                visibility_span = Some(tokens[n].span);
            }
            b"internal" => {
                visibility = Visibility::Internal;
                visibility_span = Some(tokens[n].span);
            }
            b"private" => {
                visibility = Visibility::Private;
                visibility_span = Some(tokens[n].span);
            }
            b"returns" => {
                if let Some(p) = sc.next_nt(n) {
                    if sc.is(p, "(") {
                        i = sc.matching(p)?;
                        continue;
                    }
                }
            }
            b"(" => {
                i = sc.matching(n)?;
                continue;
            }
            _ => {
                if tokens[n].kind == TokenKind::Identifier
                    && !MUTABILITY_KEYWORDS.iter().any(|k| k.as_bytes() == t)
                {
                    modifiers_invoked.push(String::from_utf8_lossy(t).into_owned());
                }
            }
        }
        i = n;
    };

    let body_span = body_open.map(|o| Span::new(tokens[o].span.start, tokens[end_idx].span.end));
    let statements = match body_span {
        Some(b) => statements_of(sc.src, tokens, b),
        None => Vec::new(),
    };
    let locals = match body_span {
        Some(b) => scan_locals(sc, b),
        None => Vec::new(),
    };

    let is_constructor =
        kind == FunctionKind::Constructor || (!name.is_empty() && name == contract_name);

    let decl = FunctionDecl {
        name,
        name_span,
        kind,
        is_constructor,
        visibility,
        visibility_span,
        modifiers_invoked,
        span: Span::new(tokens[kw].span.start, tokens[end_idx].span.end),
        params_span,
        body_span,
        statements,
        params,
        locals,
    };
    Ok((decl, end_idx + 1))
}

fn parse_modifier(sc: &Scanner, kw: usize) -> Result<(ModifierDecl, usize), StructureError> {
    let tokens = sc.tokens;
    let name_idx = sc
        .next_nt(kw)
        .filter(|&n| tokens[n].kind == TokenKind::Identifier)
        .ok_or(StructureError::UnbalancedBrace {
            offset: tokens[kw].span.start,
        })?;

    let mut i = name_idx;
    let open = loop {
        let n = match sc.next_nt(i) {
            Some(n) => n,
            None => {
                return Err(StructureError::UnbalancedBrace {
                    offset: tokens[kw].span.start,
                })
            }
        };
        if sc.is(n, "{") {
            break n;
        }
        if sc.is(n, ";") {
            // body-less virtual modifier: index it with an empty body
            let decl = ModifierDecl {
                name: String::from_utf8_lossy(sc.text(name_idx)).into_owned(),
                name_span: tokens[name_idx].span,
                span: Span::new(tokens[kw].span.start, tokens[n].span.end),
                body_span: Span::new(tokens[n].span.start, tokens[n].span.start),
                guard_condition_span: None,
            };
            return Ok((decl, n + 1));
        }
        if sc.is(n, "(") {
            i = sc.matching(n)?;
            continue;
        }
        i = n;
    };
    let close = sc.matching(open)?;
    let body_span = Span::new(tokens[open].span.start, tokens[close].span.end);

    // first require/assert inside the body, if any
    let mut guard_condition_span = None;
    let mut j = open + 1;
    while j < close {
        let t = sc.text(j);
        if (t == b"require" || t == b"assert")
            && sc.next_nt(j).map(|n| sc.is(n, "(")).unwrap_or(false)
        {
            let p = sc.next_nt(j).unwrap();
            let pc = sc.matching(p)?;
            guard_condition_span = Some(Span::new(tokens[p].span.end, tokens[pc].span.start));
            break;
        }
        j += 1;
    }

    let decl = ModifierDecl {
        name: String::from_utf8_lossy(sc.text(name_idx)).into_owned(),
        name_span: tokens[name_idx].span,
        span: Span::new(tokens[kw].span.start, tokens[close].span.end),
        body_span,
        guard_condition_span,
    };
    Ok((decl, close + 1))
}

fn parse_state_var(sc: &Scanner, start: usize, semi: usize) -> Option<StateVar> {
    let tokens = sc.tokens;
    let first = &tokens[start];
    if !matches!(first.kind, TokenKind::Keyword | TokenKind::Identifier) {
        return None;
    }

    // type text: first token plus an immediately following bracket group
    // (mapping value types, array types)
    let mut type_end = start;
    if let Some(n) = sc.next_nt(start) {
        if sc.is(n, "(") || sc.is(n, "[") {
            type_end = sc.matching(n).ok()?;
        }
    }
    let type_text = String::from_utf8_lossy(
        &sc.src[first.span.start..tokens[type_end].span.end],
    )
    .split_whitespace()
    .collect::<Vec<_>>()
    .join(" ");

    let mut is_constant = false;
    let mut name_idx = None;
    let mut initializer_span = None;
    let mut i = type_end;
    while let Some(n) = sc.next_nt(i) {
        if n >= semi {
            break;
        }
        let t = sc.text(n);
        if t == b"constant" || t == b"immutable" {
            is_constant = true;
        } else if t == b"=" {
            initializer_span = Some(Span::new(tokens[n].span.end, tokens[semi].span.start));
            break;
        } else if tokens[n].kind == TokenKind::Identifier {
            name_idx = Some(n);
        }
        i = n;
    }

    let name_idx = name_idx?;
    Some(StateVar {
        name: String::from_utf8_lossy(sc.text(name_idx)).into_owned(),
        name_span: tokens[name_idx].span,
        type_text,
        span: Span::new(first.span.start, tokens[semi].span.end),
        is_constant,
        initializer_span,
    })
}

/// Parse `type name, type name, ...` between two bracket token indices.
fn parse_var_list(sc: &Scanner, from: usize, to: usize) -> Vec<VarDecl> {
    let tokens = sc.tokens;
    let mut out = Vec::new();
    let mut seg_start = from;
    let mut i = from;
    while i <= to {
        let at_end = i == to;
        if at_end || (sc.is(i, ",") && !tokens[i].is_trivia()) {
            // segment [seg_start, i)
            let mut first_type: Option<String> = None;
            let mut last_ident: Option<usize> = None;
            let mut j = seg_start;
            while j < i {
                let tk = &tokens[j];
                if !tk.is_trivia() {
                    if first_type.is_none()
                        && matches!(tk.kind, TokenKind::Keyword | TokenKind::Identifier)
                    {
                        first_type = Some(String::from_utf8_lossy(sc.text(j)).into_owned());
                    } else if tk.kind == TokenKind::Identifier {
                        last_ident = Some(j);
                    }
                }
                j += 1;
            }
            if let (Some(ty), Some(nm)) = (first_type, last_ident) {
                out.push(VarDecl {
                    name: String::from_utf8_lossy(sc.text(nm)).into_owned(),
                    name_span: tokens[nm].span,
                    type_text: ty,
                });
            }
            seg_start = i + 1;
        } else if sc.is(i, "(") {
            i = match sc.matching(i) {
                Ok(m) => m,
                Err(_) => return out,
            };
        }
        i += 1;
    }
    out
}

const LOCAL_TYPE_STARTS: &[&str] = &["bool", "address", "string"];

/// Lexical scan for `type name ...;` declarations inside a body.
fn scan_locals(sc: &Scanner, body: Span) -> Vec<VarDecl> {
    let tokens = sc.tokens;
    let mut out = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if !t.span.within(body) || t.is_trivia() {
            continue;
        }
        let text = sc.text(i);
        let is_type = t.kind == TokenKind::Keyword
            && (text.starts_with(b"uint")
                || text.starts_with(b"int")
                || text.starts_with(b"bytes")
                || LOCAL_TYPE_STARTS.iter().any(|k| k.as_bytes() == text));
        if !is_type {
            continue;
        }
        // declarations start a statement: previous token is `;`, `{`, `}` or `(`
        let starts_stmt = match sc_prev_nt(sc, i) {
            Some(p) => matches!(sc.text(p), b";" | b"{" | b"}" | b"("),
            None => true,
        };
        if !starts_stmt {
            continue;
        }
        // name: next identifier, skipping storage-location keywords and `[]`
        let mut j = i;
        while let Some(n) = sc.next_nt(j) {
            let nt = sc.text(n);
            if nt == b"[" {
                j = match sc.matching(n) {
                    Ok(m) => m,
                    Err(_) => break,
                };
                continue;
            }
            if nt == b"memory" || nt == b"storage" || nt == b"calldata" || nt == b"payable" {
                j = n;
                continue;
            }
            if tokens[n].kind == TokenKind::Identifier {
                out.push(VarDecl {
                    name: String::from_utf8_lossy(nt).into_owned(),
                    name_span: tokens[n].span,
                    type_text: String::from_utf8_lossy(text).into_owned(),
                });
            }
            break;
        }
    }
    out
}

fn sc_prev_nt(sc: &Scanner, i: usize) -> Option<usize> {
    sc.tokens[..i].iter().rposition(|t| !t.is_trivia())
}

/// Split a balanced `{ ... }` block into its top-level statement spans.
///
/// Statements end at a `;` at nesting depth zero or at the `}` of a
/// depth-zero block (an `if`/`for`/`while`/bare block counts as one
/// statement, including any `else`/`catch` continuations).
pub fn statements_of(src: &[u8], tokens: &[Token], body: Span) -> Vec<Span> {
    let mut out = Vec::new();
    let inner: Vec<usize> = (0..tokens.len())
        .filter(|&i| {
            let t = &tokens[i];
            t.span.start > body.start && t.span.end <= body.end.saturating_sub(1)
        })
        .collect();

    let mut depth = 0i32;
    let mut stmt_start: Option<usize> = None;
    let mut k = 0;
    while k < inner.len() {
        let i = inner[k];
        let t = &tokens[i];
        if t.is_trivia() {
            k += 1;
            continue;
        }
        if stmt_start.is_none() {
            stmt_start = Some(i);
        }
        let text = t.text(src);
        match text {
            b"{" | b"(" | b"[" => depth += 1,
            b")" | b"]" => depth -= 1,
            b"}" => {
                depth -= 1;
                if depth == 0 {
                    // `} else`/`} catch` continue the statement; `} while`
                    // continues only for do-while
                    let is_do = tokens[stmt_start.unwrap()].text(src) == b"do";
                    let next = tokens[i + 1..]
                        .iter()
                        .enumerate()
                        .find(|(_, t)| !t.is_trivia())
                        .map(|(off, _)| i + 1 + off);
                    let continues = next
                        .filter(|&n| tokens[n].span.end <= body.end.saturating_sub(1))
                        .map(|n| {
                            let nt = tokens[n].text(src);
                            nt == b"else" || nt == b"catch" || (is_do && nt == b"while")
                        })
                        .unwrap_or(false);
                    if !continues {
                        out.push(Span::new(
                            tokens[stmt_start.unwrap()].span.start,
                            t.span.end,
                        ));
                        stmt_start = None;
                    }
                }
            }
            b";" if depth == 0 => {
                out.push(Span::new(
                    tokens[stmt_start.unwrap()].span.start,
                    t.span.end,
                ));
                stmt_start = None;
            }
            _ => {}
        }
        k += 1;
    }
    if let Some(s) = stmt_start {
        // trailing tokens without a terminator still form a statement
        let last = inner
            .iter()
            .rev()
            .find(|&&i| !tokens[i].is_trivia())
            .copied();
        if let Some(l) = last {
            out.push(Span::new(tokens[s].span.start, tokens[l].span.end));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(src: &str) -> SourceModel {
        SourceModel::parse("test.sol", src.as_bytes().to_vec()).unwrap()
    }

    fn stmt_texts(src: &str, body: Span) -> Vec<String> {
        let tokens = lex(src.as_bytes()).unwrap();
        statements_of(src.as_bytes(), &tokens, body)
            .iter()
            .map(|s| String::from_utf8_lossy(&src.as_bytes()[s.start..s.end]).into_owned())
            .collect()
    }

    fn body_of(src: &str) -> Span {
        let open = src.find('{').unwrap();
        let close = src.rfind('}').unwrap();
        Span::new(open, close + 1)
    }

    #[test]
    fn empty_file_has_no_contracts() {
        let m = model("");
        assert!(m.contracts.is_empty());
        assert!(m.pragma_version.is_none());
    }

    #[test]
    fn pragma_version_is_indexed_and_excluded() {
        let m = model("pragma solidity ^0.8.0;\ncontract C {}");
        assert_eq!(m.pragma_version.as_deref(), Some("^0.8.0"));
        assert_eq!(m.directive_spans.len(), 1);
        assert!(m.in_directive(Span::new(0, 5)));
        assert_eq!(m.contracts.len(), 1);
        assert_eq!(m.contracts[0].name, "C");
    }

    #[test]
    fn unbalanced_brace_is_an_error() {
        let err = SourceModel::parse("t.sol", b"contract C { function f() public {} ".to_vec())
            .unwrap_err();
        match err {
            StructureError::UnbalancedBrace { offset } => assert_eq!(offset, 11),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn legacy_and_typo_constructors() {
        let m = model(
            "contract Example {\n\
             \tfunction Example(address add) public { owner = add; }\n\
             \tfunction Exampl(address add) public { owner = add; }\n\
             }",
        );
        assert_eq!(m.contracts.len(), 1);
        let c = &m.contracts[0];
        assert_eq!(c.name, "Example");
        assert_eq!(c.functions.len(), 2);
        assert_eq!(c.functions[0].name, "Example");
        assert!(c.functions[0].is_constructor);
        assert_eq!(c.functions[1].name, "Exampl");
        assert!(!c.functions[1].is_constructor);
    }

    #[test]
    fn keyword_constructor_and_visibility() {
        let m = model(
            "contract Victim {\n\
             \taddress owner;\n\
             \tconstructor() public { owner = msg.sender; }\n\
             \tfunction transfer(address to, uint64 amount) public { to.transfer(amount); }\n\
             }",
        );
        let c = &m.contracts[0];
        assert_eq!(c.functions.len(), 2);
        assert!(c.functions[0].is_constructor);
        assert_eq!(c.functions[0].kind, FunctionKind::Constructor);
        let f = &c.functions[1];
        assert_eq!(f.name, "transfer");
        assert_eq!(f.visibility, Visibility::Public);
        assert!(!f.is_constructor);
        assert_eq!(f.params.len(), 2);
        assert_eq!(f.params[0].name, "to");
        assert_eq!(f.params[1].type_text, "uint64");
        assert_eq!(c.state_vars.len(), 1);
        assert_eq!(c.state_vars[0].name, "owner");
    }

    #[test]
    fn fallback_and_interface() {
        let m = model(
            "interface VictimLike { function transfer(address to) external; }\n\
             contract Attacker {\n\
             \tfunction() payable public { }\n\
             }",
        );
        assert_eq!(m.contracts.len(), 2);
        assert_eq!(m.contracts[0].kind, ContractKind::Interface);
        assert!(m.contracts[0].functions[0].body_span.is_none());
        let fb = &m.contracts[1].functions[0];
        assert_eq!(fb.kind, FunctionKind::Fallback);
        assert_eq!(fb.name, "");
        assert!(!fb.is_constructor);
    }

    #[test]
    fn modifier_with_guard_condition() {
        let m = model(
            "contract Managed {\n\
             \taddress owner;\n\
             \tmodifier onlyOwner { require(msg.sender == owner); _; }\n\
             \tfunction act() public onlyOwner { owner = msg.sender; }\n\
             }",
        );
        let c = &m.contracts[0];
        assert_eq!(c.modifiers.len(), 1);
        let md = &c.modifiers[0];
        assert_eq!(md.name, "onlyOwner");
        let cond = md.guard_condition_span.unwrap();
        assert!(cond.within(md.body_span));
        assert_eq!(m.slice_string(cond), "msg.sender == owner");
        assert_eq!(c.functions[0].modifiers_invoked, vec!["onlyOwner"]);
    }

    #[test]
    fn state_vars_with_constants_and_initializers() {
        let m = model(
            "contract Treasury {\n\
             \taddress constant BENEFICIARY = 0xe0f5206bbd039e7b0592d8918820024e2a7437b9;\n\
             \tuint256 constant FEE = 100;\n\
             \tmapping(address => uint256) public balanceOf;\n\
             }",
        );
        let vars = &m.contracts[0].state_vars;
        assert_eq!(vars.len(), 3);
        assert!(vars[0].is_constant);
        assert!(vars[1].is_constant);
        assert!(vars[1].is_integer());
        assert_eq!(vars[1].name, "FEE");
        assert!(vars[1].initializer_span.is_some());
        assert!(!vars[2].is_constant);
        assert!(vars[2].type_text.starts_with("mapping"));
        assert_eq!(vars[2].name, "balanceOf");
    }

    #[test]
    fn two_simple_statements() {
        let src = "{a=1; b=2;}";
        assert_eq!(stmt_texts(src, body_of(src)), vec!["a=1;", "b=2;"]);
    }

    #[test]
    fn nested_block_counts_as_one_statement() {
        // hand-traced: brace depth rises inside `if`, so the block is one
        // statement and `b=2;` is the second
        let src = "{ if (x) { a=1; } b=2; }";
        assert_eq!(
            stmt_texts(src, body_of(src)),
            vec!["if (x) { a=1; }", "b=2;"]
        );
    }

    #[test]
    fn else_continuation_stays_one_statement() {
        let src = "{ if (x) { a=1; } else { a=2; } b=3; }";
        assert_eq!(
            stmt_texts(src, body_of(src)),
            vec!["if (x) { a=1; } else { a=2; }", "b=3;"]
        );
    }

    #[test]
    fn while_after_a_block_is_its_own_statement() {
        // `} while` glues only in do-while
        let src = "{ if (x) { a=1; } while (y) { b=2; } }";
        assert_eq!(
            stmt_texts(src, body_of(src)),
            vec!["if (x) { a=1; }", "while (y) { b=2; }"]
        );
        let src = "{ do { a=1; } while (y); b=2; }";
        assert_eq!(
            stmt_texts(src, body_of(src)),
            vec!["do { a=1; } while (y);", "b=2;"]
        );
    }

    #[test]
    fn withdraw_body_has_three_statements() {
        let src = "{\n\
             \t\tuint256 amount = balances[msg.sender];\n\
             \t\trequire(msg.sender.call.value(amount)());\n\
             \t\tbalances[msg.sender] = 0;\n\
             \t}";
        let texts = stmt_texts(src, body_of(src));
        assert_eq!(texts.len(), 3);
        assert!(texts[0].starts_with("uint256 amount"));
        assert!(texts[1].starts_with("require"));
        assert!(texts[2].starts_with("balances"));
    }

    #[test]
    fn empty_body_has_no_statements() {
        let src = "{}";
        assert!(stmt_texts(src, body_of(src)).is_empty());
    }

    #[test]
    fn locals_are_scanned_lexically() {
        let m = model(
            "contract C { function f(uint256 seed) public {\n\
             \tuint256 amount = seed;\n\
             \tint64 drift = 0;\n\
             \tbool ok = true;\n\
             } }",
        );
        let f = &m.contracts[0].functions[0];
        let names: Vec<&str> = f.locals.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, vec!["amount", "drift", "ok"]);
        assert!(f.locals[0].is_integer());
        assert!(f.locals[1].is_signed_integer());
        assert!(!f.locals[2].is_integer());
        assert_eq!(f.params[0].name, "seed");
    }

    #[test]
    fn determinism_same_input_same_structure() {
        let src = "contract C { uint256 x; function f() public { x = 1; } }";
        let a = model(src);
        let b = model(src);
        assert_eq!(format!("{:?}", a.contracts), format!("{:?}", b.contracts));
    }
}

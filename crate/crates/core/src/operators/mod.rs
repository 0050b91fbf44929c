//! The mutation operator catalog: 12 classic operators plus 9 classes of
//! Solidity-specific operators, 57 in total.
//!
//! Every operator is a site matcher plus a deterministic rewriter. Matchers
//! work over the token stream and structural index; they never touch bytes
//! inside comments or string literals, and they skip `pragma`/`import`
//! directives. Rewriters return fixed-order replacement lists so mutant
//! identities are stable across runs.

mod access;
mod calls;
mod classic;
mod constants;
mod ctor;
mod destruct;
mod guards;
mod modifiers;
mod origin;
mod types;

use serde::{Deserialize, Serialize};

use crate::lexer::Span;
use crate::model::SourceModel;

/// Operator classes, one per table of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorClass {
    Classic,
    OverflowUnderflow,
    AccessControl,
    TxCall,
    Guard,
    TxOrigin,
    Selfdestruct,
    Constants,
    Modifier,
    Constructor,
}

impl OperatorClass {
    pub const ALL: [OperatorClass; 10] = [
        OperatorClass::Classic,
        OperatorClass::OverflowUnderflow,
        OperatorClass::AccessControl,
        OperatorClass::TxCall,
        OperatorClass::Guard,
        OperatorClass::TxOrigin,
        OperatorClass::Selfdestruct,
        OperatorClass::Constants,
        OperatorClass::Modifier,
        OperatorClass::Constructor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorClass::Classic => "classic",
            OperatorClass::OverflowUnderflow => "overflow_underflow",
            OperatorClass::AccessControl => "access_control",
            OperatorClass::TxCall => "tx_call",
            OperatorClass::Guard => "guard",
            OperatorClass::TxOrigin => "tx_origin",
            OperatorClass::Selfdestruct => "selfdestruct",
            OperatorClass::Constants => "constants",
            OperatorClass::Modifier => "modifier",
            OperatorClass::Constructor => "constructor",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.name() == name)
    }
}

impl std::fmt::Display for OperatorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

macro_rules! operator_registry {
    ($(($variant:ident, $class:ident, $desc:literal)),+ $(,)?) => {
        /// Operator identities, named exactly by their catalog acronyms.
        #[allow(clippy::upper_case_acronyms)]
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum OperatorId {
            $($variant,)+
        }

        impl OperatorId {
            pub const ALL: &'static [OperatorId] = &[$(OperatorId::$variant,)+];

            pub fn code(self) -> &'static str {
                match self {
                    $(OperatorId::$variant => stringify!($variant),)+
                }
            }

            pub fn class(self) -> OperatorClass {
                match self {
                    $(OperatorId::$variant => OperatorClass::$class,)+
                }
            }

            pub fn description(self) -> &'static str {
                match self {
                    $(OperatorId::$variant => $desc,)+
                }
            }
        }
    };
}

operator_registry! {
    // classic
    (ABS, Classic, "Absolute value insertion"),
    (AOR, Classic, "Arithmetic operator replacement"),
    (CRP, Classic, "Constants replacement"),
    (CRR, Classic, "Constants for reference replacement"),
    (LCR, Classic, "Logical connector replacement"),
    (ROR, Classic, "Relational operator replacement"),
    (RCR, Classic, "Reference for constant replacement"),
    (FDL, Classic, "Formula deletion"),
    (FRC, Classic, "Formula replacement with constant"),
    (RFR, Classic, "Reference replacement"),
    (UOI, Classic, "Unary operator insertion"),
    (SCL, Classic, "Swap code lines"),
    // overflow-underflow
    (USP, OverflowUnderflow, "Unsigned to signed replacement"),
    (PSU, OverflowUnderflow, "Signed to unsigned replacement"),
    (IST, OverflowUnderflow, "Increase size of a type"),
    (DST, OverflowUnderflow, "Decrease size of a type"),
    // access control
    (PuPrR, AccessControl, "Public to private replacement"),
    (PuIR, AccessControl, "Public to internal replacement"),
    (PuER, AccessControl, "Public to external replacement"),
    (PrPuR, AccessControl, "Private to public replacement"),
    (PrIR, AccessControl, "Private to internal replacement"),
    (PrER, AccessControl, "Private to external replacement"),
    (IPuR, AccessControl, "Internal to public replacement"),
    (IPrR, AccessControl, "Internal to private replacement"),
    (IER, AccessControl, "Internal to external replacement"),
    (EPuR, AccessControl, "External to public replacement"),
    (EPrR, AccessControl, "External to private replacement"),
    (EIR, AccessControl, "External to internal replacement"),
    // transaction call mechanism
    (TCR, TxCall, "Transfer to call replacement"),
    (TSR, TxCall, "Transfer to send replacement"),
    (SCR, TxCall, "Send to call replacement"),
    (STR, TxCall, "Send to transfer replacement"),
    (CSR, TxCall, "Call to send replacement"),
    (CTR, TxCall, "Call to transfer replacement"),
    // guard mechanism
    (ARevR, Guard, "Assert to revert replacement"),
    (AReqR, Guard, "Assert to require replacement"),
    (RevReqR, Guard, "Revert to require replacement"),
    (RevAR, Guard, "Revert to assert replacement"),
    (ReqAR, Guard, "Require to assert replacement"),
    (ReqRevR, Guard, "Require to revert replacement"),
    (AReq, Guard, "Add require"),
    (AA, Guard, "Add assert"),
    (ARev, Guard, "Add revert"),
    (DReq, Guard, "Delete require"),
    (DRev, Guard, "Delete revert"),
    (DA, Guard, "Delete assert"),
    // transaction origin
    (TMR, TxOrigin, "Tx.origin to msg.sender replacement"),
    (MTR, TxOrigin, "Msg.sender to tx.origin replacement"),
    // selfdestruct
    (RSF, Selfdestruct, "Remove selfdestruct from a function"),
    (SSL, Selfdestruct, "Swap selfdestruct's location to adjacent lines"),
    // constants
    (CAA, Constants, "Change address to another address"),
    (CDG, Constants, "Increase and decrease in gas amount"),
    (CCV, Constants, "Change in any constant value"),
    // modifiers
    (CMT, Modifier, "Change modifier to true"),
    (CMF, Modifier, "Change modifier to false"),
    // constructor
    (CCN, Constructor, "Change constructor name"),
    (CFC, Constructor, "Change a function's name to constructor"),
}

impl OperatorId {
    pub fn from_code(code: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|op| op.code() == code)
    }

    pub fn by_class(class: OperatorClass) -> Vec<OperatorId> {
        Self::ALL
            .iter()
            .copied()
            .filter(|op| op.class() == class)
            .collect()
    }
}

impl std::fmt::Display for OperatorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for OperatorId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for OperatorId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let code = String::deserialize(d)?;
        OperatorId::from_code(&code)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown operator code `{code}`")))
    }
}

/// One place in the source where an operator applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationSite {
    pub operator: OperatorId,
    /// One byte range, or two disjoint ranges for the swap operators.
    pub spans: Vec<Span>,
    pub contract: Option<String>,
    pub function: Option<String>,
}

impl MutationSite {
    fn new(operator: OperatorId, spans: Vec<Span>, model: &SourceModel) -> Self {
        let pos = spans[0].start;
        let contract = model.contract_at(pos).map(|c| c.name.clone());
        let function = model
            .function_at(pos)
            .map(|(_, f)| f.name.clone())
            .filter(|n| !n.is_empty());
        MutationSite {
            operator,
            spans,
            contract,
            function,
        }
    }

    pub fn start(&self) -> usize {
        self.spans[0].start
    }
}

/// One deterministic replacement for a site, per-span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rewrite {
    /// Replacement text per site span, in span order.
    pub replacements: Vec<String>,
    pub description: String,
}

impl Rewrite {
    fn single(replacement: impl Into<String>, description: impl Into<String>) -> Self {
        Rewrite {
            replacements: vec![replacement.into()],
            description: description.into(),
        }
    }
}

/// Catalog-wide matching options.
#[derive(Debug, Clone, Copy, Default)]
pub struct CatalogOptions {
    /// Also apply AOR to compound assignment operators (`+=` and friends).
    pub aor_include_compound: bool,
}

/// A matched site together with its fixed-order rewrites.
#[derive(Debug, Clone)]
pub struct SiteRewrites {
    pub site: MutationSite,
    pub rewrites: Vec<Rewrite>,
}

/// Match `op` over the model and pair every site with its rewrites.
/// Sites come back in ascending span order; sites without any non-identity
/// rewrite are dropped.
pub fn expand(op: OperatorId, model: &SourceModel, opts: &CatalogOptions) -> Vec<SiteRewrites> {
    let mut out = match op.class() {
        OperatorClass::Classic => classic::expand(op, model, opts),
        OperatorClass::OverflowUnderflow => types::expand(op, model),
        OperatorClass::AccessControl => access::expand(op, model),
        OperatorClass::TxCall => calls::expand(op, model),
        OperatorClass::Guard => guards::expand(op, model),
        OperatorClass::TxOrigin => origin::expand(op, model),
        OperatorClass::Selfdestruct => destruct::expand(op, model),
        OperatorClass::Constants => constants::expand(op, model),
        OperatorClass::Modifier => modifiers::expand(op, model),
        OperatorClass::Constructor => ctor::expand(op, model),
    };
    out.retain(|sr| {
        !sr.rewrites.is_empty()
            && sr.rewrites.iter().all(|r| {
                r.replacements
                    .iter()
                    .zip(&sr.site.spans)
                    .any(|(repl, span)| repl.as_bytes() != model.slice(*span))
            })
    });
    out.sort_by_key(|sr| sr.site.spans.clone());
    out
}

/// Every site where `op` applies, in ascending span order.
pub fn match_sites(op: OperatorId, model: &SourceModel) -> Vec<MutationSite> {
    expand(op, model, &CatalogOptions::default())
        .into_iter()
        .map(|sr| sr.site)
        .collect()
}

/// The deterministic rewrite list for a site produced by [`match_sites`].
pub fn rewrite(op: OperatorId, site: &MutationSite, model: &SourceModel) -> Vec<Rewrite> {
    expand(op, model, &CatalogOptions::default())
        .into_iter()
        .find(|sr| &sr.site == site)
        .map(|sr| sr.rewrites)
        .unwrap_or_default()
}

// ---- shared matcher helpers ----

pub(crate) use helpers::*;

mod helpers {
    use super::*;
    use crate::lexer::{Token, TokenKind};

    /// Non-trivia token indices outside pragma/import directives.
    pub(crate) fn code_tokens(model: &SourceModel) -> Vec<usize> {
        (0..model.tokens.len())
            .filter(|&i| {
                let t = &model.tokens[i];
                !t.is_trivia() && !model.in_directive(t.span)
            })
            .collect()
    }

    pub(crate) fn token(model: &SourceModel, i: usize) -> &Token {
        &model.tokens[i]
    }

    /// Index of the token matching the opening bracket at `open`.
    pub(crate) fn matching_bracket(model: &SourceModel, open: usize) -> Option<usize> {
        let open_text: &[u8] = model.token_text(open);
        let close: &[u8] = match open_text {
            b"{" => b"}",
            b"(" => b")",
            b"[" => b"]",
            _ => return None,
        };
        let open_text = open_text.to_vec();
        let mut depth = 0usize;
        for i in open..model.tokens.len() {
            let t = model.token_text(i);
            if t == open_text.as_slice() {
                depth += 1;
            } else if t == close {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
        }
        None
    }

    /// True when the token at `i` begins a statement.
    pub(crate) fn starts_statement(model: &SourceModel, i: usize) -> bool {
        match model.prev_nt(i) {
            Some(p) => matches!(model.token_text(p), b";" | b"{" | b"}"),
            None => true,
        }
    }

    /// True when an operator token at `i` is used in binary position.
    pub(crate) fn is_binary_use(model: &SourceModel, i: usize) -> bool {
        match model.prev_nt(i) {
            Some(p) => {
                let t = &model.tokens[p];
                matches!(
                    t.kind,
                    TokenKind::Identifier
                        | TokenKind::NumberLiteral
                        | TokenKind::HexAddressLiteral
                        | TokenKind::StringLiteral
                ) || matches!(model.token_text(p), b")" | b"]")
                    || t.is(&model.text, "true")
                    || t.is(&model.text, "false")
            }
            None => false,
        }
    }

    /// Split the token range strictly between two bracket indices into
    /// top-level comma-separated argument spans.
    pub(crate) fn split_args(model: &SourceModel, open: usize, close: usize) -> Vec<Span> {
        let mut args = Vec::new();
        let mut depth = 0usize;
        let mut start: Option<usize> = None;
        let mut last_end = 0usize;
        for i in open + 1..close {
            let t = &model.tokens[i];
            if t.is_trivia() {
                continue;
            }
            let text = t.text(&model.text);
            match text {
                b"(" | b"[" | b"{" => depth += 1,
                b")" | b"]" | b"}" => depth -= 1,
                b"," if depth == 0 => {
                    if let Some(s) = start.take() {
                        args.push(Span::new(s, last_end));
                    }
                    continue;
                }
                _ => {}
            }
            if start.is_none() {
                start = Some(t.span.start);
            }
            last_end = t.span.end;
        }
        if let Some(s) = start {
            args.push(Span::new(s, last_end));
        }
        args
    }

    /// The `;` index terminating the statement that contains token `i`,
    /// scanning forward at bracket level zero.
    pub(crate) fn statement_end(model: &SourceModel, i: usize) -> Option<usize> {
        let mut depth = 0i32;
        for j in i..model.tokens.len() {
            let t = &model.tokens[j];
            if t.is_trivia() {
                continue;
            }
            match t.text(&model.text) {
                b"(" | b"[" | b"{" => depth += 1,
                b")" | b"]" | b"}" => {
                    depth -= 1;
                    if depth < 0 {
                        return None;
                    }
                }
                b";" if depth == 0 => return Some(j),
                _ => {}
            }
        }
        None
    }
}

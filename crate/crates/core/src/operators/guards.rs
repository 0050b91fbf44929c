//! Guard-mechanism operators: replace, delete, and insert `require`,
//! `assert`, and `revert` guards.
//!
//! The insertion operators draw their condition from the pool of guard
//! conditions found elsewhere in the same contract, mimicking a guard the
//! developer forgot to copy; an empty pool yields no sites.

use super::*;
use crate::lexer::TokenKind;
use crate::model::SourceModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GuardKind {
    Require,
    Assert,
    Revert,
}

/// A guard used as a whole statement: `require(C);`, `assert(C);`,
/// `revert(...);`.
struct GuardStmt {
    kind: GuardKind,
    /// The call expression, guard name through closing parenthesis.
    call_span: Span,
    /// The whole statement including the `;`.
    stmt_span: Span,
    /// First argument (the condition) for require/assert.
    condition: Option<String>,
}

fn guard_statements(model: &SourceModel) -> Vec<GuardStmt> {
    let mut out = Vec::new();
    for i in code_tokens(model) {
        if token(model, i).kind != TokenKind::Identifier {
            continue;
        }
        let kind = match model.token_text(i) {
            b"require" => GuardKind::Require,
            b"assert" => GuardKind::Assert,
            b"revert" => GuardKind::Revert,
            _ => continue,
        };
        if !starts_statement(model, i) {
            continue;
        }
        let open = match model.next_nt(i) {
            Some(n) if model.token_text(n) == b"(" => n,
            _ => continue, // custom errors (`revert Foo()`) and bare uses
        };
        let close = match matching_bracket(model, open) {
            Some(c) => c,
            None => continue,
        };
        let semi = match model.next_nt(close) {
            Some(s) if model.token_text(s) == b";" => s,
            _ => continue,
        };
        let condition = match kind {
            GuardKind::Revert => None,
            _ => split_args(model, open, close)
                .first()
                .map(|s| model.slice_string(*s)),
        };
        out.push(GuardStmt {
            kind,
            call_span: Span::new(
                token(model, i).span.start,
                model.tokens[close].span.end,
            ),
            stmt_span: Span::new(token(model, i).span.start, model.tokens[semi].span.end),
            condition,
        });
    }
    out
}

fn replacement_site(
    model: &SourceModel,
    op: OperatorId,
    g: &GuardStmt,
    text: String,
    desc: &str,
) -> SiteRewrites {
    SiteRewrites {
        site: MutationSite::new(op, vec![g.call_span], model),
        rewrites: vec![Rewrite::single(text, desc.to_string())],
    }
}

pub(super) fn expand(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    match op {
        OperatorId::ReqAR
        | OperatorId::ReqRevR
        | OperatorId::AReqR
        | OperatorId::ARevR
        | OperatorId::RevReqR
        | OperatorId::RevAR => replacements(op, model),
        OperatorId::DReq | OperatorId::DA | OperatorId::DRev => deletions(op, model),
        OperatorId::AReq | OperatorId::AA | OperatorId::ARev => insertions(op, model),
        _ => unreachable!("not a guard operator: {op}"),
    }
}

fn replacements(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for g in guard_statements(model) {
        let cond = g.condition.as_deref();
        let rewrite = match (op, g.kind) {
            (OperatorId::ReqAR, GuardKind::Require) => {
                (format!("assert({})", cond.unwrap_or("")), "require -> assert")
            }
            (OperatorId::ReqRevR, GuardKind::Require) => (
                format!("if (!({})) revert()", cond.unwrap_or("")),
                "require -> revert",
            ),
            (OperatorId::AReqR, GuardKind::Assert) => {
                (format!("require({})", cond.unwrap_or("")), "assert -> require")
            }
            (OperatorId::ARevR, GuardKind::Assert) => (
                format!("if (!({})) revert()", cond.unwrap_or("")),
                "assert -> revert",
            ),
            (OperatorId::RevReqR, GuardKind::Revert) => {
                ("require(false)".to_string(), "revert -> require")
            }
            (OperatorId::RevAR, GuardKind::Revert) => {
                ("assert(false)".to_string(), "revert -> assert")
            }
            _ => continue,
        };
        out.push(replacement_site(model, op, &g, rewrite.0, rewrite.1));
    }
    out
}

fn deletions(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    let want = match op {
        OperatorId::DReq => GuardKind::Require,
        OperatorId::DA => GuardKind::Assert,
        _ => GuardKind::Revert,
    };
    let mut out = Vec::new();
    for g in guard_statements(model) {
        if g.kind != want {
            continue;
        }
        out.push(SiteRewrites {
            site: MutationSite::new(op, vec![g.stmt_span], model),
            rewrites: vec![Rewrite::single("", "delete guard statement")],
        });
    }
    out
}

fn insertions(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    let guards = guard_statements(model);
    let mut out = Vec::new();
    for contract in &model.contracts {
        for f in &contract.functions {
            let body = match f.body_span {
                Some(b) => b,
                None => continue,
            };
            // conditions from guards in this contract but outside this function
            let mut pool: Vec<&str> = Vec::new();
            for g in &guards {
                if !g.stmt_span.within(contract.body_span) || g.stmt_span.within(body) {
                    continue;
                }
                if let Some(c) = g.condition.as_deref() {
                    if !pool.contains(&c) {
                        pool.push(c);
                    }
                }
            }
            if pool.is_empty() {
                continue;
            }
            let entry = Span::new(body.start + 1, body.start + 1);
            let rewrites = pool
                .iter()
                .map(|c| {
                    let text = match op {
                        OperatorId::AReq => format!(" require({c});"),
                        OperatorId::AA => format!(" assert({c});"),
                        _ => format!(" if (!({c})) revert();"),
                    };
                    Rewrite::single(text, format!("insert guard on `{c}`"))
                })
                .collect();
            out.push(SiteRewrites {
                site: MutationSite::new(op, vec![entry], model),
                rewrites,
            });
        }
    }
    out
}

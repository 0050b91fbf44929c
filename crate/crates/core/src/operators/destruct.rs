//! Selfdestruct operators: remove a `selfdestruct(...)` statement, or swap
//! it with an adjacent statement. The legacy `suicide(...)` spelling is
//! matched too.

use super::*;
use crate::lexer::TokenKind;
use crate::model::SourceModel;

/// Statement spans of `selfdestruct(...);` / `suicide(...);` calls.
fn destruct_statements(model: &SourceModel) -> Vec<Span> {
    let mut out = Vec::new();
    for i in code_tokens(model) {
        if token(model, i).kind != TokenKind::Identifier {
            continue;
        }
        let text = model.token_text(i);
        if text != b"selfdestruct" && text != b"suicide" {
            continue;
        }
        if !starts_statement(model, i) {
            continue;
        }
        let open = match model.next_nt(i) {
            Some(n) if model.token_text(n) == b"(" => n,
            _ => continue,
        };
        let close = match matching_bracket(model, open) {
            Some(c) => c,
            None => continue,
        };
        let semi = match model.next_nt(close) {
            Some(s) if model.token_text(s) == b";" => s,
            _ => continue,
        };
        out.push(Span::new(
            token(model, i).span.start,
            model.tokens[semi].span.end,
        ));
    }
    out
}

pub(super) fn expand(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    let stmts = destruct_statements(model);
    let mut out = Vec::new();
    match op {
        OperatorId::RSF => {
            for span in stmts {
                out.push(SiteRewrites {
                    site: MutationSite::new(OperatorId::RSF, vec![span], model),
                    rewrites: vec![Rewrite::single("", "remove selfdestruct")],
                });
            }
        }
        OperatorId::SSL => {
            // swap with the statement before and after, when the call is a
            // top-level statement of a function body
            for span in stmts {
                let f = match model.function_at(span.start) {
                    Some((_, f)) => f,
                    None => continue,
                };
                let idx = match f.statements.iter().position(|s| *s == span) {
                    Some(i) => i,
                    None => continue,
                };
                let mut pairs = Vec::new();
                if idx > 0 {
                    pairs.push((f.statements[idx - 1], span));
                }
                if idx + 1 < f.statements.len() {
                    pairs.push((span, f.statements[idx + 1]));
                }
                for (a, b) in pairs {
                    out.push(SiteRewrites {
                        site: MutationSite::new(OperatorId::SSL, vec![a, b], model),
                        rewrites: vec![Rewrite {
                            replacements: vec![model.slice_string(b), model.slice_string(a)],
                            description: "swap selfdestruct with neighbor".to_string(),
                        }],
                    });
                }
            }
        }
        _ => unreachable!("not a selfdestruct operator: {op}"),
    }
    out
}

//! Transaction-origin operators: `tx.origin` <-> `msg.sender`.

use super::*;
use crate::lexer::TokenKind;
use crate::model::SourceModel;

/// Spans of `first.second` member sequences.
fn member_sequences(model: &SourceModel, first: &[u8], second: &[u8]) -> Vec<Span> {
    let mut out = Vec::new();
    for i in code_tokens(model) {
        if token(model, i).kind != TokenKind::Identifier || model.token_text(i) != first {
            continue;
        }
        if let Some(p) = model.prev_nt(i) {
            if model.token_text(p) == b"." {
                continue;
            }
        }
        let dot = match model.next_nt(i) {
            Some(d) if model.token_text(d) == b"." => d,
            _ => continue,
        };
        let field = match model.next_nt(dot) {
            Some(f) if model.token_text(f) == second => f,
            _ => continue,
        };
        out.push(Span::new(
            token(model, i).span.start,
            model.tokens[field].span.end,
        ));
    }
    out
}

pub(super) fn expand(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    let (first, second, repl): (&[u8], &[u8], &str) = match op {
        OperatorId::TMR => (b"tx", b"origin", "msg.sender"),
        OperatorId::MTR => (b"msg", b"sender", "tx.origin"),
        _ => unreachable!("not a transaction-origin operator: {op}"),
    };
    member_sequences(model, first, second)
        .into_iter()
        .map(|span| SiteRewrites {
            site: MutationSite::new(op, vec![span], model),
            rewrites: vec![Rewrite::single(
                repl,
                format!("`{}` -> `{repl}`", model.slice_string(span)),
            )],
        })
        .collect()
}

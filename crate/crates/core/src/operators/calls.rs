//! Transaction-call operators: rewrites among `X.transfer(A)`, `X.send(A)`,
//! and `X.call.value(A)()`. The call matchers also accept the 0.7+ form
//! `X.call{value: A}("")`.

use super::*;
use crate::lexer::TokenKind;
use crate::model::SourceModel;

/// A matched value-transfer expression: the span from the method name token
/// through the end of the invocation, plus the amount expression text.
struct CallSite {
    span: Span,
    amount: String,
}

/// `.name(A)` with exactly one argument; returns the site for the `name`
/// token at `i`.
fn single_arg_method(model: &SourceModel, i: usize) -> Option<CallSite> {
    let prev = model.prev_nt(i)?;
    if model.token_text(prev) != b"." {
        return None;
    }
    let open = model.next_nt(i)?;
    if model.token_text(open) != b"(" {
        return None;
    }
    let close = matching_bracket(model, open)?;
    let args = split_args(model, open, close);
    if args.len() != 1 {
        return None;
    }
    Some(CallSite {
        span: Span::new(token(model, i).span.start, model.tokens[close].span.end),
        amount: model.slice_string(args[0]),
    })
}

/// `.call.value(A)(...)` or `.call{value: A}(...)`; `i` is the `call` token.
fn call_with_value(model: &SourceModel, i: usize) -> Option<CallSite> {
    let prev = model.prev_nt(i)?;
    if model.token_text(prev) != b"." {
        return None;
    }
    let next = model.next_nt(i)?;
    match model.token_text(next) {
        b"." => {
            // legacy: call.value(A)(...)
            let value = model.next_nt(next)?;
            if model.token_text(value) != b"value" {
                return None;
            }
            let open = model.next_nt(value)?;
            if model.token_text(open) != b"(" {
                return None;
            }
            let close = matching_bracket(model, open)?;
            let args = split_args(model, open, close);
            if args.len() != 1 {
                return None;
            }
            let invoke_open = model.next_nt(close)?;
            if model.token_text(invoke_open) != b"(" {
                return None;
            }
            let invoke_close = matching_bracket(model, invoke_open)?;
            Some(CallSite {
                span: Span::new(
                    token(model, i).span.start,
                    model.tokens[invoke_close].span.end,
                ),
                amount: model.slice_string(args[0]),
            })
        }
        b"{" => {
            // 0.7+: call{value: A, ...}(...)
            let open = next;
            let close = matching_bracket(model, open)?;
            let mut amount = None;
            let mut j = open;
            while let Some(n) = model.next_nt(j) {
                if n >= close {
                    break;
                }
                if model.token_text(n) == b"value" {
                    if let Some(colon) = model.next_nt(n) {
                        if model.token_text(colon) == b":" {
                            let start = model.next_nt(colon)?;
                            let mut end = start;
                            let mut k = start;
                            let mut depth = 0;
                            while k < close {
                                let t = model.token_text(k);
                                if t == b"(" || t == b"[" || t == b"{" {
                                    depth += 1;
                                } else if t == b")" || t == b"]" || t == b"}" {
                                    depth -= 1;
                                } else if t == b"," && depth == 0 {
                                    break;
                                }
                                if !model.tokens[k].is_trivia() {
                                    end = k;
                                }
                                k += 1;
                            }
                            amount = Some(Span::new(
                                model.tokens[start].span.start,
                                model.tokens[end].span.end,
                            ));
                            break;
                        }
                    }
                }
                j = n;
            }
            let amount = amount?;
            let invoke_open = model.next_nt(close)?;
            if model.token_text(invoke_open) != b"(" {
                return None;
            }
            let invoke_close = matching_bracket(model, invoke_open)?;
            Some(CallSite {
                span: Span::new(
                    token(model, i).span.start,
                    model.tokens[invoke_close].span.end,
                ),
                amount: model.slice_string(amount),
            })
        }
        _ => None,
    }
}

pub(super) fn expand(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    let (method, repl): (&[u8], fn(&str) -> String) = match op {
        OperatorId::TCR => (b"transfer", |a| format!("call.value({a})()")),
        OperatorId::TSR => (b"transfer", |a| format!("send({a})")),
        OperatorId::SCR => (b"send", |a| format!("call.value({a})()")),
        OperatorId::STR => (b"send", |a| format!("transfer({a})")),
        OperatorId::CSR => (b"call", |a| format!("send({a})")),
        OperatorId::CTR => (b"call", |a| format!("transfer({a})")),
        _ => unreachable!("not a transaction-call operator: {op}"),
    };
    let mut out = Vec::new();
    for i in code_tokens(model) {
        if token(model, i).kind != TokenKind::Identifier || model.token_text(i) != method {
            continue;
        }
        let site = if method == b"call" {
            call_with_value(model, i)
        } else {
            single_arg_method(model, i)
        };
        let site = match site {
            Some(s) => s,
            None => continue,
        };
        let replacement = repl(&site.amount);
        out.push(SiteRewrites {
            site: MutationSite::new(op, vec![site.span], model),
            rewrites: vec![Rewrite::single(
                replacement.clone(),
                format!(
                    "`{}` -> `{replacement}`",
                    String::from_utf8_lossy(method)
                ),
            )],
        });
    }
    out
}

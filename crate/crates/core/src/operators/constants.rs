//! Constant-manipulation operators: address literals, gas amounts, and
//! `constant`/`immutable` state-variable initializers.

use super::*;
use crate::lexer::{is_integer_literal, parse_integer_literal, TokenKind};
use crate::model::SourceModel;

/// Fixed sentinel so CAA mutants are reproducible run to run.
pub const SENTINEL_ADDRESS: &str = "0xdeadbeefdeadbeefdeadbeefdeadbeefdeadbeef";

pub(super) fn expand(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    match op {
        OperatorId::CAA => caa(model),
        OperatorId::CDG => cdg(model),
        OperatorId::CCV => ccv(model),
        _ => unreachable!("not a constants operator: {op}"),
    }
}

fn caa(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for i in code_tokens(model) {
        let t = token(model, i);
        if t.kind != TokenKind::HexAddressLiteral {
            continue;
        }
        if model.token_text(i).eq_ignore_ascii_case(SENTINEL_ADDRESS.as_bytes()) {
            continue;
        }
        out.push(SiteRewrites {
            site: MutationSite::new(OperatorId::CAA, vec![t.span], model),
            rewrites: vec![Rewrite::single(
                SENTINEL_ADDRESS,
                "address -> sentinel address",
            )],
        });
    }
    out
}

/// Gas/value amounts: the literal N in `.gas(N)`, `{gas: N}`, and
/// `.call.value(N)`.
fn gas_amount_tokens(model: &SourceModel) -> Vec<usize> {
    let mut out = Vec::new();
    for i in code_tokens(model) {
        if token(model, i).kind != TokenKind::Identifier {
            continue;
        }
        match model.token_text(i) {
            b"gas" => {
                // `.gas(N)`
                if model.prev_nt(i).map(|p| model.token_text(p) == b".") == Some(true) {
                    if let Some(open) = model.next_nt(i).filter(|&n| model.token_text(n) == b"(") {
                        if let Some(close) = matching_bracket(model, open) {
                            if let Some(lit) = single_literal_arg(model, open, close) {
                                out.push(lit);
                            }
                        }
                    }
                }
                // `{gas: N}`
                if let Some(colon) = model.next_nt(i).filter(|&n| model.token_text(n) == b":") {
                    let braced = model
                        .prev_nt(i)
                        .map(|p| matches!(model.token_text(p), b"{" | b","))
                        .unwrap_or(false);
                    if braced {
                        if let Some(lit) = model.next_nt(colon) {
                            if is_literal(model, lit) {
                                out.push(lit);
                            }
                        }
                    }
                }
            }
            b"value" => {
                // `.call.value(N)`
                let dot = match model.prev_nt(i) {
                    Some(d) if model.token_text(d) == b"." => d,
                    _ => continue,
                };
                match model.prev_nt(dot) {
                    Some(c) if model.token_text(c) == b"call" => {}
                    _ => continue,
                }
                if let Some(open) = model.next_nt(i).filter(|&n| model.token_text(n) == b"(") {
                    if let Some(close) = matching_bracket(model, open) {
                        if let Some(lit) = single_literal_arg(model, open, close) {
                            out.push(lit);
                        }
                    }
                }
            }
            _ => {}
        }
    }
    out
}

fn is_literal(model: &SourceModel, i: usize) -> bool {
    model.tokens[i].kind == TokenKind::NumberLiteral && is_integer_literal(model.token_text(i))
}

fn single_literal_arg(model: &SourceModel, open: usize, close: usize) -> Option<usize> {
    let first = model.next_nt(open)?;
    if first >= close || !is_literal(model, first) {
        return None;
    }
    match model.next_nt(first) {
        Some(n) if n == close => Some(first),
        _ => None,
    }
}

fn cdg(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for i in gas_amount_tokens(model) {
        let t = token(model, i);
        let n = match parse_integer_literal(model.token_text(i)) {
            Some(n) => n,
            None => continue,
        };
        let mut rewrites = Vec::new();
        if let Some(doubled) = n.checked_mul(2) {
            if doubled != n {
                rewrites.push(Rewrite::single(
                    doubled.to_string(),
                    format!("gas `{n}` -> `{doubled}`"),
                ));
            }
        }
        if n / 2 != 0 {
            rewrites.push(Rewrite::single(
                (n / 2).to_string(),
                format!("gas `{n}` -> `{}`", n / 2),
            ));
        }
        if !rewrites.is_empty() {
            out.push(SiteRewrites {
                site: MutationSite::new(OperatorId::CDG, vec![t.span], model),
                rewrites,
            });
        }
    }
    out
}

fn ccv(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for contract in &model.contracts {
        for v in &contract.state_vars {
            if !v.is_constant {
                continue;
            }
            let init = match v.initializer_span {
                Some(s) => s,
                None => continue,
            };
            // only single integer-literal initializers
            let lit = model
                .tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| t.span.within(init) && !t.is_trivia())
                .collect::<Vec<_>>();
            let (idx, tok) = match lit.as_slice() {
                [(i, t)] if is_literal(model, *i) => (*i, **t),
                _ => continue,
            };
            let n = match parse_integer_literal(model.token_text(idx)) {
                Some(n) => n,
                None => continue,
            };
            let mut rewrites = Vec::new();
            if n != 0 {
                rewrites.push(Rewrite::single("0", format!("`{n}` -> `0`")));
            }
            if let Some(succ) = n.checked_add(1) {
                rewrites.push(Rewrite::single(
                    succ.to_string(),
                    format!("`{n}` -> `{succ}`"),
                ));
            }
            if !rewrites.is_empty() {
                out.push(SiteRewrites {
                    site: MutationSite::new(OperatorId::CCV, vec![tok.span], model),
                    rewrites,
                });
            }
        }
    }
    out
}

//! Overflow/underflow operators: signedness flips and type-size steps on
//! integer type keywords in declaration position.

use super::*;
use crate::lexer::TokenKind;
use crate::model::SourceModel;

const SIZE_LADDER: [u16; 6] = [8, 16, 32, 64, 128, 256];

struct IntType {
    signed: bool,
    /// Declared bit width; bare `uint`/`int` mean 256.
    bits: u16,
    /// Width digits were spelled out in the source.
    explicit: bool,
}

fn parse_int_type(text: &[u8]) -> Option<IntType> {
    let (signed, rest) = if let Some(r) = text.strip_prefix(b"uint") {
        (false, r)
    } else {
        (true, text.strip_prefix(b"int")?)
    };
    if rest.is_empty() {
        return Some(IntType {
            signed,
            bits: 256,
            explicit: false,
        });
    }
    let bits: u16 = std::str::from_utf8(rest).ok()?.parse().ok()?;
    Some(IntType {
        signed,
        bits,
        explicit: true,
    })
}

/// Integer type keywords in declaration position (casts like `uint32(x)`
/// are skipped: the next token is an opening parenthesis).
fn declared_int_types(model: &SourceModel) -> Vec<(usize, IntType)> {
    let mut out = Vec::new();
    for i in code_tokens(model) {
        let t = token(model, i);
        if t.kind != TokenKind::Keyword {
            continue;
        }
        let ty = match parse_int_type(model.token_text(i)) {
            Some(ty) => ty,
            None => continue,
        };
        if let Some(n) = model.next_nt(i) {
            if model.token_text(n) == b"(" {
                continue;
            }
        }
        out.push((i, ty));
    }
    out
}

pub(super) fn expand(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for (i, ty) in declared_int_types(model) {
        let span = token(model, i).span;
        let orig = String::from_utf8_lossy(model.token_text(i)).into_owned();
        let width = |bits: u16, explicit: bool| {
            if explicit {
                bits.to_string()
            } else {
                String::new()
            }
        };
        let repl = match op {
            OperatorId::USP if !ty.signed => format!("int{}", width(ty.bits, ty.explicit)),
            OperatorId::PSU if ty.signed => format!("uint{}", width(ty.bits, ty.explicit)),
            OperatorId::IST | OperatorId::DST => {
                let pos = match SIZE_LADDER.iter().position(|&b| b == ty.bits) {
                    Some(p) => p,
                    None => continue, // off-ladder widths like uint24
                };
                let next = if op == OperatorId::IST {
                    if pos + 1 >= SIZE_LADDER.len() {
                        continue; // IST at 256 produces no rewrite
                    }
                    SIZE_LADDER[pos + 1]
                } else {
                    if pos == 0 {
                        continue; // DST at 8 produces no rewrite
                    }
                    SIZE_LADDER[pos - 1]
                };
                let prefix = if ty.signed { "int" } else { "uint" };
                format!("{prefix}{next}")
            }
            _ => continue,
        };
        out.push(SiteRewrites {
            site: MutationSite::new(op, vec![span], model),
            rewrites: vec![Rewrite::single(
                repl.clone(),
                format!("`{orig}` -> `{repl}`"),
            )],
        });
    }
    out
}

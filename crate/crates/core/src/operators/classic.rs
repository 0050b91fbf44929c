//! The twelve classic operators: arithmetic/relational/logical replacement,
//! constant and reference swaps, formula deletion, and statement swapping.

use super::*;
use crate::lexer::{is_integer_literal, parse_integer_literal, TokenKind};
use crate::model::{FunctionDecl, SourceModel};

const ARITH: [&str; 5] = ["+", "-", "*", "/", "%"];
const ARITH_COMPOUND: [&str; 5] = ["+=", "-=", "*=", "/=", "%="];
const RELATIONAL: [&str; 6] = ["<", "<=", ">", ">=", "==", "!="];

pub(super) fn expand(
    op: OperatorId,
    model: &SourceModel,
    opts: &CatalogOptions,
) -> Vec<SiteRewrites> {
    match op {
        OperatorId::AOR => aor(model, opts),
        OperatorId::ROR => symbol_family(model, OperatorId::ROR, &RELATIONAL),
        OperatorId::LCR => lcr(model),
        OperatorId::UOI => uoi(model),
        OperatorId::ABS => abs(model),
        OperatorId::CRP => crp(model),
        OperatorId::FRC => frc(model),
        OperatorId::RCR => rcr(model),
        OperatorId::CRR => crr(model),
        OperatorId::RFR => rfr(model),
        OperatorId::FDL => fdl(model),
        OperatorId::SCL => scl(model),
        _ => unreachable!("not a classic operator: {op}"),
    }
}

/// Replace each member of `family` with every other member.
fn symbol_family(model: &SourceModel, op: OperatorId, family: &[&str]) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for i in code_tokens(model) {
        let t = token(model, i);
        if t.kind != TokenKind::OperatorSymbol {
            continue;
        }
        let text = model.token_text(i);
        if !family.iter().any(|f| f.as_bytes() == text) {
            continue;
        }
        let rewrites = family
            .iter()
            .filter(|f| f.as_bytes() != text)
            .map(|f| Rewrite::single(*f, format!("`{}` -> `{f}`", String::from_utf8_lossy(text))))
            .collect();
        out.push(SiteRewrites {
            site: MutationSite::new(op, vec![t.span], model),
            rewrites,
        });
    }
    out
}

fn aor(model: &SourceModel, opts: &CatalogOptions) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for i in code_tokens(model) {
        let t = token(model, i);
        if t.kind != TokenKind::OperatorSymbol {
            continue;
        }
        let text = model.token_text(i);
        if ARITH.iter().any(|a| a.as_bytes() == text) {
            if !is_binary_use(model, i) {
                continue;
            }
            let rewrites = ARITH
                .iter()
                .filter(|a| a.as_bytes() != text)
                .map(|a| {
                    Rewrite::single(*a, format!("`{}` -> `{a}`", String::from_utf8_lossy(text)))
                })
                .collect();
            out.push(SiteRewrites {
                site: MutationSite::new(OperatorId::AOR, vec![t.span], model),
                rewrites,
            });
        } else if opts.aor_include_compound && ARITH_COMPOUND.iter().any(|a| a.as_bytes() == text) {
            let rewrites = ARITH_COMPOUND
                .iter()
                .filter(|a| a.as_bytes() != text)
                .map(|a| {
                    Rewrite::single(*a, format!("`{}` -> `{a}`", String::from_utf8_lossy(text)))
                })
                .collect();
            out.push(SiteRewrites {
                site: MutationSite::new(OperatorId::AOR, vec![t.span], model),
                rewrites,
            });
        }
    }
    out
}

fn lcr(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for i in code_tokens(model) {
        let text = model.token_text(i);
        let repl = match text {
            b"&&" => "||",
            b"||" => "&&",
            _ => continue,
        };
        out.push(SiteRewrites {
            site: MutationSite::new(OperatorId::LCR, vec![token(model, i).span], model),
            rewrites: vec![Rewrite::single(
                repl,
                format!("`{}` -> `{repl}`", String::from_utf8_lossy(text)),
            )],
        });
    }
    out
}

/// Condition spans of `if (C)` headers and `require`/`assert` calls.
fn condition_spans(model: &SourceModel) -> Vec<Span> {
    let mut out = Vec::new();
    for i in code_tokens(model) {
        let text = model.token_text(i);
        let is_guard = (text == b"require" || text == b"assert")
            && token(model, i).kind == TokenKind::Identifier;
        let is_branch = text == b"if";
        if !is_guard && !is_branch {
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
        let span = if is_guard {
            match split_args(model, open, close).first() {
                Some(first) => *first,
                None => continue,
            }
        } else {
            let args = split_args(model, open, close);
            match args.first() {
                Some(first) if args.len() == 1 => *first,
                _ => continue,
            }
        };
        out.push(span);
    }
    out
}

/// Signed-integer variables visible in a function: parameters, locals, and
/// the enclosing contract's state variables, all judged by declared type
/// text.
fn signed_names(model: &SourceModel, f: &FunctionDecl, contract_idx: usize) -> Vec<String> {
    let mut names = Vec::new();
    for v in &model.contracts[contract_idx].state_vars {
        if v.type_text.starts_with("int") {
            names.push(v.name.clone());
        }
    }
    for v in f.params.iter().chain(&f.locals) {
        if v.is_signed_integer() {
            names.push(v.name.clone());
        }
    }
    names
}

const ASSIGN_OPS: &[&[u8]] = &[
    b"=", b"+=", b"-=", b"*=", b"/=", b"%=", b"|=", b"&=", b"^=", b"<<=", b">>=",
];

/// Occurrences of `names` inside a function body that read the variable:
/// not the declaring token, not a member access, not an assignment target.
fn value_occurrences(
    model: &SourceModel,
    f: &FunctionDecl,
    names: &[String],
    include_assign_target: bool,
) -> Vec<(usize, String)> {
    let body = match f.body_span {
        Some(b) => b,
        None => return Vec::new(),
    };
    let decl_spans: Vec<Span> = f
        .params
        .iter()
        .chain(&f.locals)
        .map(|v| v.name_span)
        .collect();
    let mut out = Vec::new();
    for i in code_tokens(model) {
        let t = token(model, i);
        if !t.span.within(body) || t.kind != TokenKind::Identifier {
            continue;
        }
        let text = String::from_utf8_lossy(model.token_text(i)).into_owned();
        if !names.contains(&text) {
            continue;
        }
        if decl_spans.contains(&t.span) {
            continue;
        }
        if let Some(p) = model.prev_nt(i) {
            if model.token_text(p) == b"." {
                continue;
            }
        }
        if let Some(n) = model.next_nt(i) {
            let nt = model.token_text(n);
            if nt == b"(" {
                continue;
            }
            if !include_assign_target && ASSIGN_OPS.contains(&nt) {
                continue;
            }
        }
        out.push((i, text));
    }
    out
}

fn per_function<'m>(
    model: &'m SourceModel,
) -> impl Iterator<Item = (usize, &'m FunctionDecl)> + 'm {
    model
        .contracts
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| c.functions.iter().map(move |f| (ci, f)))
}

fn uoi(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for span in condition_spans(model) {
        let cond = model.slice_string(span);
        out.push(SiteRewrites {
            site: MutationSite::new(OperatorId::UOI, vec![span], model),
            rewrites: vec![Rewrite::single(
                format!("!({cond})"),
                "negate condition".to_string(),
            )],
        });
    }
    for (ci, f) in per_function(model) {
        let names = signed_names(model, f, ci);
        for (i, name) in value_occurrences(model, f, &names, false) {
            out.push(SiteRewrites {
                site: MutationSite::new(OperatorId::UOI, vec![token(model, i).span], model),
                rewrites: vec![Rewrite::single(
                    format!("-{name}"),
                    format!("negate `{name}`"),
                )],
            });
        }
    }
    out
}

fn abs(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for (ci, f) in per_function(model) {
        let names = signed_names(model, f, ci);
        for (i, name) in value_occurrences(model, f, &names, false) {
            out.push(SiteRewrites {
                site: MutationSite::new(OperatorId::ABS, vec![token(model, i).span], model),
                rewrites: vec![Rewrite::single(
                    format!("({name} < 0 ? -{name} : {name})"),
                    format!("absolute value of `{name}`"),
                )],
            });
        }
    }
    out
}

fn crp(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for i in code_tokens(model) {
        let t = token(model, i);
        let text = model.token_text(i);
        if t.kind == TokenKind::NumberLiteral && is_integer_literal(text) {
            let orig = String::from_utf8_lossy(text).into_owned();
            let mut candidates = vec!["0".to_string(), "1".to_string()];
            if let Some(n) = parse_integer_literal(text) {
                if let Some(succ) = n.checked_add(1) {
                    candidates.push(succ.to_string());
                }
                if n == 0 {
                    candidates.push("-1".to_string());
                } else {
                    candidates.push((n - 1).to_string());
                }
            }
            // textual identities drop out; duplicate values stay and are
            // caught later by mutant-level dedup
            let rewrites: Vec<Rewrite> = candidates
                .into_iter()
                .filter(|c| *c != orig)
                .map(|c| Rewrite::single(c.clone(), format!("`{orig}` -> `{c}`")))
                .collect();
            if !rewrites.is_empty() {
                out.push(SiteRewrites {
                    site: MutationSite::new(OperatorId::CRP, vec![t.span], model),
                    rewrites,
                });
            }
        } else if t.kind == TokenKind::Keyword && (text == b"true" || text == b"false") {
            let repl = if text == b"true" { "false" } else { "true" };
            out.push(SiteRewrites {
                site: MutationSite::new(OperatorId::CRP, vec![t.span], model),
                rewrites: vec![Rewrite::single(repl, format!("flip to `{repl}`"))],
            });
        }
    }
    out
}

/// Assignment sites inside function bodies: the token index of `=` plus the
/// right-hand-side span up to the terminating `;`.
fn assignments(model: &SourceModel) -> Vec<(usize, Span)> {
    let mut out = Vec::new();
    for (_, f) in per_function(model) {
        let body = match f.body_span {
            Some(b) => b,
            None => continue,
        };
        for i in code_tokens(model) {
            let t = token(model, i);
            if !t.span.within(body) || t.kind != TokenKind::OperatorSymbol {
                continue;
            }
            if model.token_text(i) != b"=" {
                continue;
            }
            let semi = match statement_end(model, i) {
                Some(s) => s,
                None => continue,
            };
            let first = match model.next_nt(i) {
                Some(n) if n < semi => n,
                _ => continue,
            };
            let last = (first..semi)
                .rev()
                .find(|&j| !model.tokens[j].is_trivia())
                .unwrap_or(first);
            out.push((
                i,
                Span::new(model.tokens[first].span.start, model.tokens[last].span.end),
            ));
        }
    }
    out
}

fn frc(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for (_, rhs) in assignments(model) {
        let orig = model.slice_string(rhs);
        let rewrites: Vec<Rewrite> = ["0", "1"]
            .iter()
            .filter(|c| orig != **c)
            .map(|c| Rewrite::single(*c, format!("assignment value -> `{c}`")))
            .collect();
        if !rewrites.is_empty() {
            out.push(SiteRewrites {
                site: MutationSite::new(OperatorId::FRC, vec![rhs], model),
                rewrites,
            });
        }
    }
    out
}

fn rcr(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for (eq, rhs) in assignments(model) {
        // only single-identifier right-hand sides
        let first = model.next_nt(eq).unwrap();
        if model.tokens[first].kind != TokenKind::Identifier
            || model.tokens[first].span != rhs
        {
            continue;
        }
        out.push(SiteRewrites {
            site: MutationSite::new(OperatorId::RCR, vec![rhs], model),
            rewrites: vec![Rewrite::single(
                "0",
                format!("`{}` -> `0`", model.slice_string(rhs)),
            )],
        });
    }
    out
}

fn crr(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for (ci, f) in per_function(model) {
        let body = match f.body_span {
            Some(b) => b,
            None => continue,
        };
        let mut refs: Vec<String> = model.contracts[ci]
            .state_vars
            .iter()
            .filter(|v| v.is_integer())
            .map(|v| v.name.clone())
            .collect();
        refs.extend(
            f.params
                .iter()
                .chain(&f.locals)
                .filter(|v| v.is_integer())
                .map(|v| v.name.clone()),
        );
        if refs.is_empty() {
            continue;
        }
        for i in code_tokens(model) {
            let t = token(model, i);
            if !t.span.within(body)
                || t.kind != TokenKind::NumberLiteral
                || !is_integer_literal(model.token_text(i))
            {
                continue;
            }
            let orig = String::from_utf8_lossy(model.token_text(i));
            let rewrites = refs
                .iter()
                .map(|r| Rewrite::single(r.clone(), format!("`{orig}` -> `{r}`")))
                .collect();
            out.push(SiteRewrites {
                site: MutationSite::new(OperatorId::CRR, vec![t.span], model),
                rewrites,
            });
        }
    }
    out
}

fn rfr(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for (_, f) in per_function(model) {
        let pool: Vec<String> = f
            .params
            .iter()
            .chain(&f.locals)
            .map(|v| v.name.clone())
            .collect();
        if pool.len() < 2 {
            continue;
        }
        for (i, name) in value_occurrences(model, f, &pool, true) {
            let rewrites: Vec<Rewrite> = pool
                .iter()
                .filter(|p| **p != name)
                .map(|p| Rewrite::single(p.clone(), format!("`{name}` -> `{p}`")))
                .collect();
            out.push(SiteRewrites {
                site: MutationSite::new(OperatorId::RFR, vec![token(model, i).span], model),
                rewrites,
            });
        }
    }
    out
}

fn fdl(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for (_, f) in per_function(model) {
        for stmt in &f.statements {
            out.push(SiteRewrites {
                site: MutationSite::new(OperatorId::FDL, vec![*stmt], model),
                rewrites: vec![Rewrite::single("", "delete statement")],
            });
        }
    }
    out
}

fn scl(model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for (_, f) in per_function(model) {
        for pair in f.statements.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            out.push(SiteRewrites {
                site: MutationSite::new(OperatorId::SCL, vec![a, b], model),
                rewrites: vec![Rewrite {
                    replacements: vec![model.slice_string(b), model.slice_string(a)],
                    description: "swap adjacent statements".to_string(),
                }],
            });
        }
    }
    out
}

//! Modifier operators: force a modifier definition to always pass or always
//! fail by replacing its body.

use super::*;
use crate::lexer::normalize;
use crate::model::SourceModel;

const PASS_BODY: &str = "{ _; }";
const FAIL_BODY: &str = "{ revert(); _; }";

pub(super) fn expand(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    let (body, desc) = match op {
        OperatorId::CMT => (PASS_BODY, "modifier always passes"),
        OperatorId::CMF => (FAIL_BODY, "modifier always fails"),
        _ => unreachable!("not a modifier operator: {op}"),
    };
    let target_norm = normalize(body.as_bytes()).unwrap();
    let mut out = Vec::new();
    for contract in &model.contracts {
        for m in &contract.modifiers {
            if m.body_span.is_empty() {
                continue;
            }
            // skip bodies that are already the replacement
            if normalize(model.slice(m.body_span))
                .map(|n| n == target_norm)
                .unwrap_or(false)
            {
                continue;
            }
            out.push(SiteRewrites {
                site: MutationSite::new(op, vec![m.body_span], model),
                rewrites: vec![Rewrite::single(body, desc)],
            });
        }
    }
    out
}

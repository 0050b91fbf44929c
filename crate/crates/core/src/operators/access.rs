//! Access-control operators: pairwise replacement of function visibility
//! keywords. Functions without an explicit visibility are skipped.

use super::*;
use crate::model::{SourceModel, Visibility};

fn mapping(op: OperatorId) -> (Visibility, &'static str) {
    match op {
        OperatorId::PuPrR => (Visibility::Public, "private"),
        OperatorId::PuIR => (Visibility::Public, "internal"),
        OperatorId::PuER => (Visibility::Public, "external"),
        OperatorId::PrPuR => (Visibility::Private, "public"),
        OperatorId::PrIR => (Visibility::Private, "internal"),
        OperatorId::PrER => (Visibility::Private, "external"),
        OperatorId::IPuR => (Visibility::Internal, "public"),
        OperatorId::IPrR => (Visibility::Internal, "private"),
        OperatorId::IER => (Visibility::Internal, "external"),
        OperatorId::EPuR => (Visibility::External, "public"),
        OperatorId::EPrR => (Visibility::External, "private"),
        OperatorId::EIR => (Visibility::External, "internal"),
        _ => unreachable!("not an access-control operator: {op}"),
    }
}

pub(super) fn expand(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    let (from, to) = mapping(op);
    let mut out = Vec::new();
    for contract in &model.contracts {
        for f in &contract.functions {
            let span = match f.visibility_span {
                Some(s) if f.visibility == from => s,
                _ => continue,
            };
            out.push(SiteRewrites {
                site: MutationSite::new(op, vec![span], model),
                rewrites: vec![Rewrite::single(
                    to,
                    format!("`{}` -> `{to}`", from.keyword().unwrap()),
                )],
            });
        }
    }
    out
}

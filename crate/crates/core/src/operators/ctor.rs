//! Constructor-name operators. CCN introduces the classic typo by dropping
//! the final character of the constructor name; CFC renames an ordinary
//! function to the contract name so it behaves like a constructor.
//!
//! Interfaces and libraries have no constructors and are skipped.

use super::*;
use crate::model::{ContractKind, FunctionKind, SourceModel};

pub(super) fn expand(op: OperatorId, model: &SourceModel) -> Vec<SiteRewrites> {
    let mut out = Vec::new();
    for contract in &model.contracts {
        if contract.kind != ContractKind::Contract {
            continue;
        }
        let ctor = match contract.constructor() {
            Some(f) => f,
            None => continue,
        };
        if contract.name.len() < 2 {
            continue;
        }
        let typo = &contract.name[..contract.name.len() - 1];
        match op {
            OperatorId::CCN => match ctor.kind {
                FunctionKind::Constructor => {
                    // keyword form: demote to a regular function whose name
                    // is the contract name minus its last character
                    let kw_span = Span::new(ctor.span.start, ctor.span.start + "constructor".len());
                    out.push(SiteRewrites {
                        site: MutationSite::new(OperatorId::CCN, vec![kw_span], model),
                        rewrites: vec![Rewrite::single(
                            format!("function {typo}"),
                            format!("constructor -> `{typo}`"),
                        )],
                    });
                }
                _ => {
                    // legacy form: drop the final character of the name
                    if let Some(name_span) = ctor.name_span {
                        out.push(SiteRewrites {
                            site: MutationSite::new(OperatorId::CCN, vec![name_span], model),
                            rewrites: vec![Rewrite::single(
                                typo,
                                format!("`{}` -> `{typo}`", ctor.name),
                            )],
                        });
                    }
                }
            },
            OperatorId::CFC => {
                for f in &contract.functions {
                    if f.kind != FunctionKind::Regular || f.is_constructor || f.name.is_empty() {
                        continue;
                    }
                    if let Some(name_span) = f.name_span {
                        out.push(SiteRewrites {
                            site: MutationSite::new(OperatorId::CFC, vec![name_span], model),
                            rewrites: vec![Rewrite::single(
                                contract.name.clone(),
                                format!("`{}` -> `{}`", f.name, contract.name),
                            )],
                        });
                    }
                }
            }
            _ => unreachable!("not a constructor operator: {op}"),
        }
    }
    out
}

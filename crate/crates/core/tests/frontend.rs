//! Corpus-wide frontend invariants: lossless lexing, span discipline, and
//! the constructor rule, checked over every bundled `.sol` file.

mod common;

use common::all_corpus_files;
use solmut::lexer::{detokenize, lex};
use solmut::model::FunctionKind;
use solmut::SourceModel;

#[test]
fn every_corpus_file_lexes_losslessly() {
    for path in all_corpus_files() {
        let bytes = std::fs::read(&path).unwrap();
        let tokens = lex(&bytes).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(detokenize(&bytes, &tokens), bytes, "{}", path.display());
        let mut pos = 0;
        for t in &tokens {
            assert_eq!(t.span.start, pos, "gap or overlap in {}", path.display());
            assert!(t.span.end > t.span.start);
            pos = t.span.end;
        }
        assert_eq!(pos, bytes.len());
    }
}

#[test]
fn constructor_rule_holds_for_every_corpus_function() {
    for path in all_corpus_files() {
        let model = SourceModel::load(&path).unwrap();
        for contract in &model.contracts {
            for f in &contract.functions {
                let expected = f.kind == FunctionKind::Constructor
                    || (!f.name.is_empty() && f.name == contract.name);
                assert_eq!(
                    f.is_constructor,
                    expected,
                    "{} in {}.{}",
                    path.display(),
                    contract.name,
                    f.name
                );
            }
        }
    }
}

#[test]
fn declaration_spans_nest_and_statements_are_ordered() {
    for path in all_corpus_files() {
        let model = SourceModel::load(&path).unwrap();
        let file_len = model.text.len();
        for (i, contract) in model.contracts.iter().enumerate() {
            assert!(contract.span.end <= file_len);
            for other in &model.contracts[i + 1..] {
                assert!(
                    !contract.span.overlaps(other.span),
                    "contract spans overlap in {}",
                    path.display()
                );
            }
            for f in &contract.functions {
                assert!(f.span.within(contract.span), "{}", path.display());
                if let Some(body) = f.body_span {
                    assert!(body.within(f.span));
                    let mut prev_end = 0;
                    for s in &f.statements {
                        assert!(s.within(body), "{}", path.display());
                        assert!(s.start >= prev_end, "statements out of order");
                        prev_end = s.end;
                    }
                }
            }
            for m in &contract.modifiers {
                assert!(m.span.within(contract.span));
                if let Some(g) = m.guard_condition_span {
                    assert!(g.within(m.body_span), "{}", path.display());
                }
            }
        }
    }
}

#[test]
fn structure_parse_is_pure_per_input() {
    for path in all_corpus_files() {
        let bytes = std::fs::read(&path).unwrap();
        let a = SourceModel::parse(&path, bytes.clone()).unwrap();
        let b = SourceModel::parse(&path, bytes).unwrap();
        assert_eq!(
            format!("{:?}{:?}", a.contracts, a.pragma_version),
            format!("{:?}{:?}", b.contracts, b.pragma_version),
            "{}",
            path.display()
        );
    }
}

//! Mutation testing for Solidity smart contracts.
//!
//! The pipeline: [`lexer`] and [`model`] turn a `.sol` file into a token
//! stream plus a structural index; [`operators`] houses the 57-operator
//! catalog (12 classic plus 9 Solidity-specific classes); [`engine`]
//! generates first-order mutants, detects redundant ones, and classifies
//! validity; [`score`] runs a test command against every valid mutant and
//! computes the mutation score; [`regen`] checks whether mutants of a fixed
//! contract regenerate a known buggy version.
//!
//! Everything is deterministic: no randomness, stable mutant ids, and
//! byte-identical reports across runs.

pub mod engine;
mod exec;
pub mod lexer;
pub mod model;
pub mod operators;
pub mod regen;
pub mod score;

use std::path::PathBuf;

use thiserror::Error;

pub use engine::{dedup, generate, GenerationReport, Manifest, Mutant, MutantStatus};
pub use lexer::{lex, normalize, LexError, Span, Token, TokenKind};
pub use model::{
    parse_structure, statements_of, ContractDecl, FunctionDecl, ModifierDecl, SourceModel,
    StructureError, Visibility,
};
pub use operators::{
    match_sites, rewrite, CatalogOptions, MutationSite, OperatorClass, OperatorId, Rewrite,
};
pub use regen::{BugPair, PairResult, RegenReport};
pub use score::{ScoreReport, TestOutcome, Verdict};

/// Catalog version stamped into reports; mutant ids are only comparable
/// between runs that share it.
pub const CATALOG_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
    #[error(transparent)]
    Score(#[from] score::ScoreError),
    #[error(transparent)]
    Regen(#[from] regen::RegenError),
}

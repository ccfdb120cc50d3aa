//! Classification of nearly-closed set-builder predicates of naive set theory.
//!
//! A predicate `A(x)` is *pathological* when the comprehension instance
//! `forall y: (y in {x : A(x)} <-> A(y))`, together with extensionality and
//! the equality axioms, is inconsistent. This crate combines
//!
//! * syntactic checks: [`strat`] (stratification) and [`syntpatho`]
//!   (circularity patterns and their derivatives),
//! * a bounded refutation search with checkable proofs ([`refuter`]),
//! * a finite model search whose models certify consistency ([`modelfinder`]),
//! * a hereditary scan over subformulas ([`hereditary`]),
//!
//! and a corpus pipeline with JSON reports ([`pipeline`], [`corpus`]).

pub mod corpus;
pub mod formula;
pub mod hereditary;
pub mod modelfinder;
pub mod parser;
pub mod pipeline;
pub mod printer;
pub mod refuter;
pub mod strat;
pub mod syntpatho;
pub mod verdict;

pub use formula::{nearly_closed, Formula, NearlyClosed, Rejection, Term};
pub use parser::{parse, ParseError};
pub use printer::print;
pub use verdict::Verdict;

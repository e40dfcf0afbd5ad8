//! Logic programs with aggregates under the vicious-circle reading of
//! aggregates: a rule whose body mentions `f{X : p(X)}` may only be used
//! once the whole extension of `p` is settled, so such a rule cannot be
//! used to derive a member of that extension.
//!
//! The crate covers the whole pipeline:
//!
//! * [`parser`] reads `.alog` text into a [`model::Program`] and prints it back,
//! * [`grounder`] instantiates free variables, leaving set-name variables symbolic,
//! * [`semantics`] decides answer sets through the aggregate reduct and
//!   enumerates them by brute force,
//! * [`asolver`] computes answer sets by propagation and backtracking,
//! * [`cli`] holds the `alog` command implementations.

pub mod asolver;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod grounder;
pub mod model;
pub mod parser;
pub mod semantics;

pub use error::{Error, Result};
pub use grounder::{ground_program, GroundProgram};
pub use model::{
    AggFunc, AggregateAtom, CondItem, ELiteral, Literal, LiteralSet, PartialInterpretation, Program, Relation, Rule,
    Term, Truth,
};
pub use parser::{format_program, parse_program, ParseError, ParseErrorKind};

use thiserror::Error;

use crate::model::{AggFunc, Literal, Term};
use crate::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("arithmetic over non-integer term `{0}`")]
    NonIntegerArith(Term),
    #[error("term `{0}` still contains variables")]
    NotGround(Term),
    #[error("integer overflow evaluating `{0}`")]
    Overflow(Term),
    #[error("aggregate bound `{0}` does not evaluate to an integer")]
    NonIntegerBound(Term),
    #[error("{func} applied to non-integer element `{element}`")]
    NonIntegerElement { func: AggFunc, element: Term },
    #[error("candidate space has {size} literals, above the oracle cap of {cap}")]
    OracleCap { size: usize, cap: usize },
    #[error("the solver does not accept classical negation (found `{0}`)")]
    ClassicalNegation(Literal),
}

pub type Result<T> = std::result::Result<T, Error>;

use crate::chirotope::Label;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("points {0:?} are collinear")]
    GeneralPositionViolation([Label; 3]),

    #[error("{what} needs at least {min} elements, got {got}")]
    TooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("invalid triple ({0}, {1}, {2})")]
    InvalidTriple(Label, Label, Label),

    #[error("not a rooted chirotope: {0}")]
    NotARootedChirotope(String),

    #[error("segments share an endpoint")]
    SharedEndpoint,

    #[error("oracle refuses {elements} elements (limit {limit})")]
    OracleTooLarge { elements: usize, limit: usize },

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: String },

    #[error("{what} too large ({size} > {cap}); {hint}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
        hint: &'static str,
    },

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

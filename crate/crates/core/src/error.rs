use thiserror::Error;

use crate::label::Label;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("label {0} is not present in the tree")]
    LabelAbsent(Label),

    #[error("label {0} is already present in the tree")]
    DuplicateLabel(Label),

    #[error("unknown edge identifier {0}")]
    UnknownEdge(usize),

    #[error("label {0} cannot be forgotten")]
    CannotForget(Label),

    #[error("tree has too few leaves ({0}) for this operation")]
    TooFewLeaves(usize),

    #[error("leaf edges a and b do not share a vertex")]
    NotAbAdjacent,

    #[error("tree leaves are not labeled by {{a,b,c,1..n}}")]
    NonStandardLabels,

    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("invalid index {index} for {what}")]
    InvalidIndex { what: &'static str, index: usize },

    #[error("invalid parking function: {0}")]
    InvalidParkingFunction(String),

    #[error("parking function is not column-restricted (car {car} dominates {dominance} columns)")]
    NotColumnRestricted { car: usize, dominance: usize },

    #[error("reconstruction jammed at car {car}: {reason}")]
    Jammed { car: usize, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("size {n} exceeds the enumeration bound {max}")]
    ResourceLimit { n: usize, max: usize },

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

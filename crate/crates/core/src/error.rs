//! Error type shared by every module.

use alloc::string::String;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Which condition of a nesting relation was violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NestingCondition {
    /// Every arc goes strictly forward.
    Forward,
    /// No position is used twice as a call or twice as a return.
    Injective,
    /// Arcs do not cross.
    NonCrossing,
    /// Positions lie inside the word.
    Range,
}

impl core::fmt::Display for NestingCondition {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            NestingCondition::Forward => "(1) i < j",
            NestingCondition::Injective => "(2) partial injection",
            NestingCondition::NonCrossing => "(3) non-crossing",
            NestingCondition::Range => "range",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("weight {weight} is not an element of the {semiring} semiring")]
    KindMismatch { semiring: &'static str, weight: String },
    #[error("semiring mismatch: {left} vs {right}")]
    SemiringMismatch { left: &'static str, right: &'static str },
    #[error("malformed weight token {0:?}")]
    MalformedWeight(String),
    #[error("weight {token} is out of range for the {semiring} semiring")]
    WeightOutOfRange { semiring: &'static str, token: String },
    #[error("unknown semiring {0:?}")]
    UnknownSemiring(String),
    #[error("nested words and texts must be non-empty")]
    EmptyWord,
    #[error("nesting condition {condition} violated by {detail}")]
    Nesting { condition: NestingCondition, detail: String },
    #[error("position {index} is outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expected i < j, got ({0}, {1})")]
    IndexOrder(usize, usize),
    #[error("{what} exceeds the guard: {actual} > {limit}")]
    Guard { what: &'static str, limit: u128, actual: u128 },
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("run of length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("order is not a permutation of 1..={0}")]
    NotPermutation(usize),
    #[error("text is not alternating")]
    NotAlternating,
    #[error("a product needs at least two factors")]
    TooFewFactors,
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("sort misuse: {0}")]
    SortMisuse(String),
    #[error("formula contains a weight constant")]
    ConstantInClassical,
    #[error("arity mismatch: expected {expected}, got {actual}")]
    Arity { expected: usize, actual: usize },
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("system class violation: {0}")]
    SystemClass(String),
    #[error("missing occurrence: {0}")]
    MissingOccurrence(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("normal form unreachable: {0}")]
    NormalFormUnreachable(String),
}

impl Error {
    /// True for resource-guard failures.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}

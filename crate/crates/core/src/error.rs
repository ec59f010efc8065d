use thiserror::Error;

use crate::rational::Rational;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval: lower endpoint {lo} exceeds upper endpoint {hi}")]
    InvalidInterval {
        lo: Box<Rational>,
        hi: Box<Rational>,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("carriers of a simple function must be pairwise disjoint")]
    OverlappingCarriers,

    #[error("endpoint {0} is an excluded discontinuity of the Stieltjes generator")]
    StieltjesEndpointExcluded(Rational),

    #[error("generator cannot be evaluated exactly at {0}")]
    InexactGenerator(Rational),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("pieces do not partition the target: {0}")]
    NotAPartition(String),

    #[error("tail bound violated after {n_terms} terms: gap {gap} exceeds declared bound {bound}")]
    TailBoundViolated {
        n_terms: usize,
        gap: Box<Rational>,
        bound: Box<Rational>,
    },

    #[error("representations disagree at {0}")]
    NotSameFunction(Rational),

    #[error("requested depth {requested} exceeds the configured cap {cap}")]
    DepthCap { requested: u32, cap: u32 },

    #[error("cover level {level} has total length {total} above its budget {budget}")]
    LevelBudgetExceeded {
        level: usize,
        total: Box<Rational>,
        budget: Box<Rational>,
    },

    #[error("point {0} lies in none of the first {1} cover intervals")]
    NotCovered(Rational, usize),

    #[error("no known derivative for this form: {0}")]
    UnknownForm(String),

    #[error("function evaluation failed at {0}")]
    EvalFailure(f64),

    #[error("point {0} lies outside the function domain")]
    OutOfDomain(Rational),

    #[error("premise failed: {0}")]
    PremiseFailed(String),

    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
    },

    #[error("type error: {0}")]
    Type(String),

    #[error("domain gap: {0}")]
    DomainGap(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

use crate::sequence::StepFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {name} = {value} is below its minimum {min}")]
    InvalidParameter {
        name: &'static str,
        value: i64,
        min: i64,
    },

    #[error("a Conolly-type recursion needs at least one summand")]
    NoSummands,

    #[error("no initial conditions were supplied")]
    EmptyInitialConditions,

    #[error("initial condition {index} is not a positive integer")]
    NonPositiveInitialCondition { index: u64 },

    #[error("{required} initial conditions are required, {given} given")]
    TooFewInitialConditions { required: u64, given: u64 },

    #[error("index {index} is outside [{low}, {high}]")]
    IndexOutOfRange { index: u64, low: u64, high: u64 },

    #[error("term {index} is an initial condition and has no evaluation trace")]
    TraceOfInitialCondition { index: u64 },

    #[error("operation needs a {expected} recursion")]
    WrongFamily { expected: &'static str },

    #[error("generation stopped: {0}")]
    Step(StepFailure),

    #[error("value exceeds the 63-bit safe range at index {index}")]
    ArithmeticOverflow { index: u64 },

    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("b-file line {line}: expected \"index value\"")]
    MalformedLine { line: usize },

    #[error("b-file line {line}: index does not follow the previous one")]
    NonContiguousIndex { line: usize },

    #[error("validator passed but generation disagreed for {spec}: {outcome}")]
    OracleInconsistency { spec: String, outcome: String },
}

impl From<StepFailure> for Error {
    fn from(f: StepFailure) -> Self {
        Error::Step(f)
    }
}

//! Meta-Fibonacci sequence workbench.
//!
//! Generates Conway-type sequences `A(n) = A(n - a - A^k(n - b)) + A(A^k(n - b))`,
//! their two-offset variant, and Conolly-type sequences
//! `C(n) = sum_i C(n - a_i - C(n - b_i))` term by term in exact integer
//! arithmetic, then checks them against the known sufficient conditions for
//! definedness and slow growth.

pub mod analysis;
pub mod bfile;
pub mod error;
pub mod properties;
pub mod sequence;
pub mod spec;
pub mod survey;
pub mod validate;

pub use error::{Error, Result};
pub use sequence::{
    ArgumentRole, ChainLink, Diagnostic, EvalTrace, Interval, SequenceState, Status, StepFailure,
    SummandEval,
};
pub use spec::{Conolly, Conway, ConwayVariant, GeneralConolly, RecursionSpec, Summand};

//! Exact, forward, memoized generation of sequence terms.
//!
//! A [`SequenceState`] owns the 1-indexed term table of one sequence. Term
//! `n` is computed only after terms `1..n-1`, and every argument of the
//! recursion is bounds-checked against `[1, n-1]` before it is read. When a
//! bound fails the state becomes [`Status::Halted`] and keeps its prefix.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spec::{Conway, ConwayVariant, RecursionSpec, Summand};

/// Largest term value accepted; differences and index arithmetic stay in `i64`.
pub const MAX_TERM: u64 = i64::MAX as u64;

/// Which argument of the recursion left its admissible range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArgumentRole {
    /// The argument fed to the `step`-th application of a k-fold composition.
    InnerComposition { step: u32 },
    /// The outer argument of summand `summand` (1-based).
    OuterArgument { summand: usize },
}

/// An integer interval, open or closed at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub low: i64,
    pub high: i64,
    pub open: bool,
}

impl Interval {
    pub fn open(low: i64, high: i64) -> Self {
        Interval {
            low,
            high,
            open: true,
        }
    }

    pub fn closed(low: i64, high: i64) -> Self {
        Interval {
            low,
            high,
            open: false,
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        if self.open {
            self.low < v && v < self.high
        } else {
            self.low <= v && v <= self.high
        }
    }

    /// True when no integer lies inside.
    pub fn is_empty(&self) -> bool {
        if self.open {
            self.high - self.low < 2
        } else {
            self.high < self.low
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.open {
            write!(f, "({}, {})", self.low, self.high)
        } else {
            write!(f, "[{}, {}]", self.low, self.high)
        }
    }
}

/// Why term `n` could not be computed.
///
/// For the Conway family the checked quantity is the composed value
/// `A^k(n - b)` against the open interval `(0, n - a)`; both recursion
/// arguments lie in `[1, n - 1]` exactly when it falls inside. Every other
/// diagnostic reports the offending argument itself against a closed range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub n: u64,
    pub role: ArgumentRole,
    pub computed_value: i64,
    pub required: Interval,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.role {
            ArgumentRole::InnerComposition { step } => {
                format!("argument of composition step {step}")
            }
            ArgumentRole::OuterArgument { summand } => format!("argument of summand {summand}"),
        };
        write!(
            f,
            "term {} undefined: {} is {}, outside {}",
            self.n, what, self.computed_value, self.required
        )?;
        if self.required.is_empty() {
            write!(f, " (empty)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepFailure {
    Undefined(Diagnostic),
    Overflow { n: u64 },
}

impl StepFailure {
    /// Index of the term that could not be produced.
    pub fn index(&self) -> u64 {
        match self {
            StepFailure::Undefined(d) => d.n,
            StepFailure::Overflow { n } => *n,
        }
    }

    pub fn diagnostic(&self) -> Option<&Diagnostic> {
        match self {
            StepFailure::Undefined(d) => Some(d),
            StepFailure::Overflow { .. } => None,
        }
    }
}

impl fmt::Display for StepFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepFailure::Undefined(d) => d.fmt(f),
            StepFailure::Overflow { n } => {
                write!(f, "term {n} exceeds the 63-bit safe range")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Status {
    Active,
    Halted { at: u64, reason: StepFailure },
}

/// One application inside a k-fold composition: `value = A(argument)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainLink {
    pub depth: u32,
    pub argument: u64,
    pub value: u64,
}

/// One summand of the recursion: `value = A(argument)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SummandEval {
    pub argument: u64,
    pub value: u64,
}

/// Full evaluation of a single recursively computed term.
///
/// For the variant family the chain lists the `b` composition followed by
/// the `c` composition. For Conolly-type recursions each inner lookup
/// `C(n - b_i)` appears as a depth-1 link.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvalTrace {
    pub n: u64,
    pub composition_chain: Vec<ChainLink>,
    pub summand_arguments: Vec<SummandEval>,
    pub result: u64,
}

impl fmt::Display for EvalTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "term {} = {}", self.n, self.result)?;
        if !self.composition_chain.is_empty() {
            writeln!(f, "  composition:")?;
            for link in &self.composition_chain {
                writeln!(
                    f,
                    "    depth {}: A({}) = {}",
                    link.depth, link.argument, link.value
                )?;
            }
        }
        writeln!(f, "  summands:")?;
        for (i, s) in self.summand_arguments.iter().enumerate() {
            writeln!(f, "    [{}] A({}) = {}", i + 1, s.argument, s.value)?;
        }
        Ok(())
    }
}

trait Recorder {
    fn link(&mut self, depth: u32, argument: u64, value: u64);
    fn summand(&mut self, argument: u64, value: u64);
}

struct NoRecord;

impl Recorder for NoRecord {
    #[inline(always)]
    fn link(&mut self, _: u32, _: u64, _: u64) {}
    #[inline(always)]
    fn summand(&mut self, _: u64, _: u64) {}
}

#[derive(Default)]
struct TraceRecord {
    chain: Vec<ChainLink>,
    summands: Vec<SummandEval>,
}

impl Recorder for TraceRecord {
    fn link(&mut self, depth: u32, argument: u64, value: u64) {
        self.chain.push(ChainLink {
            depth,
            argument,
            value,
        });
    }

    fn summand(&mut self, argument: u64, value: u64) {
        self.summands.push(SummandEval { argument, value });
    }
}

/// Read-only view of terms `1..=prefix.len()`, used while evaluating term
/// `prefix.len() + 1`.
struct Prefix<'a> {
    terms: &'a [u64],
}

impl Prefix<'_> {
    #[inline]
    fn len(&self) -> i64 {
        self.terms.len() as i64
    }

    /// Caller guarantees `1 <= i <= len`.
    #[inline]
    fn at(&self, i: i64) -> u64 {
        self.terms[(i - 1) as usize]
    }

    /// `A^depth(m)`, checking each argument before it is used as an index.
    fn compose<R: Recorder>(
        &self,
        n: u64,
        depth: u32,
        m: i64,
        rec: &mut R,
    ) -> std::result::Result<i64, Diagnostic> {
        let mut v = m;
        for step in 1..=depth {
            if v < 1 || v > self.len() {
                return Err(Diagnostic {
                    n,
                    role: ArgumentRole::InnerComposition { step },
                    computed_value: v,
                    required: Interval::closed(1, self.len()),
                });
            }
            let next = self.at(v);
            rec.link(step, v as u64, next);
            v = next as i64;
        }
        Ok(v)
    }

    fn outer<R: Recorder>(
        &self,
        n: u64,
        summand: usize,
        argument: i64,
        rec: &mut R,
    ) -> std::result::Result<u64, Diagnostic> {
        let range = Interval::closed(1, self.len());
        if !range.contains(argument) {
            return Err(Diagnostic {
                n,
                role: ArgumentRole::OuterArgument { summand },
                computed_value: argument,
                required: range,
            });
        }
        let value = self.at(argument);
        rec.summand(argument as u64, value);
        Ok(value)
    }

    fn eval_conway<R: Recorder>(
        &self,
        p: &Conway,
        rec: &mut R,
    ) -> std::result::Result<[u64; 2], Diagnostic> {
        let n = self.len() + 1;
        let v = self.compose(n as u64, p.k(), n - i64::from(p.b()), rec)?;
        let bound = n - i64::from(p.a());
        let condition = Interval::open(0, bound);
        if !condition.contains(v) {
            return Err(Diagnostic {
                n: n as u64,
                role: ArgumentRole::OuterArgument { summand: 1 },
                computed_value: v,
                required: condition,
            });
        }
        let first = self.outer(n as u64, 1, bound - v, rec)?;
        let second = self.outer(n as u64, 2, v, rec)?;
        Ok([first, second])
    }

    fn eval_variant<R: Recorder>(
        &self,
        p: &ConwayVariant,
        rec: &mut R,
    ) -> std::result::Result<[u64; 2], Diagnostic> {
        let n = self.len() + 1;
        let v = self.compose(n as u64, p.k(), n - i64::from(p.b()), rec)?;
        let w = self.compose(n as u64, p.k(), n - i64::from(p.c()), rec)?;
        let first = self.outer(n as u64, 1, n - i64::from(p.a()) - v, rec)?;
        let second = self.outer(n as u64, 2, w, rec)?;
        Ok([first, second])
    }

    fn eval_summands<R: Recorder>(
        &self,
        summands: &[Summand],
        rec: &mut R,
    ) -> std::result::Result<u64, StepFailure> {
        let n = self.len() + 1;
        let mut total = 0u64;
        for (i, t) in summands.iter().enumerate() {
            let x = self.compose(n as u64, 1, n - i64::from(t.b()), rec)?;
            let value = self.outer(n as u64, i + 1, n - i64::from(t.a()) - x, rec)?;
            total = checked_sum(n as u64, total, value)?;
        }
        Ok(total)
    }
}

#[inline]
fn checked_sum(n: u64, x: u64, y: u64) -> std::result::Result<u64, StepFailure> {
    x.checked_add(y)
        .filter(|&v| v <= MAX_TERM)
        .ok_or(StepFailure::Overflow { n })
}

fn evaluate<R: Recorder>(
    spec: &RecursionSpec,
    prefix: &[u64],
    rec: &mut R,
) -> std::result::Result<u64, StepFailure> {
    let view = Prefix { terms: prefix };
    let n = prefix.len() as u64 + 1;
    match spec {
        RecursionSpec::Conway(p) => {
            let [x, y] = view.eval_conway(p, rec)?;
            checked_sum(n, x, y)
        }
        RecursionSpec::ConwayVariant(p) => {
            let [x, y] = view.eval_variant(p, rec)?;
            checked_sum(n, x, y)
        }
        RecursionSpec::Conolly(p) => view.eval_summands(&p.summands(), rec),
        RecursionSpec::GeneralConolly(p) => view.eval_summands(p.terms(), rec),
    }
}

impl From<Diagnostic> for StepFailure {
    fn from(d: Diagnostic) -> Self {
        StepFailure::Undefined(d)
    }
}

/// A recursion together with its term table computed so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceState {
    spec: RecursionSpec,
    /// `terms[i]` holds term `i + 1`.
    terms: Vec<u64>,
    ic_len: u64,
    status: Status,
}

impl SequenceState {
    pub fn new(spec: RecursionSpec, initial_conditions: &[u64]) -> Result<Self> {
        if initial_conditions.is_empty() {
            return Err(Error::EmptyInitialConditions);
        }
        for (i, &v) in initial_conditions.iter().enumerate() {
            let index = i as u64 + 1;
            if v == 0 {
                return Err(Error::NonPositiveInitialCondition { index });
            }
            if v > MAX_TERM {
                return Err(Error::ArithmeticOverflow { index });
            }
        }
        let required = spec.min_initial_conditions();
        let given = initial_conditions.len() as u64;
        if given < required {
            return Err(Error::TooFewInitialConditions { required, given });
        }
        Ok(SequenceState {
            spec,
            terms: initial_conditions.to_vec(),
            ic_len: given,
            status: Status::Active,
        })
    }

    /// Builds a state and extends it to `target_len` terms (or until it halts).
    pub fn generate(
        spec: RecursionSpec,
        initial_conditions: &[u64],
        target_len: u64,
    ) -> Result<Self> {
        let mut state = Self::new(spec, initial_conditions)?;
        state.extend(target_len);
        Ok(state)
    }

    pub fn spec(&self) -> &RecursionSpec {
        &self.spec
    }

    /// The computed terms; element `i` is term `i + 1`.
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> u64 {
        self.terms.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn ic_len(&self) -> u64 {
        self.ic_len
    }

    pub fn initial_conditions(&self) -> &[u64] {
        &self.terms[..self.ic_len as usize]
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn is_halted(&self) -> bool {
        matches!(self.status, Status::Halted { .. })
    }

    pub fn halt_reason(&self) -> Option<&StepFailure> {
        match &self.status {
            Status::Halted { reason, .. } => Some(reason),
            Status::Active => None,
        }
    }

    /// Term `n` (1-based), if computed.
    pub fn term(&self, n: u64) -> Option<u64> {
        if n == 0 {
            return None;
        }
        self.terms.get((n - 1) as usize).copied()
    }

    fn check_index(&self, n: u64, low: u64) -> Result<()> {
        if n < low || n > self.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                low,
                high: self.len(),
            });
        }
        Ok(())
    }

    /// `A^depth(m)` over the current table. Intermediate arguments must stay
    /// within `[1, len]`.
    pub fn compose(&self, depth: u32, m: u64) -> Result<u64> {
        self.check_index(m, 1)?;
        let view = Prefix { terms: &self.terms };
        view.compose(self.len() + 1, depth, m as i64, &mut NoRecord)
            .map(|v| v as u64)
            .map_err(|d| Error::Step(StepFailure::Undefined(d)))
    }

    /// `A^depth(m)` as seen while evaluating term `n`, i.e. over terms
    /// `1..n-1` only.
    pub(crate) fn compose_before(&self, n: u64, depth: u32, m: i64) -> Result<u64> {
        self.check_index(n - 1, 1)?;
        let view = Prefix {
            terms: &self.terms[..(n - 1) as usize],
        };
        view.compose(n, depth, m, &mut NoRecord)
            .map(|v| v as u64)
            .map_err(|d| Error::Step(StepFailure::Undefined(d)))
    }

    /// Computes and appends the next term. On failure the state halts; calling
    /// `step` again on a halted state returns the same failure.
    pub fn step(&mut self) -> std::result::Result<u64, StepFailure> {
        if let Status::Halted { reason, .. } = &self.status {
            return Err(reason.clone());
        }
        match evaluate(&self.spec, &self.terms, &mut NoRecord) {
            Ok(v) => {
                self.terms.push(v);
                Ok(v)
            }
            Err(reason) => {
                self.status = Status::Halted {
                    at: reason.index(),
                    reason: reason.clone(),
                };
                Err(reason)
            }
        }
    }

    /// Steps until `len == target_len` or the state halts.
    pub fn extend(&mut self, target_len: u64) -> &Status {
        if target_len > self.len() && !self.is_halted() {
            self.terms.reserve((target_len - self.len()) as usize);
            while self.len() < target_len {
                if self.step().is_err() {
                    break;
                }
            }
        }
        &self.status
    }

    /// Consuming form of [`extend`](Self::extend).
    pub fn extended(mut self, target_len: u64) -> Self {
        self.extend(target_len);
        self
    }

    /// `term(n) - term(n - 1)`; may be negative for pathological tables.
    pub fn delta(&self, n: u64) -> Result<i64> {
        self.check_index(n, 2)?;
        Ok(delta_unchecked(&self.terms, n))
    }

    /// Re-derives the evaluation of a recursively computed term.
    pub fn trace(&self, n: u64) -> Result<EvalTrace> {
        self.check_index(n, 1)?;
        if n <= self.ic_len {
            return Err(Error::TraceOfInitialCondition { index: n });
        }
        let mut rec = TraceRecord::default();
        let result = evaluate(&self.spec, &self.terms[..(n - 1) as usize], &mut rec)?;
        Ok(EvalTrace {
            n,
            composition_chain: rec.chain,
            summand_arguments: rec.summands,
            result,
        })
    }
}

/// Difference of 1-based terms `n` and `n - 1` of a raw table.
pub(crate) fn delta_unchecked(terms: &[u64], n: u64) -> i64 {
    let i = (n - 1) as usize;
    terms[i] as i64 - terms[i - 1] as i64
}

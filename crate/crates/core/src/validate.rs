//! Sufficient conditions for everywhere-defined, slow-growing sequences.
//!
//! Conway type, given `b + j` initial conditions:
//!
//! * I: the initial conditions are positive, slow-growing and start at 1;
//! * II: `A(b + j + 1)` is defined and `A(b + j + 1) - A(b + j)` is 0 or 1.
//!
//! Conolly type with shift `s`, given `r >= 3` positive initial conditions:
//!
//! * I: `C(r + 1)` is defined;
//! * II: no `3 <= n <= r` has `Δ(n) = Δ(n - 1) = 1`;
//! * III: the sequence is slow-growing up to term `r + 1`.
//!
//! Validators take at most one recursion step.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{SequenceState, StepFailure};
use crate::spec::{Conolly, Conway, RecursionSpec};

/// The index and observed values that make a hypothesis fail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub index: u64,
    pub values: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Witness {
    fn new(index: u64, values: Vec<i64>) -> Self {
        Witness {
            index,
            values,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: &'static str,
    pub description: &'static str,
    pub satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Hypothesis {
    fn check(name: &'static str, description: &'static str, failure: Option<Witness>) -> Self {
        Hypothesis {
            name,
            description,
            satisfied: failure.is_none(),
            witness: failure,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub spec: RecursionSpec,
    pub hypotheses: Vec<Hypothesis>,
    /// Extra checks outside the stated hypotheses; they do not affect `overall`.
    pub advisories: Vec<Hypothesis>,
    pub overall: bool,
    pub guarantees: Option<&'static str>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    fn finish(
        spec: RecursionSpec,
        hypotheses: Vec<Hypothesis>,
        advisories: Vec<Hypothesis>,
        guarantee: &'static str,
        notes: Vec<String>,
    ) -> Self {
        let overall = hypotheses.iter().all(|h| h.satisfied);
        ValidationReport {
            spec,
            hypotheses,
            advisories,
            overall,
            guarantees: overall.then_some(guarantee),
            notes,
        }
    }

    pub fn hypothesis(&self, name: &str) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| h.name == name)
    }

    /// Names of the failed hypotheses, in report order.
    pub fn failed(&self) -> Vec<&'static str> {
        self.hypotheses
            .iter()
            .filter(|h| !h.satisfied)
            .map(|h| h.name)
            .collect()
    }
}

pub const CONWAY_GUARANTEE: &str =
    "A(n) is defined for all positive integers n, remains slow-growing, and is unbounded";

pub const CONOLLY_GUARANTEE: &str =
    "C(n) is defined and slow-growing for all n >= 1, and no n >= 3 \
     has Δ(n) = Δ(n-1) = 1";

fn first_non_slow(values: &[u64]) -> Option<Witness> {
    values.windows(2).enumerate().find_map(|(i, w)| {
        let d = w[1] as i64 - w[0] as i64;
        (!(0..=1).contains(&d)).then(|| Witness::new(i as u64 + 2, vec![d]))
    })
}

fn failure_witness(f: &StepFailure) -> Witness {
    match f {
        StepFailure::Undefined(d) => {
            Witness::new(d.n, vec![d.computed_value, d.required.low, d.required.high])
                .with_note(d.to_string())
        }
        StepFailure::Overflow { n } => Witness::new(*n, vec![]).with_note(f.to_string()),
    }
}

/// Checks both hypotheses of the Conway-type sufficient condition.
pub fn validate_conway(spec: &Conway, ics: &[u64]) -> Result<ValidationReport> {
    if ics.is_empty() {
        return Err(Error::EmptyInitialConditions);
    }
    let required = u64::from(spec.b());
    let given = ics.len() as u64;
    if given < required {
        return Err(Error::TooFewInitialConditions { required, given });
    }
    let next = given + 1;

    let positive = ics
        .iter()
        .position(|&v| v == 0)
        .map(|i| Witness::new(i as u64 + 1, vec![0]));
    let slow = first_non_slow(ics);
    let starts_at_one = (ics[0] != 1).then(|| Witness::new(1, vec![ics[0] as i64]));

    let mut notes = Vec::new();
    if spec.b() > spec.a() {
        notes.push(format!(
            "b = {} > a = {}: A({next}) is defined whenever hypothesis I holds",
            spec.b(),
            spec.a()
        ));
    }

    let (defined, step_slow) = if positive.is_some() {
        let skipped = Witness::new(next, vec![])
            .with_note("not evaluated: initial conditions are not positive");
        (Some(skipped.clone()), Some(skipped))
    } else {
        let mut state = SequenceState::new(RecursionSpec::Conway(*spec), ics)?;
        match state.step() {
            Ok(v) => {
                let d = v as i64 - *ics.last().unwrap() as i64;
                let slow = (!(0..=1).contains(&d)).then(|| Witness::new(next, vec![d]));
                (None, slow)
            }
            Err(f) => {
                let w = failure_witness(&f);
                (Some(w.clone()), Some(w))
            }
        }
    };

    let hypotheses = vec![
        Hypothesis::check("I.a", "initial conditions are positive integers", positive),
        Hypothesis::check("I.b", "initial conditions are slow-growing", slow),
        Hypothesis::check("I.c", "A(1) = 1", starts_at_one),
        Hypothesis::check("II.defined", "A(b+j+1) is defined", defined),
        Hypothesis::check("II.slow", "A(b+j+1) - A(b+j) is 0 or 1", step_slow),
    ];
    Ok(ValidationReport::finish(
        RecursionSpec::Conway(*spec),
        hypotheses,
        Vec::new(),
        CONWAY_GUARANTEE,
        notes,
    ))
}

/// Checks the three hypotheses of the Conolly-type sufficient condition.
///
/// Hypothesis II is evaluated over indices `3..=r` only. Whether the fresh
/// term `r + 1` forms a second consecutive increment with term `r` is
/// reported separately as the advisory `II.next`.
pub fn validate_conolly(spec: &Conolly, ics: &[u64]) -> Result<ValidationReport> {
    let mut state = SequenceState::new(RecursionSpec::Conolly(*spec), ics)?;
    let r = ics.len() as u64;
    let deltas: Vec<i64> = ics.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect();

    // deltas[i] is Δ(i + 2)
    let consecutive = deltas
        .windows(2)
        .enumerate()
        .find(|(_, w)| w[0] == 1 && w[1] == 1)
        .map(|(i, w)| Witness::new(i as u64 + 3, w.to_vec()));

    let step = state.step();
    let defined = step.as_ref().err().map(failure_witness);
    let slow = first_non_slow(ics).or_else(|| match &step {
        Ok(v) => {
            let d = *v as i64 - ics[ics.len() - 1] as i64;
            (!(0..=1).contains(&d)).then(|| Witness::new(r + 1, vec![d]))
        }
        Err(_) => Some(Witness::new(r + 1, vec![]).with_note("term r+1 is undefined")),
    });
    let next_consecutive = match (&step, deltas.last()) {
        (Ok(v), Some(&last)) => {
            let d = *v as i64 - ics[ics.len() - 1] as i64;
            (last == 1 && d == 1).then(|| Witness::new(r + 1, vec![last, d]))
        }
        _ => None,
    };

    let hypotheses = vec![
        Hypothesis::check("I", "C(r+1) is defined", defined),
        Hypothesis::check("II", "no 3 <= n <= r has Δ(n) = Δ(n-1) = 1", consecutive),
        Hypothesis::check("III", "slow-growing up to term r+1", slow),
    ];
    let advisories = vec![Hypothesis::check(
        "II.next",
        "Δ(r+1) and Δ(r) are not both 1",
        next_consecutive,
    )];
    Ok(ValidationReport::finish(
        RecursionSpec::Conolly(*spec),
        hypotheses,
        advisories,
        CONOLLY_GUARANTEE,
        Vec::new(),
    ))
}

/// Dispatches on the family; `None` where no sufficient condition is known.
pub fn validate(spec: &RecursionSpec, ics: &[u64]) -> Result<Option<ValidationReport>> {
    match spec {
        RecursionSpec::Conway(p) => validate_conway(p, ics).map(Some),
        RecursionSpec::Conolly(p) => validate_conolly(p, ics).map(Some),
        _ => Ok(None),
    }
}

/// The definedness test for Conway term `n`: `0 < A^k(n - b) < n - a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DefinednessCheck {
    pub holds: bool,
    pub value: u64,
    pub bound: i64,
}

/// Evaluates the Conway definedness condition at `n`, for
/// `ic_len < n <= len + 1`, using terms `1..n-1`.
pub fn check_definedness(state: &SequenceState, n: u64) -> Result<DefinednessCheck> {
    let RecursionSpec::Conway(p) = state.spec() else {
        return Err(Error::WrongFamily { expected: "conway" });
    };
    if n <= state.ic_len() || n > state.len() + 1 {
        return Err(Error::IndexOutOfRange {
            index: n,
            low: state.ic_len() + 1,
            high: state.len() + 1,
        });
    }
    let value = state.compose_before(n, p.k(), n as i64 - i64::from(p.b()))?;
    let bound = n as i64 - i64::from(p.a());
    Ok(DefinednessCheck {
        holds: 0 < value as i64 && (value as i64) < bound,
        value,
        bound,
    })
}

//! Parameter and initial-condition sweeps.
//!
//! A grid expands into an ordered list of [`SurveyPoint`]s. Points are
//! classified independently (in parallel) and the records come back in point
//! order, so any prefix of the point list yields a prefix of the full result.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sequence::{SequenceState, StepFailure};
use crate::spec::{GeneralConolly, RecursionSpec};
use crate::validate::{self, ValidationReport};

/// A concrete initial-condition block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pattern", rename_all = "snake_case")]
pub enum IcPattern {
    Ones {
        len: u64,
    },
    /// `1, 1, 2, 2, 3, 3, ...`
    Staircase {
        len: u64,
    },
    Explicit {
        values: Vec<u64>,
    },
}

impl IcPattern {
    pub fn values(&self) -> Vec<u64> {
        match self {
            IcPattern::Ones { len } => vec![1; *len as usize],
            IcPattern::Staircase { len } => (0..*len).map(|i| i / 2 + 1).collect(),
            IcPattern::Explicit { values } => values.clone(),
        }
    }

    pub fn len(&self) -> u64 {
        match self {
            IcPattern::Ones { len } | IcPattern::Staircase { len } => *len,
            IcPattern::Explicit { values } => values.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Lengths either absolute or measured from the spec's minimum number of
/// initial conditions (`b` for Conway, `max(b, c)` for the variant, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthRange {
    pub lo: u64,
    pub hi: u64,
    pub relative: bool,
}

impl LengthRange {
    pub fn absolute(r: RangeInclusive<u64>) -> Self {
        LengthRange {
            lo: *r.start(),
            hi: *r.end(),
            relative: false,
        }
    }

    pub fn after_minimum(r: RangeInclusive<u64>) -> Self {
        LengthRange {
            lo: *r.start(),
            hi: *r.end(),
            relative: true,
        }
    }

    fn lengths(&self, minimum: u64) -> RangeInclusive<u64> {
        if self.relative {
            minimum + self.lo..=minimum + self.hi
        } else {
            self.lo..=self.hi
        }
    }
}

/// A family of initial-condition blocks to try at every parameter point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pattern", rename_all = "snake_case")]
pub enum IcFamily {
    Ones(LengthRange),
    Staircase(LengthRange),
    Explicit(Vec<u64>),
}

impl IcFamily {
    fn expand(&self, minimum: u64) -> Vec<IcPattern> {
        match self {
            IcFamily::Ones(r) => r
                .lengths(minimum)
                .map(|len| IcPattern::Ones { len })
                .collect(),
            IcFamily::Staircase(r) => r
                .lengths(minimum)
                .map(|len| IcPattern::Staircase { len })
                .collect(),
            IcFamily::Explicit(v) => vec![IcPattern::Explicit { values: v.clone() }],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyPoint {
    pub spec: RecursionSpec,
    pub ics: IcPattern,
    pub horizon: u64,
}

/// First event met while generating a point, in index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    SlowToHorizon,
    HaltedAt {
        n: u64,
        failure: StepFailure,
    },
    NonSlowAt {
        n: u64,
        delta: i64,
    },
    /// Conolly family only: `Δ(n) = Δ(n - 1) = 1`.
    ConsecutiveIncrementsAt {
        n: u64,
    },
    ConstructionError {
        message: String,
    },
}

impl Outcome {
    pub fn is_slow_to_horizon(&self) -> bool {
        matches!(self, Outcome::SlowToHorizon)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::SlowToHorizon => "slow_to_horizon",
            Outcome::HaltedAt { .. } => "halted_at",
            Outcome::NonSlowAt { .. } => "non_slow_at",
            Outcome::ConsecutiveIncrementsAt { .. } => "consecutive_increments_at",
            Outcome::ConstructionError { .. } => "construction_error",
        }
    }

    /// Index of the event, when there is one.
    pub fn index(&self) -> Option<u64> {
        match self {
            Outcome::HaltedAt { n, .. }
            | Outcome::NonSlowAt { n, .. }
            | Outcome::ConsecutiveIncrementsAt { n } => Some(*n),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictSummary {
    pub overall: bool,
    pub failed: Vec<&'static str>,
    pub advisories_failed: Vec<&'static str>,
}

impl From<&ValidationReport> for VerdictSummary {
    fn from(r: &ValidationReport) -> Self {
        VerdictSummary {
            overall: r.overall,
            failed: r.failed(),
            advisories_failed: r
                .advisories
                .iter()
                .filter(|h| !h.satisfied)
                .map(|h| h.name)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyRecord {
    pub spec: RecursionSpec,
    pub ics: IcPattern,
    pub horizon: u64,
    pub outcome: Outcome,
    pub validator: Option<VerdictSummary>,
    /// The validator passed but the outcome is not `SlowToHorizon`.
    pub validator_conflict: bool,
    /// Terms available when the outcome was decided.
    pub generated: u64,
    pub max_value: u64,
    pub final_ratio: f64,
}

fn event_at(terms: &[u64], n: u64, consecutive: bool) -> Option<Outcome> {
    if n < 2 {
        return None;
    }
    let i = (n - 1) as usize;
    let d = terms[i] as i64 - terms[i - 1] as i64;
    if !(0..=1).contains(&d) {
        return Some(Outcome::NonSlowAt { n, delta: d });
    }
    if consecutive && n >= 3 && d == 1 && terms[i - 1] as i64 - terms[i - 2] as i64 == 1 {
        return Some(Outcome::ConsecutiveIncrementsAt { n });
    }
    None
}

/// Generates one point up to its horizon and records the first event.
pub fn classify(point: &SurveyPoint) -> SurveyRecord {
    let ics = point.ics.values();
    let mut record = SurveyRecord {
        spec: point.spec.clone(),
        ics: point.ics.clone(),
        horizon: point.horizon,
        outcome: Outcome::SlowToHorizon,
        validator: None,
        validator_conflict: false,
        generated: 0,
        max_value: 0,
        final_ratio: 0.0,
    };
    if point.horizon < ics.len() as u64 {
        record.outcome = Outcome::ConstructionError {
            message: format!(
                "horizon {} is shorter than the {} initial conditions",
                point.horizon,
                ics.len()
            ),
        };
        return record;
    }
    let mut state = match SequenceState::new(point.spec.clone(), &ics) {
        Ok(s) => s,
        Err(e) => {
            record.outcome = Outcome::ConstructionError {
                message: e.to_string(),
            };
            return record;
        }
    };
    record.validator = validate::validate(&point.spec, &ics)
        .ok()
        .flatten()
        .as_ref()
        .map(VerdictSummary::from);

    let consecutive = matches!(point.spec, RecursionSpec::Conolly(_));
    let mut outcome = (2..=state.len()).find_map(|n| event_at(state.terms(), n, consecutive));
    while outcome.is_none() && state.len() < point.horizon {
        match state.step() {
            Ok(_) => outcome = event_at(state.terms(), state.len(), consecutive),
            Err(failure) => {
                outcome = Some(Outcome::HaltedAt {
                    n: failure.index(),
                    failure,
                })
            }
        }
    }
    record.outcome = outcome.unwrap_or(Outcome::SlowToHorizon);
    record.generated = state.len();
    record.max_value = state.terms().iter().copied().max().unwrap_or(0);
    record.final_ratio = state.terms()[state.terms().len() - 1] as f64 / state.len() as f64;
    record.validator_conflict = record.validator.as_ref().is_some_and(|v| v.overall)
        && !record.outcome.is_slow_to_horizon();
    record
}

/// Classifies every point in parallel; records keep the point order.
pub fn run(points: &[SurveyPoint]) -> Vec<SurveyRecord> {
    points.par_iter().map(classify).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConwayGrid {
    pub k: RangeInclusive<u32>,
    pub a: RangeInclusive<u32>,
    pub b: RangeInclusive<u32>,
    pub ics: Vec<IcFamily>,
    pub horizon: u64,
}

impl ConwayGrid {
    /// Points in `(k, a, b, ics)` lexicographic order.
    pub fn points(&self) -> Result<Vec<SurveyPoint>> {
        let mut out = Vec::new();
        for k in self.k.clone() {
            for a in self.a.clone() {
                for b in self.b.clone() {
                    let spec = RecursionSpec::conway(k, a, b)?;
                    push_points(&mut out, spec, &self.ics, self.horizon);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantGrid {
    pub k: RangeInclusive<u32>,
    pub a: RangeInclusive<u32>,
    pub b: RangeInclusive<u32>,
    pub c: RangeInclusive<u32>,
    pub ics: Vec<IcFamily>,
    pub horizon: u64,
}

impl VariantGrid {
    pub fn points(&self) -> Result<Vec<SurveyPoint>> {
        let mut out = Vec::new();
        for k in self.k.clone() {
            for a in self.a.clone() {
                for b in self.b.clone() {
                    for c in self.c.clone() {
                        let spec = RecursionSpec::variant(k, a, b, c)?;
                        push_points(&mut out, spec, &self.ics, self.horizon);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConollyGrid {
    pub s: RangeInclusive<u32>,
    pub ics: Vec<IcFamily>,
    pub horizon: u64,
}

impl ConollyGrid {
    pub fn points(&self) -> Result<Vec<SurveyPoint>> {
        let mut out = Vec::new();
        for s in self.s.clone() {
            push_points(&mut out, RecursionSpec::conolly(s), &self.ics, self.horizon);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralGrid {
    pub specs: Vec<GeneralConolly>,
    pub ics: Vec<IcFamily>,
    pub horizon: u64,
}

impl GeneralGrid {
    pub fn points(&self) -> Result<Vec<SurveyPoint>> {
        let mut out = Vec::new();
        for g in &self.specs {
            let spec = RecursionSpec::GeneralConolly(g.clone());
            push_points(&mut out, spec, &self.ics, self.horizon);
        }
        Ok(out)
    }
}

fn push_points(out: &mut Vec<SurveyPoint>, spec: RecursionSpec, ics: &[IcFamily], horizon: u64) {
    let minimum = spec.min_initial_conditions();
    for family in ics {
        for pattern in family.expand(minimum) {
            out.push(SurveyPoint {
                spec: spec.clone(),
                ics: pattern,
                horizon,
            });
        }
    }
}

pub fn survey_conway(grid: &ConwayGrid) -> Result<Vec<SurveyRecord>> {
    Ok(run(&grid.points()?))
}

pub fn survey_variant(grid: &VariantGrid) -> Result<Vec<SurveyRecord>> {
    Ok(run(&grid.points()?))
}

pub fn survey_conolly(grid: &ConollyGrid) -> Result<Vec<SurveyRecord>> {
    Ok(run(&grid.points()?))
}

pub fn survey_general(grid: &GeneralGrid) -> Result<Vec<SurveyRecord>> {
    Ok(run(&grid.points()?))
}

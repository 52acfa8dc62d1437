//! Ratio diagnostics `term(n) / n` and the growth root of `E`.
//!
//! Ratios are kept as exact reduced fractions; the `f64` fields exist for
//! display and plotting only. Comparisons between ratios are done by
//! cross-multiplication in `u128`.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::SequenceState;
use crate::spec::RecursionSpec;

fn characteristic(k: u32, x: f64) -> f64 {
    // x^k - x^(k-1) - 1 written as x^(k-1) (x - 1) - 1
    x.powi(k as i32 - 1) * (x - 1.0) - 1.0
}

/// Largest positive root of `x^k - x^(k-1) - 1`, by bisection on `[1, 2]`.
///
/// The polynomial is -1 at 1 and `2^(k-1) - 1 >= 0` at 2; the returned value
/// is the midpoint of a bracket no wider than `tolerance` (or the narrowest
/// bracket `f64` can represent).
pub fn phi_k(k: u32, tolerance: f64) -> Result<f64> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::NonPositiveTolerance(tolerance));
    }
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            value: 0,
            min: 1,
        });
    }
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    if characteristic(k, hi) == 0.0 {
        return Ok(hi);
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let p = characteristic(k, mid);
        if p == 0.0 {
            return Ok(mid);
        }
        if p < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// |x^k - x^(k-1) - 1|.
pub fn characteristic_residual(k: u32, x: f64) -> f64 {
    characteristic(k, x).abs()
}

/// An exact ratio `numer / denom` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub numer: u64,
    pub denom: u64,
}

impl Fraction {
    pub fn new(numer: u64, denom: u64) -> Self {
        let g = numer.gcd(&denom).max(1);
        Fraction {
            numer: numer / g,
            denom: denom / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.numer as f64 / self.denom as f64
    }

    /// `self > other`, exactly.
    pub fn gt(self, other: Fraction) -> bool {
        u128::from(self.numer) * u128::from(other.denom)
            > u128::from(other.numer) * u128::from(self.denom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSample {
    pub index: u64,
    pub value: u64,
    pub ratio: Fraction,
    pub decimal: f64,
}

impl RatioSample {
    fn at(state: &SequenceState, index: u64) -> Result<Self> {
        let value = state.term(index).ok_or(Error::IndexOutOfRange {
            index,
            low: 1,
            high: state.len(),
        })?;
        let ratio = Fraction::new(value, index);
        Ok(RatioSample {
            index,
            value,
            ratio,
            decimal: ratio.to_f64(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SampleSchedule {
    Explicit {
        indices: Vec<u64>,
    },
    /// `1, base, base^2, ...` up to the table length, then the length itself.
    Geometric {
        base: u64,
    },
}

impl SampleSchedule {
    pub fn indices(&self, len: u64) -> Result<Vec<u64>> {
        match self {
            SampleSchedule::Explicit { indices } => Ok(indices.clone()),
            SampleSchedule::Geometric { base } => {
                if *base < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "geometric base must be at least 2, got {base}"
                    )));
                }
                let mut out = Vec::new();
                let mut i = 1u64;
                while i <= len {
                    out.push(i);
                    i = match i.checked_mul(*base) {
                        Some(v) => v,
                        None => break,
                    };
                }
                if out.last() != Some(&len) && len > 0 {
                    out.push(len);
                }
                Ok(out)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reference {
    /// `1 / phi_k`, the limit `A(n)/n` must take if it exists.
    PhiInverse {
        k: u32,
    },
    Half,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceComparison {
    pub reference: Reference,
    pub value: f64,
    /// `ratio(last sample) - value`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub spec: RecursionSpec,
    pub samples: Vec<RatioSample>,
    pub tail_window: (u64, u64),
    pub tail_max: RatioSample,
    pub tail_min: RatioSample,
    pub reference: Option<ReferenceComparison>,
    /// Set unless the limit of `term(n)/n` is known to exist for this
    /// sequence; the report then describes data and asserts nothing.
    pub descriptive_only: bool,
    pub note: &'static str,
}

const NOTE_MALLOWS: &str = "the limit of A(n)/n is known to be 1/2 for this sequence";
const NOTE_OPEN: &str =
    "whether A(n)/n converges is open for k >= 2; if it does, the limit is 1/phi_k";
const NOTE_CONOLLY: &str = "limsup C(n)/n <= 1/2 under the Conolly sufficient conditions; \
     whether the limit exists is not settled";
const NOTE_NONE: &str = "no limit is known for this sequence";

fn limit_status(state: &SequenceState) -> (bool, &'static str) {
    match state.spec() {
        RecursionSpec::Conway(p) if p.a() == 0 && p.b() == 1 => {
            if p.k() == 1 && state.initial_conditions() == [1, 1] {
                (false, NOTE_MALLOWS)
            } else {
                (true, NOTE_OPEN)
            }
        }
        RecursionSpec::Conolly(_) => (true, NOTE_CONOLLY),
        _ => (true, NOTE_NONE),
    }
}

/// Ratio samples, exact running extrema over a tail window and an optional
/// reference comparison at the last sample.
///
/// `tail` defaults to the second half of the table, `[ceil(len/2), len]`.
pub fn ratio_report(
    state: &SequenceState,
    schedule: &SampleSchedule,
    reference: Reference,
    tail: Option<(u64, u64)>,
) -> Result<RatioReport> {
    let len = state.len();
    let samples = schedule
        .indices(len)?
        .into_iter()
        .map(|i| RatioSample::at(state, i))
        .collect::<Result<Vec<_>>>()?;

    let (lo, hi) = tail.unwrap_or((len.div_ceil(2).max(1), len));
    if lo < 1 || lo > hi || hi > len {
        return Err(Error::IndexOutOfRange {
            index: if lo < 1 || lo > hi { lo } else { hi },
            low: 1,
            high: len,
        });
    }
    let mut tail_max = RatioSample::at(state, lo)?;
    let mut tail_min = tail_max;
    for n in lo + 1..=hi {
        let r = Fraction::new(state.term(n).unwrap(), n);
        if r.gt(tail_max.ratio) {
            tail_max = RatioSample::at(state, n)?;
        } else if tail_min.ratio.gt(r) {
            tail_min = RatioSample::at(state, n)?;
        }
    }

    let reference_value = match reference {
        Reference::PhiInverse { k } => Some(1.0 / phi_k(k, 1e-12)?),
        Reference::Half => Some(0.5),
        Reference::None => None,
    };
    let comparison = match (reference_value, samples.last()) {
        (Some(value), Some(last)) => Some(ReferenceComparison {
            reference,
            value,
            deviation: last.decimal - value,
        }),
        _ => None,
    };
    let (descriptive_only, note) = limit_status(state);
    Ok(RatioReport {
        spec: state.spec().clone(),
        samples,
        tail_window: (lo, hi),
        tail_max,
        tail_min,
        reference: comparison,
        descriptive_only,
        note,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfBoundCheck {
    pub window: (u64, u64),
    pub max_ratio: Fraction,
    pub max_ratio_decimal: f64,
    pub argmax: u64,
    /// `(C(1) + 2) / low`, from `C(n) <= C(1) + floor((n-1)/2) + 1`.
    pub slack: f64,
    pub satisfies_half_bound: bool,
}

/// Maximum of `C(n)/n` over `window` against `1/2 + (C(1) + 2)/low`.
///
/// Meaningful for Conolly states that pass the sufficient conditions; the
/// bound itself is exact integer arithmetic.
pub fn half_bound_check(state: &SequenceState, window: (u64, u64)) -> Result<HalfBoundCheck> {
    if !matches!(state.spec(), RecursionSpec::Conolly(_)) {
        return Err(Error::WrongFamily {
            expected: "conolly",
        });
    }
    let (lo, hi) = window;
    if lo < 1 || lo > hi || hi > state.len() {
        return Err(Error::IndexOutOfRange {
            index: if lo < 1 || lo > hi { lo } else { hi },
            low: 1,
            high: state.len(),
        });
    }
    let mut best = Fraction::new(state.term(lo).unwrap(), lo);
    let mut argmax = lo;
    for n in lo + 1..=hi {
        let r = Fraction::new(state.term(n).unwrap(), n);
        if r.gt(best) {
            best = r;
            argmax = n;
        }
    }
    let c1 = u128::from(state.term(1).unwrap());
    // C(n)/n <= 1/2 + (C(1)+2)/lo  <=>  2 lo C(n) <= lo n + 2 (C(1)+2) n
    let (num, den) = (u128::from(best.numer), u128::from(best.denom));
    let lo128 = u128::from(lo);
    let satisfies = 2 * lo128 * num <= lo128 * den + 2 * (c1 + 2) * den;
    Ok(HalfBoundCheck {
        window,
        max_ratio: best,
        max_ratio_decimal: best.to_f64(),
        argmax,
        slack: (c1 + 2) as f64 / lo as f64,
        satisfies_half_bound: satisfies,
    })
}

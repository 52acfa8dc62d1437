//! Sequence-level checks run over computed term tables.
//!
//! Term tables are passed as slices where element `i` is term `i + 1`;
//! ranges are 1-based and inclusive.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{delta_unchecked, SequenceState};
use crate::spec::{RecursionSpec, Summand};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: u64,
    pub observed: Vec<i64>,
}

/// Outcome of one property check; `holds` iff `first_violation` is `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub property: &'static str,
    pub holds: bool,
    pub first_violation: Option<Violation>,
    pub checked_range: (u64, u64),
}

impl CheckResult {
    fn new(
        property: &'static str,
        range: &RangeInclusive<u64>,
        violation: Option<Violation>,
    ) -> Self {
        CheckResult {
            property,
            holds: violation.is_none(),
            first_violation: violation,
            checked_range: (*range.start(), *range.end()),
        }
    }
}

fn check_range(range: &RangeInclusive<u64>, low: u64, high: u64) -> Result<()> {
    for &i in [range.start(), range.end()] {
        if i < low || i > high {
            return Err(Error::IndexOutOfRange {
                index: i,
                low,
                high,
            });
        }
    }
    Ok(())
}

fn term(terms: &[u64], n: u64) -> u64 {
    terms[(n - 1) as usize]
}

/// Every `Δ(n)` in `range` is 0 or 1. The range must lie in `[2, len]`.
pub fn check_slow_growth(terms: &[u64], range: RangeInclusive<u64>) -> Result<CheckResult> {
    check_range(&range, 2, terms.len() as u64)?;
    let violation = range.clone().find_map(|n| {
        let d = delta_unchecked(terms, n);
        (!(0..=1).contains(&d)).then(|| Violation {
            index: n,
            observed: vec![d],
        })
    });
    Ok(CheckResult::new("slow_growth", &range, violation))
}

/// No `n` in `range` has `Δ(n) = Δ(n - 1) = 1`. The range must lie in `[3, len]`.
pub fn check_no_consecutive_increments(
    terms: &[u64],
    range: RangeInclusive<u64>,
) -> Result<CheckResult> {
    check_range(&range, 3, terms.len() as u64)?;
    let violation = range.clone().find_map(|n| {
        let prev = delta_unchecked(terms, n - 1);
        let cur = delta_unchecked(terms, n);
        (prev == 1 && cur == 1).then(|| Violation {
            index: n,
            observed: vec![prev, cur],
        })
    });
    Ok(CheckResult::new(
        "no_consecutive_increments",
        &range,
        violation,
    ))
}

fn conolly_shift(state: &SequenceState) -> Result<u64> {
    match state.spec() {
        RecursionSpec::Conolly(p) => Ok(p.s().into()),
        _ => Err(Error::WrongFamily {
            expected: "conolly",
        }),
    }
}

/// The two summands of a recursively computed Conolly term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Split {
    pub c1: u64,
    pub c2: u64,
}

fn split_unchecked(terms: &[u64], s: u64, n: u64) -> Split {
    let c1 = term(terms, n - s - term(terms, n - 1));
    let c2 = term(terms, n - s - 2 - term(terms, n - 3));
    Split { c1, c2 }
}

/// `C1(n) = C(n - s - C(n - 1))` and `C2(n) = C(n - s - 2 - C(n - 3))`, for
/// `r + 1 <= n <= len`.
pub fn split_components(state: &SequenceState, n: u64) -> Result<Split> {
    let s = conolly_shift(state)?;
    check_range(&(n..=n), state.ic_len() + 1, state.len())?;
    Ok(split_unchecked(state.terms(), s, n))
}

/// `C1(n) - C2(n)` is 0 or 1 and, by the parity of `C(n)`, either
/// `C1 = C2 = C(n)/2` or `C1 = C2 + 1 = (C(n) + 1)/2`.
pub fn check_split_law(state: &SequenceState, range: RangeInclusive<u64>) -> Result<CheckResult> {
    let s = conolly_shift(state)?;
    check_range(&range, state.ic_len() + 1, state.len())?;
    let terms = state.terms();
    let violation = range.clone().find_map(|n| {
        let Split { c1, c2 } = split_unchecked(terms, s, n);
        let c = term(terms, n);
        let ok = if c.is_multiple_of(2) {
            c1 == c2 && c1 == c / 2
        } else {
            c1 == c2 + 1 && c1 == c.div_ceil(2)
        };
        (!ok).then(|| Violation {
            index: n,
            observed: vec![c1 as i64, c2 as i64, c as i64],
        })
    });
    Ok(CheckResult::new("split_law", &range, violation))
}

fn summands_of(state: &SequenceState) -> Result<Vec<Summand>> {
    state.spec().conolly_summands().ok_or(Error::WrongFamily {
        expected: "conolly or general conolly",
    })
}

fn components_unchecked(terms: &[u64], summands: &[Summand], n: u64) -> Vec<i64> {
    let part = |m: u64, t: &Summand| {
        let a = u64::from(t.a());
        let b = u64::from(t.b());
        term(terms, m - a - term(terms, m - b)) as i64
    };
    summands
        .iter()
        .map(|t| part(n, t) - part(n - 1, t))
        .collect()
}

/// `Δ_i(n) = C(n - a_i - C(n - b_i)) - C(n - 1 - a_i - C(n - 1 - b_i))` for
/// each summand, valid for `r + 1 < n <= len`. The components sum to `Δ(n)`.
pub fn delta_decomposition(state: &SequenceState, n: u64) -> Result<Vec<i64>> {
    let summands = summands_of(state)?;
    check_range(&(n..=n), state.ic_len() + 2, state.len())?;
    Ok(components_unchecked(state.terms(), &summands, n))
}

/// Every `Δ_i(n)` is 0 or 1 and the components sum to `Δ(n)`.
pub fn check_delta_components(
    state: &SequenceState,
    range: RangeInclusive<u64>,
) -> Result<CheckResult> {
    let summands = summands_of(state)?;
    check_range(&range, state.ic_len() + 2, state.len())?;
    let terms = state.terms();
    let violation = range.clone().find_map(|n| {
        let parts = components_unchecked(terms, &summands, n);
        let sum: i64 = parts.iter().sum();
        let ok = sum == delta_unchecked(terms, n) && parts.iter().all(|d| (0..=1).contains(d));
        (!ok).then_some(Violation {
            index: n,
            observed: parts,
        })
    });
    Ok(CheckResult::new("delta_components", &range, violation))
}

/// `E_n = E_{n-1} + E_{n-k}` with `E_1 = ... = E_k = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ESequence {
    pub k: u32,
    values: Vec<u64>,
}

impl ESequence {
    /// `E_n` for `1 <= n <= len`.
    pub fn get(&self, n: u64) -> Option<u64> {
        n.checked_sub(1)
            .and_then(|i| self.values.get(i as usize))
            .copied()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn push_next(&mut self) -> Result<u64> {
        let n = self.values.len();
        let k = self.k as usize;
        let next = self.values[n - 1].checked_add(self.values[n - k]).ok_or(
            Error::ArithmeticOverflow {
                index: n as u64 + 1,
            },
        )?;
        self.values.push(next);
        Ok(next)
    }

    fn seed(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter {
                name: "k",
                value: 0,
                min: 1,
            });
        }
        Ok(ESequence {
            k,
            values: vec![1; k as usize],
        })
    }
}

/// The first `count` terms of `E` for composition depth `k`; `count >= k`.
pub fn gen_e(k: u32, count: u64) -> Result<ESequence> {
    let mut e = ESequence::seed(k)?;
    if count < u64::from(k) {
        return Err(Error::InvalidArgument(format!(
            "count {count} must be at least k = {k}"
        )));
    }
    while e.len() < count {
        e.push_next()?;
    }
    Ok(e)
}

/// All `E_n <= bound` (at least the `k` leading ones).
pub fn gen_e_up_to(k: u32, bound: u64) -> Result<ESequence> {
    let mut e = ESequence::seed(k)?;
    loop {
        let n = e.values.len();
        let next = e.values[n - 1].checked_add(e.values[n - k as usize]);
        match next {
            Some(v) if v <= bound => e.values.push(v),
            _ => return Ok(e),
        }
    }
}

/// Induction statements checked at one index `n > k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnInduction {
    pub n: u64,
    /// Smallest `j` in `[0, k-1]` with `A(E_{n-j} - 1) = E_{n-j-1}`.
    pub preimage_witness: Option<u32>,
    /// `A(E_n + 1) = E_{n-1} + 1`.
    pub successor_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremEnReport {
    pub k: u32,
    pub horizon: u64,
    /// `A(E_n) = E_{n-1}` for every `n >= 2` with `E_n <= horizon`.
    pub check: CheckResult,
    pub induction: Vec<EnInduction>,
    pub induction_holds: bool,
    /// `(n, E_n, A(E_n))` for every checked `n`.
    pub samples: Vec<(u64, u64, u64)>,
}

/// Generates `A` from the Conway recursion with parameters `(k, 0, 1)` and
/// `A(1) = A(2) = 1`, then checks `A(E_n) = E_{n-1}` for every
/// `E_n <= horizon`, plus the two auxiliary induction statements at each
/// `n > k`. `A` is generated one term past `horizon` so that `A(E_n + 1)` is
/// always available.
pub fn check_theorem_en(k: u32, horizon: u64) -> Result<TheoremEnReport> {
    if horizon < 2 {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} must be at least E_(k+1) = 2"
        )));
    }
    let spec = RecursionSpec::conway(k, 0, 1)?;
    let state = SequenceState::generate(spec, &[1, 1], horizon + 1)?;
    if let Some(reason) = state.halt_reason() {
        return Err(Error::Step(reason.clone()));
    }
    let a = |i: u64| state.term(i).expect("index within generated table");
    let e = gen_e_up_to(k, horizon)?;
    let en = |n: u64| e.get(n).expect("index within E table");

    let range = 2..=e.len();
    let mut samples = Vec::new();
    let mut violation = None;
    for n in range.clone() {
        let got = a(en(n));
        samples.push((n, en(n), got));
        if violation.is_none() && got != en(n - 1) {
            violation = Some(Violation {
                index: n,
                observed: vec![en(n) as i64, got as i64, en(n - 1) as i64],
            });
        }
    }

    let induction: Vec<EnInduction> = (u64::from(k) + 1..=e.len())
        .map(|n| {
            let preimage_witness = (0..k).find(|&j| {
                let m = n - u64::from(j);
                en(m) >= 2 && a(en(m) - 1) == en(m - 1)
            });
            EnInduction {
                n,
                preimage_witness,
                successor_holds: a(en(n) + 1) == en(n - 1) + 1,
            }
        })
        .collect();
    let induction_holds = induction
        .iter()
        .all(|s| s.preimage_witness.is_some() && s.successor_holds);

    Ok(TheoremEnReport {
        k,
        horizon,
        check: CheckResult::new("a_of_e", &range, violation),
        induction,
        induction_holds,
        samples,
    })
}

/// Samples `(n, term(n))` at the given checkpoints.
pub fn growth_report(state: &SequenceState, checkpoints: &[u64]) -> Result<Vec<(u64, u64)>> {
    checkpoints
        .iter()
        .map(|&n| {
            state.term(n).map(|v| (n, v)).ok_or(Error::IndexOutOfRange {
                index: n,
                low: 1,
                high: state.len(),
            })
        })
        .collect()
}

/// True when sampled values strictly increase from each checkpoint to the next.
pub fn strictly_increasing(samples: &[(u64, u64)]) -> bool {
    samples.windows(2).all(|w| w[1].1 > w[0].1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2_prefix() -> SequenceState {
        SequenceState::generate(RecursionSpec::conway(2, 0, 1).unwrap(), &[1, 1], 22).unwrap()
    }

    fn conolly_ones(n: u64) -> SequenceState {
        SequenceState::generate(RecursionSpec::conolly(0), &[1, 1, 1], n).unwrap()
    }

    #[test]
    fn slow_growth_examples() {
        let t = k2_prefix();
        assert!(check_slow_growth(t.terms(), 2..=22).unwrap().holds);
        let r = check_slow_growth(&[1, 3], 2..=2).unwrap();
        assert_eq!(
            r.first_violation,
            Some(Violation {
                index: 2,
                observed: vec![2]
            })
        );
        assert!(check_slow_growth(&[1, 1], 1..=2).is_err());
        assert!(check_slow_growth(&[1, 1], 2..=3).is_err());
        let c = conolly_ones(10_000);
        assert!(check_slow_growth(c.terms(), 2..=10_000).unwrap().holds);
    }

    #[test]
    fn consecutive_increment_examples() {
        let c = conolly_ones(10_000);
        assert!(
            check_no_consecutive_increments(c.terms(), 3..=10_000)
                .unwrap()
                .holds
        );
        let r = check_no_consecutive_increments(&[1, 2, 3], 3..=3).unwrap();
        assert_eq!(r.first_violation.unwrap().index, 3);
        let r = check_no_consecutive_increments(k2_prefix().terms(), 3..=22).unwrap();
        assert!(!r.holds);
        assert_eq!(r.first_violation.unwrap().index, 4);
    }

    #[test]
    fn split_examples() {
        let c = conolly_ones(20);
        assert_eq!(split_components(&c, 6).unwrap(), Split { c1: 2, c2: 1 });
        assert_eq!(split_components(&c, 8).unwrap(), Split { c1: 2, c2: 2 });
        assert_eq!(split_components(&c, 4).unwrap(), Split { c1: 1, c2: 1 });
        assert!(split_components(&c, 3).is_err());
        assert_eq!(
            split_components(&k2_prefix(), 5),
            Err(Error::WrongFamily {
                expected: "conolly"
            })
        );
        let big = conolly_ones(10_000);
        assert!(check_split_law(&big, 4..=10_000).unwrap().holds);
    }

    #[test]
    fn split_law_detects_a_bad_term() {
        // [1,2,2,2] with s = 0 passes the validator but is not slow for long.
        let c = SequenceState::generate(RecursionSpec::conolly(0), &[1, 2, 2, 2], 200).unwrap();
        let r = check_split_law(&c, 5..=c.len()).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn delta_decomposition_examples() {
        let c = conolly_ones(50);
        let d6 = delta_decomposition(&c, 6).unwrap();
        assert_eq!(d6.iter().sum::<i64>(), 1);
        assert_eq!(delta_decomposition(&c, 5).unwrap(), vec![0, 0]);
        assert!(delta_decomposition(&c, 4).is_err());
        assert!(check_delta_components(&c, 5..=50).unwrap().holds);

        let g = SequenceState::generate(
            RecursionSpec::general(&[(0, 1), (1, 2)]).unwrap(),
            &[1, 2],
            500,
        )
        .unwrap();
        for n in 4..=g.len() {
            let parts = delta_decomposition(&g, n).unwrap();
            assert_eq!(parts.iter().sum::<i64>(), g.delta(n).unwrap());
        }
    }

    #[test]
    fn e_sequence_examples() {
        assert_eq!(gen_e(2, 8).unwrap().values(), &[1, 1, 2, 3, 5, 8, 13, 21]);
        assert_eq!(gen_e(3, 9).unwrap().values(), &[1, 1, 1, 2, 3, 4, 6, 9, 13]);
        let e = gen_e(2, 4).unwrap();
        assert_eq!((e.get(3), e.get(4)), (Some(2), Some(3)));
        assert!(gen_e(3, 2).is_err());
        assert!(gen_e(0, 2).is_err());
        assert!(matches!(
            gen_e(1, 100),
            Err(Error::ArithmeticOverflow { .. })
        ));
        for k in 1..=10u32 {
            let e = gen_e(k, 2 * u64::from(k)).unwrap();
            for j in 1..=u64::from(k) {
                assert_eq!(e.get(u64::from(k) + j), Some(j + 1));
            }
        }
        assert_eq!(gen_e_up_to(2, 21).unwrap().len(), 8);
    }

    #[test]
    fn theorem_en_on_k2_prefix() {
        let r = check_theorem_en(2, 22).unwrap();
        assert!(r.check.holds);
        assert!(r.induction_holds);
        let expected = [(5, 5, 3), (6, 8, 5), (7, 13, 8), (8, 21, 13)];
        for e in expected {
            assert!(r.samples.contains(&e), "{e:?}");
        }
        assert_eq!(r.samples[0], (2, 1, 1));
    }

    #[test]
    fn theorem_en_k3() {
        let r = check_theorem_en(3, 10_000).unwrap();
        assert!(r.check.holds && r.induction_holds);
    }

    #[test]
    fn growth_examples() {
        let g = growth_report(&k2_prefix(), &[1, 11, 22]).unwrap();
        assert_eq!(g, vec![(1, 1), (11, 7), (22, 14)]);
        assert!(strictly_increasing(&g));
        let g = growth_report(&conolly_ones(8), &[4, 8]).unwrap();
        assert_eq!(g, vec![(4, 2), (8, 4)]);
        let ones = SequenceState::new(RecursionSpec::conolly(0), &[1, 1, 1]).unwrap();
        assert!(!strictly_increasing(
            &growth_report(&ones, &[1, 3]).unwrap()
        ));
        assert!(growth_report(&ones, &[4]).is_err());
    }
}

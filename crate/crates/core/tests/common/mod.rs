//! Reference evaluator used only by tests.
//!
//! Evaluates each recursion top-down straight from its defining formula,
//! with signed arithmetic and no shared code with the engine. Results are
//! cached per index; without the cache the Conolly recursions branch
//! exponentially long before n = 60.

#![allow(dead_code)]

use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Conway { k: i64, a: i64, b: i64 },
    Variant { k: i64, a: i64, b: i64, c: i64 },
    Conolly { s: i64 },
    General { terms: Vec<(i64, i64)> },
}

pub struct Naive {
    family: Family,
    ics: Vec<i64>,
    cache: HashMap<i64, Option<i64>>,
}

impl Naive {
    pub fn new(family: Family, ics: &[u64]) -> Self {
        Naive {
            family,
            ics: ics.iter().map(|&v| v as i64).collect(),
            cache: HashMap::new(),
        }
    }

    /// `x(m)` requested while computing term `n`: `m` must lie in `[1, n-1]`.
    fn arg(&mut self, m: i64, n: i64) -> Option<i64> {
        if m < 1 || m > n - 1 {
            return None;
        }
        self.value(m)
    }

    fn iterate(&mut self, times: i64, start: i64, n: i64) -> Option<i64> {
        let mut x = start;
        for _ in 0..times {
            x = self.arg(x, n)?;
        }
        Some(x)
    }

    /// Term `n`, or `None` when the recursion is undefined there.
    pub fn value(&mut self, n: i64) -> Option<i64> {
        if n >= 1 && n as usize <= self.ics.len() {
            return Some(self.ics[n as usize - 1]);
        }
        if let Some(v) = self.cache.get(&n) {
            return *v;
        }
        let v = match self.family.clone() {
            Family::Conway { k, a, b } => (|| {
                let inner = self.iterate(k, n - b, n)?;
                Some(self.arg(n - a - inner, n)? + self.arg(inner, n)?)
            })(),
            Family::Variant { k, a, b, c } => (|| {
                let v = self.iterate(k, n - b, n)?;
                let w = self.iterate(k, n - c, n)?;
                Some(self.arg(n - a - v, n)? + self.arg(w, n)?)
            })(),
            Family::Conolly { s } => (|| {
                let p = self.arg(n - 1, n)?;
                let q = self.arg(n - 3, n)?;
                Some(self.arg(n - s - p, n)? + self.arg(n - s - 2 - q, n)?)
            })(),
            Family::General { terms } => (|| {
                let mut total = 0;
                for (a, b) in terms {
                    let inner = self.arg(n - b, n)?;
                    total += self.arg(n - a - inner, n)?;
                }
                Some(total)
            })(),
        };
        self.cache.insert(n, v);
        v
    }

    /// Terms `1..=up_to`, stopping before the first undefined index.
    /// Returns the terms and that index, if one was met.
    pub fn run(&mut self, up_to: i64) -> (Vec<u64>, Option<u64>) {
        let mut out = Vec::new();
        for n in 1..=up_to {
            match self.value(n) {
                Some(v) => out.push(v as u64),
                None => return (out, Some(n as u64)),
            }
        }
        (out, None)
    }
}

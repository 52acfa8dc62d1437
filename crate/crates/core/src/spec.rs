//! Recursion families and their validated parameters.
//!
//! Four families are supported:
//!
//! * Conway type: `A(n) = A(n - a - A^k(n - b)) + A(A^k(n - b))`
//! * the two-offset variant: `A(n) = A(n - a - A^k(n - b)) + A(A^k(n - c))`
//! * Conolly type with shift `s`: `C(n) = C(n - s - C(n - 1)) + C(n - s - 2 - C(n - 3))`
//! * the general Conolly family: `C(n) = sum_i C(n - a_i - C(n - b_i))`
//!
//! Parameter structs can only be built through their checked constructors,
//! so a [`RecursionSpec`] in hand always satisfies its bounds.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn at_least(name: &'static str, value: u32, min: u32) -> Result<()> {
    if value < min {
        return Err(Error::InvalidParameter {
            name,
            value: value.into(),
            min: min.into(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConway")]
pub struct Conway {
    k: u32,
    a: u32,
    b: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConway {
    k: u32,
    a: u32,
    b: u32,
}

impl TryFrom<RawConway> for Conway {
    type Error = Error;
    fn try_from(r: RawConway) -> Result<Self> {
        Conway::new(r.k, r.a, r.b)
    }
}

impl Conway {
    pub fn new(k: u32, a: u32, b: u32) -> Result<Self> {
        at_least("k", k, 1)?;
        at_least("b", b, 1)?;
        Ok(Conway { k, a, b })
    }

    /// Composition depth.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawVariant")]
pub struct ConwayVariant {
    k: u32,
    a: u32,
    b: u32,
    c: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariant {
    k: u32,
    a: u32,
    b: u32,
    c: u32,
}

impl TryFrom<RawVariant> for ConwayVariant {
    type Error = Error;
    fn try_from(r: RawVariant) -> Result<Self> {
        ConwayVariant::new(r.k, r.a, r.b, r.c)
    }
}

impl ConwayVariant {
    pub fn new(k: u32, a: u32, b: u32, c: u32) -> Result<Self> {
        at_least("k", k, 1)?;
        at_least("b", b, 1)?;
        at_least("c", c, 1)?;
        Ok(ConwayVariant { k, a, b, c })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conolly {
    s: u32,
}

impl Conolly {
    pub fn new(s: u32) -> Self {
        Conolly { s }
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// The two summands as `(a_i, b_i)` pairs of the general family.
    pub fn summands(&self) -> [Summand; 2] {
        [
            Summand { a: self.s, b: 1 },
            Summand {
                a: self.s + 2,
                b: 3,
            },
        ]
    }
}

/// One summand `C(n - a - C(n - b))` of a Conolly-type recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSummand")]
pub struct Summand {
    a: u32,
    b: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSummand {
    a: u32,
    b: u32,
}

impl TryFrom<RawSummand> for Summand {
    type Error = Error;
    fn try_from(r: RawSummand) -> Result<Self> {
        Summand::new(r.a, r.b)
    }
}

impl Summand {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        at_least("b_i", b, 1)?;
        Ok(Summand { a, b })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGeneral")]
pub struct GeneralConolly {
    terms: Vec<Summand>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeneral {
    terms: Vec<Summand>,
}

impl TryFrom<RawGeneral> for GeneralConolly {
    type Error = Error;
    fn try_from(r: RawGeneral) -> Result<Self> {
        GeneralConolly::new(r.terms)
    }
}

impl GeneralConolly {
    pub fn new(terms: Vec<Summand>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::NoSummands);
        }
        Ok(GeneralConolly { terms })
    }

    /// Builds the family from raw `(a_i, b_i)` pairs.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        let terms = pairs
            .iter()
            .map(|&(a, b)| Summand::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }

    pub fn terms(&self) -> &[Summand] {
        &self.terms
    }
}

/// Which recursion generates a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RecursionSpec {
    Conway(Conway),
    ConwayVariant(ConwayVariant),
    Conolly(Conolly),
    GeneralConolly(GeneralConolly),
}

impl RecursionSpec {
    pub fn conway(k: u32, a: u32, b: u32) -> Result<Self> {
        Conway::new(k, a, b).map(Self::Conway)
    }

    pub fn variant(k: u32, a: u32, b: u32, c: u32) -> Result<Self> {
        ConwayVariant::new(k, a, b, c).map(Self::ConwayVariant)
    }

    pub fn conolly(s: u32) -> Self {
        Self::Conolly(Conolly::new(s))
    }

    pub fn general(pairs: &[(u32, u32)]) -> Result<Self> {
        GeneralConolly::from_pairs(pairs).map(Self::GeneralConolly)
    }

    /// Minimum number of initial conditions the recursion can start from.
    pub fn min_initial_conditions(&self) -> u64 {
        match self {
            Self::Conway(p) => p.b.into(),
            Self::ConwayVariant(p) => p.b.max(p.c).into(),
            Self::Conolly(_) => 3,
            Self::GeneralConolly(p) => p.terms.iter().map(|t| t.b).max().unwrap_or(1).into(),
        }
    }

    /// Summands of a Conolly-type spec; `None` for the Conway families.
    pub fn conolly_summands(&self) -> Option<Vec<Summand>> {
        match self {
            Self::Conolly(p) => Some(p.summands().to_vec()),
            Self::GeneralConolly(p) => Some(p.terms.clone()),
            _ => None,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Conway(_) => "conway",
            Self::ConwayVariant(_) => "variant",
            Self::Conolly(_) => "conolly",
            Self::GeneralConolly(_) => "general",
        }
    }
}

impl fmt::Display for RecursionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Conway(p) => write!(f, "conway(k={}, a={}, b={})", p.k, p.a, p.b),
            Self::ConwayVariant(p) => {
                write!(f, "variant(k={}, a={}, b={}, c={})", p.k, p.a, p.b, p.c)
            }
            Self::Conolly(p) => write!(f, "conolly(s={})", p.s),
            Self::GeneralConolly(p) => {
                write!(f, "general(")?;
                for (i, t) in p.terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}:{}", t.a, t.b)?;
                }
                write!(f, ")")
            }
        }
    }
}

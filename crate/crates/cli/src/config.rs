//! Run settings shared by every subcommand.
//!
//! A TOML file supplies defaults and command-line flags override them key by
//! key. Keys:
//!
//! ```toml
//! family = "conolly"          # conway | variant | conolly | general
//! k = 2                       # integer, or "lo..hi" for surveys
//! a = 0
//! b = 1
//! c = 1
//! s = "0..4"
//! terms = ["0:1,1:2"]         # general family summands, one entry per spec
//! ics = ["ones:+0..+2"]       # explicit "1,1,2" or ones:/stairs: patterns
//! horizon = 10000
//! format = "json"             # table | csv | bfile | json
//! samples = "geo:10"          # or an explicit list "10,100,1000"
//! reference = "half"          # half | phi | none
//! tail = "500000..1000000"
//! bound_from = 1000
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Conway,
    Variant,
    Conolly,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Table,
    Csv,
    Bfile,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefName {
    Half,
    Phi,
    None,
}

/// A parameter value or an inclusive range of them: `3` or `1..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamRange {
    pub lo: u32,
    pub hi: u32,
}

impl ParamRange {
    pub fn single(self, name: &str) -> Result<u32, CliError> {
        if self.lo == self.hi {
            Ok(self.lo)
        } else {
            Err(CliError::Usage(format!(
                "-{name} takes a single value here, got {self}"
            )))
        }
    }
}

impl FromStr for ParamRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("expected a non-negative integer or lo..hi, got {s:?}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (num(lo)?, num(hi.trim_start_matches('='))?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(ParamRange { lo, hi })
    }
}

impl fmt::Display for ParamRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawParam {
    Int(u32),
    Text(String),
}

impl Serialize for ParamRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.lo == self.hi {
            RawParam::Int(self.lo).serialize(s)
        } else {
            RawParam::Text(self.to_string()).serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for ParamRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RawParam::deserialize(d)? {
            RawParam::Int(v) => Ok(ParamRange { lo: v, hi: v }),
            RawParam::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<ParamRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<ParamRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<ParamRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<ParamRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<ParamRange>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<RefName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_from: Option<u64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    #[cfg(test)]
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Values set in `flags` win; lists win when non-empty.
    pub fn overlay(self, flags: RunConfig) -> RunConfig {
        fn pick<T>(flag: Option<T>, base: Option<T>) -> Option<T> {
            flag.or(base)
        }
        fn pick_vec(flag: Vec<String>, base: Vec<String>) -> Vec<String> {
            if flag.is_empty() {
                base
            } else {
                flag
            }
        }
        RunConfig {
            family: pick(flags.family, self.family),
            k: pick(flags.k, self.k),
            a: pick(flags.a, self.a),
            b: pick(flags.b, self.b),
            c: pick(flags.c, self.c),
            s: pick(flags.s, self.s),
            terms: pick_vec(flags.terms, self.terms),
            ics: pick_vec(flags.ics, self.ics),
            horizon: pick(flags.horizon, self.horizon),
            format: pick(flags.format, self.format),
            samples: pick(flags.samples, self.samples),
            reference: pick(flags.reference, self.reference),
            tail: pick(flags.tail, self.tail),
            bound_from: pick(flags.bound_from, self.bound_from),
        }
    }
}

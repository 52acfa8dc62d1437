//! Turns merged settings into core values.

use metafib::analysis::{Reference, SampleSchedule};
use metafib::survey::{
    ConollyGrid, ConwayGrid, GeneralGrid, IcFamily, IcPattern, LengthRange, SurveyPoint,
    VariantGrid,
};
use metafib::{GeneralConolly, RecursionSpec};

use crate::config::{FamilyName, ParamRange, RefName, RunConfig};
use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn family(cfg: &RunConfig) -> Result<FamilyName, CliError> {
    cfg.family
        .ok_or_else(|| usage("missing family: conway, variant, conolly or general"))
}

fn param(value: Option<ParamRange>, default: u32) -> ParamRange {
    value.unwrap_or(ParamRange {
        lo: default,
        hi: default,
    })
}

fn one(cfg_value: Option<ParamRange>, default: u32, name: &str) -> Result<u32, CliError> {
    param(cfg_value, default).single(name)
}

pub fn parse_terms(text: &str) -> Result<GeneralConolly, CliError> {
    let pairs = text
        .split(',')
        .map(|p| {
            let (a, b) = p
                .split_once(':')
                .ok_or_else(|| usage(format!("summand {p:?} is not of the form a:b")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| usage(format!("summand {p:?} is not of the form a:b")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    GeneralConolly::from_pairs(&pairs).map_err(|e| usage(e.to_string()))
}

/// The single recursion described by `cfg`. Unset parameters default to
/// `k = 1, a = 0, b = 1, c = 1, s = 0`.
pub fn spec(cfg: &RunConfig) -> Result<RecursionSpec, CliError> {
    let built = match family(cfg)? {
        FamilyName::Conway => RecursionSpec::conway(
            one(cfg.k, 1, "k")?,
            one(cfg.a, 0, "a")?,
            one(cfg.b, 1, "b")?,
        ),
        FamilyName::Variant => RecursionSpec::variant(
            one(cfg.k, 1, "k")?,
            one(cfg.a, 0, "a")?,
            one(cfg.b, 1, "b")?,
            one(cfg.c, 1, "c")?,
        ),
        FamilyName::Conolly => Ok(RecursionSpec::conolly(one(cfg.s, 0, "s")?)),
        FamilyName::General => match cfg.terms.as_slice() {
            [one] => return Ok(RecursionSpec::GeneralConolly(parse_terms(one)?)),
            [] => return Err(usage("the general family needs --terms a:b,...")),
            _ => return Err(usage("give a single --terms list here")),
        },
    };
    built.map_err(|e| usage(e.to_string()))
}

fn lengths(text: &str) -> Result<LengthRange, CliError> {
    let bad = || {
        usage(format!(
            "bad length {text:?}; use N, lo..hi, +N or +lo..+hi"
        ))
    };
    let relative = text.starts_with('+');
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo, hi),
        None => (text, text),
    };
    if hi.starts_with('+') != relative {
        return Err(bad());
    }
    let num = |t: &str| t.trim_start_matches('+').parse::<u64>().map_err(|_| bad());
    let (lo, hi) = (num(lo)?, num(hi)?);
    if lo > hi {
        return Err(bad());
    }
    Ok(if relative {
        LengthRange::after_minimum(lo..=hi)
    } else {
        LengthRange::absolute(lo..=hi)
    })
}

/// `1,1,2`, `ones:N`, `stairs:N`; `N` is a length, a range `lo..hi`, or
/// relative to the minimum as `+N` / `+lo..+hi`.
pub fn parse_ics(text: &str) -> Result<IcFamily, CliError> {
    if let Some((kind, len)) = text.split_once(':') {
        let range = lengths(len)?;
        return match kind {
            "ones" => Ok(IcFamily::Ones(range)),
            "stairs" | "staircase" => Ok(IcFamily::Staircase(range)),
            _ => Err(usage(format!("unknown initial-condition pattern {kind:?}"))),
        };
    }
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<u64>()
                .map_err(|_| usage(format!("bad initial conditions {text:?}")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(IcFamily::Explicit)
}

/// The one list of initial conditions a single-sequence command runs on.
pub fn single_ics(cfg: &RunConfig, spec: &RecursionSpec) -> Result<Vec<u64>, CliError> {
    let text = match cfg.ics.as_slice() {
        [one] => one,
        [] => return Err(usage("missing --ics")),
        _ => return Err(usage("give a single --ics here")),
    };
    let minimum = spec.min_initial_conditions();
    let single = |r: LengthRange| {
        if r.lo != r.hi {
            return Err(usage(format!("--ics {text} names several lengths")));
        }
        Ok(if r.relative { minimum + r.lo } else { r.lo })
    };
    Ok(match parse_ics(text)? {
        IcFamily::Explicit(v) => v,
        IcFamily::Ones(r) => IcPattern::Ones { len: single(r)? }.values(),
        IcFamily::Staircase(r) => IcPattern::Staircase { len: single(r)? }.values(),
    })
}

pub fn horizon(cfg: &RunConfig, default: u64) -> u64 {
    cfg.horizon.unwrap_or(default)
}

fn range(value: Option<ParamRange>, default: u32) -> std::ops::RangeInclusive<u32> {
    let p = param(value, default);
    p.lo..=p.hi
}

pub fn survey_points(cfg: &RunConfig, default_horizon: u64) -> Result<Vec<SurveyPoint>, CliError> {
    let ics = if cfg.ics.is_empty() {
        vec![IcFamily::Ones(LengthRange::after_minimum(0..=2))]
    } else {
        cfg.ics
            .iter()
            .map(|t| parse_ics(t))
            .collect::<Result<Vec<_>, _>>()?
    };
    let horizon = horizon(cfg, default_horizon);
    let points = match family(cfg)? {
        FamilyName::Conway => ConwayGrid {
            k: range(cfg.k, 1),
            a: range(cfg.a, 0),
            b: range(cfg.b, 1),
            ics,
            horizon,
        }
        .points(),
        FamilyName::Variant => VariantGrid {
            k: range(cfg.k, 1),
            a: range(cfg.a, 0),
            b: range(cfg.b, 1),
            c: range(cfg.c, 1),
            ics,
            horizon,
        }
        .points(),
        FamilyName::Conolly => ConollyGrid {
            s: range(cfg.s, 0),
            ics,
            horizon,
        }
        .points(),
        FamilyName::General => {
            if cfg.terms.is_empty() {
                return Err(usage("the general family needs --terms a:b,..."));
            }
            GeneralGrid {
                specs: cfg
                    .terms
                    .iter()
                    .map(|t| parse_terms(t))
                    .collect::<Result<_, _>>()?,
                ics,
                horizon,
            }
            .points()
        }
    };
    points.map_err(|e| usage(e.to_string()))
}

pub fn schedule(cfg: &RunConfig) -> Result<SampleSchedule, CliError> {
    let text = cfg.samples.as_deref().unwrap_or("geo:10");
    if let Some(base) = text.strip_prefix("geo:") {
        let base = base
            .parse()
            .map_err(|_| usage(format!("bad geometric base in {text:?}")))?;
        return Ok(SampleSchedule::Geometric { base });
    }
    let indices = text
        .split(',')
        .map(|v| v.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| usage(format!("bad sample list {text:?}")))?;
    Ok(SampleSchedule::Explicit { indices })
}

pub fn reference(cfg: &RunConfig, spec: &RecursionSpec) -> Result<Reference, CliError> {
    Ok(match cfg.reference.unwrap_or(RefName::None) {
        RefName::Half => Reference::Half,
        RefName::None => Reference::None,
        RefName::Phi => match spec {
            RecursionSpec::Conway(p) => Reference::PhiInverse { k: p.k() },
            _ => return Err(usage("--ref phi needs a conway recursion")),
        },
    })
}

pub fn tail(cfg: &RunConfig) -> Result<Option<(u64, u64)>, CliError> {
    let Some(text) = cfg.tail.as_deref() else {
        return Ok(None);
    };
    let bad = || usage(format!("bad window {text:?}; use lo..hi"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    Ok(Some((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(family: FamilyName) -> RunConfig {
        RunConfig {
            family: Some(family),
            ..Default::default()
        }
    }

    #[test]
    fn ics_syntax() {
        assert_eq!(
            parse_ics("1,1,2").unwrap(),
            IcFamily::Explicit(vec![1, 1, 2])
        );
        assert_eq!(
            parse_ics("ones:3..8").unwrap(),
            IcFamily::Ones(LengthRange::absolute(3..=8))
        );
        assert_eq!(
            parse_ics("stairs:+0..+2").unwrap(),
            IcFamily::Staircase(LengthRange::after_minimum(0..=2))
        );
        assert!(parse_ics("ones:+0..2").is_err());
        assert!(parse_ics("twos:3").is_err());
        assert!(parse_ics("1,x").is_err());
    }

    #[test]
    fn single_ics_lengths() {
        let mut c = cfg(FamilyName::Conolly);
        c.s = Some(ParamRange { lo: 2, hi: 2 });
        let spec = spec(&c).unwrap();
        c.ics = vec!["ones:+2".into()];
        assert_eq!(single_ics(&c, &spec).unwrap(), vec![1; 5]);
        c.ics = vec!["stairs:4".into()];
        assert_eq!(single_ics(&c, &spec).unwrap(), vec![1, 1, 2, 2]);
        c.ics = vec!["ones:3..4".into()];
        assert!(single_ics(&c, &spec).is_err());
    }

    #[test]
    fn specs_and_defaults() {
        let c = cfg(FamilyName::Conway);
        assert_eq!(spec(&c).unwrap(), RecursionSpec::conway(1, 0, 1).unwrap());
        let mut bad = cfg(FamilyName::Conway);
        bad.k = Some(ParamRange { lo: 0, hi: 0 });
        assert!(spec(&bad).is_err());
        let mut g = cfg(FamilyName::General);
        g.terms = vec!["0:1, 1:2".into()];
        assert_eq!(
            spec(&g).unwrap(),
            RecursionSpec::general(&[(0, 1), (1, 2)]).unwrap()
        );
        assert!(spec(&RunConfig::default()).is_err());
    }

    #[test]
    fn survey_grid_size() {
        let mut c = cfg(FamilyName::Conolly);
        c.s = Some(ParamRange { lo: 0, hi: 4 });
        c.ics = vec!["ones:3..8".into()];
        assert_eq!(survey_points(&c, 100).unwrap().len(), 30);
    }
}

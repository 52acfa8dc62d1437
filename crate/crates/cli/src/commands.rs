use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use metafib::analysis::{half_bound_check, ratio_report, HalfBoundCheck, RatioReport, Reference};
use metafib::bfile::{parse_bfile, serialize_bfile, BFile};
use metafib::properties::{
    check_delta_components, check_no_consecutive_increments, check_slow_growth, check_split_law,
    check_theorem_en, CheckResult, TheoremEnReport,
};
use metafib::survey::{self, IcPattern, SurveyRecord};
use metafib::validate::{validate as run_validator, Hypothesis, ValidationReport};
use metafib::{RecursionSpec, SequenceState};
use serde::Serialize;

use crate::args::{CheckArgs, FamilyArgs, Property, RatioArgs, SurveyArgs, TraceArgs};
use crate::config::{Format, RunConfig};
use crate::resolve;
use crate::{CliError, Exit};

fn core(e: metafib::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn text_or_json(format: Option<Format>, command: &str) -> Result<bool, CliError> {
    match format.unwrap_or(Format::Table) {
        Format::Table => Ok(false),
        Format::Json => Ok(true),
        other => Err(CliError::Usage(format!(
            "{command} prints table or json, not {other:?}"
        ))),
    }
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn letter(spec: &RecursionSpec) -> &'static str {
    match spec {
        RecursionSpec::Conway(_) | RecursionSpec::ConwayVariant(_) => "A",
        _ => "C",
    }
}

fn heading(state: &SequenceState) -> String {
    format!(
        "{}, initial conditions {}",
        state.spec(),
        join(state.initial_conditions())
    )
}

/// Generates the configured sequence, or reports where it halted.
fn generate(cfg: &RunConfig, default_len: u64) -> Result<SequenceState, CliError> {
    let spec = resolve::spec(cfg)?;
    let ics = resolve::single_ics(cfg, &spec)?;
    let len = resolve::horizon(cfg, default_len);
    SequenceState::generate(spec, &ics, len).map_err(core)
}

fn report_halt(state: &SequenceState) -> Exit {
    if let Some(reason) = state.halt_reason() {
        eprintln!("halted after {} terms: {reason}", state.len());
    }
    Exit::Halted
}

pub fn gen(args: &FamilyArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let cfg = args.spec.settings(args.family)?;
    let state = generate(&cfg, 100)?;
    let wanted = resolve::horizon(&cfg, 100).min(state.len()) as usize;
    let terms = &state.terms()[..wanted];
    match cfg.format.unwrap_or(Format::Table) {
        Format::Table => {
            let width = wanted.to_string().len().max(1);
            writeln!(out, "{:>width$}  {}(n)", "n", letter(state.spec()))?;
            for (i, v) in terms.iter().enumerate() {
                writeln!(out, "{:>width$}  {v}", i + 1)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "value"])?;
            for (i, v) in terms.iter().enumerate() {
                w.write_record([(i + 1).to_string(), v.to_string()])?;
            }
            w.flush()?;
        }
        Format::Bfile => out.write_all(serialize_bfile(&BFile::from_terms(terms)).as_bytes())?,
        Format::Json => {
            #[derive(Serialize)]
            struct Generated<'a> {
                spec: &'a RecursionSpec,
                initial_conditions: &'a [u64],
                terms: &'a [u64],
                status: &'a metafib::Status,
            }
            write_json(
                out,
                &Generated {
                    spec: state.spec(),
                    initial_conditions: state.initial_conditions(),
                    terms,
                    status: state.status(),
                },
            )?;
        }
    }
    Ok(if state.is_halted() {
        report_halt(&state)
    } else {
        Exit::Success
    })
}

fn write_hypothesis(out: &mut dyn Write, h: &Hypothesis) -> Result<(), CliError> {
    let verdict = if h.satisfied { "pass" } else { "FAIL" };
    write!(out, "  {:<11} {verdict}  {}", h.name, h.description)?;
    if let Some(w) = &h.witness {
        let values = w
            .values
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(", ");
        write!(out, "\n              at n={}: {values}", w.index)?;
        if let Some(note) = &w.note {
            write!(out, " ({note})")?;
        }
    }
    writeln!(out)?;
    Ok(())
}

fn write_report(out: &mut dyn Write, r: &ValidationReport, ics: &[u64]) -> Result<(), CliError> {
    writeln!(out, "{}, initial conditions {}", r.spec, join(ics))?;
    for h in &r.hypotheses {
        write_hypothesis(out, h)?;
    }
    if !r.advisories.is_empty() {
        writeln!(out, "advisory (does not affect the verdict):")?;
        for h in &r.advisories {
            write_hypothesis(out, h)?;
        }
    }
    writeln!(out, "overall: {}", if r.overall { "pass" } else { "FAIL" })?;
    if let Some(g) = r.guarantees {
        writeln!(out, "guarantees: {g}")?;
    }
    for note in &r.notes {
        writeln!(out, "note: {note}")?;
    }
    Ok(())
}

pub fn validate(args: &FamilyArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let cfg = args.spec.settings(args.family)?;
    let json = text_or_json(cfg.format, "validate")?;
    let spec = resolve::spec(&cfg)?;
    let ics = resolve::single_ics(&cfg, &spec)?;
    let Some(report) = run_validator(&spec, &ics).map_err(core)? else {
        return Err(CliError::Usage(format!(
            "no sufficient conditions are known for the {} family",
            spec.family_name()
        )));
    };
    if json {
        write_json(out, &report)?;
    } else {
        write_report(out, &report, &ics)?;
    }
    Ok(if report.overall {
        Exit::Success
    } else {
        Exit::Violation
    })
}

fn write_check(out: &mut dyn Write, r: &CheckResult) -> Result<(), CliError> {
    let (lo, hi) = r.checked_range;
    match &r.first_violation {
        None => writeln!(out, "{} on [{lo}, {hi}]: holds", r.property)?,
        Some(v) => {
            let observed = v
                .observed
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(
                out,
                "{} on [{lo}, {hi}]: fails at n={} (observed {observed})",
                r.property, v.index
            )?
        }
    }
    Ok(())
}

fn write_en(out: &mut dyn Write, r: &TheoremEnReport) -> Result<(), CliError> {
    writeln!(out, "A(E_n) = E_(n-1) for k={}, E_n <= {}", r.k, r.horizon)?;
    writeln!(out, "{:>4}  {:>12}  {:>12}", "n", "E_n", "A(E_n)")?;
    for (n, e, a) in &r.samples {
        writeln!(out, "{n:>4}  {e:>12}  {a:>12}")?;
    }
    write_check(out, &r.check)?;
    match r
        .induction
        .iter()
        .find(|s| s.preimage_witness.is_none() || !s.successor_holds)
    {
        None => writeln!(
            out,
            "auxiliary statements hold at all {} indices n > k",
            r.induction.len()
        )?,
        Some(s) => writeln!(out, "auxiliary statements fail at n={}", s.n)?,
    }
    Ok(())
}

fn first_mismatch(file: &[u64], engine: &[u64]) -> Option<u64> {
    file.iter()
        .zip(engine)
        .position(|(f, e)| f != e)
        .map(|i| i as u64 + 1)
}

pub fn check(args: &CheckArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let cfg = args.spec.settings(args.family)?;
    let json = text_or_json(cfg.format, "check")?;

    if args.property == Property::En {
        let k = cfg
            .k
            .ok_or_else(|| CliError::Usage("check en needs -k".into()))?
            .single("k")?;
        let report = check_theorem_en(k, resolve::horizon(&cfg, 1000)).map_err(core)?;
        if json {
            write_json(out, &report)?;
        } else {
            write_en(out, &report)?;
        }
        return Ok(if report.check.holds && report.induction_holds {
            Exit::Success
        } else {
            Exit::Violation
        });
    }

    let (terms, state) = match &args.bfile {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let file = parse_bfile(&text).map_err(core)?;
            let mut terms = file.terms_from_one().map_err(core)?.to_vec();
            if let Some(n) = cfg.horizon {
                terms.truncate(n as usize);
            }
            let engine = match cfg.family {
                None => None,
                Some(_) => {
                    let mut c = cfg.clone();
                    c.horizon = Some(terms.len() as u64);
                    let engine = generate(&c, 0)?;
                    if let Some(n) = first_mismatch(&terms, engine.terms()) {
                        let i = n as usize - 1;
                        writeln!(
                            out,
                            "b-file differs from the engine at n={n}: file {}, engine {}",
                            terms[i],
                            engine.terms()[i]
                        )?;
                        return Ok(Exit::Violation);
                    }
                    if engine.is_halted() {
                        return Ok(report_halt(&engine));
                    }
                    Some(engine)
                }
            };
            (terms, engine)
        }
        None => {
            if cfg.family.is_none() {
                return Err(CliError::Usage("give a family or --bfile to check".into()));
            }
            let engine = generate(&cfg, 1000)?;
            if engine.is_halted() {
                return Ok(report_halt(&engine));
            }
            (engine.terms().to_vec(), Some(engine))
        }
    };
    let len = terms.len() as u64;
    let need_state = || {
        state.as_ref().ok_or_else(|| {
            CliError::Usage("this property needs a recursion family, not just a b-file".into())
        })
    };

    let result = match args.property {
        Property::Slow => check_slow_growth(&terms, 2..=len).map_err(core)?,
        Property::Noconsec => check_no_consecutive_increments(&terms, 3..=len).map_err(core)?,
        Property::Split => {
            let s = need_state()?;
            check_split_law(s, s.ic_len() + 1..=len).map_err(core)?
        }
        Property::Deltas => {
            let s = need_state()?;
            check_delta_components(s, s.ic_len() + 2..=len).map_err(core)?
        }
        Property::Growth => return growth(args, &terms, json, out),
        Property::En => unreachable!("handled above"),
    };
    if json {
        write_json(out, &result)?;
    } else {
        write_check(out, &result)?;
    }
    Ok(if result.holds {
        Exit::Success
    } else {
        Exit::Violation
    })
}

fn growth(
    args: &CheckArgs,
    terms: &[u64],
    json: bool,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    let len = terms.len() as u64;
    let checkpoints = if args.checkpoints.is_empty() {
        let mut c: Vec<u64> = std::iter::successors(Some(10u64), |v| v.checked_mul(10))
            .take_while(|&v| v <= len)
            .collect();
        if c.last() != Some(&len) {
            c.push(len);
        }
        c
    } else {
        args.checkpoints.clone()
    };
    let samples = checkpoints
        .iter()
        .map(|&n| match n {
            1.. if n <= len => Ok((n, terms[n as usize - 1])),
            _ => Err(CliError::Usage(format!(
                "checkpoint {n} is outside the {len} available terms"
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let holds = samples.windows(2).all(|w| w[1].1 > w[0].1);
    if json {
        #[derive(Serialize)]
        struct Growth<'a> {
            samples: &'a [(u64, u64)],
            strictly_increasing: bool,
        }
        write_json(
            out,
            &Growth {
                samples: &samples,
                strictly_increasing: holds,
            },
        )?;
    } else {
        for (n, v) in &samples {
            writeln!(out, "{n:>10}  {v}")?;
        }
        let verdict = if holds { "holds" } else { "fails" };
        writeln!(out, "strictly increasing across checkpoints: {verdict}")?;
    }
    Ok(if holds {
        Exit::Success
    } else {
        Exit::Violation
    })
}

fn pattern_label(p: &IcPattern) -> String {
    match p {
        IcPattern::Ones { len } => format!("ones:{len}"),
        IcPattern::Staircase { len } => format!("stairs:{len}"),
        IcPattern::Explicit { values } => join(values),
    }
}

#[derive(Serialize)]
struct SurveyMetadata {
    tool: &'static str,
    version: &'static str,
    family: &'static str,
    horizon: u64,
    points: usize,
    outcomes: BTreeMap<&'static str, usize>,
    validator_conflicts: usize,
    /// Seconds since the Unix epoch; `null` with `--no-timestamp`.
    timestamp: Option<u64>,
}

#[derive(Serialize)]
struct SurveyReport<'a> {
    metadata: SurveyMetadata,
    records: &'a [SurveyRecord],
}

fn write_survey_csv(w: impl Write, records: &[SurveyRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record([
        "family",
        "spec",
        "ics",
        "horizon",
        "outcome",
        "outcome_n",
        "validator",
        "failed_hypotheses",
        "validator_conflict",
        "generated",
        "max_value",
        "final_ratio",
    ])?;
    for r in records {
        let (verdict, failed) = match &r.validator {
            Some(v) => (
                if v.overall { "pass" } else { "fail" }.to_string(),
                v.failed.join(";"),
            ),
            None => (String::new(), String::new()),
        };
        w.write_record([
            r.spec.family_name().to_string(),
            r.spec.to_string(),
            pattern_label(&r.ics),
            r.horizon.to_string(),
            r.outcome.label().to_string(),
            r.outcome.index().map(|n| n.to_string()).unwrap_or_default(),
            verdict,
            failed,
            r.validator_conflict.to_string(),
            r.generated.to_string(),
            r.max_value.to_string(),
            r.final_ratio.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn survey(args: &SurveyArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let cfg = args.spec.settings(args.family)?;
    let points = resolve::survey_points(&cfg, 10_000)?;
    let records = survey::run(&points);

    let mut outcomes = BTreeMap::new();
    for r in &records {
        *outcomes.entry(r.outcome.label()).or_insert(0) += 1;
    }
    let conflicts: Vec<&SurveyRecord> = records.iter().filter(|r| r.validator_conflict).collect();
    let timestamp = (!args.no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let report = SurveyReport {
        metadata: SurveyMetadata {
            tool: "metafib",
            version: env!("CARGO_PKG_VERSION"),
            family: points
                .first()
                .map(|p| p.spec.family_name())
                .unwrap_or("none"),
            horizon: resolve::horizon(&cfg, 10_000),
            points: records.len(),
            outcomes,
            validator_conflicts: conflicts.len(),
            timestamp,
        },
        records: &records,
    };

    if let Some(path) = &args.csv {
        write_survey_csv(BufWriter::new(File::create(path)?), &records)?;
    }
    let summary = |out: &mut dyn Write| -> Result<(), CliError> {
        for r in &records {
            let at = r
                .outcome
                .index()
                .map(|n| format!(" n={n}"))
                .unwrap_or_default();
            writeln!(
                out,
                "{}  {}  {}{at}",
                r.spec,
                pattern_label(&r.ics),
                r.outcome.label()
            )?;
        }
        let counts = report
            .metadata
            .outcomes
            .iter()
            .map(|(k, v)| format!("{k} {v}"))
            .collect::<Vec<_>>()
            .join(", ");
        writeln!(out, "{} records: {counts}", records.len())?;
        Ok(())
    };
    match &args.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            write_json(&mut f, &report)?;
            f.flush()?;
            summary(out)?;
        }
        None => match cfg.format.unwrap_or(Format::Json) {
            Format::Json => write_json(out, &report)?,
            Format::Csv => write_survey_csv(&mut *out, &records)?,
            Format::Table => summary(out)?,
            Format::Bfile => {
                return Err(CliError::Usage("survey prints json, csv or table".into()))
            }
        },
    }
    for r in &conflicts {
        eprintln!(
            "validator passed but outcome is {}: {} {}",
            r.outcome.label(),
            r.spec,
            pattern_label(&r.ics)
        );
    }
    Ok(if conflicts.is_empty() {
        Exit::Success
    } else {
        Exit::Violation
    })
}

fn write_ratio(
    out: &mut dyn Write,
    state: &SequenceState,
    r: &RatioReport,
    bound: Option<&HalfBoundCheck>,
) -> Result<(), CliError> {
    writeln!(out, "{}, {} terms", heading(state), state.len())?;
    let l = letter(state.spec());
    writeln!(
        out,
        "{:>12}  {:>12}  {:>10}",
        "n",
        format!("{l}(n)"),
        format!("{l}(n)/n")
    )?;
    for s in &r.samples {
        writeln!(out, "{:>12}  {:>12}  {:>10.6}", s.index, s.value, s.decimal)?;
    }
    let (lo, hi) = r.tail_window;
    writeln!(
        out,
        "window [{lo}, {hi}]: max {:.6} at n={}, min {:.6} at n={}",
        r.tail_max.decimal, r.tail_max.index, r.tail_min.decimal, r.tail_min.index
    )?;
    if let Some(c) = &r.reference {
        let name = match c.reference {
            Reference::PhiInverse { k } => format!("1/phi_{k}"),
            Reference::Half => "1/2".into(),
            Reference::None => "none".into(),
        };
        writeln!(
            out,
            "reference {name} = {:.10}, deviation at last sample {:+.3e}",
            c.value, c.deviation
        )?;
    }
    if r.descriptive_only {
        writeln!(out, "descriptive only: {}", r.note)?;
    } else {
        writeln!(out, "{}", r.note)?;
    }
    if let Some(b) = bound {
        writeln!(
            out,
            "max {l}(n)/n on [{}, {}] is {}/{} = {:.6} at n={}; bound 1/2 + {:.6}: {}",
            b.window.0,
            b.window.1,
            b.max_ratio.numer,
            b.max_ratio.denom,
            b.max_ratio_decimal,
            b.argmax,
            b.slack,
            if b.satisfies_half_bound {
                "holds"
            } else {
                "fails"
            }
        )?;
    }
    Ok(())
}

pub fn ratio(args: &RatioArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let cfg = args.settings()?;
    let json = text_or_json(cfg.format, "ratio")?;
    let state = generate(&cfg, 10_000)?;
    if state.is_halted() {
        return Ok(report_halt(&state));
    }
    let reference = resolve::reference(&cfg, state.spec())?;
    let report = ratio_report(
        &state,
        &resolve::schedule(&cfg)?,
        reference,
        resolve::tail(&cfg)?,
    )
    .map_err(core)?;
    let bound = cfg
        .bound_from
        .map(|lo| half_bound_check(&state, (lo, state.len())))
        .transpose()
        .map_err(core)?;
    if json {
        #[derive(Serialize)]
        struct Ratio<'a> {
            report: &'a RatioReport,
            half_bound: Option<&'a HalfBoundCheck>,
        }
        write_json(
            out,
            &Ratio {
                report: &report,
                half_bound: bound.as_ref(),
            },
        )?;
    } else {
        write_ratio(out, &state, &report, bound.as_ref())?;
    }
    Ok(match bound {
        Some(b) if !b.satisfies_half_bound => Exit::Violation,
        _ => Exit::Success,
    })
}

pub fn trace(args: &TraceArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let mut cfg = args.spec.settings(args.family)?;
    let json = text_or_json(cfg.format, "trace")?;
    cfg.horizon = Some(args.at);
    let state = generate(&cfg, args.at)?;
    if state.len() < args.at {
        return Ok(report_halt(&state));
    }
    let t = state.trace(args.at).map_err(core)?;
    if json {
        write_json(out, &t)?;
    } else {
        writeln!(out, "{}", heading(&state))?;
        write!(out, "{t}")?;
    }
    Ok(Exit::Success)
}

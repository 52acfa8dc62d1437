//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string.
//! Failures come back as `{"error": "..."}` so the page never has to catch.
//! Specs use the library's JSON form, e.g.
//! `{"family":"conway","k":2,"a":0,"b":1}` or
//! `{"family":"general_conolly","terms":[{"a":0,"b":1},{"a":1,"b":2}]}`.

use metafib::validate::validate as run_validator;
use metafib::{RecursionSpec, SequenceState};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Upper bound on terms a single call will produce.
pub const MAX_TERMS: u32 = 1_000_000;

#[derive(Serialize)]
struct ErrorReply {
    error: String,
}

#[derive(Serialize)]
struct Halt {
    n: u64,
    message: String,
}

#[derive(Serialize)]
struct Generated {
    spec: String,
    terms: Vec<u64>,
    halt: Option<Halt>,
}

#[derive(Serialize)]
struct Traced {
    text: String,
    trace: metafib::EvalTrace,
}

fn reply(result: Result<String, String>) -> String {
    result.unwrap_or_else(|error| {
        serde_json::to_string(&ErrorReply { error }).expect("error reply serializes")
    })
}

fn to_json(value: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn parse_spec(spec_json: &str) -> Result<RecursionSpec, String> {
    serde_json::from_str(spec_json).map_err(|e| format!("bad recursion spec: {e}"))
}

fn parse_ics(text: &str) -> Result<Vec<u64>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| format!("initial condition {t:?} is not a non-negative integer"))
        })
        .collect()
}

fn build(spec_json: &str, ics: &str, len: u32) -> Result<SequenceState, String> {
    if len > MAX_TERMS {
        return Err(format!("at most {MAX_TERMS} terms"));
    }
    let spec = parse_spec(spec_json)?;
    let ics = parse_ics(ics)?;
    SequenceState::generate(spec, &ics, len.into()).map_err(|e| e.to_string())
}

/// First `count` terms, plus where generation stopped if it halted.
#[wasm_bindgen]
pub fn generate(spec_json: &str, ics: &str, count: u32) -> String {
    reply(build(spec_json, ics, count).and_then(|state| {
        to_json(&Generated {
            spec: state.spec().to_string(),
            terms: state.terms().to_vec(),
            halt: state.halt_reason().map(|f| Halt {
                n: f.index(),
                message: f.to_string(),
            }),
        })
    }))
}

/// Hypothesis-by-hypothesis report for the Conway and Conolly families.
#[wasm_bindgen]
pub fn validate(spec_json: &str, ics: &str) -> String {
    reply((|| {
        let spec = parse_spec(spec_json)?;
        let ics = parse_ics(ics)?;
        match run_validator(&spec, &ics).map_err(|e| e.to_string())? {
            Some(report) => to_json(&report),
            None => Err(format!(
                "no sufficient conditions are known for the {} family",
                spec.family_name()
            )),
        }
    })())
}

/// How term `n` is computed from earlier terms.
#[wasm_bindgen]
pub fn trace(spec_json: &str, ics: &str, n: u32) -> String {
    reply(build(spec_json, ics, n).and_then(|state| {
        if let Some(f) = state.halt_reason() {
            return Err(f.to_string());
        }
        let trace = state.trace(n.into()).map_err(|e| e.to_string())?;
        to_json(&Traced {
            text: trace.to_string(),
            trace,
        })
    }))
}

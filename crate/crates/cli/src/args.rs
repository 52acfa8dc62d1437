use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{FamilyName, Format, ParamRange, RefName, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "metafib",
    version,
    about = "Generate, validate and survey meta-Fibonacci sequences",
    after_help = "Exit status: 0 success, 1 usage error, 2 generation halted, 3 property violation."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the first terms of a sequence
    Gen(FamilyArgs),
    /// Check the sufficient conditions for a slow-growing, everywhere defined sequence
    Validate(FamilyArgs),
    /// Test one property of a generated or supplied sequence
    Check(CheckArgs),
    /// Classify every point of a parameter grid
    Survey(SurveyArgs),
    /// Sample term(n)/n
    Ratio(RatioArgs),
    /// Show how one term is evaluated
    Trace(TraceArgs),
}

/// Recursion parameters, initial conditions and output options.
#[derive(Debug, Args, Default)]
pub struct SpecArgs {
    /// Composition depth
    #[arg(short = 'k', long = "k", value_name = "K")]
    pub k: Option<ParamRange>,
    #[arg(short = 'a', long = "a", value_name = "A")]
    pub a: Option<ParamRange>,
    #[arg(short = 'b', long = "b", value_name = "B")]
    pub b: Option<ParamRange>,
    /// Second shift of the variant family
    #[arg(short = 'c', long = "c", value_name = "C")]
    pub c: Option<ParamRange>,
    /// Conolly shift
    #[arg(short = 's', long = "s", value_name = "S")]
    pub s: Option<ParamRange>,
    /// Summands a:b of a general Conolly recursion, e.g. 0:1,1:2
    #[arg(long, value_name = "A:B,...")]
    pub terms: Vec<String>,
    /// Initial conditions: 1,1,2 or ones:N, stairs:N (N may be a range, +N is relative to the minimum)
    #[arg(long, value_name = "ICS")]
    pub ics: Vec<String>,
    /// Number of terms
    #[arg(short = 'n', long = "horizon", value_name = "N")]
    pub horizon: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML file with default settings; flags override it
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

impl SpecArgs {
    pub fn settings(&self, family: Option<FamilyName>) -> Result<RunConfig, crate::CliError> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Ok(base.overlay(RunConfig {
            family,
            k: self.k,
            a: self.a,
            b: self.b,
            c: self.c,
            s: self.s,
            terms: self.terms.clone(),
            ics: self.ics.clone(),
            horizon: self.horizon,
            format: self.format,
            ..Default::default()
        }))
    }
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(value_enum)]
    pub family: Option<FamilyName>,
    #[command(flatten)]
    pub spec: SpecArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    /// Every difference is 0 or 1
    Slow,
    /// No two consecutive increments
    Noconsec,
    /// The two Conolly summands differ by 0 or 1 and follow the parity form
    Split,
    /// Per-summand differences are 0 or 1 and add up
    Deltas,
    /// A(E_n) = E_(n-1) for the generalized Fibonacci numbers E_n
    En,
    /// Values strictly increase across checkpoints
    Growth,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub property: Property,
    #[arg(value_enum)]
    pub family: Option<FamilyName>,
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Check the terms of a b-file; with a family, also compare them to the engine
    #[arg(long, value_name = "FILE")]
    pub bfile: Option<PathBuf>,
    /// Comma-separated indices for the growth property
    #[arg(long, value_name = "N,...", value_delimiter = ',')]
    pub checkpoints: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    #[arg(value_enum)]
    pub family: Option<FamilyName>,
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Write the JSON report here instead of standard output
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Also write one CSV row per record
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Leave the report timestamp empty, for byte-identical reruns
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    #[arg(value_enum)]
    pub family: Option<FamilyName>,
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Comparison value at the last sample
    #[arg(long = "ref", value_enum)]
    pub reference: Option<RefName>,
    /// Sample indices: geo:BASE or an explicit list 10,100,1000
    #[arg(long)]
    pub samples: Option<String>,
    /// Window lo..hi for the running extrema; defaults to the second half
    #[arg(long)]
    pub tail: Option<String>,
    /// Conolly only: check max C(n)/n over [N, horizon] against 1/2 + (C(1)+2)/N
    #[arg(long, value_name = "N")]
    pub bound_from: Option<u64>,
}

impl RatioArgs {
    pub fn settings(&self) -> Result<RunConfig, crate::CliError> {
        let base = self.spec.settings(self.family)?;
        Ok(base.overlay(RunConfig {
            reference: self.reference,
            samples: self.samples.clone(),
            tail: self.tail.clone(),
            bound_from: self.bound_from,
            ..Default::default()
        }))
    }
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(value_enum)]
    pub family: Option<FamilyName>,
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Index of the term to explain
    #[arg(long, value_name = "N")]
    pub at: u64,
}

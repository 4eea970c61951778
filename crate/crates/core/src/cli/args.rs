//! Command-line arguments and their validation into a [`RunConfig`].

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dsz::{CaseId, TheoremId};

/// Largest `m` accepted for coefficient sweeps.
pub const MAX_M_COEFFICIENTS: u32 = 16;
/// Largest `m` accepted for the case and theorem pipelines.
pub const MAX_M_PIPELINES: u32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "residue-verify",
    version,
    about = "Exact re-derivation of boundary-term coefficients, cases and theorem statements",
    long_about = None
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare each coefficient's derivative definition with its closed form.
    VerifyCoefficients(Common),
    /// Run case pipelines (default: all ten) and compare with the printed values.
    VerifyCase(CaseSel),
    /// Coefficients, H5 probe, inputs, displays, cases and theorems.
    VerifyAll(Common),
    /// Evaluate H5 under both derivative-order readings.
    ProbeH5(Common),
    /// List goldens records, or print one record evaluated at `m`.
    Show(ShowArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// A single value `k` or an inclusive range `a..b`.
    #[arg(long, value_name = "RANGE", conflicts_with = "m_max")]
    pub m: Option<MRange>,
    /// Shorthand for `--m 1..K`.
    #[arg(long, value_name = "K")]
    pub m_max: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Goldens file to use instead of the bundled one.
    #[arg(long, value_name = "PATH")]
    pub goldens: Option<PathBuf>,
    /// Row name whose mismatch does not affect the exit code (repeatable).
    #[arg(long, value_name = "NAME")]
    pub waive: Vec<String>,
    /// Maximum number of residual terms shown per row in text output.
    #[arg(long, value_name = "N", default_value_t = 6)]
    pub limit: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CaseSel {
    #[arg(long, value_parser = TheoremId::from_str)]
    pub theorem: Option<TheoremId>,
    #[arg(long = "case", value_parser = CaseId::from_str)]
    pub case_id: Option<CaseId>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ShowArgs {
    /// Record name; omit to list every record.
    pub name: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// An inclusive `m` range as typed on the command line (not yet validated).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MRange {
    pub lo: u32,
    pub hi: u32,
}

impl FromStr for MRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |p: &str| p.trim().parse::<u32>().map_err(|_| format!("malformed m range `{}`", s));
        match s.split_once("..") {
            Some((a, b)) => Ok(MRange { lo: num(a)?, hi: num(b.strip_prefix('=').unwrap_or(b))? }),
            None => {
                let k = num(s)?;
                Ok(MRange { lo: k, hi: k })
            }
        }
    }
}

impl fmt::Display for MRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Coefficients,
    Cases { theorem: Option<TheoremId>, case: Option<CaseId> },
    All,
    ProbeH5,
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Verify {
        task: Task,
        m: MRange,
        format: Format,
        goldens: Option<PathBuf>,
        waive: Vec<String>,
        limit: usize,
    },
    Show {
        name: Option<String>,
        m: u32,
        format: Format,
        goldens: Option<PathBuf>,
    },
}

impl RunConfig {
    pub fn format(&self) -> Format {
        match self {
            RunConfig::Verify { format, .. } | RunConfig::Show { format, .. } => *format,
        }
    }

    pub fn goldens(&self) -> Option<&PathBuf> {
        match self {
            RunConfig::Verify { goldens, .. } | RunConfig::Show { goldens, .. } => goldens.as_ref(),
        }
    }
}

/// Usage errors, reported with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UsageError {
    #[error("{0}")]
    Clap(String),
    #[error("empty m range `{0}` (need 1 <= lo <= hi)")]
    EmptyRange(MRange),
    #[error("m range `{range}` exceeds the maximum {max} for {what}")]
    TooLarge { range: MRange, max: u32, what: &'static str },
    #[error("goldens file `{0}` does not exist")]
    MissingGoldens(PathBuf),
}

fn resolve_range(c: &Common, default: MRange, max: u32, what: &'static str) -> Result<MRange, UsageError> {
    let r = match (c.m, c.m_max) {
        (Some(r), _) => r,
        (None, Some(k)) => MRange { lo: 1, hi: k },
        (None, None) => default,
    };
    if r.lo == 0 || r.lo > r.hi {
        return Err(UsageError::EmptyRange(r));
    }
    if r.hi > max {
        return Err(UsageError::TooLarge { range: r, max, what });
    }
    Ok(r)
}

fn check_goldens(c: &Common) -> Result<Option<PathBuf>, UsageError> {
    match &c.goldens {
        Some(p) if !p.exists() => Err(UsageError::MissingGoldens(p.clone())),
        other => Ok(other.clone()),
    }
}

/// Parse and validate `argv` (including the program name).
///
/// Help and version requests come back as `UsageError::Clap` carrying the
/// rendered text; the caller decides how to print them.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| UsageError::Clap(e.render().to_string()))?;
    let verify = |task: Task, c: &Common, default: MRange, max: u32, what: &'static str| {
        Ok(RunConfig::Verify {
            task,
            m: resolve_range(c, default, max, what)?,
            format: c.format,
            goldens: check_goldens(c)?,
            waive: c.waive.clone(),
            limit: c.limit,
        })
    };
    let coeff_default = MRange { lo: 1, hi: MAX_M_COEFFICIENTS };
    let pipe_default = MRange { lo: 1, hi: MAX_M_PIPELINES };
    match &cli.command {
        Command::VerifyCoefficients(c) => verify(Task::Coefficients, c, coeff_default, MAX_M_COEFFICIENTS, "coefficients"),
        Command::ProbeH5(c) => verify(Task::ProbeH5, c, coeff_default, MAX_M_COEFFICIENTS, "coefficients"),
        Command::VerifyCase(s) => verify(
            Task::Cases { theorem: s.theorem, case: s.case_id },
            &s.common,
            pipe_default,
            MAX_M_PIPELINES,
            "case pipelines",
        ),
        Command::VerifyAll(c) => verify(Task::All, c, pipe_default, MAX_M_PIPELINES, "case pipelines"),
        Command::Show(s) => {
            let r = resolve_range(&s.common, MRange { lo: 1, hi: 1 }, MAX_M_COEFFICIENTS, "show")?;
            Ok(RunConfig::Show { name: s.name.clone(), m: r.lo, format: s.common.format, goldens: check_goldens(&s.common)? })
        }
    }
}

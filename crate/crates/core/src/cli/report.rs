//! Report rows and the text, JSON and CSV emitters.
//!
//! Every comparison made by a run becomes one [`Row`] with the fixed shape
//! `name, m, defined, closed, match`. Rows are emitted in the order they were
//! produced; the runner produces them in a fixed order, so output is
//! byte-stable. Richer per-case and per-theorem details ride along in the
//! JSON form only.

use std::io::{self, Write};

use serde::Serialize;

use super::args::Format;
use crate::dsz::{CaseReport, DisplayReport, H5Probe, InputReport, MarkerRow, TheoremId};

/// What produced a row; decides how the summary counts it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    Coefficient,
    H5,
    Input,
    Display,
    Case,
    ByParts,
    Theorem,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub kind: RowKind,
    pub name: String,
    pub m: u32,
    pub defined: String,
    pub closed: String,
    #[serde(rename = "match")]
    pub matched: bool,
    pub waived: bool,
    /// Human-oriented notes for text output (residual terms, diffs).
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Row {
    pub fn new(kind: RowKind, name: impl Into<String>, m: u32, defined: impl ToString, closed: impl ToString, matched: bool) -> Row {
        Row {
            kind,
            name: name.into(),
            m,
            defined: defined.to_string(),
            closed: closed.to_string(),
            matched,
            waived: false,
            notes: Vec::new(),
        }
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Row {
        self.notes = notes;
        self
    }

    /// Whether this row makes the run fail.
    pub fn fails(&self) -> bool {
        !self.matched && !self.waived
    }
}

/// Theorem report without the embedded case reports (those are listed once
/// under `cases`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremDetail {
    #[serde(serialize_with = "ser_display")]
    pub theorem: TheoremId,
    pub m: u32,
    pub total: String,
    pub expected: String,
    pub residual: String,
    /// Residual restricted to monomials the statement prints.
    pub printed_residual: String,
    /// Computed terms on monomials the statement does not print.
    pub omitted: String,
    pub markers: Vec<MarkerRow>,
    pub printed_cases_sum: bool,
    #[serde(rename = "match")]
    pub matched: bool,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Details {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub h5: Vec<H5Probe>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<InputReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub displays: Vec<DisplayReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<CaseReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub theorems: Vec<TheoremDetail>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub matched: usize,
    pub mismatched: usize,
    pub waived: usize,
    /// Number of distinct coefficient names and `m` values checked.
    pub coefficient_names: usize,
    pub coefficient_ms: usize,
    pub coefficients_ok: bool,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub m: String,
    pub rows: Vec<Row>,
    pub summary: Summary,
    pub details: Details,
}

impl Report {
    /// Apply waivers and compute the summary.
    pub fn new(command: &str, m: String, mut rows: Vec<Row>, details: Details, waive: &[String]) -> Report {
        for r in &mut rows {
            r.waived = !r.matched && waive.iter().any(|w| w == &r.name);
        }
        let coeff: Vec<&Row> = rows.iter().filter(|r| r.kind == RowKind::Coefficient).collect();
        let mut names: Vec<&str> = coeff.iter().map(|r| r.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        let mut ms: Vec<u32> = coeff.iter().map(|r| r.m).collect();
        ms.sort_unstable();
        ms.dedup();
        let summary = Summary {
            rows: rows.len(),
            matched: rows.iter().filter(|r| r.matched).count(),
            mismatched: rows.iter().filter(|r| r.fails()).count(),
            waived: rows.iter().filter(|r| r.waived).count(),
            coefficient_names: names.len(),
            coefficient_ms: ms.len(),
            coefficients_ok: coeff.iter().all(|r| !r.fails()),
            verified: rows.iter().all(|r| !r.fails()),
        };
        Report { command: command.to_string(), m, rows, summary, details }
    }

    /// 0 when every row matches or is waived, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.verified {
            0
        } else {
            1
        }
    }

    /// The one-line summary shared by the text emitter and the acceptance suite.
    pub fn summary_line(&self) -> String {
        let s = &self.summary;
        let mut parts = Vec::new();
        if s.coefficient_names > 0 {
            let grid = format!("{}×{}", s.coefficient_names, s.coefficient_ms);
            let bad = self.rows.iter().filter(|r| r.kind == RowKind::Coefficient && r.fails()).count();
            if s.coefficients_ok {
                parts.push(format!("{} coefficients verified", grid));
            } else {
                parts.push(format!("{} coefficients checked, {} mismatched", grid, bad));
            }
        }
        parts.push(format!("{} rows: {} match, {} mismatch, {} waived", s.rows, s.matched, s.mismatched, s.waived));
        parts.push(if s.verified { "VERIFIED".into() } else { "MISMATCH".into() });
        parts.join("; ")
    }

    pub fn emit(&self, format: Format, limit: usize, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Text => self.emit_text(limit, out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)
            }
            Format::Csv => self.emit_csv(out),
        }
    }

    fn emit_text(&self, limit: usize, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "residue-verify {} (m = {})", self.command, self.m)?;
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
        for r in &self.rows {
            let status = match (r.matched, r.waived) {
                (true, _) => "ok",
                (false, true) => "WAIVED",
                (false, false) => "MISMATCH",
            };
            let defined = clip(&r.defined, 96);
            if r.matched {
                writeln!(out, "{:<8} {:<width$} m={:<2} {}", status, r.name, r.m, defined, width = width)?;
            } else {
                writeln!(
                    out,
                    "{:<8} {:<width$} m={:<2} defined {}  closed {}",
                    status,
                    r.name,
                    r.m,
                    defined,
                    clip(&r.closed, 96),
                    width = width
                )?;
            }
            for note in r.notes.iter().take(limit) {
                writeln!(out, "         {}", note)?;
            }
            if r.notes.len() > limit {
                writeln!(out, "         ... {} more", r.notes.len() - limit)?;
            }
        }
        writeln!(out, "{}", self.summary_line())
    }

    fn emit_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["name", "m", "defined", "closed", "match"])?;
        for r in &self.rows {
            let m = r.m.to_string();
            w.write_record([r.name.as_str(), m.as_str(), r.defined.as_str(), r.closed.as_str(), if r.matched { "true" } else { "false" }])?;
        }
        w.flush()
    }
}

fn clip(s: &str, max: usize) -> String {
    if s.chars().count() <= max {
        s.to_string()
    } else {
        let head: String = s.chars().take(max).collect();
        format!("{}...", head)
    }
}

//! Turning a [`RunConfig`] into a [`Report`].

use std::collections::BTreeSet;

use super::args::{MRange, RunConfig, Task, MAX_M_COEFFICIENTS};
use super::goldens::{Goldens, Kind};
use super::report::{Details, Report, Row, RowKind, TheoremDetail};
use crate::dsz::{case_record, theorem_record, CaseId, CaseReport, DszError, Session, TheoremId, TheoremReport, H5};
use crate::ring::{GaussRat, Monomial, ScalarPoly};

/// Why a run could not produce a report.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Goldens file unreadable or inconsistent (exit 2).
    #[error("{0}")]
    Input(String),
    /// A pipeline step failed (exit 3).
    #[error("{0}")]
    Pipeline(#[from] DszError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => 2,
            RunError::Pipeline(_) => 3,
        }
    }
}

pub fn open_session(cfg: &RunConfig) -> Result<Session, RunError> {
    let goldens = match cfg.goldens() {
        Some(p) => Goldens::load(p).map_err(|e| RunError::Input(e.to_string()))?,
        None => Goldens::builtin(),
    };
    Session::new(goldens).map_err(|e| RunError::Input(e.to_string()))
}

fn poly_notes(p: &ScalarPoly) -> Vec<String> {
    let alpha = p.alphabet().clone();
    p.terms().iter().map(|(mono, c)| format!("{}  {}", c, mono.render(&alpha))).collect()
}

fn m_values(r: MRange) -> Vec<u32> {
    (r.lo..=r.hi).collect()
}

fn coefficient_rows(s: &Session, r: MRange) -> Result<Vec<Row>, RunError> {
    Ok(s.verify_coefficients(r.lo, r.hi)?
        .into_iter()
        .map(|c| Row::new(RowKind::Coefficient, c.name, c.m, &c.defined, &c.closed, c.matched))
        .collect())
}

/// The `H5-order` row: the value under the displayed derivative order
/// against the printed result 0.
fn h5_order_row(p: &crate::dsz::H5Probe) -> Row {
    Row::new(RowKind::H5, "H5-order", p.m, &p.alt_value, &p.closed, p.alt_value == p.closed).with_notes(vec![format!(
        "order {} (integral line) gives {}; order {} (displayed bracket) gives {}",
        p.order, p.value, p.alt_order, p.alt_value
    )])
}

fn h5_rows(s: &Session, r: MRange, details: &mut Details) -> Result<Vec<Row>, RunError> {
    let mut rows = Vec::new();
    for m in m_values(r) {
        let p = s.probe_h5(m)?;
        rows.push(Row::new(RowKind::H5, H5, m, &p.value, &p.closed, p.value == p.closed));
        rows.push(h5_order_row(&p));
        details.h5.push(p);
    }
    Ok(rows)
}

/// Split a residual into the part on monomials the printed statement
/// mentions and the part on monomials it leaves out.
fn split_residual(residual: &ScalarPoly, printed: &ScalarPoly) -> (ScalarPoly, ScalarPoly) {
    let support: BTreeSet<&Monomial> = printed.terms().keys().collect();
    (residual.filter(|mono| support.contains(mono)), residual.filter(|mono| !support.contains(mono)))
}

fn case_rows(rep: &CaseReport) -> Vec<Row> {
    let name = case_record(rep.theorem, rep.case);
    let (printed, omitted) = split_residual(&rep.residual, &rep.expected);
    let zero = GaussRat::zero();
    let mut rows = vec![
        Row::new(RowKind::Case, &name, rep.m, &rep.computed, &rep.expected, rep.matched),
        Row::new(RowKind::Case, format!("{}:printed", name), rep.m, &printed, &zero, printed.is_zero())
            .with_notes(poly_notes(&printed)),
        Row::new(RowKind::Case, format!("{}:omitted", name), rep.m, &omitted, &zero, omitted.is_zero())
            .with_notes(poly_notes(&omitted)),
    ];
    if let Some(ok) = rep.by_parts {
        let v = if ok { "agrees" } else { "differs" };
        rows.push(Row::new(RowKind::ByParts, format!("by-parts:{}", name), rep.m, v, "agrees", ok));
    }
    rows
}

fn theorem_rows(rep: &TheoremReport) -> (Vec<Row>, TheoremDetail) {
    let name = theorem_record(rep.theorem);
    let (printed, omitted) = split_residual(&rep.residual, &rep.expected);
    let mut rows = Vec::new();
    for mk in &rep.markers {
        rows.push(Row::new(RowKind::Theorem, format!("{}:{}", name, mk.label), rep.m, &mk.computed, &mk.expected, mk.matched));
    }
    let zero = GaussRat::zero();
    rows.push(
        Row::new(RowKind::Theorem, format!("{}:printed", name), rep.m, &printed, &zero, printed.is_zero())
            .with_notes(poly_notes(&printed)),
    );
    rows.push(
        Row::new(RowKind::Theorem, format!("{}:omitted", name), rep.m, &omitted, &zero, omitted.is_zero())
            .with_notes(poly_notes(&omitted)),
    );
    let printed_sum = rep.cases.iter().fold(ScalarPoly::zero(rep.expected.alphabet()), |acc, c| {
        acc.try_add(&c.expected).expect("one alphabet")
    });
    rows.push(Row::new(RowKind::Theorem, format!("{}:cases-sum", name), rep.m, &printed_sum, &rep.expected, rep.printed_cases_sum));
    let detail = TheoremDetail {
        theorem: rep.theorem,
        m: rep.m,
        total: rep.total.to_string(),
        expected: rep.expected.to_string(),
        residual: rep.residual.to_string(),
        printed_residual: printed.to_string(),
        omitted: omitted.to_string(),
        markers: rep.markers.clone(),
        printed_cases_sum: rep.printed_cases_sum,
        matched: rep.matched,
    };
    (rows, detail)
}

fn input_and_display_rows(s: &Session, m: u32, details: &mut Details) -> Result<Vec<Row>, RunError> {
    let mut rows = Vec::new();
    for inp in s.check_inputs(m)? {
        let defined = if inp.matched { "0".to_string() } else { inp.residual.clone() };
        rows.push(Row::new(RowKind::Input, format!("input:{}", inp.name), m, defined, "0", inp.matched));
        details.inputs.push(inp);
    }
    for d in s.check_displays(m)? {
        let defined = format!("mismatched={} extra={}", d.mismatched.len(), d.extras.len());
        let closed = format!("terms={} complete={}", d.golden_terms, if d.complete { "yes" } else { "no" });
        let notes = d
            .mismatched
            .iter()
            .map(|t| format!("{} {}: engine {} printed {}", t.word, t.monomial, t.engine, t.golden))
            .collect();
        rows.push(Row::new(RowKind::Display, format!("display:{}", d.name), m, defined, closed, d.ok).with_notes(notes));
        details.displays.push(d);
    }
    Ok(rows)
}

/// Per-`m` pipeline work for one theorem, run on its own thread.
fn pipeline_for_m(s: &Session, m: u32, theorems: &[TheoremId]) -> Result<Vec<TheoremReport>, DszError> {
    theorems.iter().map(|&th| s.run_theorem(th, m)).collect()
}

pub fn build_report(cfg: &RunConfig, s: &Session) -> Result<Report, RunError> {
    let RunConfig::Verify { task, m, waive, .. } = cfg else {
        unreachable!("show is handled separately")
    };
    let mut rows = Vec::new();
    let mut details = Details::default();
    let command = match task {
        Task::Coefficients => {
            rows.extend(coefficient_rows(s, *m)?);
            for mm in m_values(*m) {
                rows.push(h5_order_row(&s.probe_h5(mm)?));
            }
            "verify-coefficients"
        }
        Task::ProbeH5 => {
            rows.extend(h5_rows(s, *m, &mut details)?);
            "probe-h5"
        }
        Task::Cases { theorem, case } => {
            let ths: Vec<TheoremId> = TheoremId::ALL.into_iter().filter(|t| theorem.map_or(true, |x| x == *t)).collect();
            let cs: Vec<CaseId> = CaseId::ALL.into_iter().filter(|c| case.map_or(true, |x| x == *c)).collect();
            for mm in m_values(*m) {
                for &th in &ths {
                    for &c in &cs {
                        let rep = s.run_case(th, c, mm)?;
                        rows.extend(case_rows(&rep));
                        details.cases.push(rep);
                    }
                }
            }
            "verify-case"
        }
        Task::All => {
            let all = MRange { lo: 1, hi: MAX_M_COEFFICIENTS };
            rows.extend(coefficient_rows(s, all)?);
            rows.extend(h5_rows(s, all, &mut details)?);
            let ms = m_values(*m);
            let results: Vec<Result<Vec<TheoremReport>, DszError>> = std::thread::scope(|scope| {
                let handles: Vec<_> = ms.iter().map(|&mm| scope.spawn(move || pipeline_for_m(s, mm, &TheoremId::ALL))).collect();
                handles.into_iter().map(|h| h.join().expect("pipeline thread panicked")).collect()
            });
            for (&mm, res) in ms.iter().zip(results) {
                rows.extend(input_and_display_rows(s, mm, &mut details)?);
                for th in res? {
                    for c in &th.cases {
                        rows.extend(case_rows(c));
                    }
                    let (trows, detail) = theorem_rows(&th);
                    rows.extend(trows);
                    details.cases.extend(th.cases.iter().cloned());
                    details.theorems.push(detail);
                }
            }
            "verify-all"
        }
    };
    Ok(Report::new(command, m.to_string(), rows, details, waive))
}

/// Text for `show`: a record listing, or one record with its fields
/// evaluated at `m`.
pub fn show(s: &Session, name: Option<&str>, m: u32, json: bool) -> Result<String, RunError> {
    let g = s.goldens();
    let Some(name) = name else {
        if json {
            let list: Vec<serde_json::Value> = g
                .records()
                .iter()
                .map(|r| serde_json::json!({"name": r.name, "kind": r.kind.to_string(), "anchor": r.anchor}))
                .collect();
            return Ok(serde_json::to_string_pretty(&list).expect("json values serialize") + "\n");
        }
        let width = g.records().iter().map(|r| r.name.len()).max().unwrap_or(4);
        let mut out = String::new();
        for r in g.records() {
            out.push_str(&format!("{:<width$}  {:<11}  {}\n", r.name, r.kind.to_string(), r.anchor, width = width));
        }
        return Ok(out);
    };
    let rec = g.get(name).ok_or_else(|| RunError::Input(format!("no goldens record named `{}`", name)))?;
    let ctx = s.ctx(m)?;
    let mut fields = Vec::new();
    for f in rec.fields() {
        let value = if rec.kind.is_expr_field(&f.key) {
            let e = super::expr::parse(&f.value, f.line).expect("checked at load");
            s.eval(rec, &e, &ctx)?.to_string()
        } else {
            f.value.clone()
        };
        fields.push((f.key.clone(), f.value.clone(), value));
    }
    let mut extra = Vec::new();
    if rec.kind == Kind::Coefficient {
        extra.push(("defined".to_string(), s.coeff_defined(name, m)?.to_string()));
        extra.push(("closed".to_string(), s.coeff_closed(name, m)?.to_string()));
    }
    if json {
        let v = serde_json::json!({
            "name": rec.name,
            "kind": rec.kind.to_string(),
            "line": rec.line,
            "anchor": rec.anchor,
            "quote": rec.quote,
            "m": m,
            "fields": fields.iter().map(|(k, src, val)| serde_json::json!({"key": k, "source": src, "value": val})).collect::<Vec<_>>(),
            "values": extra.iter().map(|(k, v)| serde_json::json!({"key": k, "value": v})).collect::<Vec<_>>(),
        });
        return Ok(serde_json::to_string_pretty(&v).expect("json values serialize") + "\n");
    }
    let mut out = format!("{} ({}, line {})\nanchor: {}\nquote:  {}\nat m = {}:\n", rec.name, rec.kind, rec.line, rec.anchor, rec.quote.replace('\n', "\n        "), m);
    for (k, src, val) in &fields {
        out.push_str(&format!("  {:<9} {}\n", k, src.replace('\n', "\n            ")));
        if src != val {
            out.push_str(&format!("  {:<9} = {}\n", "", val));
        }
    }
    for (k, v) in &extra {
        out.push_str(&format!("  {:<9} {}\n", k, v));
    }
    Ok(out)
}

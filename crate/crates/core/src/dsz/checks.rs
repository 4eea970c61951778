//! Term-level checks of intermediate displays and of the trusted input
//! symbols that carry a derivation.

use std::fmt::Display;

use serde::{Serialize, Serializer};

use super::{DszError, Session};
use crate::cli::goldens::Kind;
use crate::clifford::word_to_string;
use crate::ratfun::RatFun;
use crate::ring::GaussRat;
use crate::symb::BoundarySymbol;

pub(crate) fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// One disagreeing (word, monomial) slot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermDiff {
    pub word: String,
    pub monomial: String,
    pub engine: String,
    pub golden: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisplayReport {
    pub name: String,
    pub anchor: String,
    pub m: u32,
    /// Whether the printed display claims to show every term.
    pub complete: bool,
    pub golden_terms: usize,
    pub engine_terms: usize,
    /// Golden terms whose engine value differs (including engine zero).
    pub mismatched: Vec<TermDiff>,
    /// Engine terms the display does not print.
    pub extras: Vec<TermDiff>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputReport {
    pub name: String,
    pub anchor: String,
    pub m: u32,
    #[serde(rename = "match")]
    pub matched: bool,
    /// `expr - derive`, empty when they agree.
    pub residual: String,
}

fn zero_rf() -> RatFun<GaussRat> {
    RatFun::zero(&())
}

/// Compare two symbols slot by slot after imposing `|xi'| = 1`.
fn diff(engine: &BoundarySymbol, golden: &BoundarySymbol) -> (Vec<TermDiff>, Vec<TermDiff>, usize, usize) {
    let e = engine.reduce_unit_sphere();
    let g = golden.reduce_unit_sphere();
    let alpha = e.ctx().alphabet().clone();
    let render = |key: &(Vec<crate::clifford::Letter>, crate::ring::Monomial), ev: &RatFun<GaussRat>, gv: &RatFun<GaussRat>| TermDiff {
        word: word_to_string(&key.0),
        monomial: key.1.render(&alpha),
        engine: ev.to_string(),
        golden: gv.to_string(),
    };
    let z = zero_rf();
    let mut mismatched = Vec::new();
    for (key, gv) in g.terms() {
        let ev = e.terms().get(key).unwrap_or(&z);
        if ev != gv {
            mismatched.push(render(key, ev, gv));
        }
    }
    let extras = e
        .terms()
        .iter()
        .filter(|(key, _)| !g.terms().contains_key(*key))
        .map(|(key, ev)| render(key, ev, &z))
        .collect();
    (mismatched, extras, g.len(), e.len())
}

impl Session {
    /// Check one `display` record at `m`.
    pub fn check_display(&self, name: &str, m: u32) -> Result<DisplayReport, DszError> {
        let rec = self.record(name)?;
        if rec.kind != Kind::Display {
            return Err(DszError::Shape { record: name.into(), field: "kind".into(), msg: "not a display record".into() });
        }
        let ctx = self.ctx(m)?;
        let engine = self.eval_field(rec, "source", &ctx)?;
        let golden = self.eval_field(rec, "value", &ctx)?;
        let complete = rec.text("complete") == "yes";
        let (mismatched, extras, golden_terms, engine_terms) = diff(&engine, &golden);
        let ok = mismatched.is_empty() && (!complete || extras.is_empty());
        Ok(DisplayReport { name: name.into(), anchor: rec.anchor.clone(), m, complete, golden_terms, engine_terms, mismatched, extras, ok })
    }

    pub fn check_displays(&self, m: u32) -> Result<Vec<DisplayReport>, DszError> {
        let names: Vec<String> = self.goldens().of_kind(Kind::Display).map(|r| r.name.clone()).collect();
        names.iter().map(|n| self.check_display(n, m)).collect()
    }

    /// Every input record with a `derive` field, compared on the unit sphere.
    pub fn check_inputs(&self, m: u32) -> Result<Vec<InputReport>, DszError> {
        let ctx = self.ctx(m)?;
        let mut out = Vec::new();
        for rec in self.goldens().of_kind(Kind::Input) {
            if rec.field("derive").is_none() {
                continue;
            }
            let given = self.input(&rec.name, m)?;
            let derived = self.eval_field(rec, "derive", &ctx)?;
            let res = given
                .try_sub(&derived)
                .map_err(|source| DszError::Step { step: format!("input {}", rec.name), source })?
                .reduce_unit_sphere();
            out.push(InputReport {
                name: rec.name.clone(),
                anchor: rec.anchor.clone(),
                m,
                matched: res.is_zero(),
                residual: if res.is_zero() { String::new() } else { res.to_string() },
            });
        }
        Ok(out)
    }
}

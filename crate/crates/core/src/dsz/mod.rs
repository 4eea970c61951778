//! Theorem layer: the coefficient catalog, the ten case pipelines and the
//! comparison of their sum with the encoded theorem statements.
//!
//! All encoded data (coefficients, input symbols, printed case results and
//! theorem statements) comes from a [`Goldens`] file. A [`Session`] binds a
//! goldens set and caches per-`m` contexts and evaluated inputs.

mod cases;
mod catalog;
mod checks;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::cli::expr::{Evaluator, ExprError, Resolver, Sexp};
use crate::cli::goldens::{Goldens, Kind, Record};
use crate::ratfun::RatFunError;
use crate::ring::GaussRat;
use crate::symb::{BoundarySymbol, SymbCtx, SymbError};

pub use cases::{CaseReport, MarkerRow, PartReport, TheoremReport};
pub use catalog::{CoeffRow, H5Probe, COEFFICIENTS, H5};
pub use checks::{DisplayReport, InputReport, TermDiff};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DszError {
    #[error("goldens catalog: {0}")]
    Catalog(String),
    #[error("unknown coefficient `{0}`")]
    UnknownCoefficient(String),
    #[error("unknown record `{0}`")]
    UnknownRecord(String),
    #[error("m must be at least 1")]
    BadM,
    #[error("record `{record}`: {source}")]
    Expr { record: String, source: ExprError },
    #[error("record `{record}`, field `{field}`: {msg}")]
    Shape { record: String, field: String, msg: String },
    #[error("{step}: {source}")]
    Step { step: String, source: SymbError },
    #[error(transparent)]
    RatFun(#[from] RatFunError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremId {
    A,
    B,
}

impl TheoremId {
    pub const ALL: [TheoremId; 2] = [TheoremId::A, TheoremId::B];
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremId::A => "A",
            TheoremId::B => "B",
        })
    }
}

impl FromStr for TheoremId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(TheoremId::A),
            "B" | "b" => Ok(TheoremId::B),
            _ => Err(format!("unknown theorem `{}` (expected A or B)", s)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
    V,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [CaseId::I, CaseId::II, CaseId::III, CaseId::IV, CaseId::V];
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseId::I => "I",
            CaseId::II => "II",
            CaseId::III => "III",
            CaseId::IV => "IV",
            CaseId::V => "V",
        })
    }
}

impl FromStr for CaseId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(CaseId::I),
            "II" | "2" => Ok(CaseId::II),
            "III" | "3" => Ok(CaseId::III),
            "IV" | "4" => Ok(CaseId::IV),
            "V" | "5" => Ok(CaseId::V),
            _ => Err(format!("unknown case `{}` (expected I..V)", s)),
        }
    }
}

/// A goldens set plus per-`m` caches. Cheap to share behind a reference;
/// the caches are guarded so pipelines may run from several threads.
pub struct Session {
    goldens: Goldens,
    ctxs: Mutex<HashMap<u32, Arc<SymbCtx>>>,
    inputs: Mutex<HashMap<(String, u32), BoundarySymbol>>,
}

impl Session {
    /// Bind a goldens set, checking that the catalog and all case and theorem
    /// records are present.
    pub fn new(goldens: Goldens) -> Result<Session, DszError> {
        let coeff_names: Vec<&str> = goldens.of_kind(Kind::Coefficient).map(|r| r.name.as_str()).collect();
        for name in COEFFICIENTS {
            if !coeff_names.contains(&name) {
                return Err(DszError::Catalog(format!("coefficient `{}` is missing", name)));
            }
        }
        if let Some(extra) = coeff_names.iter().find(|n| !COEFFICIENTS.contains(n)) {
            return Err(DszError::Catalog(format!("`{}` is not a catalog coefficient", extra)));
        }
        for th in TheoremId::ALL {
            if goldens.get(&theorem_record(th)).map(|r| r.kind) != Some(Kind::Theorem) {
                return Err(DszError::Catalog(format!("theorem record `{}` is missing", theorem_record(th))));
            }
            for c in CaseId::ALL {
                let name = case_record(th, c);
                let rec = goldens.get(&name).filter(|r| r.kind == Kind::Case);
                let rec = rec.ok_or_else(|| DszError::Catalog(format!("case record `{}` is missing", name)))?;
                if rec.text("theorem") != th.to_string() || rec.text("case").parse::<CaseId>() != Ok(c) {
                    return Err(DszError::Catalog(format!("case record `{}` has mismatched selectors", name)));
                }
            }
        }
        Ok(Session { goldens, ctxs: Mutex::new(HashMap::new()), inputs: Mutex::new(HashMap::new()) })
    }

    pub fn builtin() -> Session {
        Session::new(Goldens::builtin()).expect("the bundled goldens are complete")
    }

    pub fn goldens(&self) -> &Goldens {
        &self.goldens
    }

    pub fn ctx(&self, m: u32) -> Result<Arc<SymbCtx>, DszError> {
        if m == 0 {
            return Err(DszError::BadM);
        }
        if let Some(c) = self.ctxs.lock().expect("cache lock").get(&m) {
            return Ok(c.clone());
        }
        let c = SymbCtx::new(m).map_err(|e| DszError::Step { step: format!("context for m={}", m), source: e })?;
        self.ctxs.lock().expect("cache lock").insert(m, c.clone());
        Ok(c)
    }

    pub(crate) fn record(&self, name: &str) -> Result<&Record, DszError> {
        self.goldens.get(name).ok_or_else(|| DszError::UnknownRecord(name.to_string()))
    }

    pub(crate) fn eval(&self, rec: &Record, e: &Sexp, ctx: &Arc<SymbCtx>) -> Result<BoundarySymbol, DszError> {
        Evaluator::new(ctx, self).eval(e).map_err(|source| DszError::Expr { record: rec.name.clone(), source })
    }

    pub(crate) fn eval_field(&self, rec: &Record, field: &str, ctx: &Arc<SymbCtx>) -> Result<BoundarySymbol, DszError> {
        let e = rec.expr(field).ok_or_else(|| DszError::Shape {
            record: rec.name.clone(),
            field: field.to_string(),
            msg: "field missing".into(),
        })?;
        self.eval(rec, &e, ctx)
    }

    pub(crate) fn eval_int(&self, rec: &Record, field: &str, ctx: &Arc<SymbCtx>) -> Result<i64, DszError> {
        let v = self.eval_field(rec, field, ctx)?;
        v.as_constant().and_then(|c| c.to_i64()).ok_or_else(|| DszError::Shape {
            record: rec.name.clone(),
            field: field.to_string(),
            msg: format!("expected an integer, got {}", v),
        })
    }

    /// The evaluated expression of an `input` record.
    pub fn input(&self, name: &str, m: u32) -> Result<BoundarySymbol, DszError> {
        let key = (name.to_string(), m);
        if let Some(v) = self.inputs.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let rec = self.record(name)?;
        if rec.kind != Kind::Input {
            return Err(DszError::Shape { record: name.to_string(), field: "kind".into(), msg: "not an input record".into() });
        }
        let ctx = self.ctx(m)?;
        let v = self.eval_field(rec, "expr", &ctx)?;
        self.inputs.lock().expect("cache lock").insert(key, v.clone());
        Ok(v)
    }
}

impl Resolver for Session {
    fn coef(&self, name: &str, ctx: &Arc<SymbCtx>) -> Result<GaussRat, String> {
        self.coeff_defined(name, ctx.m()).map_err(|e| e.to_string())
    }

    fn reference(&self, name: &str, ctx: &Arc<SymbCtx>) -> Result<BoundarySymbol, String> {
        self.input(name, ctx.m()).map_err(|e| e.to_string())
    }
}

pub fn case_record(th: TheoremId, c: CaseId) -> String {
    format!("case-{}-{}", th, c)
}

pub fn theorem_record(th: TheoremId) -> String {
    format!("theorem-{}", th)
}

pub(crate) fn step<T>(label: impl Into<String>, r: Result<T, SymbError>) -> Result<T, DszError> {
    r.map_err(|source| DszError::Step { step: label.into(), source })
}

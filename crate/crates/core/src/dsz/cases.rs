//! The case pipelines and the theorem comparison.
//!
//! A case record names the left and right symbols, the derivative counts
//! `j`, `k` and the multi-index length `alpha`. The case value is
//!
//! ```text
//! pref * ∫_{|xi'|=1} ∮ tr[ L'(t) R'(t) ] dt dxi'
//! pref = (-i)^(alpha+j+k+1) / (alpha! (j+k+1)!)
//! L'   = dt^k pi+ (dxn^j L)      (then Σ_k dxi_k when alpha = 1)
//! R'   = dt^(j+1) dxn^k R
//! ```
//!
//! Several left records are summed; each one gets its own part report.

use serde::Serialize;

use super::{case_record, step, theorem_record, CaseId, DszError, Session, TheoremId};
use crate::ring::{GaussRat, Monomial, ScalarPoly};
use crate::symb::{BoundarySymbol, SymbCtx};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartReport {
    pub source: String,
    #[serde(serialize_with = "super::checks::ser_display")]
    pub value: ScalarPoly,
    /// Terms with an odd tangential moment, integrated to zero.
    pub odd_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    #[serde(serialize_with = "super::checks::ser_display")]
    pub theorem: TheoremId,
    #[serde(serialize_with = "super::checks::ser_display")]
    pub case: CaseId,
    pub m: u32,
    pub parts: Vec<PartReport>,
    #[serde(serialize_with = "super::checks::ser_display")]
    pub computed: ScalarPoly,
    #[serde(serialize_with = "super::checks::ser_display")]
    pub expected: ScalarPoly,
    /// `computed - expected`; zero exactly when the case matches.
    #[serde(serialize_with = "super::checks::ser_display")]
    pub residual: ScalarPoly,
    #[serde(rename = "match")]
    pub matched: bool,
    /// Moving `dt^(j+1)` from the right factor onto the left one, with sign
    /// `(-1)^(j+1)`, gives the same value. `None` when not applicable (alpha = 1).
    pub by_parts: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkerRow {
    pub label: String,
    pub monomial: String,
    #[serde(serialize_with = "super::checks::ser_display")]
    pub computed: GaussRat,
    #[serde(serialize_with = "super::checks::ser_display")]
    pub expected: GaussRat,
    #[serde(rename = "match")]
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    #[serde(serialize_with = "super::checks::ser_display")]
    pub theorem: TheoremId,
    pub m: u32,
    pub cases: Vec<CaseReport>,
    #[serde(serialize_with = "super::checks::ser_display")]
    pub total: ScalarPoly,
    #[serde(serialize_with = "super::checks::ser_display")]
    pub expected: ScalarPoly,
    #[serde(serialize_with = "super::checks::ser_display")]
    pub residual: ScalarPoly,
    pub markers: Vec<MarkerRow>,
    /// The printed case values sum to the printed theorem.
    pub printed_cases_sum: bool,
    #[serde(rename = "match")]
    pub matched: bool,
}

fn prefactor(alpha: i64, j: i64, k: i64) -> GaussRat {
    let minus_i = -GaussRat::i();
    let num = minus_i.pow(alpha + j + k + 1).expect("nonzero base");
    let fact = |n: i64| (2..=n).fold(GaussRat::one(), |acc, v| &acc * &GaussRat::from_int(v));
    let den = &fact(alpha) * &fact(j + k + 1);
    num.checked_div(&den).expect("nonzero factorial")
}

fn integrate(label: &str, integrand: &BoundarySymbol) -> Result<(ScalarPoly, usize), DszError> {
    let traced = step(format!("{}: trace", label), integrand.trace())?;
    let along = step(format!("{}: xi_n contour integral", label), traced.xi_n_int())?;
    let odd = along.odd_sphere_terms();
    let v = step(format!("{}: sphere integral", label), along.sphere_int())?;
    Ok((v, odd))
}

impl Session {
    pub fn run_case(&self, th: TheoremId, c: CaseId, m: u32) -> Result<CaseReport, DszError> {
        let ctx = self.ctx(m)?;
        let rec = self.record(&case_record(th, c))?;
        let label = format!("case {}-{} (m={})", th, c, m);
        let j = self.eval_int(rec, "j", &ctx)?;
        let k = self.eval_int(rec, "k", &ctx)?;
        let alpha = self.eval_int(rec, "alpha", &ctx)?;
        if j < 0 || k < 0 || !(0..=1).contains(&alpha) {
            return Err(DszError::Shape { record: rec.name.clone(), field: "j/k/alpha".into(), msg: "out of range".into() });
        }
        let pref = prefactor(alpha, j, k);

        let right = self.eval_field(rec, "right", &ctx)?;
        let right_x = step(format!("{}: dxn^{} of right symbol", label, k), right.dxn_n(k as u32))?;
        let right_d = right_x.dt_n((j + 1) as u32);

        let mut parts = Vec::new();
        let mut by_parts_ok = alpha == 0;
        for left_e in rec.exprs("left") {
            let source = left_e.to_string();
            let left = self.eval(rec, &left_e, &ctx)?;
            let left_x = step(format!("{}: dxn^{} of {}", label, j, source), left.dxn_n(j as u32))?;
            let left_d = left_x.pi_plus().dt_n(k as u32);
            let integrand = if alpha == 1 {
                let mut acc = BoundarySymbol::zero(&ctx);
                if !right_d.is_zero() {
                    for kk in 1..ctx.n() {
                        let dl = step(format!("{}: dxi_{} of {}", label, kk, source), left_d.dxi(kk))?;
                        let prod = step(format!("{}: product", label), dl.try_mul(&right_d))?;
                        acc = step(format!("{}: sum over xi'", label), acc.try_add(&prod))?;
                    }
                }
                acc
            } else {
                step(format!("{}: product", label), left_d.try_mul(&right_d))?
            };
            let (value, odd_terms) = integrate(&label, &integrand)?;
            let value = value.scale(&pref);
            if alpha == 0 {
                let moved = step(format!("{}: by-parts product", label), left_d.dt_n((j + 1) as u32).try_mul(&right_x))?;
                let (alt, _) = integrate(&label, &moved)?;
                let sign = if (j + 1) % 2 == 0 { GaussRat::one() } else { GaussRat::from_int(-1) };
                by_parts_ok &= alt.scale(&(&sign * &pref)) == value;
            }
            parts.push(PartReport { source, value, odd_terms });
        }

        let mut computed = ScalarPoly::zero(ctx.alphabet());
        for p in &parts {
            computed = computed.try_add(&p.value).expect("one alphabet");
        }
        let expected = self.scalar_field(rec, "expect", &ctx)?;
        let residual = computed.try_sub(&expected).expect("one alphabet");
        Ok(CaseReport {
            theorem: th,
            case: c,
            m,
            parts,
            matched: residual.is_zero(),
            computed,
            expected,
            residual,
            by_parts: (alpha == 0).then_some(by_parts_ok),
        })
    }

    fn scalar_field(&self, rec: &crate::cli::goldens::Record, field: &str, ctx: &Arc<SymbCtx>) -> Result<ScalarPoly, DszError> {
        let v = self.eval_field(rec, field, ctx)?;
        v.as_scalar().map_err(|e| DszError::Shape { record: rec.name.clone(), field: field.into(), msg: e.to_string() })
    }

    /// The printed value of a case, evaluated at `m`.
    pub fn case_expected(&self, th: TheoremId, c: CaseId, m: u32) -> Result<ScalarPoly, DszError> {
        let ctx = self.ctx(m)?;
        self.scalar_field(self.record(&case_record(th, c))?, "expect", &ctx)
    }

    pub fn theorem_expected(&self, th: TheoremId, m: u32) -> Result<ScalarPoly, DszError> {
        let ctx = self.ctx(m)?;
        self.scalar_field(self.record(&theorem_record(th))?, "expect", &ctx)
    }

    pub fn run_theorem(&self, th: TheoremId, m: u32) -> Result<TheoremReport, DszError> {
        let ctx = self.ctx(m)?;
        let cases = CaseId::ALL.iter().map(|&c| self.run_case(th, c, m)).collect::<Result<Vec<_>, _>>()?;
        let zero = ScalarPoly::zero(ctx.alphabet());
        let total = cases.iter().fold(zero.clone(), |acc, r| acc.try_add(&r.computed).expect("one alphabet"));
        let printed = cases.iter().fold(zero, |acc, r| acc.try_add(&r.expected).expect("one alphabet"));
        let expected = self.theorem_expected(th, m)?;
        let residual = total.try_sub(&expected).expect("one alphabet");
        let markers = marker_monomials(&ctx)?
            .into_iter()
            .map(|(label, mono)| {
                let computed = total.coeff(&mono);
                let exp = expected.coeff(&mono);
                MarkerRow {
                    label: label.to_string(),
                    monomial: mono.render(ctx.alphabet()),
                    matched: computed == exp,
                    computed,
                    expected: exp,
                }
            })
            .collect();
        Ok(TheoremReport {
            theorem: th,
            m,
            printed_cases_sum: printed == expected,
            matched: residual.is_zero(),
            cases,
            total,
            expected,
            residual,
            markers,
        })
    }
}

/// One representative monomial for each formal structure in the theorems,
/// times `pi vol`.
fn marker_monomials(ctx: &Arc<SymbCtx>) -> Result<Vec<(&'static str, Monomial)>, DszError> {
    let n = ctx.n();
    let spec: [(&'static str, Vec<String>); 5] = [
        ("dxn(g(X^T,Y^T) Z_n)", vec!["dX1".into(), "Y1".into(), format!("Z{}", n)]),
        ("dxn(X_n Y_n Z_n)", vec![format!("dX{}", n), format!("Y{}", n), format!("Z{}", n)]),
        ("g(X^T,Y^T) Z_n h'(0)", vec!["X1".into(), "Y1".into(), format!("Z{}", n), "h1".into()]),
        ("X_n Y_n Z_n h'(0)", vec![format!("X{}", n), format!("Y{}", n), format!("Z{}", n), "h1".into()]),
        ("X(Y_n) Z_n", vec![format!("XY{}", n), format!("Z{}", n)]),
    ];
    let alpha = ctx.alphabet();
    let mut out = Vec::new();
    for (label, names) in spec {
        let mut pairs = Vec::new();
        for name in names.iter().map(String::as_str).chain(["pi", "vol"]) {
            let v = alpha.lookup(name).map_err(|e| DszError::Step { step: "marker".into(), source: e.into() })?;
            pairs.push((v, 1));
        }
        out.push((label, Monomial::from_pairs(pairs)));
    }
    Ok(out)
}

//! Coefficient catalog: each coefficient is the value at `t = i` of a
//! derivative of `numer / (t+i)^pole`, with a printed closed form.

use serde::Serialize;

use super::{DszError, Session};
use crate::cli::goldens::Record;
use crate::ratfun::RatFun;
use crate::ring::GaussRat;

pub const COEFFICIENTS: [&str; 28] = [
    "A0", "A1", "A2", "A3", "B0", "B1", "C0", "C1", "C2", "C3", "D0", "D1", "D2", "D3", "E0", "E1", "E2", "E3", "F0",
    "F1", "G0", "G1", "H0", "H1", "H2", "H3", "H4", "H5",
];

/// The coefficient whose printed derivative order is inconsistent; it is
/// probed instead of verified.
pub const H5: &str = "H5";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffRow {
    pub name: String,
    pub m: u32,
    #[serde(serialize_with = "crate::dsz::checks::ser_display")]
    pub defined: GaussRat,
    #[serde(serialize_with = "crate::dsz::checks::ser_display")]
    pub closed: GaussRat,
    #[serde(rename = "match")]
    pub matched: bool,
}

/// Both readings of the H5 derivative order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct H5Probe {
    pub m: u32,
    pub order: i64,
    #[serde(serialize_with = "crate::dsz::checks::ser_display")]
    pub value: GaussRat,
    pub alt_order: i64,
    #[serde(serialize_with = "crate::dsz::checks::ser_display")]
    pub alt_value: GaussRat,
    #[serde(serialize_with = "crate::dsz::checks::ser_display")]
    pub closed: GaussRat,
}

impl Session {
    fn coeff_record(&self, name: &str) -> Result<&Record, DszError> {
        if !COEFFICIENTS.contains(&name) {
            return Err(DszError::UnknownCoefficient(name.to_string()));
        }
        self.record(name)
    }

    fn coeff_with_order(&self, name: &str, m: u32, order_field: &str) -> Result<(i64, GaussRat), DszError> {
        let rec = self.coeff_record(name)?;
        let ctx = self.ctx(m)?;
        let numer = self.eval_field(rec, "numer", &ctx)?;
        let numer = numer.as_radial().ok_or_else(|| DszError::Shape {
            record: name.to_string(),
            field: "numer".into(),
            msg: format!("not a rational function of t: {}", numer),
        })?;
        let pole = self.eval_int(rec, "pole", &ctx)?;
        let order = self.eval_int(rec, order_field, &ctx)?;
        let bad = |field: &str, v: i64| DszError::Shape {
            record: name.to_string(),
            field: field.to_string(),
            msg: format!("must be non-negative, got {}", v),
        };
        let pole_u = u32::try_from(pole).map_err(|_| bad("pole", pole))?;
        let order_u = u32::try_from(order).map_err(|_| bad(order_field, order))?;
        let f = numer.try_mul(&RatFun::poles(&(), 0, pole_u))?;
        Ok((order, f.deriv_at(order_u, &GaussRat::i())?))
    }

    /// The coefficient's defining derivative, evaluated exactly.
    pub fn coeff_defined(&self, name: &str, m: u32) -> Result<GaussRat, DszError> {
        Ok(self.coeff_with_order(name, m, "order")?.1)
    }

    /// The printed closed form.
    pub fn coeff_closed(&self, name: &str, m: u32) -> Result<GaussRat, DszError> {
        let rec = self.coeff_record(name)?;
        let ctx = self.ctx(m)?;
        let v = self.eval_field(rec, "closed", &ctx)?;
        v.as_constant().ok_or_else(|| DszError::Shape {
            record: name.to_string(),
            field: "closed".into(),
            msg: format!("not a constant: {}", v),
        })
    }

    /// One row per (coefficient, m), H5 excluded, ordered by catalog position then m.
    pub fn verify_coefficients(&self, m_lo: u32, m_hi: u32) -> Result<Vec<CoeffRow>, DszError> {
        if m_lo == 0 {
            return Err(DszError::BadM);
        }
        let mut rows = Vec::new();
        for name in COEFFICIENTS.iter().filter(|n| **n != H5) {
            for m in m_lo..=m_hi {
                let defined = self.coeff_defined(name, m)?;
                let closed = self.coeff_closed(name, m)?;
                let matched = defined == closed;
                rows.push(CoeffRow { name: name.to_string(), m, defined, closed, matched });
            }
        }
        Ok(rows)
    }

    pub fn probe_h5(&self, m: u32) -> Result<H5Probe, DszError> {
        let (order, value) = self.coeff_with_order(H5, m, "order")?;
        let (alt_order, alt_value) = self.coeff_with_order(H5, m, "alt_order")?;
        let closed = self.coeff_closed(H5, m)?;
        Ok(H5Probe { m, order, value, alt_order, alt_value, closed })
    }
}

//! Rational functions of the single variable `t` whose poles lie in `{+i, -i}`,
//! with partial fractions, the upper-half-plane projection `pi_plus`, the
//! residue functional `pi_prime`, and contour integration around `+i`.
//!
//! A `RatFun` is stored as `N(t) / ((t - i)^a (t + i)^b)` with `N` dense and
//! sharing no root with a nonzero pole order.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ring::{Alphabet, GaussRat, RingError, ScalarPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFunError {
    #[error("non-integrable over the upper contour: nonzero polynomial part")]
    NonIntegrable,
    #[error("point {0} is a pole")]
    PoleAtPoint(GaussRat),
    #[error("rational function is not invertible within the +/-i pole ring")]
    NotInvertible,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Coefficient domain of a `RatFun`: a commutative ℚ(i)-algebra.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    /// Whatever is needed to build a zero: nothing for ℚ(i), the alphabet for polynomials.
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn from_gauss(ctx: &Self::Ctx, c: GaussRat) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &GaussRat) -> Self;
    fn try_inv(&self) -> Option<Self>;

    fn neg(&self) -> Self {
        self.scale(&GaussRat::from_int(-1))
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Coeff for GaussRat {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero_in(_: &()) -> Self {
        GaussRat::zero()
    }
    fn from_gauss(_: &(), c: GaussRat) -> Self {
        c
    }
    fn is_zero(&self) -> bool {
        GaussRat::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &GaussRat) -> Self {
        self * c
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

/// Coefficient arithmetic inside one `RatFun` never mixes alphabets: the
/// constructors check every coefficient against the function's context.
impl Coeff for ScalarPoly {
    type Ctx = Arc<Alphabet>;

    fn ctx(&self) -> Arc<Alphabet> {
        self.alphabet().clone()
    }
    fn zero_in(ctx: &Arc<Alphabet>) -> Self {
        ScalarPoly::zero(ctx)
    }
    fn from_gauss(ctx: &Arc<Alphabet>, c: GaussRat) -> Self {
        ScalarPoly::constant(ctx, c)
    }
    fn is_zero(&self) -> bool {
        ScalarPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("coefficients share the function's alphabet")
    }
    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("coefficients share the function's alphabet")
    }
    fn scale(&self, c: &GaussRat) -> Self {
        ScalarPoly::scale(self, c)
    }
    fn try_inv(&self) -> Option<Self> {
        let c = self.as_constant()?;
        Some(ScalarPoly::constant(self.alphabet(), c.inv().ok()?))
    }
}

// ---------------------------------------------------------------------------
// Dense polynomial helpers; index k holds the coefficient of t^k.

fn trim<C: Coeff>(p: &mut Vec<C>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_add<C: Coeff>(a: &[C], b: &[C], ctx: &C::Ctx) -> Vec<C> {
    let len = a.len().max(b.len());
    let zero = C::zero_in(ctx);
    let mut out: Vec<C> = (0..len)
        .map(|k| a.get(k).unwrap_or(&zero).add(b.get(k).unwrap_or(&zero)))
        .collect();
    trim(&mut out);
    out
}

fn poly_mul<C: Coeff>(a: &[C], b: &[C], ctx: &C::Ctx) -> Vec<C> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C::zero_in(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(&mut out);
    out
}

/// Multiply by `(t - r)`.
fn poly_mul_linear<C: Coeff>(p: &[C], r: &GaussRat, ctx: &C::Ctx) -> Vec<C> {
    if p.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C::zero_in(ctx); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k + 1] = out[k + 1].add(c);
        out[k] = out[k].sub(&c.scale(r));
    }
    trim(&mut out);
    out
}

fn poly_mul_linear_pow<C: Coeff>(p: &[C], r: &GaussRat, e: u32, ctx: &C::Ctx) -> Vec<C> {
    let mut out = p.to_vec();
    for _ in 0..e {
        out = poly_mul_linear(&out, r, ctx);
    }
    out
}

/// Synthetic division by `(t - r)`: returns quotient and remainder `p(r)`.
fn poly_div_linear<C: Coeff>(p: &[C], r: &GaussRat, ctx: &C::Ctx) -> (Vec<C>, C) {
    if p.is_empty() {
        return (Vec::new(), C::zero_in(ctx));
    }
    let mut q = vec![C::zero_in(ctx); p.len() - 1];
    let mut acc = C::zero_in(ctx);
    for k in (0..p.len()).rev() {
        acc = acc.scale(r).add(&p[k]);
        if k > 0 {
            q[k - 1] = acc.clone();
        }
    }
    trim(&mut q);
    (q, acc)
}

/// Coefficients of `p(r + s)` as a polynomial in `s`, by repeated synthetic division.
fn taylor_shift<C: Coeff>(p: &[C], r: &GaussRat, ctx: &C::Ctx) -> Vec<C> {
    let mut out = Vec::with_capacity(p.len());
    let mut cur = p.to_vec();
    while !cur.is_empty() {
        let (q, rem) = poly_div_linear(&cur, r, ctx);
        out.push(rem);
        cur = q;
    }
    trim(&mut out);
    out
}

/// Long division by a monic divisor, quotient only.
fn poly_div_monic<C: Coeff>(p: &[C], d: &[GaussRat], ctx: &C::Ctx) -> Vec<C> {
    let dl = d.len();
    if p.len() < dl {
        return Vec::new();
    }
    let mut rem = p.to_vec();
    let mut q = vec![C::zero_in(ctx); p.len() - dl + 1];
    for k in (0..q.len()).rev() {
        let lead = rem[k + dl - 1].clone();
        if lead.is_zero() {
            continue;
        }
        for (j, dj) in d.iter().enumerate() {
            rem[k + j] = rem[k + j].sub(&lead.scale(dj));
        }
        q[k] = lead;
    }
    trim(&mut q);
    q
}

/// Binomial coefficient C(n, k) as a Gaussian rational.
fn binom(n: u64, k: u64) -> GaussRat {
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    GaussRat::from_bigint(acc)
}

/// First `len` series coefficients of `(c + s)^(-k)` around `s = 0`.
fn inv_power_series(c: &GaussRat, k: u32, len: usize) -> Result<Vec<GaussRat>, RingError> {
    let cinv = c.inv()?;
    let mut out = Vec::with_capacity(len);
    let mut cpow = cinv.pow(k as i64)?;
    for j in 0..len as u64 {
        // binom(-k, j) = (-1)^j C(k + j - 1, j)
        let mut b = match (k, j) {
            (0, 0) => GaussRat::one(),
            (0, _) => GaussRat::zero(),
            _ => binom(k as u64 + j - 1, j),
        };
        if j % 2 == 1 {
            b = -b;
        }
        out.push(&b * &cpow);
        cpow = &cpow * &cinv;
    }
    Ok(out)
}

fn series_mul<C: Coeff>(a: &[C], b: &[GaussRat], len: usize, ctx: &C::Ctx) -> Vec<C> {
    let mut out = vec![C::zero_in(ctx); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j].add(&x.scale(y));
        }
    }
    out
}

fn factorial(k: u32) -> GaussRat {
    let mut acc = BigInt::from(1);
    for j in 2..=k {
        acc *= BigInt::from(j);
    }
    GaussRat::from_bigint(acc)
}

fn plus_i() -> GaussRat {
    GaussRat::i()
}

fn minus_i() -> GaussRat {
    -GaussRat::i()
}

// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq)]
pub struct RatFun<C: Coeff> {
    ctx: C::Ctx,
    num: Vec<C>,
    plus: u32,
    minus: u32,
}

/// `f = P(t) + Σ plus[k-1]/(t-i)^k + Σ minus[k-1]/(t+i)^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions<C: Coeff> {
    pub polynomial_part: Vec<C>,
    pub plus_coeffs: Vec<C>,
    pub minus_coeffs: Vec<C>,
}

impl<C: Coeff> RatFun<C> {
    /// `num / ((t-i)^plus (t+i)^minus)`, canonicalised. Every coefficient
    /// must live in `ctx`.
    pub fn new(ctx: &C::Ctx, num: Vec<C>, plus: u32, minus: u32) -> Result<Self, RatFunError> {
        if num.iter().any(|c| c.ctx() != *ctx) {
            return Err(RingError::AlphabetMismatch.into());
        }
        Ok(Self::raw(ctx, num, plus, minus))
    }

    fn raw(ctx: &C::Ctx, mut num: Vec<C>, mut plus: u32, mut minus: u32) -> Self {
        trim(&mut num);
        if num.is_empty() {
            return RatFun { ctx: ctx.clone(), num, plus: 0, minus: 0 };
        }
        for (r, order) in [(plus_i(), &mut plus), (minus_i(), &mut minus)] {
            while *order > 0 {
                let (q, rem) = poly_div_linear(&num, &r, ctx);
                if !rem.is_zero() {
                    break;
                }
                num = q;
                *order -= 1;
            }
        }
        RatFun { ctx: ctx.clone(), num, plus, minus }
    }

    pub fn zero(ctx: &C::Ctx) -> Self {
        Self::raw(ctx, Vec::new(), 0, 0)
    }

    pub fn constant(c: C) -> Self {
        let ctx = c.ctx();
        Self::raw(&ctx, vec![c], 0, 0)
    }

    pub fn polynomial(ctx: &C::Ctx, coeffs: Vec<C>) -> Result<Self, RatFunError> {
        Self::new(ctx, coeffs, 0, 0)
    }

    /// The variable `t` itself.
    pub fn t(ctx: &C::Ctx) -> Self {
        Self::raw(ctx, vec![C::zero_in(ctx), C::from_gauss(ctx, GaussRat::one())], 0, 0)
    }

    /// `(t - i)^-plus (t + i)^-minus`.
    pub fn poles(ctx: &C::Ctx, plus: u32, minus: u32) -> Self {
        Self::raw(ctx, vec![C::from_gauss(ctx, GaussRat::one())], plus, minus)
    }

    /// `(1 + t^2)^(-k)`.
    pub fn inv_q(ctx: &C::Ctx, k: u32) -> Self {
        Self::poles(ctx, k, k)
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn numerator(&self) -> &[C] {
        &self.num
    }

    pub fn pole_order_plus(&self) -> u32 {
        self.plus
    }

    pub fn pole_order_minus(&self) -> u32 {
        self.minus
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.plus == 0 && self.minus == 0
    }

    /// The value as a bare coefficient, if the function is constant.
    pub fn as_constant(&self) -> Option<C> {
        if !self.is_polynomial() {
            return None;
        }
        match self.num.len() {
            0 => Some(C::zero_in(&self.ctx)),
            1 => Some(self.num[0].clone()),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<(), RatFunError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(RingError::AlphabetMismatch.into())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RatFunError> {
        self.check(other)?;
        let (pa, pb) = (self.plus.max(other.plus), self.minus.max(other.minus));
        let lift = |f: &Self| {
            let n = poly_mul_linear_pow(&f.num, &plus_i(), pa - f.plus, &self.ctx);
            poly_mul_linear_pow(&n, &minus_i(), pb - f.minus, &self.ctx)
        };
        let num = poly_add(&lift(self), &lift(other), &self.ctx);
        Ok(Self::raw(&self.ctx, num, pa, pb))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RatFunError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, RatFunError> {
        self.check(other)?;
        let num = poly_mul(&self.num, &other.num, &self.ctx);
        Ok(Self::raw(&self.ctx, num, self.plus + other.plus, self.minus + other.minus))
    }

    pub fn neg(&self) -> Self {
        self.scale_gauss(&GaussRat::from_int(-1))
    }

    pub fn scale(&self, c: &C) -> Self {
        let num = self.num.iter().map(|x| x.mul(c)).collect();
        Self::raw(&self.ctx, num, self.plus, self.minus)
    }

    pub fn scale_gauss(&self, c: &GaussRat) -> Self {
        let num = self.num.iter().map(|x| x.scale(c)).collect();
        Self::raw(&self.ctx, num, self.plus, self.minus)
    }

    /// `d/dt` by the quotient rule.
    pub fn deriv(&self) -> Self {
        if self.num.is_empty() {
            return self.clone();
        }
        let ctx = &self.ctx;
        let dn: Vec<C> = self.num.iter().enumerate().skip(1).map(|(k, c)| c.scale(&GaussRat::from_int(k as i64))).collect();
        // N' (t-i)(t+i) - N (a (t+i) + b (t-i))
        let q = poly_mul_linear(&poly_mul_linear(&dn, &plus_i(), ctx), &minus_i(), ctx);
        let a = GaussRat::from_int(self.plus as i64);
        let b = GaussRat::from_int(self.minus as i64);
        // a(t+i) + b(t-i) = (a+b) t + (a-b) i
        let lin = vec![
            C::from_gauss(ctx, &(&a - &b) * &GaussRat::i()),
            C::from_gauss(ctx, &a + &b),
        ];
        let num = poly_add(&q, &poly_mul(&self.num, &lin, ctx).iter().map(|c| c.neg()).collect::<Vec<_>>(), ctx);
        Self::raw(ctx, num, self.plus + 1, self.minus + 1)
    }

    pub fn deriv_n(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |f, _| f.deriv())
    }

    pub fn partial_fractions(&self) -> PartialFractions<C> {
        let ctx = &self.ctx;
        let den = {
            let one = vec![GaussRat::one()];
            let d = poly_mul_linear_pow(&one, &plus_i(), self.plus, &());
            poly_mul_linear_pow(&d, &minus_i(), self.minus, &())
        };
        let polynomial_part = poly_div_monic(&self.num, &den, ctx);
        let principal = |r: GaussRat, order: u32, other: GaussRat, other_order: u32| -> Vec<C> {
            if order == 0 {
                return Vec::new();
            }
            let len = order as usize;
            let shifted = taylor_shift(&self.num, &r, ctx);
            let series = inv_power_series(&(&r - &other), other_order, len).expect("+i != -i");
            let coeffs = series_mul(&shifted, &series, len, ctx);
            // coeffs[j] multiplies (t-r)^(j-order), i.e. belongs to power order-j.
            (1..=len).map(|k| coeffs[len - k].clone()).collect()
        };
        PartialFractions {
            polynomial_part,
            plus_coeffs: principal(plus_i(), self.plus, minus_i(), self.minus),
            minus_coeffs: principal(minus_i(), self.minus, plus_i(), self.plus),
        }
    }

    /// Keep only the `(t - i)^-k` terms.
    pub fn pi_plus(&self) -> Self {
        let pf = self.partial_fractions();
        Self::from_principal(&self.ctx, &pf.plus_coeffs, plus_i())
    }

    /// Keep only the `(t + i)^-k` terms.
    pub fn pi_minus_part(&self) -> Self {
        let pf = self.partial_fractions();
        Self::from_principal(&self.ctx, &pf.minus_coeffs, minus_i())
    }

    /// `Σ c[k-1] (t - r)^-k` as a single fraction over `(t - r)^len`.
    fn from_principal(ctx: &C::Ctx, coeffs: &[C], r: GaussRat) -> Self {
        let a = coeffs.len() as u32;
        let mut num: Vec<C> = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let term = poly_mul_linear_pow(std::slice::from_ref(c), &r, a - (k as u32 + 1), ctx);
            num = poly_add(&num, &term, ctx);
        }
        if r == plus_i() {
            Self::raw(ctx, num, a, 0)
        } else {
            Self::raw(ctx, num, 0, a)
        }
    }

    pub fn recombine(pf: &PartialFractions<C>, ctx: &C::Ctx) -> Self {
        let p = Self::raw(ctx, pf.polynomial_part.clone(), 0, 0);
        let up = Self::from_principal(ctx, &pf.plus_coeffs, plus_i());
        let down = Self::from_principal(ctx, &pf.minus_coeffs, minus_i());
        p.try_add(&up).and_then(|s| s.try_add(&down)).expect("same context")
    }

    /// Residue at `t = +i`.
    pub fn residue_plus(&self) -> C {
        self.partial_fractions().plus_coeffs.first().cloned().unwrap_or_else(|| C::zero_in(&self.ctx))
    }

    /// `(1/2π) ∮ f dt` around `+i`, which is `i · res_{+i} f`.
    pub fn pi_prime(&self) -> C {
        self.residue_plus().scale(&GaussRat::i())
    }

    /// `∮ f dt` around `+i`, returned as the coefficient of `π`
    /// (the integral equals `π` times the returned value).
    pub fn contour_plus(&self) -> Result<C, RatFunError> {
        let pf = self.partial_fractions();
        if !pf.polynomial_part.is_empty() {
            return Err(RatFunError::NonIntegrable);
        }
        let res = pf.plus_coeffs.first().cloned().unwrap_or_else(|| C::zero_in(&self.ctx));
        Ok(res.scale(&GaussRat::from_parts((0, 1), (2, 1))))
    }

    /// `f^(order)(point)`; an error if `point` is a pole.
    pub fn deriv_at(&self, order: u32, point: &GaussRat) -> Result<C, RatFunError> {
        let at_plus = *point == plus_i();
        let at_minus = *point == minus_i();
        if (at_plus && self.plus > 0) || (at_minus && self.minus > 0) {
            return Err(RatFunError::PoleAtPoint(point.clone()));
        }
        let len = order as usize + 1;
        let shifted = taylor_shift(&self.num, point, &self.ctx);
        let mut series: Vec<C> = shifted.into_iter().take(len).collect();
        for (r, k) in [(plus_i(), self.plus), (minus_i(), self.minus)] {
            if k == 0 {
                continue;
            }
            // (t - r)^-k = (point - r + s)^-k
            let inv = inv_power_series(&(point - &r), k, len)?;
            series = series_mul(&series, &inv, len, &self.ctx);
        }
        let c = series.get(order as usize).cloned().unwrap_or_else(|| C::zero_in(&self.ctx));
        Ok(c.scale(&factorial(order)))
    }

    /// Multiplicative inverse; defined only for `c (t-i)^p (t+i)^q`.
    pub fn invert(&self) -> Result<Self, RatFunError> {
        let ctx = &self.ctx;
        let mut num = self.num.clone();
        if num.is_empty() {
            return Err(RatFunError::NotInvertible);
        }
        let (mut zp, mut zm) = (0u32, 0u32);
        for (r, z) in [(plus_i(), &mut zp), (minus_i(), &mut zm)] {
            loop {
                let (q, rem) = poly_div_linear(&num, &r, ctx);
                if !rem.is_zero() || num.len() < 2 {
                    break;
                }
                num = q;
                *z += 1;
            }
        }
        if num.len() != 1 {
            return Err(RatFunError::NotInvertible);
        }
        let c = num[0].try_inv().ok_or(RatFunError::NotInvertible)?;
        let top = poly_mul_linear_pow(&[c], &plus_i(), self.plus, ctx);
        let top = poly_mul_linear_pow(&top, &minus_i(), self.minus, ctx);
        Ok(Self::raw(ctx, top, zp, zm))
    }

    /// Integer power; negative exponents require `invert`.
    pub fn pow(&self, e: i64) -> Result<Self, RatFunError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut acc = Self::constant(C::from_gauss(&self.ctx, GaussRat::one()));
        for _ in 0..e.unsigned_abs() {
            acc = acc.try_mul(&base)?;
        }
        Ok(acc)
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, ctx: &D::Ctx, f: F) -> RatFun<D> {
        RatFun::raw(ctx, self.num.iter().map(f).collect(), self.plus, self.minus)
    }
}

impl RatFun<GaussRat> {
    /// Convenience constructor from real integer numerator coefficients.
    pub fn from_ints(num: &[i64], plus: u32, minus: u32) -> Self {
        Self::raw(&(), num.iter().map(|&v| GaussRat::from_int(v)).collect(), plus, minus)
    }
}

impl RatFun<ScalarPoly> {
    /// The contour integral as a polynomial carrying the alphabet's `pi` symbol.
    pub fn contour_plus_poly(&self) -> Result<ScalarPoly, RatFunError> {
        let pi = ScalarPoly::var(&self.ctx, "pi")?;
        Ok(self.contour_plus()?.try_mul(&pi)?)
    }
}

impl<C: Coeff> fmt::Display for RatFun<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({})", c),
                1 => format!("({})*t", c),
                _ => format!("({})*t^{}", c, k),
            })
            .collect();
        write!(f, "[{}]", terms.join(" + "))?;
        if self.plus > 0 {
            write!(f, "/(t-i)^{}", self.plus)?;
        }
        if self.minus > 0 {
            write!(f, "/(t+i)^{}", self.minus)?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for RatFun<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    #[test]
    fn cancellation_reduces_pole_order() {
        let f = RatFun::from_ints(&[1], 1, 0);
        assert!(f.try_add(&f.neg()).unwrap().is_zero());
        let lin = RatFun::new(&(), vec![-GaussRat::i(), GaussRat::one()], 0, 0).unwrap();
        let h = lin.try_mul(&RatFun::poles(&(), 2, 0)).unwrap();
        assert_eq!(h, RatFun::poles(&(), 1, 0));
    }

    #[test]
    fn inverse_power_series_matches_binomials() {
        // (1 + s)^-2 = 1 - 2s + 3s^2 - 4s^3
        let s = inv_power_series(&GaussRat::one(), 2, 4).unwrap();
        assert_eq!(s, vec![g("1"), g("-2"), g("3"), g("-4")]);
        let s0 = inv_power_series(&GaussRat::one(), 0, 3).unwrap();
        assert_eq!(s0, vec![g("1"), g("0"), g("0")]);
    }

    #[test]
    fn quotient_rule_example() {
        // d/dt t/(1+t^2) = (1 - t^2)/(1+t^2)^2
        let f = RatFun::from_ints(&[0, 1], 1, 1);
        assert_eq!(f.deriv(), RatFun::from_ints(&[1, 0, -1], 2, 2));
    }

    #[test]
    fn invert_monomial_forms() {
        let q = RatFun::from_ints(&[1, 0, 1], 0, 0);
        assert_eq!(q.invert().unwrap(), RatFun::inv_q(&(), 1));
        assert!(RatFun::from_ints(&[1, 1], 0, 0).invert().is_err());
        assert!(RatFun::<GaussRat>::zero(&()).invert().is_err());
    }
}

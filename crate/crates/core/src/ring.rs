//! Exact coefficient arithmetic: the Gaussian rationals ℚ(i) and sparse
//! commutative polynomials over them in a declared symbol alphabet.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomials are over different symbol alphabets")]
    AlphabetMismatch,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("cannot parse `{0}` as a Gaussian rational")]
    Parse(String),
}

/// An element `re + im·i` of ℚ(i). Both parts are kept in lowest terms with a
/// positive denominator, which `BigRational` guarantees on construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussRat::from_int(1)
    }

    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        GaussRat::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    pub fn from_bigint(v: BigInt) -> Self {
        GaussRat::new(BigRational::from_integer(v), BigRational::zero())
    }

    /// `num/den` as a real Gaussian rational. Panics only if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        GaussRat::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussRat::new(
            BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        )
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, RingError> {
        if self.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(GaussRat::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, rhs: &GaussRat) -> Result<Self, RingError> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents go through `inv`.
    pub fn pow(&self, e: i64) -> Result<Self, RingError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = GaussRat::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.im.is_zero() && self.re.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.to_integer().and_then(|v| v.to_i64())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self * &GaussRat::from_int(k)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    /// Exact rendering: `-3/8`, `3/8*i`, `1/2-3/8*i`, `i`, `-i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_str = |v: &BigRational| -> String {
            if v.is_one() {
                "i".to_string()
            } else if (-v.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rat(v))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}", im_str(&self.im)),
            (false, false) => {
                let im = im_str(&self.im);
                if im.starts_with('-') {
                    write!(f, "{}{}", fmt_rat(&self.re), im)
                } else {
                    write!(f, "{}+{}", fmt_rat(&self.re), im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

fn parse_im(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s {
        "i" | "+i" => Some(BigRational::one()),
        "-i" => Some(-BigRational::one()),
        _ => parse_rat(s.strip_suffix("*i")?),
    }
}

impl FromStr for GaussRat {
    type Err = RingError;

    /// Accepts exactly the forms produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RingError::Parse(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if !t.ends_with('i') {
            return parse_rat(t).map(|r| GaussRat::new(r, BigRational::zero())).ok_or_else(err);
        }
        // Split at the last sign that is not the leading one.
        let bytes = t.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| bytes[k] == b'+' || bytes[k] == b'-');
        match split {
            Some(k) => {
                let re = parse_rat(&t[..k]).ok_or_else(err)?;
                let im = parse_im(&t[k..]).ok_or_else(err)?;
                Ok(GaussRat::new(re, im))
            }
            None => Ok(GaussRat::new(BigRational::zero(), parse_im(t).ok_or_else(err)?)),
        }
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: GaussRat) -> GaussRat {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -&self
    }
}

/// The ordered set of formal symbols a computation is allowed to use.
#[derive(Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Arc<Alphabet>, RingError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Alphabet { names: Vec::new(), index: HashMap::new() };
        for name in names {
            let name = name.into();
            if out.index.contains_key(&name) {
                return Err(RingError::DuplicateSymbol(name));
            }
            out.index.insert(name.clone(), out.names.len());
            out.names.push(name);
        }
        Ok(Arc::new(out))
    }

    pub fn lookup(&self, name: &str) -> Result<u32, RingError> {
        self.index
            .get(name)
            .map(|&k| k as u32)
            .ok_or_else(|| RingError::UnknownSymbol(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn name(&self, var: u32) -> &str {
        &self.names[var as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A power product of alphabet variables, stored sorted by variable index
/// with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial(merged)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Lower the exponent of `v` by one. Returns the old exponent and the
    /// quotient, or `None` when `v` does not occur.
    pub fn divide_var(&self, v: u32) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|p| p.0 == v)?;
        let e = self.0[pos].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some((e, Monomial(out)))
    }

    /// Split into the part over the variables accepted by `keep` and the rest.
    pub fn split_by<F: Fn(u32) -> bool>(&self, keep: F) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().partition(|p| keep(p.0));
        (Monomial(a), Monomial(b))
    }

    pub fn render(&self, alpha: &Alphabet) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    alpha.name(v).to_string()
                } else {
                    format!("{}^{}", alpha.name(v), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded order first so printed polynomials read low degree to high.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse polynomial over ℚ(i) in commuting formal symbols.
#[derive(Clone)]
pub struct ScalarPoly {
    alpha: Arc<Alphabet>,
    terms: BTreeMap<Monomial, GaussRat>,
}

impl ScalarPoly {
    pub fn zero(alpha: &Arc<Alphabet>) -> Self {
        ScalarPoly { alpha: alpha.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(alpha: &Arc<Alphabet>, c: GaussRat) -> Self {
        ScalarPoly::from_terms(alpha, [(Monomial::one(), c)])
    }

    pub fn one(alpha: &Arc<Alphabet>) -> Self {
        ScalarPoly::constant(alpha, GaussRat::one())
    }

    pub fn var(alpha: &Arc<Alphabet>, name: &str) -> Result<Self, RingError> {
        let v = alpha.lookup(name)?;
        Ok(ScalarPoly::from_terms(alpha, [(Monomial::var(v), GaussRat::one())]))
    }

    pub fn monomial(alpha: &Arc<Alphabet>, m: Monomial, c: GaussRat) -> Self {
        ScalarPoly::from_terms(alpha, [(m, c)])
    }

    /// Build a polynomial in canonical form: like terms merged, zeros dropped.
    pub fn from_terms<I>(alpha: &Arc<Alphabet>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussRat)>,
    {
        let mut map: BTreeMap<Monomial, GaussRat> = BTreeMap::new();
        for (m, c) in terms {
            accumulate(&mut map, m, c);
        }
        ScalarPoly { alpha: alpha.clone(), terms: map }
    }

    /// Re-normalise; the stored form is always canonical so this is the identity.
    pub fn canonicalize(&self) -> Self {
        ScalarPoly::from_terms(&self.alpha, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alpha
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, GaussRat> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, GaussRat> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> GaussRat {
        self.terms.get(m).cloned().unwrap_or_else(GaussRat::zero)
    }

    fn same_alphabet(&self, other: &ScalarPoly) -> bool {
        Arc::ptr_eq(&self.alpha, &other.alpha) || *self.alpha == *other.alpha
    }

    pub fn try_add(&self, other: &ScalarPoly) -> Result<ScalarPoly, RingError> {
        if !self.same_alphabet(other) {
            return Err(RingError::AlphabetMismatch);
        }
        let mut map = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut map, m.clone(), c.clone());
        }
        Ok(ScalarPoly { alpha: self.alpha.clone(), terms: map })
    }

    pub fn try_sub(&self, other: &ScalarPoly) -> Result<ScalarPoly, RingError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &ScalarPoly) -> Result<ScalarPoly, RingError> {
        if !self.same_alphabet(other) {
            return Err(RingError::AlphabetMismatch);
        }
        let mut map = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                accumulate(&mut map, m1.mul(m2), c1 * c2);
            }
        }
        Ok(ScalarPoly { alpha: self.alpha.clone(), terms: map })
    }

    pub fn neg(&self) -> ScalarPoly {
        self.scale(&GaussRat::from_int(-1))
    }

    pub fn scale(&self, c: &GaussRat) -> ScalarPoly {
        if c.is_zero() {
            return ScalarPoly::zero(&self.alpha);
        }
        ScalarPoly {
            alpha: self.alpha.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> ScalarPoly {
        ScalarPoly {
            alpha: self.alpha.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> ScalarPoly {
        let mut acc = ScalarPoly::one(&self.alpha);
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same alphabet");
        }
        acc
    }

    /// `p == q` after normalisation, i.e. `p − q` has no terms.
    pub fn canonical_eq(&self, other: &ScalarPoly) -> Result<bool, RingError> {
        Ok(self.try_sub(other)?.is_zero())
    }

    /// Partial derivative with respect to one alphabet variable.
    pub fn partial(&self, v: u32) -> ScalarPoly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            m.divide_var(v).map(|(e, q)| (q, c.scale_int(e as i64)))
        });
        ScalarPoly::from_terms(&self.alpha, terms)
    }

    /// Substitute `value` for variable `v` everywhere.
    pub fn substitute(&self, v: u32, value: &ScalarPoly) -> Result<ScalarPoly, RingError> {
        let mut out = ScalarPoly::zero(&self.alpha);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let (_, rest) = m.split_by(|w| w == v);
            let piece = value.pow(e).mul_monomial(&rest).scale(c);
            out = out.try_add(&piece)?;
        }
        Ok(out)
    }

    /// Keep only the terms whose monomial satisfies `pred`.
    pub fn filter<F: Fn(&Monomial) -> bool>(&self, pred: F) -> ScalarPoly {
        ScalarPoly {
            alpha: self.alpha.clone(),
            terms: self.terms.iter().filter(|(m, _)| pred(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }
}

fn accumulate(map: &mut BTreeMap<Monomial, GaussRat>, m: Monomial, c: GaussRat) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&m) {
        Some(slot) => {
            let s = &*slot + &c;
            if s.is_zero() {
                map.remove(&m);
            } else {
                *slot = s;
            }
        }
        None => {
            map.insert(m, c);
        }
    }
}

impl PartialEq for ScalarPoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_alphabet(other) && self.terms == other.terms
    }
}

impl Eq for ScalarPoly {}

fn needs_parens(c: &GaussRat) -> bool {
    !c.re().is_zero() && !c.im().is_zero()
}

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let (neg, mag) = if c.is_real() && c.re().is_negative() {
                (true, -c)
            } else if c.re().is_zero() && c.im().is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            let body = if m.is_one() {
                if needs_parens(&mag) { format!("({})", mag) } else { mag.to_string() }
            } else if mag.is_one() {
                m.render(&self.alpha)
            } else if needs_parens(&mag) {
                format!("({})*{}", mag, m.render(&self.alpha))
            } else {
                format!("{}*{}", mag, m.render(&self.alpha))
            };
            match (first, neg) {
                (true, true) => write!(f, "-{}", body)?,
                (true, false) => write!(f, "{}", body)?,
                (false, true) => write!(f, " - {}", body)?,
                (false, false) => write!(f, " + {}", body)?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

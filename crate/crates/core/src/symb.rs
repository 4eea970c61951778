//! Boundary symbols: finite sums of `word ⊗ monomial ⊗ radial` terms, where the
//! word is Clifford content, the monomial is over the formal scalars and the
//! tangential covector components `xi{k}`, and the radial part is a `RatFun` in
//! `t = xi_n`. All operations needed by the boundary-term pipelines live here.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::clifford::{word_to_string, CliffordCtx, CliffordError, Letter, Strategy, Word};
use crate::ratfun::{RatFun, RatFunError};
use crate::ring::{Alphabet, GaussRat, Monomial, RingError, ScalarPoly};

/// `d/dx_n |xi|^2 = DXN_ABS_XI_SQ · h'(0) |xi'|^2` at the boundary point.
/// Every radial x_n-derivative goes through this one constant.
pub const DXN_ABS_XI_SQ: i64 = 1;

/// Highest total `xi'` degree the sphere integrator accepts.
pub const MAX_SPHERE_DEGREE: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbError {
    #[error("no x_n-derivative rule for {0}")]
    NoDxnRule(String),
    #[error("no xi-derivative rule for {0}")]
    NoDxiRule(String),
    #[error("radial factor {0} is not a function of |xi|^2 alone")]
    AsymmetricRadial(String),
    #[error("Clifford content remains: [{0}]")]
    CliffordContent(String),
    #[error("radial dependence remains: {0}")]
    RadialContent(String),
    #[error("unsupported sphere moment of degree {0}")]
    UnsupportedMoment(u32),
    #[error("symbols built for different dimensions")]
    ContextMismatch,
    #[error("dimension parameter m must be at least 1")]
    BadDimension,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    RatFun(#[from] RatFunError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

#[derive(Debug, Clone, Copy)]
enum DxnRule {
    Zero,
    To(u32),
}

/// Everything that depends on the dimension n = 2m+1.
pub struct SymbCtx {
    m: u32,
    n: u32,
    alpha: Arc<Alphabet>,
    cliff: CliffordCtx,
    dxn_rules: HashMap<u32, DxnRule>,
    xi_vars: Vec<u32>,
}

impl fmt::Debug for SymbCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbCtx(m={})", self.m)
    }
}

/// The symbol names declared for dimension n = 2m+1.
pub fn alphabet_names(m: u32) -> Vec<String> {
    let n = 2 * m + 1;
    let mut names: Vec<String> = vec!["h1".into(), "pi".into(), "vol".into()];
    for k in 1..=n {
        for base in ["X", "Y", "Z", "dX", "dY", "dZ", "XY", "wX", "wY"] {
            names.push(format!("{}{}", base, k));
        }
    }
    for k in 1..n {
        names.push(format!("xi{}", k));
    }
    names
}

impl SymbCtx {
    pub fn new(m: u32) -> Result<Arc<SymbCtx>, SymbError> {
        if m == 0 {
            return Err(SymbError::BadDimension);
        }
        let n = 2 * m + 1;
        let alpha = Alphabet::new(alphabet_names(m))?;
        let cliff = CliffordCtx::new(n, &alpha)?;
        let mut dxn_rules = HashMap::new();
        for name in ["h1", "pi", "vol"] {
            dxn_rules.insert(alpha.lookup(name)?, DxnRule::Zero);
        }
        for k in 1..=n {
            for (from, to) in [("X", "dX"), ("Y", "dY"), ("Z", "dZ")] {
                dxn_rules.insert(alpha.lookup(&format!("{}{}", from, k))?, DxnRule::To(alpha.lookup(&format!("{}{}", to, k))?));
            }
        }
        let xi_vars = (1..n).map(|k| alpha.lookup(&format!("xi{}", k))).collect::<Result<Vec<_>, _>>()?;
        for &v in &xi_vars {
            dxn_rules.insert(v, DxnRule::Zero);
        }
        Ok(Arc::new(SymbCtx { m, n, alpha, cliff, dxn_rules, xi_vars }))
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alpha
    }

    pub fn clifford(&self) -> &CliffordCtx {
        &self.cliff
    }

    pub fn var(&self, name: &str) -> Result<ScalarPoly, SymbError> {
        Ok(ScalarPoly::var(&self.alpha, name)?)
    }

    /// Variable index of `xi{k}`, 1 <= k < n.
    pub fn xi_var(&self, k: u32) -> u32 {
        self.xi_vars[(k - 1) as usize]
    }

    fn is_xi(&self, v: u32) -> bool {
        self.xi_vars.contains(&v)
    }
}

pub type Key = (Word, Monomial);

#[derive(Clone)]
pub struct BoundarySymbol {
    ctx: Arc<SymbCtx>,
    terms: BTreeMap<Key, RatFun<GaussRat>>,
}

impl BoundarySymbol {
    pub fn zero(ctx: &Arc<SymbCtx>) -> Self {
        BoundarySymbol { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<SymbCtx>) -> Self {
        Self::scalar(ctx, &ScalarPoly::one(&ctx.alpha))
    }

    pub fn scalar(ctx: &Arc<SymbCtx>, p: &ScalarPoly) -> Self {
        Self::term(ctx, Vec::new(), p, &RatFun::constant(GaussRat::one()))
    }

    pub fn constant(ctx: &Arc<SymbCtx>, c: GaussRat) -> Self {
        Self::radial(ctx, &RatFun::constant(c))
    }

    pub fn radial(ctx: &Arc<SymbCtx>, r: &RatFun<GaussRat>) -> Self {
        Self::term(ctx, Vec::new(), &ScalarPoly::one(&ctx.alpha), r)
    }

    /// The variable `t = xi_n`.
    pub fn t(ctx: &Arc<SymbCtx>) -> Self {
        Self::radial(ctx, &RatFun::t(&()))
    }

    /// A single letter. `c(xi)` is not a letter: use `cxi`.
    pub fn letter(ctx: &Arc<SymbCtx>, l: Letter) -> Self {
        Self::term(ctx, vec![l], &ScalarPoly::one(&ctx.alpha), &RatFun::constant(GaussRat::one()))
    }

    /// `c(xi) = c(xi') + t c(dx_n)`.
    pub fn cxi(ctx: &Arc<SymbCtx>) -> Self {
        let mut s = Self::letter(ctx, Letter::Xi);
        s.insert(vec![Letter::E(ctx.n)], Monomial::one(), RatFun::t(&()));
        s
    }

    /// `word ⊗ p ⊗ r`, with the word taken as already reduced.
    pub fn term(ctx: &Arc<SymbCtx>, word: Word, p: &ScalarPoly, r: &RatFun<GaussRat>) -> Self {
        let mut s = Self::zero(ctx);
        for (m, c) in p.terms() {
            s.insert(word.clone(), m.clone(), r.scale_gauss(c));
        }
        s
    }

    fn insert(&mut self, w: Word, m: Monomial, r: RatFun<GaussRat>) {
        if r.is_zero() {
            return;
        }
        let key = (w, m);
        match self.terms.remove(&key) {
            Some(old) => {
                let s = old.try_add(&r).expect("one context");
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
            None => {
                self.terms.insert(key, r);
            }
        }
    }

    pub fn ctx(&self) -> &Arc<SymbCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Key, RatFun<GaussRat>> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_ctx(&self, other: &Self) -> Result<(), SymbError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.m == other.ctx.m {
            Ok(())
        } else {
            Err(SymbError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SymbError> {
        self.same_ctx(other)?;
        let mut out = self.clone();
        for ((w, m), r) in &other.terms {
            out.insert(w.clone(), m.clone(), r.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SymbError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussRat::from_int(-1))
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        let mut out = Self::zero(&self.ctx);
        for ((w, m), r) in &self.terms {
            out.insert(w.clone(), m.clone(), r.scale_gauss(c));
        }
        out
    }

    pub fn scale_radial(&self, f: &RatFun<GaussRat>) -> Self {
        let mut out = Self::zero(&self.ctx);
        for ((w, m), r) in &self.terms {
            out.insert(w.clone(), m.clone(), r.try_mul(f).expect("one context"));
        }
        out
    }

    /// Product: words concatenated and reduced, scalars and radials multiplied.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SymbError> {
        self.same_ctx(other)?;
        let mut out = Self::zero(&self.ctx);
        let mut reduced: HashMap<Word, Vec<(Word, ScalarPoly)>> = HashMap::new();
        for ((w1, m1), r1) in &self.terms {
            for ((w2, m2), r2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                if !reduced.contains_key(&w) {
                    let e = self.ctx.cliff.reduce(&w, Strategy::LeftToRight)?;
                    reduced.insert(w.clone(), e.terms().iter().map(|(a, b)| (a.clone(), b.clone())).collect());
                }
                let m = m1.mul(m2);
                let r = r1.try_mul(r2)?;
                for (rw, rc) in &reduced[&w] {
                    for (rm, c) in rc.terms() {
                        out.insert(rw.clone(), m.mul(rm), r.scale_gauss(c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Integer power; negative exponents need a scalar-free invertible radial.
    pub fn pow(&self, e: i64) -> Result<Self, SymbError> {
        if e < 0 {
            let r = self.as_radial().ok_or_else(|| RatFunError::NotInvertible)?;
            return Ok(Self::radial(&self.ctx, &r.pow(e)?));
        }
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// The radial function if the symbol has no Clifford or scalar content.
    pub fn as_radial(&self) -> Option<RatFun<GaussRat>> {
        match self.terms.len() {
            0 => Some(RatFun::zero(&())),
            1 => {
                let ((w, m), r) = self.terms.iter().next()?;
                (w.is_empty() && m.is_one()).then(|| r.clone())
            }
            _ => None,
        }
    }

    /// The constant value if there is no content at all.
    pub fn as_constant(&self) -> Option<GaussRat> {
        self.as_radial()?.as_constant()
    }

    /// The scalar polynomial if there is neither Clifford nor radial content.
    pub fn as_scalar(&self) -> Result<ScalarPoly, SymbError> {
        let mut terms = Vec::new();
        for ((w, m), r) in &self.terms {
            if !w.is_empty() {
                return Err(SymbError::CliffordContent(word_to_string(w)));
            }
            let c = r.as_constant().ok_or_else(|| SymbError::RadialContent(r.to_string()))?;
            terms.push((m.clone(), c));
        }
        Ok(ScalarPoly::from_terms(&self.ctx.alpha, terms))
    }

    /// Map each radial part through `f`.
    pub fn map_radial<F>(&self, f: F) -> Result<Self, SymbError>
    where
        F: Fn(&RatFun<GaussRat>) -> Result<RatFun<GaussRat>, SymbError>,
    {
        let mut out = Self::zero(&self.ctx);
        for ((w, m), r) in &self.terms {
            out.insert(w.clone(), m.clone(), f(r)?);
        }
        Ok(out)
    }

    /// `d/dt` of every radial part.
    pub fn dt(&self) -> Self {
        self.map_radial(|r| Ok(r.deriv())).expect("infallible")
    }

    pub fn dt_n(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |s, _| s.dt())
    }

    /// Coefficient-wise upper-pole projection.
    pub fn pi_plus(&self) -> Self {
        self.map_radial(|r| Ok(r.pi_plus())).expect("infallible")
    }

    /// The formal normal derivative at the boundary point, by Leibniz over
    /// scalar symbols, Clifford letters and the radial `|xi|^2` dependence.
    pub fn dxn(&self) -> Result<Self, SymbError> {
        let ctx = &self.ctx;
        let h = ctx.alpha.lookup("h1")?;
        let mut out = Self::zero(ctx);
        for ((w, m), r) in &self.terms {
            // scalar factors
            for &(v, _) in m.pairs() {
                match ctx.dxn_rules.get(&v) {
                    Some(DxnRule::Zero) => {}
                    Some(DxnRule::To(dv)) => {
                        let (e, rest) = m.divide_var(v).expect("v occurs in m");
                        out.insert(w.clone(), rest.mul(&Monomial::var(*dv)), r.scale_gauss(&GaussRat::from_int(e as i64)));
                    }
                    None => return Err(SymbError::NoDxnRule(format!("symbol `{}`", ctx.alpha.name(v)))),
                }
            }
            // Clifford letters
            for (p, l) in w.iter().enumerate() {
                let repl = match l {
                    Letter::Z => Letter::DZ,
                    Letter::Xi => Letter::DXi,
                    Letter::E(k) if *k == ctx.n => continue,
                    other => return Err(SymbError::NoDxnRule(format!("letter {}", other))),
                };
                let mut nw = w.clone();
                nw[p] = repl;
                out.insert(nw, m.clone(), r.clone());
            }
            // radial N / |xi|^(2a)
            let a = r.pole_order_plus();
            if a != r.pole_order_minus() {
                return Err(SymbError::AsymmetricRadial(r.to_string()));
            }
            if a > 0 {
                let factor = RatFun::inv_q(&(), 1).scale_gauss(&GaussRat::from_int(-(a as i64) * DXN_ABS_XI_SQ));
                out.insert(w.clone(), m.mul(&Monomial::var(h)), r.try_mul(&factor)?);
            }
        }
        Ok(out)
    }

    pub fn dxn_n(&self, k: u32) -> Result<Self, SymbError> {
        (0..k).try_fold(self.clone(), |s, _| s.dxn())
    }

    /// `d/dxi_k` for a tangential index `k < n`.
    pub fn dxi(&self, k: u32) -> Result<Self, SymbError> {
        let ctx = &self.ctx;
        let v = ctx.xi_var(k);
        let mut out = Self::zero(ctx);
        for ((w, m), r) in &self.terms {
            if let Some((e, rest)) = m.divide_var(v) {
                out.insert(w.clone(), rest, r.scale_gauss(&GaussRat::from_int(e as i64)));
            }
            for (p, l) in w.iter().enumerate() {
                match l {
                    Letter::Xi => {
                        let mut nw = w.clone();
                        nw[p] = Letter::E(k);
                        for (rw, rc) in ctx.cliff.reduce(&nw, Strategy::LeftToRight)?.terms() {
                            for (rm, c) in rc.terms() {
                                out.insert(rw.clone(), m.mul(rm), r.scale_gauss(c));
                            }
                        }
                    }
                    Letter::DXi => return Err(SymbError::NoDxiRule(format!("letter {}", l))),
                    _ => {}
                }
            }
            // The radial part depends on |xi|^2 = |xi'|^2 + t^2 only through t once |xi'| = 1 is imposed.
        }
        Ok(out)
    }

    /// Trace over the spinor bundle; `tr[id]` is folded to `2^m`.
    pub fn trace(&self) -> Result<Self, SymbError> {
        let ctx = &self.ctx;
        let mut out = Self::zero(ctx);
        let mut cache: HashMap<&Word, ScalarPoly> = HashMap::new();
        for ((w, m), r) in &self.terms {
            if !cache.contains_key(w) {
                cache.insert(w, ctx.cliff.trace_word(w)?);
            }
            for (tm, c) in cache[w].terms() {
                out.insert(Vec::new(), m.mul(tm), r.scale_gauss(c));
            }
        }
        Ok(out)
    }

    /// Impose `|xi'|^2 = 1` by eliminating even powers of the last tangential
    /// component: `xi_{n-1}^2 -> 1 - Σ_{k<n-1} xi_k^2`. Idempotent.
    pub fn reduce_unit_sphere(&self) -> Self {
        let ctx = &self.ctx;
        let last = ctx.xi_var(ctx.n - 1);
        let mut rest_sum: Vec<(Monomial, GaussRat)> = vec![(Monomial::one(), GaussRat::one())];
        for k in 1..ctx.n - 1 {
            rest_sum.push((Monomial::from_pairs(vec![(ctx.xi_var(k), 2)]), GaussRat::from_int(-1)));
        }
        let one_minus = ScalarPoly::from_terms(&ctx.alpha, rest_sum);
        let mut out = Self::zero(ctx);
        for ((w, m), r) in &self.terms {
            let e = m.exponent(last);
            if e < 2 {
                out.insert(w.clone(), m.clone(), r.clone());
                continue;
            }
            let (_, others) = m.split_by(|v| v == last);
            let base = others.mul(&Monomial::from_pairs(vec![(last, e % 2)]));
            for (pm, c) in one_minus.pow(e / 2).terms() {
                out.insert(w.clone(), base.mul(pm), r.scale_gauss(c));
            }
        }
        out
    }

    /// `∮_{Γ+} · dt` term by term. The result has constant radial parts and
    /// carries the symbol `pi`.
    pub fn xi_n_int(&self) -> Result<Self, SymbError> {
        let ctx = &self.ctx;
        let pi = Monomial::var(ctx.alpha.lookup("pi")?);
        let mut out = Self::zero(ctx);
        for ((w, m), r) in &self.terms {
            if !w.is_empty() {
                return Err(SymbError::CliffordContent(word_to_string(w)));
            }
            let v = r.contour_plus()?;
            out.insert(Vec::new(), m.mul(&pi), RatFun::constant(v));
        }
        Ok(out)
    }

    /// `∫_{|xi'|=1}` after the unit-sphere reduction. Carries the symbol `vol`.
    pub fn sphere_int(&self) -> Result<ScalarPoly, SymbError> {
        let ctx = &self.ctx;
        let vol = Monomial::var(ctx.alpha.lookup("vol")?);
        let d = (ctx.n - 1) as i64;
        let mut terms = Vec::new();
        for ((w, m), r) in &self.reduce_unit_sphere().terms {
            if !w.is_empty() {
                return Err(SymbError::CliffordContent(word_to_string(w)));
            }
            let c = r.as_constant().ok_or_else(|| SymbError::RadialContent(r.to_string()))?;
            let (xi_part, rest) = m.split_by(|v| ctx.is_xi(v));
            let deg = xi_part.degree();
            if deg > MAX_SPHERE_DEGREE {
                return Err(SymbError::UnsupportedMoment(deg));
            }
            if xi_part.pairs().iter().any(|&(_, e)| e % 2 == 1) {
                continue;
            }
            // ∫ Π xi^a / Vol = Π (a_i - 1)!! / (d (d+2) ... (d + |a| - 2))
            let mut num = BigInt::from(1);
            for &(_, e) in xi_part.pairs() {
                let mut k = e as i64 - 1;
                while k > 1 {
                    num *= BigInt::from(k);
                    k -= 2;
                }
            }
            let mut den = BigInt::from(1);
            for j in 0..(deg / 2) as i64 {
                den *= BigInt::from(d + 2 * j);
            }
            let moment = GaussRat::from_bigint(num).checked_div(&GaussRat::from_bigint(den))?;
            terms.push((rest.mul(&vol), &c * &moment));
        }
        Ok(ScalarPoly::from_terms(&ctx.alpha, terms))
    }

    /// Number of terms that the sphere integral drops because some tangential
    /// exponent is odd (after the unit-sphere reduction).
    pub fn odd_sphere_terms(&self) -> usize {
        let ctx = &self.ctx;
        self.reduce_unit_sphere()
            .terms
            .keys()
            .filter(|(_, m)| m.pairs().iter().any(|&(v, e)| ctx.is_xi(v) && e % 2 == 1))
            .count()
    }

    /// Group the symbol by (word, radial) for display: each group is a scalar polynomial.
    pub fn grouped(&self) -> BTreeMap<Word, Vec<(ScalarPoly, RatFun<GaussRat>)>> {
        let mut by_word: BTreeMap<Word, Vec<(Monomial, RatFun<GaussRat>)>> = BTreeMap::new();
        for ((w, m), r) in &self.terms {
            by_word.entry(w.clone()).or_default().push((m.clone(), r.clone()));
        }
        by_word
            .into_iter()
            .map(|(w, items)| {
                let mut groups: Vec<(ScalarPoly, RatFun<GaussRat>)> = Vec::new();
                for (m, r) in items {
                    // normalise the radial to a monic-free key by its pole orders and numerator
                    let mono = ScalarPoly::monomial(&self.ctx.alpha, m, GaussRat::one());
                    match groups.iter_mut().find(|(_, gr)| *gr == r) {
                        Some((p, _)) => *p = p.try_add(&mono).expect("one alphabet"),
                        None => groups.push((mono, r)),
                    }
                }
                (w, groups)
            })
            .collect()
    }
}

impl PartialEq for BoundarySymbol {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.m == other.ctx.m && self.terms == other.terms
    }
}

impl fmt::Display for BoundarySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((w, m), r) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", r)?;
            if !m.is_one() {
                write!(f, "*{}", m.render(&self.ctx.alpha))?;
            }
            if !w.is_empty() {
                write!(f, "*[{}]", word_to_string(w))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BoundarySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dxn_of_inverse_q() {
        let ctx = SymbCtx::new(1).unwrap();
        let s = BoundarySymbol::radial(&ctx, &RatFun::inv_q(&(), 1));
        let h = ctx.var("h1").unwrap();
        let expect = BoundarySymbol::term(&ctx, vec![], &h, &RatFun::inv_q(&(), 2).neg());
        assert_eq!(s.dxn().unwrap(), expect);
    }

    #[test]
    fn sphere_moments_sum_to_volume() {
        let ctx = SymbCtx::new(2).unwrap();
        let mut total = ScalarPoly::zero(ctx.alphabet());
        for k in 1..ctx.n() {
            let xi = ctx.var(&format!("xi{}", k)).unwrap();
            let s = BoundarySymbol::scalar(&ctx, &xi.pow(2));
            total = total.try_add(&s.sphere_int().unwrap()).unwrap();
        }
        assert_eq!(total, ctx.var("vol").unwrap());
    }

    #[test]
    fn cxi_squares_to_minus_q() {
        let ctx = SymbCtx::new(1).unwrap();
        let c = BoundarySymbol::cxi(&ctx);
        let sq = c.try_mul(&c).unwrap().reduce_unit_sphere();
        let q = RatFun::from_ints(&[1, 0, 1], 0, 0).neg();
        assert_eq!(sq, BoundarySymbol::radial(&ctx, &q));
    }
}

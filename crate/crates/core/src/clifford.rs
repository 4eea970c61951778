//! The Clifford algebra Cl(n), n = 2m+1 odd, with the convention
//! `c(u)c(v) + c(v)c(u) = -2 g(u, v)`.
//!
//! Words mix three kinds of letters: the orthonormal generators `e_k`, the
//! vector atoms `c(Z)` and `c(xi')` (which are kept unexpanded so symbols stay
//! small), and opaque tokens standing for derivative and connection factors.
//! Tokens are never moved; they split a word into independently reduced
//! segments and are only consumed by the trace table.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ring::{Alphabet, GaussRat, Monomial, RingError, ScalarPoly};

/// Largest odd dimension the dense matrix oracle will build (2^6 = 64 rows).
pub const MAX_ORACLE_DIM: u32 = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("the volume word c(e1)...c(e{0}) reached the trace evaluator")]
    VolumeWord(u32),
    #[error("untabulated trace pattern `{0}`")]
    Untabulated(String),
    #[error("unsupported Clifford dimension {0}: need odd n with 3 <= n <= {max}", max = MAX_ORACLE_DIM)]
    InvalidDimension(u32),
    #[error("generator index {0} outside 1..={1}")]
    IndexOutOfRange(u32, u32),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `c(Z)` for the vector field Z.
    Z,
    /// `c(xi')`, the tangential part of the covector.
    Xi,
    /// The generator `c(e_k)`; `E(n)` is `c(dx_n)`.
    E(u32),
    /// `d/dx_n [c(xi')]` at the boundary point.
    DXi,
    /// `d/dx_n [c(Z)]`.
    DZ,
    /// Spin-connection factor `A(X)`.
    AX,
    /// Spin-connection factor `A(Y)`.
    AY,
    /// The order-zero part of the Dirac symbol.
    Sigma0,
}

impl Letter {
    pub fn is_token(self) -> bool {
        matches!(self, Letter::DXi | Letter::DZ | Letter::AX | Letter::AY | Letter::Sigma0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Z => write!(f, "c(Z)"),
            Letter::Xi => write!(f, "c(xi')"),
            Letter::E(k) => write!(f, "c(e{})", k),
            Letter::DXi => write!(f, "dxn[c(xi')]"),
            Letter::DZ => write!(f, "dxn[c(Z)]"),
            Letter::AX => write!(f, "A(X)"),
            Letter::AY => write!(f, "A(Y)"),
            Letter::Sigma0 => write!(f, "sigma0"),
        }
    }
}

pub type Word = Vec<Letter>;

pub fn word_to_string(w: &[Letter]) -> String {
    if w.is_empty() {
        return "id".to_string();
    }
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

/// Which adjacent out-of-order pair is rewritten first. The result does not
/// depend on it; both exist so that claim can be tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    LeftToRight,
    RightToLeft,
}

/// A linear combination of reduced words with polynomial coefficients.
#[derive(Clone, PartialEq)]
pub struct CliffExpr {
    alpha: Arc<Alphabet>,
    terms: BTreeMap<Word, ScalarPoly>,
}

impl CliffExpr {
    pub fn zero(alpha: &Arc<Alphabet>) -> Self {
        CliffExpr { alpha: alpha.clone(), terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<Word, ScalarPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: ScalarPoly) -> Result<(), CliffordError> {
        if c.is_zero() {
            return Ok(());
        }
        let sum = match self.terms.remove(&w) {
            Some(old) => old.try_add(&c)?,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
        Ok(())
    }

    pub fn coeff(&self, w: &[Letter]) -> ScalarPoly {
        self.terms.get(w).cloned().unwrap_or_else(|| ScalarPoly::zero(&self.alpha))
    }
}

impl fmt::Display for CliffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(w, c)| format!("({})*[{}]", c, word_to_string(w))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for CliffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Dimension-specific data: the pairing table of the vector letters and the
/// polynomials used by the trace table. The alphabet must declare `h1` and,
/// for each index k, `Z{k}`, `dZ{k}`, and for k < n `xi{k}`, `wX{k}`, `wY{k}`.
#[derive(Clone)]
pub struct CliffordCtx {
    n: u32,
    alpha: Arc<Alphabet>,
    pair: HashMap<(Letter, Letter), ScalarPoly>,
    tr_id: GaussRat,
}

impl CliffordCtx {
    pub fn new(n: u32, alpha: &Arc<Alphabet>) -> Result<Self, CliffordError> {
        if n < 3 || n % 2 == 0 {
            return Err(CliffordError::InvalidDimension(n));
        }
        let var = |s: String| ScalarPoly::var(alpha, &s);
        let zero = ScalarPoly::zero(alpha);
        let one = ScalarPoly::one(alpha);
        let mut atoms = vec![Letter::Z, Letter::Xi];
        atoms.extend((1..=n).map(Letter::E));
        let mut pair = HashMap::new();
        for &u in &atoms {
            for &v in &atoms {
                let g = match (u, v) {
                    (Letter::E(a), Letter::E(b)) => if a == b { one.clone() } else { zero.clone() },
                    (Letter::Z, Letter::E(k)) | (Letter::E(k), Letter::Z) => var(format!("Z{}", k))?,
                    (Letter::Xi, Letter::E(k)) | (Letter::E(k), Letter::Xi) => {
                        if k < n { var(format!("xi{}", k))? } else { zero.clone() }
                    }
                    (Letter::Z, Letter::Z) => sum_of(alpha, (1..=n).map(|k| vec![format!("Z{}", k), format!("Z{}", k)]))?,
                    (Letter::Xi, Letter::Xi) => sum_of(alpha, (1..n).map(|k| vec![format!("xi{}", k), format!("xi{}", k)]))?,
                    (Letter::Z, Letter::Xi) | (Letter::Xi, Letter::Z) => {
                        sum_of(alpha, (1..n).map(|k| vec![format!("Z{}", k), format!("xi{}", k)]))?
                    }
                    _ => unreachable!("atoms only"),
                };
                pair.insert((u, v), g);
            }
        }
        let m = (n - 1) / 2;
        Ok(CliffordCtx { n, alpha: alpha.clone(), pair, tr_id: GaussRat::from_int(2).pow(m as i64)? })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alpha
    }

    /// `tr[id] = 2^m`.
    pub fn trace_of_identity(&self) -> &GaussRat {
        &self.tr_id
    }

    /// The metric pairing `g(u, v)` of two vector letters.
    pub fn pairing(&self, u: Letter, v: Letter) -> Result<&ScalarPoly, CliffordError> {
        self.pair.get(&(u, v)).ok_or_else(|| CliffordError::Untabulated(format!("g({}, {})", u, v)))
    }

    fn check_letters(&self, w: &[Letter]) -> Result<(), CliffordError> {
        for l in w {
            if let Letter::E(k) = *l {
                if k == 0 || k > self.n {
                    return Err(CliffordError::IndexOutOfRange(k, self.n));
                }
            }
        }
        Ok(())
    }

    /// Reduce a raw word to a sum of canonical words.
    pub fn reduce(&self, raw: &[Letter], strategy: Strategy) -> Result<CliffExpr, CliffordError> {
        self.reduce_scaled(raw, ScalarPoly::one(&self.alpha), strategy)
    }

    pub fn reduce_scaled(&self, raw: &[Letter], coeff: ScalarPoly, strategy: Strategy) -> Result<CliffExpr, CliffordError> {
        self.check_letters(raw)?;
        let mut out = CliffExpr::zero(&self.alpha);
        let mut work: Vec<(Word, ScalarPoly)> = vec![(raw.to_vec(), coeff)];
        while let Some((w, c)) = work.pop() {
            if c.is_zero() {
                continue;
            }
            match self.find_violation(&w, strategy) {
                None => out.add_term(w, c)?,
                Some(p) => {
                    let (u, v) = (w[p], w[p + 1]);
                    let g = self.pairing(u, v)?;
                    let mut contracted = w[..p].to_vec();
                    contracted.extend_from_slice(&w[p + 2..]);
                    if u == v {
                        // uu = -g(u,u)
                        work.push((contracted, c.try_mul(g)?.neg()));
                    } else {
                        // uv = -vu - 2 g(u,v)
                        let mut swapped = w.clone();
                        swapped.swap(p, p + 1);
                        work.push((swapped, c.neg()));
                        work.push((contracted, c.try_mul(g)?.scale(&GaussRat::from_int(-2))));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Position of an adjacent pair of vector letters that is not strictly increasing.
    fn find_violation(&self, w: &[Letter], strategy: Strategy) -> Option<usize> {
        let bad = |p: usize| {
            let (u, v) = (w[p], w[p + 1]);
            !u.is_token() && !v.is_token() && u >= v
        };
        let len = w.len().saturating_sub(1);
        match strategy {
            Strategy::LeftToRight => (0..len).find(|&p| bad(p)),
            Strategy::RightToLeft => (0..len).rev().find(|&p| bad(p)),
        }
    }

    pub fn reduce_expr(&self, e: &CliffExpr, strategy: Strategy) -> Result<CliffExpr, CliffordError> {
        let mut out = CliffExpr::zero(&self.alpha);
        for (w, c) in &e.terms {
            for (w2, c2) in self.reduce_scaled(w, c.clone(), strategy)?.terms {
                out.add_term(w2, c2)?;
            }
        }
        Ok(out)
    }

    /// Trace of one word, with `tr[id]` folded to `2^m`.
    pub fn trace_word(&self, w: &[Letter]) -> Result<ScalarPoly, CliffordError> {
        self.check_letters(w)?;
        let normalized = if w.iter().any(|l| l.is_token()) {
            self.token_trace(w)?
        } else if w.len() % 2 == 0 {
            self.wick(w)?
        } else {
            if w.len() as u32 >= self.n {
                self.assert_no_volume(w)?;
            }
            ScalarPoly::zero(&self.alpha)
        };
        Ok(normalized.scale(&self.tr_id))
    }

    pub fn trace_expr(&self, e: &CliffExpr) -> Result<ScalarPoly, CliffordError> {
        let mut acc = ScalarPoly::zero(&self.alpha);
        for (w, c) in &e.terms {
            acc = acc.try_add(&self.trace_word(w)?.try_mul(c)?)?;
        }
        Ok(acc)
    }

    /// `tr(v1 ... v2k) / tr[id]` for vector letters.
    fn wick(&self, w: &[Letter]) -> Result<ScalarPoly, CliffordError> {
        if w.is_empty() {
            return Ok(ScalarPoly::one(&self.alpha));
        }
        let mut acc = ScalarPoly::zero(&self.alpha);
        for j in 1..w.len() {
            let mut rest = w[1..j].to_vec();
            rest.extend_from_slice(&w[j + 1..]);
            let term = self.pairing(w[0], w[j])?.try_mul(&self.wick(&rest)?)?;
            // sign (-1)^(j-1) from moving w[j] next to w[0], and -g from the contraction
            acc = if j % 2 == 1 { acc.try_sub(&term)? } else { acc.try_add(&term)? };
        }
        Ok(acc)
    }

    /// Odd words of length at least n could contain the volume element; expand
    /// the atoms into generators and insist its coefficient vanishes.
    fn assert_no_volume(&self, w: &[Letter]) -> Result<(), CliffordError> {
        let mut expanded: Vec<(Word, ScalarPoly)> = vec![(Vec::new(), ScalarPoly::one(&self.alpha))];
        for &l in w {
            let choices: Vec<(Letter, ScalarPoly)> = match l {
                Letter::E(_) => vec![(l, ScalarPoly::one(&self.alpha))],
                _ => (1..=self.n)
                    .map(|k| (Letter::E(k), self.pairing(l, Letter::E(k)).cloned()))
                    .filter_map(|(e, g)| g.ok().filter(|g| !g.is_zero()).map(|g| (e, g)))
                    .collect(),
            };
            let mut next = Vec::new();
            for (pw, pc) in &expanded {
                for (e, g) in &choices {
                    let mut nw = pw.clone();
                    nw.push(*e);
                    next.push((nw, pc.try_mul(g)?));
                }
            }
            expanded = next;
        }
        let volume: Word = (1..=self.n).map(Letter::E).collect();
        let mut coeff = ScalarPoly::zero(&self.alpha);
        for (ew, c) in expanded {
            coeff = coeff.try_add(&self.reduce_scaled(&ew, c, Strategy::LeftToRight)?.coeff(&volume))?;
        }
        if coeff.is_zero() {
            Ok(())
        } else {
            Err(CliffordError::VolumeWord(self.n))
        }
    }

    fn var(&self, name: String) -> Result<ScalarPoly, CliffordError> {
        Ok(ScalarPoly::var(&self.alpha, &name)?)
    }

    fn sum_pairs(&self, a: &str, b: &str) -> Result<ScalarPoly, CliffordError> {
        Ok(sum_of(&self.alpha, (1..self.n).map(|k| vec![format!("{}{}", a, k), format!("{}{}", b, k)]))?)
    }

    /// The token patterns, each divided by `tr[id]`.
    fn token_trace(&self, w: &[Letter]) -> Result<ScalarPoly, CliffordError> {
        use Letter::*;
        let n = self.n;
        let half = GaussRat::ratio(1, 2);
        let h = self.var("h1".into())?;
        let g_z_xi = self.pairing(Z, Xi)?.clone();
        let half_h_gzxi = h.try_mul(&g_z_xi)?.scale(&half);
        let zero = ScalarPoly::zero(&self.alpha);
        let val = match w {
            [Z, DXi] => half_h_gzxi.neg(),
            [DZ, Xi] => self.sum_pairs("dZ", "xi")?.neg().try_add(&half_h_gzxi)?,
            [DZ, E(k)] if *k == n => self.var(format!("dZ{}", n))?.neg(),
            [Z, AX, Xi] => self.sum_pairs("wX", "xi")?.scale(&half),
            [Z, AY, Xi] => self.sum_pairs("wY", "xi")?.scale(&half),
            [Z, AX, E(k)] | [Z, AY, E(k)] if *k == n => zero,
            [Z, Xi, E(k), DXi] if *k == n => {
                let xi2 = self.pairing(Xi, Xi)?;
                h.try_mul(&self.var(format!("Z{}", n))?)?.try_mul(xi2)?.scale(&-half)
            }
            _ => return Err(CliffordError::Untabulated(word_to_string(w))),
        };
        Ok(val)
    }
}

/// `Σ_k Π names_k` as a polynomial.
fn sum_of<I: IntoIterator<Item = Vec<String>>>(alpha: &Arc<Alphabet>, products: I) -> Result<ScalarPoly, RingError> {
    let mut terms = Vec::new();
    for names in products {
        let vars = names.iter().map(|s| alpha.lookup(s).map(|v| (v, 1))).collect::<Result<Vec<_>, _>>()?;
        terms.push((Monomial::from_pairs(vars), GaussRat::one()));
    }
    Ok(ScalarPoly::from_terms(alpha, terms))
}

// ---------------------------------------------------------------------------
// Matrix oracle.

/// Dense square matrix over ℚ(i).
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    dim: usize,
    entries: Vec<GaussRat>,
}

impl Mat {
    pub fn zero(dim: usize) -> Self {
        Mat { dim, entries: vec![GaussRat::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Mat::zero(dim);
        for k in 0..dim {
            m.entries[k * dim + k] = GaussRat::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussRat {
        &self.entries[r * self.dim + c]
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let d = self.dim;
        let mut out = Mat::zero(d);
        for r in 0..d {
            for k in 0..d {
                let a = &self.entries[r * d + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..d {
                    let b = &other.entries[k * d + c];
                    if !b.is_zero() {
                        out.entries[r * d + c] = &out.entries[r * d + c] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        Mat {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Mat {
        Mat { dim: self.dim, entries: self.entries.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> GaussRat {
        (0..self.dim).fold(GaussRat::zero(), |acc, k| &acc + self.get(k, k))
    }

    fn kron(&self, other: &Mat) -> Mat {
        let (p, q) = (self.dim, other.dim);
        let mut out = Mat::zero(p * q);
        for r1 in 0..p {
            for c1 in 0..p {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..q {
                    for c2 in 0..q {
                        out.entries[(r1 * q + r2) * p * q + c1 * q + c2] = a * other.get(r2, c2);
                    }
                }
            }
        }
        out
    }
}

/// An irreducible representation of Cl(n): `n` matrices of size `2^m`.
#[derive(Debug, Clone)]
pub struct GammaRep {
    n: u32,
    mats: Vec<Mat>,
}

impl GammaRep {
    /// Tensor products of Pauli matrices, each multiplied by `i` so that
    /// every generator squares to `-1`.
    pub fn build(n: u32) -> Result<GammaRep, CliffordError> {
        if n < 3 || n % 2 == 0 || n > MAX_ORACLE_DIM {
            return Err(CliffordError::InvalidDimension(n));
        }
        let m = ((n - 1) / 2) as usize;
        let one = GaussRat::one();
        let i = GaussRat::i();
        let pauli = |e: [GaussRat; 4]| Mat { dim: 2, entries: e.to_vec() };
        let s1 = pauli([GaussRat::zero(), one.clone(), one.clone(), GaussRat::zero()]);
        let s2 = pauli([GaussRat::zero(), -&i, i.clone(), GaussRat::zero()]);
        let s3 = pauli([one.clone(), GaussRat::zero(), GaussRat::zero(), -&one]);
        let id2 = Mat::identity(2);
        let string = |factors: Vec<&Mat>| factors.into_iter().fold(Mat::identity(1), |acc, f| acc.kron(f));
        let mut mats = Vec::with_capacity(n as usize);
        for k in 0..m {
            for last in [&s1, &s2] {
                let mut f: Vec<&Mat> = vec![&s3; k];
                f.push(last);
                f.extend(std::iter::repeat(&id2).take(m - k - 1));
                mats.push(string(f).scale(&i));
            }
        }
        mats.push(string(vec![&s3; m]).scale(&i));
        Ok(GammaRep { n, mats })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mats[0].dim()
    }

    pub fn gamma(&self, k: u32) -> &Mat {
        &self.mats[(k - 1) as usize]
    }

    /// Matrix of a generator word; an empty word is the identity.
    pub fn product(&self, word: &[u32]) -> Result<Mat, CliffordError> {
        let mut acc = Mat::identity(self.dim());
        for &k in word {
            if k == 0 || k > self.n {
                return Err(CliffordError::IndexOutOfRange(k, self.n));
            }
            acc = acc.mul(self.gamma(k));
        }
        Ok(acc)
    }

    /// Exact matrix trace of a generator word.
    pub fn trace_oracle(&self, word: &[u32]) -> Result<GaussRat, CliffordError> {
        Ok(self.product(word)?.trace())
    }
}

/// Trace of a vector-letter word computed only from the matrices: each atom is
/// expanded into its generator sum and every generator word is traced
/// numerically. Independent of the pairing table and of `reduce`.
pub struct MatrixOracle {
    rep: GammaRep,
    alpha: Arc<Alphabet>,
    cache: HashMap<Vec<u32>, GaussRat>,
}

impl MatrixOracle {
    pub fn new(rep: GammaRep, alpha: &Arc<Alphabet>) -> Self {
        MatrixOracle { rep, alpha: alpha.clone(), cache: HashMap::new() }
    }

    fn components(&self, l: Letter) -> Result<Vec<(u32, ScalarPoly)>, CliffordError> {
        let n = self.rep.n;
        let var = |s: String| ScalarPoly::var(&self.alpha, &s);
        Ok(match l {
            Letter::E(k) => vec![(k, ScalarPoly::one(&self.alpha))],
            Letter::Z => (1..=n).map(|k| Ok((k, var(format!("Z{}", k))?))).collect::<Result<_, RingError>>()?,
            Letter::Xi => (1..n).map(|k| Ok((k, var(format!("xi{}", k))?))).collect::<Result<_, RingError>>()?,
            other => return Err(CliffordError::Untabulated(other.to_string())),
        })
    }

    pub fn trace(&mut self, w: &[Letter]) -> Result<ScalarPoly, CliffordError> {
        let mut expanded: Vec<(Vec<u32>, ScalarPoly)> = vec![(Vec::new(), ScalarPoly::one(&self.alpha))];
        for &l in w {
            let comps = self.components(l)?;
            let mut next = Vec::with_capacity(expanded.len() * comps.len());
            for (pw, pc) in &expanded {
                for (k, c) in &comps {
                    let mut nw = pw.clone();
                    nw.push(*k);
                    next.push((nw, pc.try_mul(c)?));
                }
            }
            expanded = next;
        }
        let mut acc = ScalarPoly::zero(&self.alpha);
        for (gw, c) in expanded {
            let t = match self.cache.get(&gw) {
                Some(t) => t.clone(),
                None => {
                    let t = self.rep.trace_oracle(&gw)?;
                    self.cache.insert(gw, t.clone());
                    t
                }
            };
            if !t.is_zero() {
                acc = acc.try_add(&c.scale(&t))?;
            }
        }
        Ok(acc)
    }
}

//! The prefix expression language used in the goldens file.
//!
//! ```text
//! expr  := INT | RATIONAL | NAME | -NAME | '(' op expr* ')'
//! ```
//!
//! Every expression evaluates to a [`BoundarySymbol`] for a fixed `m`.
//! Integers and rationals are constant symbols; `-NAME` negates an atom.
//!
//! Atoms: `m`, `n` (= 2m+1), `i`, `t` (= xi_n), `q` (= 1 + t^2), `pi`, `vol`,
//! `h1` (= h'(0)), `trid` (= 2^m), and the Clifford pieces `cZ`, `cxip`
//! (= c(xi')), `cxi` (= c(xi') + t c(dx_n)), `cdxn`, `DXi` (= dxn[c(xi')]),
//! `DZ` (= dxn[c(Z)]), `AX`, `AY`, `sigma0`. The shorthands in [`MACROS`]
//! (`xip2`, `gXY`, `XYxixi`, `XYxipxip`, `Lxip`, `Lxi`) expand to sums.
//!
//! Indexed atoms, index 1..=n: `(X j)`, `(Y j)`, `(Z j)`, `(dX j)`, `(dY j)`,
//! `(dZ j)`, `(XY j)` (= X(Y_j)), `(wX j)`, `(wY j)`, `(e k)`; `(xi j)` is the
//! tangential symbol for j < n and `t` for j = n.
//!
//! Operators: `+ - * / ^` (the product keeps the written order, which matters
//! for Clifford content; `/` and negative powers need an invertible radial),
//! `(sum j lo hi body)`, `(rise a b)` = a(a+1)...b with the empty product 1,
//! `(fact k)`, `(coef NAME)`, `(ref NAME)`, and the symbol maps `(pip x)`,
//! `(dt x)`, `(dxn x)`, `(trace x)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::clifford::Letter;
use crate::ratfun::RatFun;
use crate::ring::GaussRat;
use crate::symb::{BoundarySymbol, SymbCtx, SymbError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ExprError {
    pub line: usize,
    pub msg: String,
}

impl ExprError {
    fn new(line: usize, msg: impl Into<String>) -> Self {
        ExprError { line, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    pub fn line(&self) -> usize {
        match self {
            Sexp::Atom(_, l) | Sexp::List(_, l) => *l,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a, _) => write!(f, "{}", a),
            Sexp::List(items, _) => {
                write!(f, "(")?;
                for (k, it) in items.iter().enumerate() {
                    if k > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", it)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Parse one expression; `line` is the source line used in error messages.
pub fn parse(text: &str, line: usize) -> Result<Sexp, ExprError> {
    let spaced = text.replace('(', " ( ").replace(')', " ) ");
    let tokens: Vec<&str> = spaced.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(ExprError::new(line, "empty expression"));
    }
    let mut pos = 0;
    let e = parse_at(&tokens, &mut pos, line)?;
    if pos != tokens.len() {
        return Err(ExprError::new(line, format!("trailing input after expression: `{}`", tokens[pos..].join(" "))));
    }
    Ok(e)
}

fn parse_at(tokens: &[&str], pos: &mut usize, line: usize) -> Result<Sexp, ExprError> {
    let tok = tokens.get(*pos).ok_or_else(|| ExprError::new(line, "unexpected end of expression"))?;
    *pos += 1;
    match *tok {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(ExprError::new(line, "unbalanced `(`")),
                    Some(&")") => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => items.push(parse_at(tokens, pos, line)?),
                }
            }
            if items.is_empty() {
                return Err(ExprError::new(line, "empty list"));
            }
            Ok(Sexp::List(items, line))
        }
        ")" => Err(ExprError::new(line, "unbalanced `)`")),
        a => Ok(Sexp::Atom(a.to_string(), line)),
    }
}

/// Supplies the values of `(coef NAME)` and `(ref NAME)`.
pub trait Resolver {
    fn coef(&self, name: &str, ctx: &Arc<SymbCtx>) -> Result<GaussRat, String>;
    fn reference(&self, name: &str, ctx: &Arc<SymbCtx>) -> Result<BoundarySymbol, String>;
}

/// A resolver for self-contained expressions.
pub struct NoRefs;

impl Resolver for NoRefs {
    fn coef(&self, name: &str, _: &Arc<SymbCtx>) -> Result<GaussRat, String> {
        Err(format!("coefficient `{}` not available here", name))
    }
    fn reference(&self, name: &str, _: &Arc<SymbCtx>) -> Result<BoundarySymbol, String> {
        Err(format!("reference `{}` not available here", name))
    }
}

pub struct Evaluator<'a> {
    ctx: Arc<SymbCtx>,
    resolver: &'a dyn Resolver,
    locals: Vec<(String, i64)>,
}

impl<'a> Evaluator<'a> {
    pub fn new(ctx: &Arc<SymbCtx>, resolver: &'a dyn Resolver) -> Self {
        Evaluator { ctx: ctx.clone(), resolver, locals: Vec::new() }
    }

    pub fn eval(&mut self, e: &Sexp) -> Result<BoundarySymbol, ExprError> {
        match e {
            Sexp::Atom(a, line) => self.atom(a, *line),
            Sexp::List(items, line) => self.list(items, *line),
        }
    }

    /// Evaluate to an integer (indices, orders, exponents).
    pub fn eval_int(&mut self, e: &Sexp) -> Result<i64, ExprError> {
        let v = self.eval(e)?;
        v.as_constant()
            .and_then(|c| c.to_i64())
            .ok_or_else(|| ExprError::new(e.line(), format!("`{}` is not an integer", e)))
    }

    /// Evaluate to a Gaussian rational constant.
    pub fn eval_const(&mut self, e: &Sexp) -> Result<GaussRat, ExprError> {
        let v = self.eval(e)?;
        v.as_constant().ok_or_else(|| ExprError::new(e.line(), format!("`{}` is not a constant", e)))
    }

    fn lift<T>(r: Result<T, SymbError>, line: usize) -> Result<T, ExprError> {
        r.map_err(|err| ExprError::new(line, err.to_string()))
    }

    fn konst(&self, c: GaussRat) -> BoundarySymbol {
        BoundarySymbol::constant(&self.ctx, c)
    }

    fn var(&self, name: &str, line: usize) -> Result<BoundarySymbol, ExprError> {
        let p = Self::lift(self.ctx.var(name), line)?;
        Ok(BoundarySymbol::scalar(&self.ctx, &p))
    }

    fn atom(&mut self, a: &str, line: usize) -> Result<BoundarySymbol, ExprError> {
        if let Some(v) = self.locals.iter().rev().find(|(n, _)| n == a).map(|(_, v)| *v) {
            return Ok(self.konst(GaussRat::from_int(v)));
        }
        if let Some(r) = parse_number(a) {
            return Ok(self.konst(GaussRat::new(r, BigRational::from_integer(BigInt::from(0)))));
        }
        if let Some(rest) = a.strip_prefix('-') {
            return Ok(self.atom(rest, line)?.neg());
        }
        if let Some((_, body)) = MACROS.iter().find(|(name, _)| *name == a) {
            let e = parse(body, line)?;
            return self.eval(&e);
        }
        let ctx = self.ctx.clone();
        let m = ctx.m() as i64;
        let n = ctx.n() as i64;
        Ok(match a {
            "m" => self.konst(GaussRat::from_int(m)),
            "n" => self.konst(GaussRat::from_int(n)),
            "i" => self.konst(GaussRat::i()),
            "t" => BoundarySymbol::t(&ctx),
            "q" => BoundarySymbol::radial(&ctx, &RatFun::from_ints(&[1, 0, 1], 0, 0)),
            "pi" | "vol" | "h1" => self.var(a, line)?,
            "trid" => self.konst(Self::lift(GaussRat::from_int(2).pow(m).map_err(SymbError::from), line)?),
            "cZ" => BoundarySymbol::letter(&ctx, Letter::Z),
            "cxip" => BoundarySymbol::letter(&ctx, Letter::Xi),
            "cxi" => BoundarySymbol::cxi(&ctx),
            "cdxn" => BoundarySymbol::letter(&ctx, Letter::E(ctx.n())),
            "DXi" => BoundarySymbol::letter(&ctx, Letter::DXi),
            "DZ" => BoundarySymbol::letter(&ctx, Letter::DZ),
            "AX" => BoundarySymbol::letter(&ctx, Letter::AX),
            "AY" => BoundarySymbol::letter(&ctx, Letter::AY),
            "sigma0" => BoundarySymbol::letter(&ctx, Letter::Sigma0),
            _ => return Err(ExprError::new(line, format!("unknown atom `{}`", a))),
        })
    }

    fn args(&mut self, items: &[Sexp]) -> Result<Vec<BoundarySymbol>, ExprError> {
        items.iter().map(|e| self.eval(e)).collect()
    }

    fn arity(op: &str, items: &[Sexp], want: usize, line: usize) -> Result<(), ExprError> {
        if items.len() != want {
            return Err(ExprError::new(line, format!("`{}` takes {} argument(s), got {}", op, want, items.len())));
        }
        Ok(())
    }

    fn name_arg(e: &Sexp) -> Result<&str, ExprError> {
        match e {
            Sexp::Atom(a, _) => Ok(a),
            Sexp::List(_, l) => Err(ExprError::new(*l, "expected a name")),
        }
    }

    fn list(&mut self, items: &[Sexp], line: usize) -> Result<BoundarySymbol, ExprError> {
        let op = match &items[0] {
            Sexp::Atom(a, _) => a.as_str(),
            Sexp::List(_, l) => return Err(ExprError::new(*l, "operator position must be a name")),
        };
        let rest = &items[1..];
        let ctx = self.ctx.clone();
        match op {
            "+" => {
                let vals = self.args(rest)?;
                let mut acc = BoundarySymbol::zero(&ctx);
                for v in vals {
                    acc = Self::lift(acc.try_add(&v), line)?;
                }
                Ok(acc)
            }
            "-" => {
                let vals = self.args(rest)?;
                match vals.len() {
                    0 => Err(ExprError::new(line, "`-` needs an argument")),
                    1 => Ok(vals[0].neg()),
                    _ => {
                        let mut acc = vals[0].clone();
                        for v in &vals[1..] {
                            acc = Self::lift(acc.try_sub(v), line)?;
                        }
                        Ok(acc)
                    }
                }
            }
            "*" => {
                let vals = self.args(rest)?;
                let mut acc = BoundarySymbol::one(&ctx);
                for v in vals {
                    acc = Self::lift(acc.try_mul(&v), line)?;
                }
                Ok(acc)
            }
            "/" => {
                Self::arity(op, rest, 2, line)?;
                let a = self.eval(&rest[0])?;
                let b = self.eval(&rest[1])?;
                let inv = Self::lift(b.pow(-1), line)
                    .map_err(|_| ExprError::new(line, format!("cannot divide by `{}`", rest[1])))?;
                Self::lift(a.try_mul(&inv), line)
            }
            "^" => {
                Self::arity(op, rest, 2, line)?;
                let a = self.eval(&rest[0])?;
                let k = self.eval_int(&rest[1])?;
                Self::lift(a.pow(k), line)
            }
            "sum" => {
                Self::arity(op, rest, 4, line)?;
                let var = Self::name_arg(&rest[0])?.to_string();
                let lo = self.eval_int(&rest[1])?;
                let hi = self.eval_int(&rest[2])?;
                let mut acc = BoundarySymbol::zero(&ctx);
                for v in lo..=hi {
                    self.locals.push((var.clone(), v));
                    let term = self.eval(&rest[3]);
                    self.locals.pop();
                    acc = Self::lift(acc.try_add(&term?), line)?;
                }
                Ok(acc)
            }
            "rise" => {
                Self::arity(op, rest, 2, line)?;
                let a = self.eval_int(&rest[0])?;
                let b = self.eval_int(&rest[1])?;
                let mut acc = BigInt::from(1);
                for k in a..=b {
                    acc *= BigInt::from(k);
                }
                Ok(self.konst(GaussRat::from_bigint(acc)))
            }
            "fact" => {
                Self::arity(op, rest, 1, line)?;
                let k = self.eval_int(&rest[0])?;
                if k < 0 {
                    return Err(ExprError::new(line, "factorial of a negative number"));
                }
                let mut acc = BigInt::from(1);
                for j in 2..=k {
                    acc *= BigInt::from(j);
                }
                Ok(self.konst(GaussRat::from_bigint(acc)))
            }
            "coef" => {
                Self::arity(op, rest, 1, line)?;
                let name = Self::name_arg(&rest[0])?;
                let v = self.resolver.coef(name, &ctx).map_err(|e| ExprError::new(line, e))?;
                Ok(self.konst(v))
            }
            "ref" => {
                Self::arity(op, rest, 1, line)?;
                let name = Self::name_arg(&rest[0])?;
                self.resolver.reference(name, &ctx).map_err(|e| ExprError::new(line, e))
            }
            "pip" | "dt" | "dxn" | "trace" => {
                Self::arity(op, rest, 1, line)?;
                let a = self.eval(&rest[0])?;
                match op {
                    "pip" => Ok(a.pi_plus()),
                    "dt" => Ok(a.dt()),
                    "dxn" => Self::lift(a.dxn(), line),
                    _ => Self::lift(a.trace(), line),
                }
            }
            "X" | "Y" | "Z" | "dX" | "dY" | "dZ" | "XY" | "wX" | "wY" | "xi" | "e" => {
                Self::arity(op, rest, 1, line)?;
                let k = self.eval_int(&rest[0])?;
                let n = ctx.n() as i64;
                if k < 1 || k > n {
                    return Err(ExprError::new(line, format!("index {} outside 1..={}", k, n)));
                }
                match op {
                    "e" => Ok(BoundarySymbol::letter(&ctx, Letter::E(k as u32))),
                    "xi" if k == n => Ok(BoundarySymbol::t(&ctx)),
                    _ => self.var(&format!("{}{}", op, k), line),
                }
            }
            _ => Err(ExprError::new(line, format!("unknown operator `{}`", op))),
        }
    }
}

/// Named shorthands, expanded in place.
pub const MACROS: [(&str, &str); 6] = [
    ("xip2", "(sum k 1 (- n 1) (^ (xi k) 2))"),
    ("gXY", "(sum j 1 (- n 1) (* (X j) (Y j)))"),
    ("XYxixi", "(sum j 1 n (sum l 1 n (* (X j) (Y l) (xi j) (xi l))))"),
    ("XYxipxip", "(sum j 1 (- n 1) (sum l 1 (- n 1) (* (X j) (Y l) (xi j) (xi l))))"),
    ("Lxip", "(sum l 1 (- n 1) (* (+ (* (X l) (Y n)) (* (X n) (Y l))) (xi l)))"),
    ("Lxi", "(+ Lxip (* 2 (X n) (Y n) t))"),
];

fn parse_number(a: &str) -> Option<BigRational> {
    let first = a.chars().next()?;
    if !(first.is_ascii_digit() || (first == '-' && a.len() > 1 && a[1..].starts_with(|c: char| c.is_ascii_digit()))) {
        return None;
    }
    match a.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().ok()?;
            let q: BigInt = q.parse().ok()?;
            (q != BigInt::from(0)).then(|| BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(a.parse().ok()?)),
    }
}

/// Parse and evaluate a self-contained expression at dimension parameter `m`.
pub fn eval_str(text: &str, ctx: &Arc<SymbCtx>) -> Result<BoundarySymbol, ExprError> {
    let e = parse(text, 0)?;
    Evaluator::new(ctx, &NoRefs).eval(&e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_sums() {
        let ctx = SymbCtx::new(2).unwrap();
        let v = eval_str("(sum k 1 m (* k k))", &ctx).unwrap();
        assert_eq!(v.as_constant(), Some(GaussRat::from_int(5)));
        assert_eq!(eval_str("(rise 3 2)", &ctx).unwrap().as_constant(), Some(GaussRat::one()));
        assert_eq!(eval_str("(/ 1 (* 2 i))", &ctx).unwrap().as_constant(), Some("-1/2*i".parse().unwrap()));
        assert_eq!(eval_str("-i", &ctx).unwrap().as_constant(), Some(-GaussRat::i()));
    }

    #[test]
    fn radial_division() {
        let ctx = SymbCtx::new(1).unwrap();
        let v = eval_str("(/ 1 (^ (+ t i) 3))", &ctx).unwrap();
        assert_eq!(v.as_radial(), Some(RatFun::poles(&(), 0, 3)));
        assert!(eval_str("(/ 1 (+ t 1))", &ctx).is_err());
    }

    #[test]
    fn errors_carry_lines() {
        let err = parse("(+ 1 2", 7).unwrap_err();
        assert_eq!(err.line, 7);
        let ctx = SymbCtx::new(1).unwrap();
        assert!(eval_str("(X 4)", &ctx).is_err());
        assert!(eval_str("bogus", &ctx).is_err());
    }
}

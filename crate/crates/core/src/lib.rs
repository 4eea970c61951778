//! Exact boundary-symbol calculus over the Gaussian rationals.
//!
//! The crate is layered bottom-up: [`ring`] (ℚ(i) and polynomials),
//! [`ratfun`] (rational functions with poles at ±i), [`clifford`] (words,
//! reduction, traces and a matrix oracle), [`symb`] (boundary symbols), and
//! [`dsz`] (coefficient catalog, case pipelines and theorem comparison).
//! [`cli`] holds the goldens reader and the report emitters used by the
//! `residue-verify` binary.

pub mod cli;
pub mod clifford;
pub mod dsz;
pub mod ratfun;
pub mod ring;
pub mod symb;

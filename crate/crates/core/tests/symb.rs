//! Calculus rules on boundary symbols: Leibniz for every derivation, trace
//! cyclicity, and the unit-sphere moments.

use std::sync::Arc;

use proptest::prelude::*;
use residue_kernel::clifford::Letter;
use residue_kernel::ratfun::RatFun;
use residue_kernel::ring::{GaussRat, ScalarPoly};
use residue_kernel::symb::{BoundarySymbol, SymbCtx};

type Sym = BoundarySymbol;

fn ctx(m: u32) -> Arc<SymbCtx> {
    SymbCtx::new(m).unwrap()
}

/// A small pool of building blocks with symmetric radial parts, so that `dxn`
/// applies. The first two atoms, `c(Z)` and `c(xi')`, turn into derivative
/// letters under `dxn`; those letters are opaque to the Clifford reduction,
/// so the `dxn` properties draw from the remaining atoms only. They also skip
/// the last atom, `i`: with real coefficients no sum can cancel `t + i` against
/// a numerator, so every radial part keeps the form `N / q^a` that `dxn` needs.
///
/// `dxn` also needs homogeneous input. Radial parts are stored with
/// `|xi'| = 1`, so adding `t` to `1/q` yields `(t + t^3 + 1)/q`, and the
/// hidden `q` in that numerator is invisible to `dxn`. The `dxn` property
/// therefore draws single products, which are always homogeneous.
fn atoms(c: &Arc<SymbCtx>) -> Vec<Sym> {
    let n = c.n();
    let radial = |num: &[i64], k: u32| Sym::radial(c, &RatFun::from_ints(num, k, k));
    vec![
        Sym::letter(c, Letter::Z),
        Sym::cxi(c),
        Sym::letter(c, Letter::E(n)),
        Sym::scalar(c, &c.var("X1").unwrap()),
        Sym::scalar(c, &c.var(&format!("Y{}", n)).unwrap()),
        Sym::scalar(c, &c.var("xi1").unwrap()),
        Sym::t(c),
        radial(&[1], 1),
        radial(&[0, 2, 1], 2),
        Sym::constant(c, GaussRat::i()),
    ]
}

fn symbol() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..10, 0usize..10, -3i64..=3), 1..4)
}

fn normal_safe_symbol() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((2usize..9, 2usize..9, -3i64..=3), 1..=1)
}

/// Sum of `coef * atom_a * atom_b`.
fn build(c: &Arc<SymbCtx>, spec: &[(usize, usize, i64)]) -> Sym {
    let pool = atoms(c);
    spec.iter().fold(Sym::zero(c), |acc, &(a, b, k)| {
        let term = pool[a].try_mul(&pool[b]).unwrap().scale(&GaussRat::from_int(k));
        acc.try_add(&term).unwrap()
    })
}

fn leibniz<F: Fn(&Sym) -> Sym>(d: F, f: &Sym, g: &Sym) -> bool {
    let lhs = d(&f.try_mul(g).unwrap());
    let rhs = d(f).try_mul(g).unwrap().try_add(&f.try_mul(&d(g)).unwrap()).unwrap();
    lhs == rhs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn dt_is_a_derivation(a in symbol(), b in symbol()) {
        let c = ctx(1);
        let (f, g) = (build(&c, &a), build(&c, &b));
        prop_assert!(leibniz(|s| s.dt(), &f, &g));
    }

    #[test]
    fn dxn_is_a_derivation(a in normal_safe_symbol(), b in normal_safe_symbol()) {
        let c = ctx(2);
        let (f, g) = (build(&c, &a), build(&c, &b));
        prop_assert!(leibniz(|s| s.dxn().unwrap(), &f, &g));
    }

    #[test]
    fn dxi_is_a_derivation(a in symbol(), b in symbol(), k in 1u32..3) {
        let c = ctx(1);
        let (f, g) = (build(&c, &a), build(&c, &b));
        prop_assert!(leibniz(|s| s.dxi(k).unwrap(), &f, &g));
    }

    #[test]
    fn pi_plus_commutes_with_dt(a in symbol()) {
        let c = ctx(1);
        let f = build(&c, &a);
        prop_assert_eq!(f.dt().pi_plus(), f.pi_plus().dt());
        let g = f.pi_plus();
        prop_assert_eq!(g.pi_plus(), g);
    }

    #[test]
    fn trace_is_cyclic(a in symbol(), b in symbol()) {
        let c = ctx(2);
        let (f, g) = (build(&c, &a), build(&c, &b));
        let fg = f.try_mul(&g).unwrap().trace().unwrap().reduce_unit_sphere();
        let gf = g.try_mul(&f).unwrap().trace().unwrap().reduce_unit_sphere();
        prop_assert_eq!(fg, gf);
    }
}

#[test]
fn dxi_of_c_xi_is_the_generator() {
    let c = ctx(2);
    for k in 1..c.n() {
        assert_eq!(Sym::cxi(&c).dxi(k).unwrap(), Sym::letter(&c, Letter::E(k)));
    }
}

#[test]
fn dxn_marks_vector_letters() {
    let c = ctx(1);
    assert_eq!(Sym::letter(&c, Letter::Z).dxn().unwrap(), Sym::letter(&c, Letter::DZ));
    assert_eq!(Sym::cxi(&c).dxn().unwrap(), Sym::letter(&c, Letter::DXi));
    assert!(Sym::letter(&c, Letter::E(c.n())).dxn().unwrap().is_zero());
}

#[test]
fn dxn_of_radial_carries_h1() {
    // d/dx_n of 1/q^2 is -2 h1 / q^3 under the +h' convention.
    let c = ctx(1);
    let f = Sym::radial(&c, &RatFun::inv_q(&(), 2));
    let h = c.var("h1").unwrap();
    let want = Sym::term(&c, vec![], &h, &RatFun::inv_q(&(), 3).scale_gauss(&GaussRat::from_int(-2)));
    assert_eq!(f.dxn().unwrap(), want);
}

/// Sphere moments are pinned by two facts that do not use any moment formula:
/// rotation invariance (`M4 = 3 M22`) and `(Σ xi_k^2)^2 = 1` on the sphere
/// (`d M4 + d(d-1) M22 = 1`), where `d = n - 1` and each value is a fraction of `vol`.
#[test]
fn sphere_moments_follow_from_symmetry() {
    for m in 1..=3 {
        let c = ctx(m);
        let d = (c.n() - 1) as i64;
        let vol = c.var("vol").unwrap();
        let moment = |p: ScalarPoly| -> GaussRat {
            let v = Sym::scalar(&c, &p).sphere_int().unwrap();
            if v.is_zero() {
                return GaussRat::zero();
            }
            let ratio = v.terms().iter().next().map(|(_, k)| k.clone()).unwrap();
            assert_eq!(v, vol.scale(&ratio));
            ratio
        };
        let x1 = c.var("xi1").unwrap();
        let m2 = moment(x1.pow(2));
        assert_eq!(&m2 * &GaussRat::from_int(d), GaussRat::one());
        let m4 = moment(x1.pow(4));
        if d >= 2 {
            let x2 = c.var("xi2").unwrap();
            let m22 = moment(x1.pow(2).try_mul(&x2.pow(2)).unwrap());
            assert_eq!(m4, &m22 * &GaussRat::from_int(3));
            let total = &(&m4 * &GaussRat::from_int(d)) + &(&m22 * &GaussRat::from_int(d * (d - 1)));
            assert_eq!(total, GaussRat::one());
            assert!(moment(x1.try_mul(&x2).unwrap()).is_zero());
        }
        assert!(moment(x1.pow(3)).is_zero());
    }
}

#[test]
fn sphere_integral_sees_the_unit_constraint() {
    let c = ctx(2);
    let x1 = c.var("xi1").unwrap();
    let norm = (1..c.n()).fold(ScalarPoly::zero(c.alphabet()), |acc, k| acc.try_add(&c.var(&format!("xi{}", k)).unwrap().pow(2)).unwrap());
    let plain = Sym::scalar(&c, &x1.pow(2)).sphere_int().unwrap();
    let weighted = Sym::scalar(&c, &x1.pow(2).try_mul(&norm).unwrap()).sphere_int().unwrap();
    assert_eq!(plain, weighted);
}

#[test]
fn contour_then_sphere_of_a_known_integrand() {
    // tr[id] / q^2 at m = 1: trace 2, contour pi/2, sphere vol.
    let c = ctx(1);
    let s = Sym::radial(&c, &RatFun::inv_q(&(), 2));
    let v = s.trace().unwrap().xi_n_int().unwrap().sphere_int().unwrap();
    let want = c.var("pi").unwrap().try_mul(&c.var("vol").unwrap()).unwrap();
    assert_eq!(v, want);
}

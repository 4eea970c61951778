//! Contour integrals and the `pi_plus` projection on randomized rational functions.
//!
//! The residue oracle below never touches `partial_fractions`: it shifts the
//! numerator to powers of `s = t - i` and multiplies by the binomial series of
//! `(2i + s)^-b`, so the residue is the Taylor coefficient of order `a - 1`,
//! i.e. `g^(a-1)(i) / (a-1)!` with `g = N / (t+i)^b`.

use proptest::prelude::*;
use residue_kernel::ratfun::{RatFun, RatFunError};
use residue_kernel::ring::GaussRat;

type Rf = RatFun<GaussRat>;

const MAX_POLE: u32 = 20;

fn gi(re: i64, im: i64) -> GaussRat {
    GaussRat::from_parts((re, 1), (im, 1))
}

fn binom(n: u64, k: u64) -> GaussRat {
    (0..k).fold(GaussRat::one(), |acc, j| {
        (&acc * &GaussRat::from_int((n - j) as i64)).checked_div(&GaussRat::from_int(j as i64 + 1)).unwrap()
    })
}

fn factorial(n: u64) -> GaussRat {
    (2..=n).fold(GaussRat::one(), |acc, v| &acc * &GaussRat::from_int(v as i64))
}

/// Residue at `+i` of `num / ((t-i)^a (t+i)^b)` by Taylor expansion.
fn residue_oracle(num: &[GaussRat], a: u32, b: u32) -> GaussRat {
    if a == 0 || num.is_empty() {
        return GaussRat::zero();
    }
    let i = GaussRat::i();
    let two_i = GaussRat::from_parts((0, 1), (2, 1));
    let shifted: Vec<GaussRat> = (0..num.len())
        .map(|k| {
            (k..num.len()).fold(GaussRat::zero(), |acc, j| {
                let term = &(&num[j] * &binom(j as u64, k as u64)) * &i.pow((j - k) as i64).unwrap();
                &acc + &term
            })
        })
        .collect();
    // (2i + s)^-b = (2i)^-b * sum_k (-1)^k C(b+k-1, k) (s / 2i)^k
    let lead = two_i.pow(-(b as i64)).unwrap();
    let series = |k: u64| -> GaussRat {
        if b == 0 {
            return if k == 0 { GaussRat::one() } else { GaussRat::zero() };
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let c = binom(b as u64 + k - 1, k).scale_int(sign);
        &(&c * &lead) * &two_i.pow(-(k as i64)).unwrap()
    };
    let top = (a - 1) as usize;
    (0..=top.min(num.len().saturating_sub(1))).fold(GaussRat::zero(), |acc, k| &acc + &(&shifted[k] * &series((top - k) as u64)))
}

fn coeff() -> impl Strategy<Value = GaussRat> {
    (-9i64..=9, -9i64..=9).prop_map(|(re, im)| gi(re, im))
}

/// `(num, a, b)` with `deg num < a + b`, so the function vanishes at infinity.
fn proper() -> impl Strategy<Value = (Vec<GaussRat>, u32, u32)> {
    (0..=MAX_POLE, 0..=MAX_POLE).prop_flat_map(|(a, b)| {
        let len = (a + b) as usize;
        (prop::collection::vec(coeff(), 0..=len), Just(a), Just(b))
    })
}

/// Like `proper` but allowing a constant polynomial part, so derivatives stay integrable.
fn bounded() -> impl Strategy<Value = Rf> {
    (0..=MAX_POLE, 0..=MAX_POLE).prop_flat_map(|(a, b)| {
        let len = (a + b) as usize + 1;
        prop::collection::vec(coeff(), 0..=len).prop_map(move |num| Rf::new(&(), num, a, b).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn contour_matches_taylor_residue((num, a, b) in proper()) {
        let f = Rf::new(&(), num.clone(), a, b).unwrap();
        let two_i = GaussRat::from_parts((0, 1), (2, 1));
        let expected = &two_i * &residue_oracle(&num, a, b);
        prop_assert_eq!(f.contour_plus().unwrap(), expected.clone());
        prop_assert_eq!(f.pi_prime(), (&expected).checked_div(&GaussRat::from_int(2)).unwrap());
        if a > 0 {
            let g = Rf::new(&(), num, 0, b).unwrap();
            let d = g.deriv_at(a - 1, &GaussRat::i()).unwrap();
            let via_deriv = (&two_i * &d).checked_div(&factorial((a - 1) as u64)).unwrap();
            prop_assert_eq!(via_deriv, expected);
        }
    }

    #[test]
    fn contour_of_a_derivative_vanishes(f in bounded()) {
        prop_assert!(f.deriv().contour_plus().unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pi_plus_is_idempotent(f in bounded()) {
        let p = f.pi_plus();
        prop_assert_eq!(p.pi_plus(), p.clone());
        prop_assert_eq!(p.pole_order_minus(), 0);
    }

    #[test]
    fn pi_plus_is_linear(f in bounded(), g in bounded(), c in coeff()) {
        let lhs = f.scale(&c).try_add(&g).unwrap().pi_plus();
        let rhs = f.pi_plus().scale(&c).try_add(&g.pi_plus()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn complement_has_no_upper_pole(f in bounded()) {
        let rest = f.try_sub(&f.pi_plus()).unwrap();
        prop_assert_eq!(rest.pole_order_plus(), 0);
        prop_assert!(rest.pi_prime().is_zero());
    }

    #[test]
    fn pi_plus_commutes_with_d_dt(f in bounded()) {
        prop_assert_eq!(f.deriv().pi_plus(), f.pi_plus().deriv());
    }

    #[test]
    fn pi_prime_kills_lower_half_plane_functions(num in prop::collection::vec(coeff(), 0..30), b in 0..=MAX_POLE) {
        let h = Rf::new(&(), num, 0, b).unwrap();
        prop_assert!(h.pi_prime().is_zero());
        prop_assert!(h.pi_plus().is_zero());
    }

    #[test]
    fn partial_fractions_recombine(f in bounded()) {
        let pf = f.partial_fractions();
        prop_assert_eq!(Rf::recombine(&pf, &()), f);
    }
}

#[test]
fn polynomial_part_is_not_integrable() {
    let f = Rf::from_ints(&[1, 0, 0, 1], 1, 1);
    assert_eq!(f.contour_plus(), Err(RatFunError::NonIntegrable));
}

#[test]
fn classic_integrals() {
    // 1/(1+t^2) integrates to pi over the real line.
    assert_eq!(Rf::from_ints(&[1], 1, 1).contour_plus().unwrap(), GaussRat::one());
    // 1/(1+t^2)^2 integrates to pi/2.
    assert_eq!(Rf::from_ints(&[1], 2, 2).contour_plus().unwrap(), GaussRat::ratio(1, 2));
    // 1/(t-i)^2 has zero residue.
    assert!(Rf::from_ints(&[1], 2, 0).contour_plus().unwrap().is_zero());
}

#[test]
fn derivative_at_a_pole_is_refused() {
    let f = Rf::from_ints(&[1], 1, 0);
    assert!(matches!(f.deriv_at(0, &GaussRat::i()), Err(RatFunError::PoleAtPoint(_))));
}

#[test]
fn pi_plus_of_the_radial_kernel() {
    // 1/(1+t^2) = (i/2)/(t+i) - (i/2)/(t-i)  ->  pi_plus keeps -(i/2)/(t-i) = i/(2(i - t)).
    let p = Rf::from_ints(&[1], 1, 1).pi_plus();
    let expected = Rf::new(&(), vec![GaussRat::from_parts((0, 1), (-1, 2))], 1, 0).unwrap();
    assert_eq!(p, expected);
}

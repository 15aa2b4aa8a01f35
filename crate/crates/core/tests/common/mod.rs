#![allow(dead_code)]

use hsderiv::{normalize_at, IterativeDerivation, Poly, PrimeField, RationalFunction, Substitution, TruncSeries};
use proptest::prelude::*;

pub const PRIMES: [u64; 4] = [2, 3, 5, 7];

pub fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn poly(field: PrimeField, coeffs: &[u64]) -> Poly {
    Poly::from_coeffs(field, coeffs.to_vec())
}

pub fn ratfun(field: PrimeField, num: &[u64], den: &[u64]) -> RationalFunction {
    let den = poly(field, den);
    let den = if den.is_zero() { Poly::one(field) } else { den };
    RationalFunction::new(poly(field, num), den).unwrap()
}

pub fn any_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES.to_vec())
}

pub fn small_coeffs(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..7, 0..=max_len)
}

/// A rational function of low degree in `F_p(s)`.
pub fn any_ratfun(field: PrimeField) -> impl Strategy<Value = RationalFunction> {
    (small_coeffs(3), small_coeffs(2)).prop_map(move |(n, d)| ratfun(field, &n, &d))
}

pub fn nonconstant_ratfun(field: PrimeField) -> impl Strategy<Value = RationalFunction> {
    any_ratfun(field).prop_filter("non-constant", |f| f.as_constant().is_none())
}

/// A series with polynomial coefficients of degree at most 1.
pub fn any_series(field: PrimeField, order: usize) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec((0u64..7, 0u64..7), order).prop_map(move |cs| {
        TruncSeries::from_coeffs(field, cs.iter().map(|&(a, b)| ratfun(field, &[a, b], &[1])).collect())
    })
}

/// Zero constant term and unit linear coefficient.
pub fn invertible_series(field: PrimeField, order: usize) -> impl Strategy<Value = TruncSeries> {
    (1u64..7, any_series(field, order)).prop_filter_map("unit linear term", move |(c1, mut s)| {
        let c1 = field.reduce(c1);
        if c1 == 0 {
            return None;
        }
        s.set_coeff(0, RationalFunction::zero(field));
        s.set_coeff(1, RationalFunction::constant(field, c1));
        Some(s)
    })
}

/// An invertible substitution that is generally not iterative over the
/// standard derivation.
pub fn any_substitution(field: PrimeField, order: usize) -> impl Strategy<Value = Substitution> {
    invertible_series(field, order).prop_map(|s| Substitution::new(s).unwrap())
}

/// The substitution produced by normalizing the standard derivation at
/// `u = c s + a s^2`; `lambda o theta_t` is iterative.
pub fn iterative_substitution_for(field: PrimeField, order: usize, c: u64, a: u64) -> Option<Substitution> {
    let u = ratfun(field, &[0, c, a], &[1]);
    let theta = IterativeDerivation::standard(field, order);
    normalize_at(&theta, &u).ok().map(|n| n.substitution)
}

pub fn iterative_substitution(field: PrimeField, order: usize) -> impl Strategy<Value = Substitution> {
    (1u64..7, 0u64..7)
        .prop_filter_map("theta(u) has a linear term", move |(c, a)| iterative_substitution_for(field, order, c, a))
}

/// `num(g)/den(g)` by Horner evaluation in `F[[T]]`.
pub fn horner_image(theta: &IterativeDerivation, f: &RationalFunction) -> TruncSeries {
    let g = theta.generator();
    let eval = |p: &Poly| {
        let mut acc = TruncSeries::zero(theta.field(), theta.order());
        for &c in p.coeffs().iter().rev() {
            acc = &(&acc * g) + &TruncSeries::constant(RationalFunction::constant(theta.field(), c), theta.order());
        }
        acc
    };
    eval(f.numerator()).checked_div(&eval(f.denominator())).unwrap()
}

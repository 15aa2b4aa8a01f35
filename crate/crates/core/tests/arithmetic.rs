mod common;

use common::*;
use hsderiv::{lucas_binomial, PrimeField, RationalFunction, TruncBiSeries, TruncSeries};
use proptest::prelude::*;

fn with_field<S: Strategy>(f: impl Fn(PrimeField) -> S) -> impl Strategy<Value = (PrimeField, S::Value)> {
    any_prime().prop_flat_map(move |p| {
        let field = fp(p);
        (Just(field), f(field))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lucas_matches_factorial_formula(p in any_prime(), n in 0u64..40, k in 0u64..40) {
        // C(n, k) mod p from exact integer arithmetic
        let mut exact: u128 = 1;
        if k <= n {
            for i in 0..k {
                exact = exact * u128::from(n - i) / u128::from(i + 1);
            }
        } else {
            exact = 0;
        }
        prop_assert_eq!(u128::from(lucas_binomial(n, k, p)), exact % u128::from(p));
    }

    #[test]
    fn ratfun_is_canonical((field, (num, den)) in with_field(|_| (small_coeffs(4), small_coeffs(3)))) {
        let den_poly = poly(field, &den);
        prop_assume!(!den_poly.is_zero());
        let f = RationalFunction::new(poly(field, &num), den_poly).unwrap();
        prop_assert!(f.denominator().is_monic());
        prop_assert!(f.numerator().gcd(f.denominator()).is_one());
        if f.is_zero() {
            prop_assert!(f.denominator().is_one());
        }
        prop_assert_eq!(RationalFunction::parse(field, &f.to_string()).unwrap(), f);
    }

    #[test]
    fn ratfun_field_laws((field, (a, b, c)) in with_field(|f| (any_ratfun(f), any_ratfun(f), any_ratfun(f)))) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), RationalFunction::one(field));
        }
    }

    #[test]
    fn pth_root_inverts_frobenius((_field, (f, e)) in with_field(|fld| (any_ratfun(fld), 0u32..3))) {
        prop_assert_eq!(f.frobenius(e).pth_root(e).unwrap(), f);
    }

    #[test]
    fn composition_is_associative((field, (a, b, c)) in with_field(|f| (any_series(f, 8), invertible_series(f, 8), invertible_series(f, 8)))) {
        let _ = field;
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn reversion_roundtrip((field, p) in with_field(|f| invertible_series(f, 10))) {
        let q = p.reversion().unwrap();
        let id = TruncSeries::var(field, 10);
        prop_assert_eq!(p.compose(&q).unwrap(), id.clone());
        prop_assert_eq!(q.compose(&p).unwrap(), id);
    }

    #[test]
    fn u_plus_t_specializations((field, f) in with_field(|fld| any_series(fld, 9))) {
        let _ = field;
        let bi = f.substitute_u_plus_t();
        prop_assert_eq!(bi.at_u_zero(), f.clone());
        prop_assert_eq!(bi.at_t_zero(), f.clone());
        prop_assert_eq!(bi.clone(), TruncBiSeries::parse(f.field(), 9, &bi.to_string()).unwrap());
    }

    #[test]
    fn series_display_roundtrip((field, f) in with_field(|fld| any_series(fld, 7))) {
        prop_assert_eq!(TruncSeries::parse(field, 7, &f.to_string()).unwrap(), f);
    }
}

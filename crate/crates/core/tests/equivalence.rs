mod common;

use common::*;
use hsderiv::{
    apply_substitution, check_equivalence_condition, compress, decompress, frobenius_twist, normalize_at,
    recover_substitution, Compressed, IterativeDerivation, RationalFunction, Substitution,
};
use proptest::prelude::*;

fn either_substitution(p: u64, order: usize) -> impl Strategy<Value = Substitution> {
    prop_oneof![any_substitution(fp(p), order), iterative_substitution(fp(p), order)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn equivalence_condition_decides_iterativity(
        lambda in any_prime().prop_flat_map(|p| either_substitution(p, 10))
    ) {
        let theta = IterativeDerivation::standard(lambda.field(), 10);
        let tilde = apply_substitution(&theta, &lambda).unwrap();
        let direct = tilde.verify_iterativity().pass;
        let criterion = check_equivalence_condition(&tilde, &lambda).unwrap().pass;
        prop_assert_eq!(direct, criterion);
    }

    #[test]
    fn substitutions_compose_as_a_group(
        (l1, l2) in any_prime().prop_flat_map(|p| (any_substitution(fp(p), 8), any_substitution(fp(p), 8)))
    ) {
        let theta = IterativeDerivation::standard(l1.field(), 8);
        let stepwise = apply_substitution(&apply_substitution(&theta, &l1).unwrap(), &l2).unwrap();
        let at_once = apply_substitution(&theta, &l1.followed_by(&l2).unwrap()).unwrap();
        prop_assert_eq!(&stepwise, &at_once);
        let back = apply_substitution(&at_once, &l1.followed_by(&l2).unwrap().inverse().unwrap()).unwrap();
        prop_assert_eq!(back, theta);
    }

    #[test]
    fn recovery_inverts_substitution(
        lambda in any_prime().prop_flat_map(|p| either_substitution(p, 10))
    ) {
        let field = lambda.field();
        let theta = IterativeDerivation::standard(field, 10);
        let tilde = apply_substitution(&theta, &lambda).unwrap();
        for w in ["s", "s^2", "1/(s+1)"] {
            let w = RationalFunction::parse(field, w).unwrap();
            let got = recover_substitution(&theta, &tilde, &w);
            match theta.level(&w).unwrap() {
                hsderiv::Level::Finite(0) => prop_assert_eq!(got.unwrap(), lambda.clone()),
                _ => prop_assert_eq!(got.unwrap(), lambda.truncate(10 / field.characteristic() as usize)),
            }
        }
    }

    #[test]
    fn recovery_agrees_with_series_oracle(
        lambda in any_prime().prop_flat_map(|p| iterative_substitution(fp(p), 8))
    ) {
        // Q = B^(-1) o A with A = theta~(f) - f and B = theta(f) - f
        let field = lambda.field();
        let theta = IterativeDerivation::standard(field, 8);
        let tilde = apply_substitution(&theta, &lambda).unwrap();
        let f = RationalFunction::parse(field, "s^2 + s").unwrap();
        let minus_f = |x: hsderiv::TruncSeries| {
            let mut x = x;
            x.set_coeff(0, RationalFunction::zero(field));
            x
        };
        let b = minus_f(theta.apply(&f));
        let a = minus_f(tilde.apply(&f));
        prop_assume!(!b.coeff(1).is_zero());
        let q = b.reversion().unwrap().compose(&a).unwrap();
        prop_assert_eq!(recover_substitution(&theta, &tilde, &f).unwrap().series().clone(), q);
    }

    #[test]
    fn normalization_is_iterative_and_certified(
        (theta, u) in any_prime().prop_flat_map(|p| (
            iterative_substitution(fp(p), 8).prop_map(move |l| apply_substitution(&IterativeDerivation::standard(fp(p), 8), &l).unwrap()),
            nonconstant_ratfun(fp(p)),
        ))
    ) {
        let Ok(norm) = normalize_at(&theta, &u) else {
            prop_assert!(theta.apply(&u).coeff(1).is_zero());
            return Ok(());
        };
        let mut expect = hsderiv::TruncSeries::var(theta.field(), 8);
        expect.set_coeff(0, u.clone());
        prop_assert_eq!(norm.derivation.apply(&u), expect);
        prop_assert!(norm.derivation.verify_iterativity().pass);
        prop_assert!(check_equivalence_condition(&norm.derivation, &norm.substitution).unwrap().pass);
    }
}

#[test]
fn frobenius_twists_compress_back() {
    for p in PRIMES {
        let field = fp(p);
        let theta = IterativeDerivation::standard(field, 16);
        for d in 1..=2 {
            let q = p.pow(d) as usize;
            if q >= 16 {
                continue;
            }
            let twisted = frobenius_twist(&theta, d).unwrap();
            assert!(twisted.verify_iterativity().pass);
            assert_eq!(twisted.global_level().unwrap(), d);
            let c = compress(&twisted).unwrap();
            let order = c.derivation.order();
            assert_eq!(c, Compressed { derivation: IterativeDerivation::standard(field, order), level: d });
            let back = decompress(&c.derivation, d).unwrap();
            let common = back.order().min(16);
            assert_eq!(back.truncate(common), twisted.truncate(common));
        }
    }
}

#[test]
fn compressing_a_twisted_equivalent_derivation() {
    // twisting lambda o theta_t gives a level-1 derivation whose compression
    // is lambda o theta_t again
    let field = fp(2);
    let lambda = iterative_substitution_for(field, 16, 1, 1).unwrap();
    let base = apply_substitution(&IterativeDerivation::standard(field, 16), &lambda).unwrap();
    let twisted = frobenius_twist(&base, 1).unwrap();
    assert!(twisted.verify_iterativity().pass);
    let c = compress(&twisted).unwrap();
    assert_eq!(c.level, 1);
    assert_eq!(c.derivation, base.truncate(c.derivation.order()));
}

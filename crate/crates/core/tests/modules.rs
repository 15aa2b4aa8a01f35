mod common;

use common::*;
use hsderiv::module::invert_matrix;
use hsderiv::{
    apply_substitution, IdModule, IterativeDerivation, ModuleVector, PrimeField, RationalFunction, TruncSeries,
};
use proptest::prelude::*;

const N: usize = 8;

/// `[[1, c T^(p^k) + theta(a) - a], [0, 1]]` in a random basis; returns the
/// module and a constant vector.
fn rank_two(
    field: PrimeField,
    c: u64,
    k: u32,
    a: RationalFunction,
    b: Vec<RationalFunction>,
) -> Option<(IdModule, ModuleVector)> {
    let theta = IterativeDerivation::standard(field, N);
    let q = field.power_of_p(k)? as usize;
    let mut corner = &theta.apply(&a) - &TruncSeries::constant(a, N);
    if q < N {
        corner = &corner + &TruncSeries::monomial(RationalFunction::constant(field, c), q, N);
    }
    let entries = vec![TruncSeries::one(field, N), corner, TruncSeries::zero(field, N), TruncSeries::one(field, N)];
    let base = IdModule::new(theta, 2, entries).ok()?;
    let inv = invert_matrix(&b, 2).ok()?;
    let module = base.change_basis(&b).ok()?;
    Some((module, ModuleVector::new(vec![inv[0].clone(), inv[2].clone()])))
}

fn any_rank_two(field: PrimeField) -> impl Strategy<Value = (IdModule, ModuleVector)> {
    (0u64..7, 0u32..2, any_ratfun(field), prop::collection::vec(any_ratfun(field), 4))
        .prop_filter_map("invertible basis change", move |(c, k, a, b)| rank_two(field, c, k, a, b))
}

fn random_vector(field: PrimeField) -> impl Strategy<Value = ModuleVector> {
    prop::collection::vec(any_ratfun(field), 2).prop_map(ModuleVector::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_modules_are_iterative((m, constant) in any_prime().prop_flat_map(|p| any_rank_two(fp(p)))) {
        prop_assert!(m.verify_iterativity().pass);
        prop_assert!(m.is_constant_vector(&constant).unwrap());
    }

    #[test]
    fn transport_preserves_iterativity_and_constants(
        ((m, constant), lambda, v) in any_prime().prop_flat_map(|p| (
            any_rank_two(fp(p)),
            iterative_substitution(fp(p), N),
            random_vector(fp(p)),
        ))
    ) {
        let moved = m.transform(&lambda).unwrap();
        prop_assert!(moved.verify_iterativity().pass);
        for i in 0..2 {
            prop_assert_eq!(moved.entry(i, i).coeff(0), &RationalFunction::one(m.derivation().field()));
            prop_assert!(moved.entry(i, 1 - i).coeff(0).is_zero());
        }
        prop_assert!(moved.is_constant_vector(&constant).unwrap());
        prop_assert_eq!(m.is_constant_vector(&v).unwrap(), moved.is_constant_vector(&v).unwrap());
    }

    #[test]
    fn transport_is_functorial(
        ((m, _), l1, l2) in any_prime().prop_flat_map(|p| (
            any_rank_two(fp(p)),
            any_substitution(fp(p), N),
            any_substitution(fp(p), N),
        ))
    ) {
        let stepwise = m.transform(&l1).unwrap().transform(&l2).unwrap();
        let at_once = m.transform(&l1.followed_by(&l2).unwrap()).unwrap();
        prop_assert_eq!(stepwise, at_once);
    }

    #[test]
    fn constants_form_an_fp_space(
        ((m, constant), a, b) in any_prime().prop_flat_map(|p| (any_rank_two(fp(p)), 0u64..7, 0u64..7))
    ) {
        let field = m.derivation().field();
        let c = constant.coords();
        let combo = ModuleVector::new(vec![
            &c[0].scale(field.reduce(a)) + &c[0].scale(field.reduce(b)),
            &c[1].scale(field.reduce(a)) + &c[1].scale(field.reduce(b)),
        ]);
        prop_assert!(m.is_constant_vector(&combo).unwrap());
        // scaling by a non-constant function breaks constancy unless the vector is zero
        let s = RationalFunction::var(field);
        let moved = ModuleVector::new(vec![&c[0] * &s, &c[1] * &s]);
        prop_assert!(!m.is_constant_vector(&moved).unwrap());
    }

    #[test]
    fn basis_change_is_an_id_morphism(((m, _), b) in any_prime().prop_flat_map(|p| {
        let field = fp(p);
        (any_rank_two(field), prop::collection::vec(any_ratfun(field), 4))
    })) {
        // Phi = B intertwines: B . A' = A . theta(B)
        let Ok(moved) = m.change_basis(&b) else { return Ok(()); };
        let theta = m.derivation();
        let field = theta.field();
        for i in 0..2 {
            for j in 0..2 {
                let mut lhs = TruncSeries::zero(field, N);
                let mut rhs = TruncSeries::zero(field, N);
                for k in 0..2 {
                    lhs = &lhs + &moved.entry(k, j).scale(&b[i * 2 + k]);
                    rhs = &rhs + &(m.entry(i, k) * &theta.apply(&b[k * 2 + j]));
                }
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn hyperbolic_module_transport() {
    for p in PRIMES {
        let field = fp(p);
        let theta = IterativeDerivation::standard(field, 16);
        let m = IdModule::parse(theta.clone(), "(s+T)/s").unwrap();
        let inv_s = ModuleVector::parse(field, "1/s").unwrap();
        let lambda = iterative_substitution_for(field, 16, 1, 1).unwrap();
        let moved = m.transform(&lambda).unwrap();
        assert_eq!(moved.derivation(), &apply_substitution(&theta, &lambda).unwrap());
        assert!(moved.verify_iterativity().pass);
        assert!(moved.is_constant_vector(&inv_s).unwrap());
        assert!(!moved.is_constant_vector(&ModuleVector::parse(field, "1").unwrap()).unwrap());
    }
}

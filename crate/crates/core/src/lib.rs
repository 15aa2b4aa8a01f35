//! Exact arithmetic for iterative (Hasse-Schmidt) derivations on the
//! rational function field `F_p(s)`.
//!
//! An iterative derivation is stored as the truncated image of the
//! generator, `theta(s) mod T^N`. On top of that the crate provides the
//! iterativity check, levels, substitutions `lambda` of `F[[T]]` and the
//! resulting equivalence calculus, and free ID-modules in matrix form.
//!
//! ```
//! use hsderiv::{IterativeDerivation, PrimeField, RationalFunction, Substitution};
//!
//! let f3 = PrimeField::new(3)?;
//! let theta = IterativeDerivation::standard(f3, 16);
//! let twisted = hsderiv::frobenius_twist(&theta, 1)?;
//! assert!(twisted.verify_iterativity().pass);
//! assert_eq!(twisted.global_level()?, 1);
//! assert!(!Substitution::frobenius(f3, 16, 1).is_invertible());
//!
//! let image = theta.apply(&RationalFunction::parse(f3, "1/s")?);
//! assert_eq!(image.to_string(), "1/s + (2/s^2)*T + (1/s^3)*T^2 + (2/s^4)*T^3 + (1/s^5)*T^4 + (2/s^6)*T^5 + (1/s^7)*T^6 + (2/s^8)*T^7 + (1/s^9)*T^8 + (2/s^10)*T^9 + (1/s^11)*T^10 + (2/s^12)*T^11 + (1/s^13)*T^12 + (2/s^14)*T^13 + (1/s^15)*T^14 + (2/s^16)*T^15");
//! # Ok::<(), hsderiv::Error>(())
//! ```

pub mod biseries;
pub mod derivation;
pub mod equivalence;
pub mod error;
pub mod field;
pub mod module;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod series;
pub mod wire;

pub use biseries::TruncBiSeries;
pub use derivation::{
    composition_constant, standard_component_of_monomial, CheckReport, Failure, IterativeDerivation, Level,
};
pub use equivalence::{
    apply_substitution, check_equivalence_condition, compress, decompress, decompress_to, frobenius_twist,
    normalize_at, recover_substitution, Compressed, Normalized, Substitution, MAX_DECOMPRESS_ORDER,
};
pub use error::{Error, Result};
pub use field::{lucas_binomial, PrimeField};
pub use module::{
    apply_module, is_constant_vector, transform_module, verify_module_iterativity, IdModule, ModuleVector,
};
pub use parse::ParseError;
pub use poly::Poly;
pub use ratfun::RationalFunction;
pub use series::{series_compose, series_reversion, substitute_u_plus_t, TruncSeries, DEFAULT_ORDER};

// The guide's code listings run as doctests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/derivations.md")]
    mod derivations {}
    #[doc = include_str!("../../../book/src/equivalence.md")]
    mod equivalence {}
    #[doc = include_str!("../../../book/src/frobenius.md")]
    mod frobenius {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

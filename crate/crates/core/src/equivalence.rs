//! Substitutions `lambda: F[[T]] -> F[[T]]` and the equivalence calculus.
//!
//! A continuous F-algebra endomorphism of `F[[T]]` is fixed by
//! `P(T) = lambda(T)`, which must have zero constant term; it is an
//! automorphism exactly when the linear coefficient is nonzero. Applying
//! `lambda` after `theta` gives `theta~(f) = sum_k theta^(k)(f) P(T)^k`, so on
//! generator images it is plain composition: `g~ = g o P`.
//!
//! Non-invertible substitutions are ordinary values here. The Frobenius
//! substitution `P = T^(p^d)` still turns iterative derivations into
//! iterative ones, but it is not an equivalence.

use crate::biseries::TruncBiSeries;
use crate::derivation::{CheckReport, IterativeDerivation, Level};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::ratfun::RationalFunction;
use crate::series::{solve_power_equation, TruncSeries};

/// Largest order [`decompress`] will produce.
pub const MAX_DECOMPRESS_ORDER: usize = 1024;

/// The image `P(T) = lambda(T)` of a substitution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Substitution {
    series: TruncSeries,
}

impl Substitution {
    pub fn new(series: TruncSeries) -> Result<Self> {
        if !series.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        Ok(Self { series })
    }

    pub fn parse(field: PrimeField, order: usize, text: &str) -> Result<Self> {
        Self::new(TruncSeries::parse(field, order, text)?)
    }

    pub fn identity(field: PrimeField, order: usize) -> Self {
        Self { series: TruncSeries::var(field, order) }
    }

    /// `P(T) = T^(p^d)`.
    pub fn frobenius(field: PrimeField, order: usize, d: u32) -> Self {
        let q = field.power_of_p(d).and_then(|q| usize::try_from(q).ok()).unwrap_or(usize::MAX);
        Self { series: TruncSeries::monomial(RationalFunction::one(field), q, order) }
    }

    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    pub fn field(&self) -> PrimeField {
        self.series.field()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Automorphism test: `c_1(P) != 0`.
    pub fn is_invertible(&self) -> bool {
        self.order() < 2 || !self.series.coeff(1).is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.series == TruncSeries::var(self.field(), self.order())
    }

    /// The substitution for `lambda2 o lambda1`, i.e. first `self` then
    /// `then`: its series is `P_self(P_then(T))`.
    pub fn followed_by(&self, then: &Substitution) -> Result<Substitution> {
        Ok(Self { series: self.series.compose(&then.series)? })
    }

    pub fn inverse(&self) -> Result<Substitution> {
        Ok(Self { series: self.series.reversion()? })
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self { series: self.series.truncate(order) }
    }
}

/// `lambda o theta`, whose generator image is `theta(s) o P`.
pub fn apply_substitution(theta: &IterativeDerivation, lambda: &Substitution) -> Result<IterativeDerivation> {
    let g = theta.generator().compose(lambda.series())?;
    IterativeDerivation::new(g)
}

/// Checks `P(U + T) = P(U) + theta~_U[[T]](P(T))` in `F[[U, T]]`.
///
/// For `theta~ = lambda o theta` with `theta` iterative and non-trivial,
/// this holds exactly when `theta~` is iterative.
pub fn check_equivalence_condition(theta_tilde: &IterativeDerivation, lambda: &Substitution) -> Result<CheckReport> {
    let p = lambda.series();
    if p.order() != theta_tilde.order() {
        return Err(Error::OrderMismatch(theta_tilde.order(), p.order()));
    }
    let lhs = p.substitute_u_plus_t();
    let rhs = &TruncBiSeries::from_u_series(p) + &theta_tilde.extend_to_series(p)?;
    CheckReport::compare(&lhs, &rhs)
}

/// Recovers the substitution `lambda` with `theta~ = lambda o theta` from
/// the images of one non-constant witness `f`.
///
/// With `d` the level of `f` and `q = p^d`, the components of `theta(f)`
/// vanish off multiples of `q`, so
/// `theta~(f) - f = sum_{j>=1} theta^(jq)(f) (P^q)^j`. Since
/// `theta^(q)(f) != 0`, the coefficients of `P^q` follow one at a time; `P`
/// is then read off by taking `q`-th roots coefficient-wise, which works
/// because `(sum a_i T^i)^q = sum a_i^q T^(iq)` in characteristic p.
///
/// The result has order `floor(N/q)` and is checked against `theta~` at that
/// order.
pub fn recover_substitution(
    theta: &IterativeDerivation,
    theta_tilde: &IterativeDerivation,
    f: &RationalFunction,
) -> Result<Substitution> {
    if theta.order() != theta_tilde.order() {
        return Err(Error::OrderMismatch(theta.order(), theta_tilde.order()));
    }
    let n = theta.order();
    let d = match theta.level(f)? {
        Level::Constant => return Err(Error::ConstantWitness),
        Level::Finite(d) => d,
    };
    let q = theta.field().power_of_p(d).expect("level index is below N") as usize;

    // b_j = theta^(jq)(f): the compressed image of f under theta
    let base = theta.apply(f);
    let b: Vec<RationalFunction> = base.coeffs().iter().step_by(q).cloned().collect();
    let target = theta_tilde.apply(f);
    let power = solve_power_equation(&b, target.coeffs())?;

    let out_order = n / q;
    if out_order == 0 {
        return Err(Error::OrderTooSmall { min: q, got: n });
    }
    let mut coeffs = Vec::with_capacity(out_order);
    for (k, c) in power.iter().enumerate() {
        if k % q != 0 && !c.is_zero() {
            return Err(Error::NotAPthPower { exponent: d });
        }
    }
    for i in 0..out_order {
        coeffs.push(power[i * q].pth_root(d)?);
    }
    let lambda = Substitution::new(TruncSeries::from_coeffs(theta.field(), coeffs))?;

    let rebuilt = theta.truncate(out_order).generator().compose(lambda.series())?;
    if !rebuilt.agrees_to(theta_tilde.generator(), out_order) {
        return Err(Error::Inconsistent);
    }
    Ok(lambda)
}

/// A derivation together with the substitution that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub derivation: IterativeDerivation,
    pub substitution: Substitution,
}

/// Re-normalizes `theta` so that `t` behaves like the standard variable.
///
/// With `mu(T) = theta(t) - t` (invertible since `theta^(1)(t) != 0`) and
/// `lambda = mu^(-1)`, the derivation `theta~ = lambda o theta` satisfies
/// `theta~(t) = t + T`, and is iterative whenever `theta` is.
pub fn normalize_at(theta: &IterativeDerivation, t: &RationalFunction) -> Result<Normalized> {
    let image = theta.apply(t);
    if theta.order() < 2 || image.coeff(1).is_zero() {
        return Err(Error::NotNormalizable);
    }
    let mut mu = image;
    mu.set_coeff(0, RationalFunction::zero(theta.field()));
    let lambda = Substitution::new(mu.reversion()?)?;
    let derivation = apply_substitution(theta, &lambda)?;
    Ok(Normalized { derivation, substitution: lambda })
}

/// A level-`d` derivation re-indexed to one with nonzero first component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compressed {
    pub derivation: IterativeDerivation,
    pub level: u32,
}

/// `theta-bar^(j) = theta^(j p^d)`, where `d` is the global level.
///
/// The result has order `floor((N - 1)/p^d) + 1`.
pub fn compress(theta: &IterativeDerivation) -> Result<Compressed> {
    let d = theta.global_level()?;
    let q = theta.field().power_of_p(d).expect("level index is below N") as usize;
    let g = theta.generator().compress(q).map_err(|index| Error::NotIterative { index })?;
    Ok(Compressed { derivation: IterativeDerivation::new(g)?, level: d })
}

/// Inverse of [`compress`]: `theta^(j p^d) = theta-bar^(j)`, all other
/// components zero, at order `min(N p^d, MAX_DECOMPRESS_ORDER)`.
pub fn decompress(theta_bar: &IterativeDerivation, d: u32) -> Result<IterativeDerivation> {
    decompress_to(theta_bar, d, MAX_DECOMPRESS_ORDER)
}

/// [`decompress`] with an explicit cap on the output order.
pub fn decompress_to(theta_bar: &IterativeDerivation, d: u32, max_order: usize) -> Result<IterativeDerivation> {
    let q = theta_bar
        .field()
        .power_of_p(d)
        .and_then(|q| usize::try_from(q).ok())
        .ok_or(Error::OrderTooSmall { min: usize::MAX, got: max_order })?;
    let order = theta_bar.order().saturating_mul(q).min(max_order);
    IterativeDerivation::new(theta_bar.generator().inflate(q, order))
}

/// The Frobenius twist `T -> T^(p^d)` applied to `theta`.
pub fn frobenius_twist(theta: &IterativeDerivation, d: u32) -> Result<IterativeDerivation> {
    apply_substitution(theta, &Substitution::frobenius(theta.field(), theta.order(), d))
}

//! Iterative derivations on F = F_p(s).
//!
//! A continuous ring homomorphism `theta: F -> F[[T]]` with
//! `theta^(0) = id` is determined by the single series `g = theta(s)`,
//! whose constant term is `s`: for `f = a/b` one has `theta(f) = a(g)/b(g)`.
//! [`IterativeDerivation`] stores `g` modulo `T^N`; whether the map is
//! iterative (`theta^(i) o theta^(j) = C(i+j, i) theta^(i+j)`) is a
//! property checked by [`IterativeDerivation::verify_iterativity`], not
//! enforced at construction.
//!
//! Evaluation uses the Taylor expansion `f(s + h) = sum_k theta_t^(k)(f) h^k`
//! with `h = g - s`, where the components of the standard derivation are
//! Hasse derivatives of numerator and denominator.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::biseries::{BiMismatch, TruncBiSeries};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::ratfun::RationalFunction;
use crate::series::TruncSeries;

#[derive(Clone)]
pub struct IterativeDerivation {
    generator: TruncSeries,
    /// `h^0, h^1, ..., h^(N-1)` for `h = theta(s) - s`, built on first use.
    powers: OnceLock<Arc<[TruncSeries]>>,
}

impl PartialEq for IterativeDerivation {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator
    }
}

impl Eq for IterativeDerivation {}

impl Hash for IterativeDerivation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.generator.hash(state);
    }
}

impl fmt::Debug for IterativeDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IterativeDerivation").field("generator", &self.generator).finish()
    }
}

/// Outcome of an identity check between two bivariate series, at a stated
/// truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub pass: bool,
    pub order: usize,
    pub first_failure: Option<Failure>,
}

/// Where a check first failed. `entry` is set for matrix identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub i: usize,
    pub j: usize,
    pub lhs: RationalFunction,
    pub rhs: RationalFunction,
    pub entry: Option<(usize, usize)>,
    /// Set when a strict-mode check failed on a user-supplied element.
    pub element: Option<RationalFunction>,
}

impl CheckReport {
    pub(crate) fn compare(lhs: &TruncBiSeries, rhs: &TruncBiSeries) -> Result<Self> {
        let first_failure = lhs.first_mismatch(rhs)?.map(Failure::from);
        Ok(Self { pass: first_failure.is_none(), order: lhs.order(), first_failure })
    }

    pub(crate) fn passed(order: usize) -> Self {
        Self { pass: true, order, first_failure: None }
    }
}

impl From<BiMismatch> for Failure {
    fn from(m: BiMismatch) -> Self {
        Failure { i: m.i, j: m.j, lhs: m.lhs, rhs: m.rhs, entry: None, element: None }
    }
}

/// The level of an element: the least `d` with `theta^(p^d)(f) != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Finite(u32),
    Constant,
}

impl IterativeDerivation {
    fn wrap(generator: TruncSeries) -> Self {
        Self { generator, powers: OnceLock::new() }
    }

    fn powers(&self) -> &[TruncSeries] {
        self.powers.get_or_init(|| {
            let h = self.increment();
            let mut out = Vec::with_capacity(self.order());
            let mut acc = TruncSeries::one(self.field(), self.order());
            for _ in 0..self.order() {
                let next = &acc * &h;
                out.push(acc);
                acc = next;
            }
            out.into()
        })
    }

    /// Wraps a generator image; its constant term must be `s`.
    pub fn new(generator: TruncSeries) -> Result<Self> {
        if generator.coeff(0) != &RationalFunction::var(generator.field()) {
            return Err(Error::InvalidGenerator);
        }
        Ok(Self::wrap(generator))
    }

    /// Parses the generator image, e.g. `s + T^3`.
    pub fn parse(field: PrimeField, order: usize, text: &str) -> Result<Self> {
        Self::new(TruncSeries::parse(field, order, text)?)
    }

    /// The standard derivation `theta_t` with `theta(s) = s + T`.
    pub fn standard(field: PrimeField, order: usize) -> Self {
        let mut g = TruncSeries::var(field, order);
        g.set_coeff(0, RationalFunction::var(field));
        Self::wrap(g)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.generator.field()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.generator.order()
    }

    /// `theta(s)`.
    pub fn generator(&self) -> &TruncSeries {
        &self.generator
    }

    /// `theta(s) - s`, the part with zero constant term.
    pub fn increment(&self) -> TruncSeries {
        let mut h = self.generator.clone();
        h.set_coeff(0, RationalFunction::zero(self.field()));
        h
    }

    /// The same derivation modulo a smaller power of `T`.
    pub fn truncate(&self, order: usize) -> Self {
        Self::wrap(self.generator.truncate(order))
    }

    pub fn is_standard(&self) -> bool {
        *self == Self::standard(self.field(), self.order())
    }

    /// True when `theta(s) = s` modulo `T^N`, i.e. every component below `N` vanishes.
    pub fn is_trivial(&self) -> bool {
        self.increment().is_zero()
    }

    /// `theta(f)` modulo `T^N`.
    pub fn apply(&self, f: &RationalFunction) -> TruncSeries {
        self.apply_to_order(f, self.order())
    }

    /// `theta(f)` modulo `T^order`, for `order <= N`.
    pub fn apply_to_order(&self, f: &RationalFunction, order: usize) -> TruncSeries {
        assert!(order >= 1 && order <= self.order());
        if f.as_constant().is_some() {
            return TruncSeries::constant(f.clone(), order);
        }
        let taylor = standard_image(f, order);
        if self.is_standard() {
            return taylor;
        }
        // theta(f) = sum_k theta_t^(k)(f) h^k
        let powers = self.powers();
        let field = self.field();
        let mut out = vec![RationalFunction::zero(field); order];
        for (k, c) in taylor.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (m, slot) in out.iter_mut().enumerate().skip(k) {
                let x = powers[k].coeff(m);
                if !x.is_zero() {
                    *slot = &*slot + &(c * x);
                }
            }
        }
        TruncSeries::from_coeffs(field, out)
    }

    /// The component `theta^(n)(f)`, for `n < N`.
    pub fn component(&self, n: usize, f: &RationalFunction) -> RationalFunction {
        self.apply_to_order(f, n + 1).coeff(n).clone()
    }

    /// `theta_U[[T]](x)`: `theta` applied to each coefficient of a series in
    /// `T`, the images taken as series in `U`.
    pub fn extend_to_series(&self, x: &TruncSeries) -> Result<TruncBiSeries> {
        if x.order() != self.order() {
            return Err(Error::OrderMismatch(x.order(), self.order()));
        }
        x.map_coefficients(|c, need| Ok(self.apply_to_order(c, need)))
    }

    /// Checks `theta_U[[T]] o theta_T = theta_{U+T}` on the generator `s`.
    ///
    /// Both sides are continuous ring homomorphisms `F -> F[[U, T]]` that
    /// fix constants, so agreement on `s` gives agreement on all of `F_p(s)`.
    pub fn verify_iterativity(&self) -> CheckReport {
        let lhs = self.extend_to_series(&self.generator).expect("orders agree");
        let rhs = self.generator.substitute_u_plus_t();
        CheckReport::compare(&lhs, &rhs).expect("orders agree")
    }

    /// The same identity checked directly on each listed element.
    pub fn verify_iterativity_on(&self, elements: &[RationalFunction]) -> Result<CheckReport> {
        for f in elements {
            if f.field() != self.field() {
                return Err(Error::FieldMismatch(f.field().characteristic(), self.field().characteristic()));
            }
            let image = self.apply(f);
            let lhs = self.extend_to_series(&image)?;
            let rhs = image.substitute_u_plus_t();
            let report = CheckReport::compare(&lhs, &rhs)?;
            if !report.pass {
                let mut report = report;
                if let Some(failure) = report.first_failure.as_mut() {
                    failure.element = Some(f.clone());
                }
                return Ok(report);
            }
        }
        Ok(CheckReport::passed(self.order()))
    }

    /// Level of `f` as seen below order `N`.
    ///
    /// Returns [`Level::Constant`] for elements of F_p. For any other `f`
    /// whose components `theta^(1..N-1)` all vanish the answer is
    /// [`Error::TruncationInconclusive`]. A nonzero component at an index
    /// not divisible by `p^d` is reported as [`Error::NotIterative`].
    pub fn level(&self, f: &RationalFunction) -> Result<Level> {
        if f.as_constant().is_some() {
            return Ok(Level::Constant);
        }
        let image = self.apply(f);
        level_of_series(&image, self.field().characteristic())
    }

    /// The global level: the least `d` with `theta^(p^d) != 0`. It equals the
    /// level of `s`, since `theta(F)` lies in `F[[T^(p^d)]]` exactly when
    /// `theta(s)` does.
    pub fn global_level(&self) -> Result<u32> {
        match level_of_series(&self.generator, self.field().characteristic()) {
            Ok(Level::Finite(d)) => Ok(d),
            Ok(Level::Constant) => unreachable!("s is not in F_p"),
            Err(Error::TruncationInconclusive { order }) => Err(Error::TrivialDerivation { order }),
            Err(e) => Err(e),
        }
    }
}

fn level_of_series(image: &TruncSeries, p: u64) -> Result<Level> {
    let n = image.order();
    let Some(first) = (1..n).find(|&m| !image.coeff(m).is_zero()) else {
        return Err(Error::TruncationInconclusive { order: n });
    };
    // the least p^d with a nonzero component must also be the first nonzero index
    let mut d = 0u32;
    let mut q = 1usize;
    while first % (q * p as usize) == 0 {
        q *= p as usize;
        d += 1;
    }
    if q != first {
        return Err(Error::NotIterative { index: first });
    }
    if let Some(bad) = (1..n).find(|&m| m % q != 0 && !image.coeff(m).is_zero()) {
        return Err(Error::NotIterative { index: bad });
    }
    Ok(Level::Finite(d))
}

/// `theta_t(f) = f(s + T)` modulo `T^order` for the standard derivation.
pub(crate) fn standard_image(f: &RationalFunction, order: usize) -> TruncSeries {
    let field = f.field();
    let lift = |polys: Vec<crate::poly::Poly>| {
        TruncSeries::from_coeffs(field, polys.into_iter().map(RationalFunction::from_poly).collect())
    };
    let num = lift(f.numerator().hasse_derivatives(order));
    if f.is_polynomial() {
        return num;
    }
    let den = lift(f.denominator().hasse_derivatives(order));
    &num * &den.inverse().expect("denominator is nonzero at T = 0")
}

/// `theta_t^(n)(s^k) = C(k, n) s^(k-n)`, the standard derivation on monomials.
pub fn standard_component_of_monomial(field: PrimeField, k: u64, n: u64) -> RationalFunction {
    if n > k {
        return RationalFunction::zero(field);
    }
    let c = field.binomial(k, n);
    RationalFunction::from_poly(crate::poly::Poly::monomial(field, c, (k - n) as usize))
}

/// The scalar `c` in `(theta^(p^r))^(m_r) o ... o (theta^(1))^(m_0) = c theta^(m)`,
/// where `m = sum m_i p^i` in base p.
///
/// Folds `theta^(q) o theta^(a) = C(q + a, q) theta^(q + a)` over the
/// factors, innermost first. Adding one p-power at a time never carries, so
/// every binomial is a unit and `c != 0`.
pub fn composition_constant(m: u64, field: PrimeField) -> u64 {
    assert!(m >= 1, "composition constant needs m >= 1");
    let p = field.characteristic();
    let mut acc_index = 0u64;
    let mut c = 1u64;
    let mut place = 1u64;
    for digit in field.digits(m) {
        for _ in 0..digit {
            c = field.mul(c, field.binomial(acc_index + place, place));
            acc_index += place;
        }
        place = place.saturating_mul(p);
    }
    c
}

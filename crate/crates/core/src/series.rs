//! Truncated power series over F_p(s) in one variable.
//!
//! A [`TruncSeries`] of order `N` stores `c_0, ..., c_{N-1}` and stands for
//! the class of `sum c_k T^k` modulo `T^N`. Binary operations require equal
//! orders: the checked methods return [`Error::OrderMismatch`] and the
//! operator impls panic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::biseries::TruncBiSeries;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::parse::{parse_in, Algebra};
use crate::ratfun::RationalFunction;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    field: PrimeField,
    coeffs: Vec<RationalFunction>,
}

impl TruncSeries {
    pub fn zero(field: PrimeField, order: usize) -> Self {
        assert!(order >= 1, "truncation order must be positive");
        Self { field, coeffs: vec![RationalFunction::zero(field); order] }
    }

    pub fn constant(c: RationalFunction, order: usize) -> Self {
        let mut out = Self::zero(c.field(), order);
        out.coeffs[0] = c;
        out
    }

    pub fn one(field: PrimeField, order: usize) -> Self {
        Self::constant(RationalFunction::one(field), order)
    }

    /// `c * T^k`; vanishes when `k >= order`.
    pub fn monomial(c: RationalFunction, k: usize, order: usize) -> Self {
        let mut out = Self::zero(c.field(), order);
        if k < order {
            out.coeffs[k] = c;
        }
        out
    }

    /// The series variable `T`.
    pub fn var(field: PrimeField, order: usize) -> Self {
        Self::monomial(RationalFunction::one(field), 1, order)
    }

    /// Coefficients `c_0..c_{N-1}`; the order is their count.
    pub fn from_coeffs(field: PrimeField, coeffs: Vec<RationalFunction>) -> Self {
        assert!(!coeffs.is_empty(), "truncation order must be positive");
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        Self { field, coeffs }
    }

    pub fn parse(field: PrimeField, order: usize, text: &str) -> Result<Self> {
        parse_in(text, &SeriesAlgebra { field, order })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &RationalFunction {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<RationalFunction> {
        self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: RationalFunction) {
        if k < self.order() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RationalFunction::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Reduces modulo `T^order`; `order` may not exceed the current order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order >= 1 && order <= self.order(), "cannot truncate order {} to {}", self.order(), order);
        Self { field: self.field, coeffs: self.coeffs[..order].to_vec() }
    }

    /// Equality of the two classes modulo `T^order`.
    pub fn agrees_to(&self, other: &Self, order: usize) -> bool {
        order <= self.order() && order <= other.order() && self.coeffs[..order] == other.coeffs[..order]
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        Self { field: self.field, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.characteristic(), other.field.characteristic()));
        }
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self * other)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0_inv = self.coeffs[0].inv()?;
        Ok(Self { field: self.field, coeffs: inverse_coeffs(&self.coeffs, &c0_inv) })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.field, self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(g(T))` modulo `T^N` by Horner's rule.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_order(g)?;
        if !g.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        // After the step for index k the accumulator is later multiplied by
        // g^k, which has valuation >= k, so only n - k coefficients matter.
        let mut acc = vec![self.coeffs[n - 1].clone()];
        for k in (0..n - 1).rev() {
            let width = n - k;
            let mut next = mul_trunc(&acc, &g.coeffs, width);
            next[0] = &next[0] + &self.coeffs[k];
            acc = next;
        }
        Ok(Self { field: self.field, coeffs: acc })
    }

    /// Compositional inverse `Q` with `self(Q(T)) = T = Q(self(T))`.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        if self.order() == 1 {
            // modulo T both the input and its inverse are 0
            return Ok(self.clone());
        }
        if self.coeffs[1].is_zero() {
            return Err(Error::NotInvertible);
        }
        let t = Self::var(self.field, self.order());
        let q = solve_power_equation(&self.coeffs, &t.coeffs)?;
        Ok(Self { field: self.field, coeffs: q })
    }

    /// `f(U + T)` as a bivariate series of the same order.
    pub fn substitute_u_plus_t(&self) -> TruncBiSeries {
        let f = self.field;
        let n = self.order();
        let mut out = TruncBiSeries::zero(f, n);
        for (total, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for a in 0..=total {
                let binom = f.binomial(total as u64, a as u64);
                if binom != 0 {
                    out.set(a, total - a, c.scale(binom));
                }
            }
        }
        out
    }

    /// Replaces each coefficient `c_j` by the `U`-series `phi(c_j)`, giving
    /// `sum_j phi(c_j)(U) T^j` truncated to total degree `N`.
    ///
    /// `phi` is told how many `U`-coefficients are needed (`N - j`) and must
    /// return a series of at least that order.
    pub fn map_coefficients<F>(&self, mut phi: F) -> Result<TruncBiSeries>
    where
        F: FnMut(&RationalFunction, usize) -> Result<TruncSeries>,
    {
        let n = self.order();
        let mut out = TruncBiSeries::zero(self.field, n);
        for (j, c) in self.coeffs.iter().enumerate() {
            let need = n - j;
            let image = phi(c, need)?;
            if image.order() < need {
                return Err(Error::OrderMismatch(image.order(), need));
            }
            for i in 0..need {
                out.set(i, j, image.coeffs[i].clone());
            }
        }
        Ok(out)
    }

    /// Keeps the coefficients at multiples of `q`: `sum c_{jq} U^j`, of order
    /// `floor((N - 1)/q) + 1`. Returns the first offending index when some
    /// other coefficient is nonzero.
    pub(crate) fn compress(&self, q: usize) -> std::result::Result<Self, usize> {
        if let Some(bad) = self.coeffs.iter().enumerate().position(|(k, c)| k % q != 0 && !c.is_zero()) {
            return Err(bad);
        }
        let coeffs = self.coeffs.iter().step_by(q).cloned().collect();
        Ok(Self { field: self.field, coeffs })
    }

    /// `sum c_j T^{jq}` at order `order`.
    pub(crate) fn inflate(&self, q: usize, order: usize) -> Self {
        let mut out = Self::zero(self.field, order);
        for (j, c) in self.coeffs.iter().enumerate() {
            if j * q < order {
                out.coeffs[j * q] = c.clone();
            }
        }
        out
    }

    /// Display with a chosen variable name.
    pub fn display_in(&self, var: char) -> String {
        render_terms(self.coeffs.iter().enumerate().map(|(k, c)| (c, monomial_text(&[(var, k)]))))
    }
}

/// `f(g(T))`; see [`TruncSeries::compose`].
pub fn series_compose(f: &TruncSeries, g: &TruncSeries) -> Result<TruncSeries> {
    f.compose(g)
}

/// Compositional inverse; see [`TruncSeries::reversion`].
pub fn series_reversion(p: &TruncSeries) -> Result<TruncSeries> {
    p.reversion()
}

/// `f(U + T)`; see [`TruncSeries::substitute_u_plus_t`].
pub fn substitute_u_plus_t(f: &TruncSeries) -> TruncBiSeries {
    f.substitute_u_plus_t()
}

/// Coefficient-wise application; see [`TruncSeries::map_coefficients`].
pub fn map_coefficients<F>(f: &TruncSeries, phi: F) -> Result<TruncBiSeries>
where
    F: FnMut(&RationalFunction, usize) -> Result<TruncSeries>,
{
    f.map_coefficients(phi)
}

/// Product of two coefficient slices modulo `T^width`.
pub(crate) fn mul_trunc(a: &[RationalFunction], b: &[RationalFunction], width: usize) -> Vec<RationalFunction> {
    let field = a.first().or(b.first()).expect("nonempty operand").field();
    let mut out = vec![RationalFunction::zero(field); width];
    for (i, x) in a.iter().enumerate().take(width) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(width - i) {
            if y.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn inverse_coeffs(x: &[RationalFunction], c0_inv: &RationalFunction) -> Vec<RationalFunction> {
    let n = x.len();
    let mut y = Vec::with_capacity(n);
    y.push(c0_inv.clone());
    for k in 1..n {
        let mut acc = RationalFunction::zero(c0_inv.field());
        for i in 1..=k {
            if !x[i].is_zero() && !y[k - i].is_zero() {
                acc = &acc + &(&x[i] * &y[k - i]);
            }
        }
        y.push(-&(&acc * c0_inv));
    }
    y
}

/// Solves `sum_{j>=1} b_j Q^j = A` for `Q` with zero constant term, one
/// coefficient at a time: the coefficient of `T^k` on the left is
/// `b_1 Q_k` plus terms involving only `Q_1..Q_{k-1}`.
///
/// `b` may be shorter than `A`; missing `b_j` count as zero. Needs
/// `b_1 != 0`; `A_0` is ignored.
pub(crate) fn solve_power_equation(b: &[RationalFunction], a: &[RationalFunction]) -> Result<Vec<RationalFunction>> {
    let field = a[0].field();
    let n = a.len();
    let zero = RationalFunction::zero(field);
    let b1_inv = b.get(1).ok_or(Error::NotInvertible)?.inv().map_err(|_| Error::NotInvertible)?;
    let mut q = vec![zero.clone(); n];
    // powers[j][k] = coefficient of T^k in Q^j, for j >= 2
    let mut powers: Vec<Vec<RationalFunction>> = vec![Vec::new(); n];
    for row in powers.iter_mut().skip(2) {
        *row = vec![zero.clone(); n];
    }
    for k in 1..n {
        let mut rest = zero.clone();
        for j in 2..=k {
            // Q^j = Q * Q^{j-1}; Q^{j-1} vanishes below T^{j-1}
            let mut c = zero.clone();
            for i in 1..=(k - (j - 1)) {
                let lower = if j == 2 { &q[k - i] } else { &powers[j - 1][k - i] };
                if !q[i].is_zero() && !lower.is_zero() {
                    c = &c + &(&q[i] * lower);
                }
            }
            if let Some(bj) = b.get(j) {
                if !bj.is_zero() && !c.is_zero() {
                    rest = &rest + &(bj * &c);
                }
            }
            powers[j][k] = c;
        }
        q[k] = &(&a[k] - &rest) * &b1_inv;
    }
    Ok(q)
}

fn assert_compatible(a: &TruncSeries, b: &TruncSeries) {
    assert_eq!(a.field, b.field, "series over different fields");
    assert_eq!(a.order(), b.order(), "series of different truncation orders");
}

impl Add for &TruncSeries {
    type Output = TruncSeries;

    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        assert_compatible(self, rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        TruncSeries { field: self.field, coeffs }
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;

    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        assert_compatible(self, rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        TruncSeries { field: self.field, coeffs }
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;

    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        assert_compatible(self, rhs);
        TruncSeries { field: self.field, coeffs: mul_trunc(&self.coeffs, &rhs.coeffs, self.order()) }
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;

    fn neg(self) -> TruncSeries {
        TruncSeries { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

struct SeriesAlgebra {
    field: PrimeField,
    order: usize,
}

impl Algebra for SeriesAlgebra {
    type Value = TruncSeries;

    fn int(&self, n: u64) -> TruncSeries {
        TruncSeries::constant(RationalFunction::constant(self.field, n), self.order)
    }

    fn var(&self, name: char) -> Result<TruncSeries> {
        match name {
            's' => Ok(TruncSeries::constant(RationalFunction::var(self.field), self.order)),
            'T' => Ok(TruncSeries::var(self.field, self.order)),
            other => Err(Error::UnexpectedVariable(other.to_string())),
        }
    }

    fn add(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        a + b
    }

    fn sub(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        a - b
    }

    fn mul(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        a * b
    }

    fn neg(&self, a: &TruncSeries) -> TruncSeries {
        -a
    }

    fn div(&self, a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries> {
        a.checked_div(b)
    }
}

/// `U^2*T` style monomial text; empty for the unit monomial.
pub(crate) fn monomial_text(vars: &[(char, usize)]) -> String {
    vars.iter()
        .filter(|(_, e)| *e > 0)
        .map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Joins `coefficient * monomial` terms with ` + `, skipping zeros.
pub(crate) fn render_terms<'a>(terms: impl Iterator<Item = (&'a RationalFunction, String)>) -> String {
    let mut parts = Vec::new();
    for (c, mono) in terms {
        if c.is_zero() {
            continue;
        }
        let part = if mono.is_empty() {
            c.to_string()
        } else if c.is_one() {
            mono
        } else if c.needs_parens_as_factor() {
            format!("({c})*{mono}")
        } else {
            format!("{c}*{mono}")
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in('T'))
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(T^{})", self, self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn ser(p: u64, n: usize, text: &str) -> TruncSeries {
        TruncSeries::parse(fp(p), n, text).unwrap()
    }

    #[test]
    fn compose_examples() {
        let g = ser(5, 8, "T + s*T^2");
        assert_eq!(ser(5, 8, "T").compose(&g).unwrap(), g);
        assert_eq!(ser(3, 8, "1 + T + T^2").compose(&ser(3, 8, "T^3")).unwrap(), ser(3, 8, "1 + T^3 + T^6"));
        assert_eq!(ser(5, 8, "s + T").compose(&g).unwrap(), ser(5, 8, "s + T + s*T^2"));
        assert_eq!(ser(5, 8, "T").compose(&ser(5, 8, "1 + T")), Err(Error::NonzeroConstantTerm));
        assert_eq!(ser(5, 8, "T").compose(&ser(5, 6, "T")), Err(Error::OrderMismatch(8, 6)));
    }

    #[test]
    fn reversion_examples() {
        let t = ser(5, 6, "T");
        assert_eq!(t.reversion().unwrap(), t);
        // signed Catalan numbers 1, -1, 2, -5, 14 reduced mod 5
        let q = ser(5, 6, "T + T^2").reversion().unwrap();
        assert_eq!(q, ser(5, 6, "T + 4*T^2 + 2*T^3 + 0*T^4 + 4*T^5"));
        assert_eq!(ser(3, 6, "T^3").reversion(), Err(Error::NotInvertible));
        assert_eq!(ser(3, 6, "1 + T").reversion(), Err(Error::NotInvertible));
    }

    #[test]
    fn reversion_with_rational_coefficients() {
        let p = ser(7, 10, "(s+1)*T + T^2/s + 3*T^5");
        let q = p.reversion().unwrap();
        let t = ser(7, 10, "T");
        assert_eq!(p.compose(&q).unwrap(), t);
        assert_eq!(q.compose(&p).unwrap(), t);
    }

    #[test]
    fn u_plus_t_examples() {
        let f = fp(3);
        let b = ser(3, 8, "T").substitute_u_plus_t();
        assert_eq!(b, TruncBiSeries::parse(f, 8, "U + T").unwrap());
        let b = ser(3, 8, "T^3").substitute_u_plus_t();
        assert_eq!(b, TruncBiSeries::parse(f, 8, "U^3 + T^3").unwrap());
        let b = ser(3, 8, "T^2").substitute_u_plus_t();
        assert_eq!(b, TruncBiSeries::parse(f, 8, "U^2 + 2*U*T + T^2").unwrap());
    }

    #[test]
    fn map_coefficients_examples() {
        let f = fp(5);
        let n = 6;
        // theta_t as a U-series: c(s) -> c(s + U)
        let theta_t = |c: &RationalFunction, need: usize| -> Result<TruncSeries> {
            // the U-series s + U, stored in a single-variable carrier
            let shift = ser(5, need, "s + T");
            let num = eval_poly_at(c.numerator(), &shift);
            let den = eval_poly_at(c.denominator(), &shift);
            num.checked_div(&den)
        };
        let got = ser(5, n, "s*T").map_coefficients(theta_t).unwrap();
        assert_eq!(got, TruncBiSeries::parse(f, n, "(s + U)*T").unwrap());
        let got = ser(5, n, "s^2").map_coefficients(theta_t).unwrap();
        assert_eq!(got, TruncBiSeries::parse(f, n, "s^2 + 2*s*U + U^2").unwrap());
        let ident = |c: &RationalFunction, need: usize| Ok(TruncSeries::constant(c.clone(), need));
        let g = ser(5, n, "1 + s*T + T^3");
        assert_eq!(g.map_coefficients(ident).unwrap(), TruncBiSeries::from_t_series(&g));
    }

    fn eval_poly_at(poly: &crate::poly::Poly, x: &TruncSeries) -> TruncSeries {
        let mut acc = TruncSeries::zero(x.field(), x.order());
        for &c in poly.coeffs().iter().rev() {
            acc = &(&acc * x) + &TruncSeries::constant(RationalFunction::constant(x.field(), c), x.order());
        }
        acc
    }

    #[test]
    fn display_roundtrip() {
        let a = ser(5, 6, "(s+1)/s + 2*s*T + T^2/(s^2+1) + T^5");
        assert_eq!(a.to_string(), "(s + 1)/s + 2*s*T + (1/(s^2 + 1))*T^2 + T^5");
        assert_eq!(ser(5, 6, &a.to_string()), a);
        assert_eq!(TruncSeries::zero(fp(5), 3).to_string(), "0");
    }

    #[test]
    fn parse_truncates() {
        assert_eq!(ser(3, 4, "T^2 + T^4 + T^7"), ser(3, 4, "T^2"));
        assert!(TruncSeries::parse(fp(3), 4, "1/T").is_err());
    }

    #[test]
    fn inverse_of_geometric() {
        let x = ser(7, 8, "1 - T");
        assert_eq!(x.inverse().unwrap(), ser(7, 8, "1 + T + T^2 + T^3 + T^4 + T^5 + T^6 + T^7"));
    }
}

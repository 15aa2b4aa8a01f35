//! Bivariate series in `U, T` truncated by total degree.
//!
//! Coefficients `c_{i,j}` of `U^i T^j` are kept for `i + j < N`, stored by
//! increasing total degree and, within a degree, increasing `i`. Iteration
//! in storage order is therefore the order in which mismatches are reported.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::parse::{parse_in, Algebra};
use crate::ratfun::RationalFunction;
use crate::series::{monomial_text, render_terms, TruncSeries};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncBiSeries {
    field: PrimeField,
    order: usize,
    coeffs: Vec<RationalFunction>,
}

#[inline]
fn index(i: usize, j: usize) -> usize {
    let t = i + j;
    t * (t + 1) / 2 + i
}

/// Inverse of `index`: storage slot to `(i, j)`.
fn position(idx: usize) -> (usize, usize) {
    let mut t = 0;
    while (t + 1) * (t + 2) / 2 <= idx {
        t += 1;
    }
    let i = idx - t * (t + 1) / 2;
    (i, t - i)
}

/// A coefficient where two bivariate series differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiMismatch {
    /// Exponent of `U`.
    pub i: usize,
    /// Exponent of `T`.
    pub j: usize,
    pub lhs: RationalFunction,
    pub rhs: RationalFunction,
}

impl TruncBiSeries {
    pub fn zero(field: PrimeField, order: usize) -> Self {
        assert!(order >= 1, "truncation order must be positive");
        Self { field, order, coeffs: vec![RationalFunction::zero(field); order * (order + 1) / 2] }
    }

    pub fn constant(c: RationalFunction, order: usize) -> Self {
        let mut out = Self::zero(c.field(), order);
        out.coeffs[0] = c;
        out
    }

    /// Embeds a series in `U` (coefficients land on `U^i T^0`).
    pub fn from_u_series(f: &TruncSeries) -> Self {
        let mut out = Self::zero(f.field(), f.order());
        for (i, c) in f.coeffs().iter().enumerate() {
            out.set(i, 0, c.clone());
        }
        out
    }

    /// Embeds a series in `T`.
    pub fn from_t_series(f: &TruncSeries) -> Self {
        let mut out = Self::zero(f.field(), f.order());
        for (j, c) in f.coeffs().iter().enumerate() {
            out.set(0, j, c.clone());
        }
        out
    }

    pub fn parse(field: PrimeField, order: usize, text: &str) -> Result<Self> {
        parse_in(text, &BiAlgebra { field, order })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `U^i T^j`; requires `i + j < N`.
    pub fn coeff(&self, i: usize, j: usize) -> &RationalFunction {
        assert!(i + j < self.order, "U^{i} T^{j} is beyond total degree {}", self.order);
        &self.coeffs[index(i, j)]
    }

    /// Sets the coefficient of `U^i T^j`; ignored beyond the truncation.
    pub fn set(&mut self, i: usize, j: usize, c: RationalFunction) {
        if i + j < self.order {
            self.coeffs[index(i, j)] = c;
        }
    }

    /// All `(i, j, c_{i,j})` in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &RationalFunction)> {
        self.coeffs.iter().enumerate().map(|(k, c)| {
            let (i, j) = position(k);
            (i, j, c)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RationalFunction::is_zero)
    }

    /// Setting `U = 0` leaves a series in `T`.
    pub fn at_u_zero(&self) -> TruncSeries {
        let coeffs = (0..self.order).map(|j| self.coeff(0, j).clone()).collect();
        TruncSeries::from_coeffs(self.field, coeffs)
    }

    /// Setting `T = 0` leaves a series in `U`.
    pub fn at_t_zero(&self) -> TruncSeries {
        let coeffs = (0..self.order).map(|i| self.coeff(i, 0).clone()).collect();
        TruncSeries::from_coeffs(self.field, coeffs)
    }

    /// First coefficient (by total degree, then `U`-degree) where the two
    /// series differ.
    pub fn first_mismatch(&self, other: &Self) -> Result<Option<BiMismatch>> {
        self.check(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b).map(|k| {
            let (i, j) = position(k);
            BiMismatch { i, j, lhs: self.coeffs[k].clone(), rhs: other.coeffs[k].clone() }
        }))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.characteristic(), other.field.characteristic()));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * other)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0_inv = self.coeffs[0].inv()?;
        let n = self.order;
        let mut out = Self::zero(self.field, n);
        out.coeffs[0] = c0_inv.clone();
        for t in 1..n {
            for i in 0..=t {
                let j = t - i;
                let mut acc = RationalFunction::zero(self.field);
                for a in 0..=i {
                    for b in 0..=j {
                        if a + b == 0 {
                            continue;
                        }
                        let x = &self.coeffs[index(a, b)];
                        let y = &out.coeffs[index(i - a, j - b)];
                        if !x.is_zero() && !y.is_zero() {
                            acc = &acc + &(x * y);
                        }
                    }
                }
                out.coeffs[index(i, j)] = -&(&acc * &c0_inv);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::constant(RationalFunction::one(self.field), self.order);
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
}

fn assert_compatible(a: &TruncBiSeries, b: &TruncBiSeries) {
    assert_eq!(a.field, b.field, "bivariate series over different fields");
    assert_eq!(a.order, b.order, "bivariate series of different truncation orders");
}

impl Add for &TruncBiSeries {
    type Output = TruncBiSeries;

    fn add(self, rhs: &TruncBiSeries) -> TruncBiSeries {
        assert_compatible(self, rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        TruncBiSeries { field: self.field, order: self.order, coeffs }
    }
}

impl Sub for &TruncBiSeries {
    type Output = TruncBiSeries;

    fn sub(self, rhs: &TruncBiSeries) -> TruncBiSeries {
        assert_compatible(self, rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        TruncBiSeries { field: self.field, order: self.order, coeffs }
    }
}

impl Neg for &TruncBiSeries {
    type Output = TruncBiSeries;

    fn neg(self) -> TruncBiSeries {
        TruncBiSeries { field: self.field, order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &TruncBiSeries {
    type Output = TruncBiSeries;

    fn mul(self, rhs: &TruncBiSeries) -> TruncBiSeries {
        assert_compatible(self, rhs);
        let n = self.order;
        let mut out = TruncBiSeries::zero(self.field, n);
        for (ka, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (a, b) = position(ka);
            let room = n - (a + b);
            for (kb, y) in rhs.coeffs.iter().enumerate().take(room * (room + 1) / 2) {
                if y.is_zero() {
                    continue;
                }
                let (c, d) = position(kb);
                let k = index(a + c, b + d);
                out.coeffs[k] = &out.coeffs[k] + &(x * y);
            }
        }
        out
    }
}

struct BiAlgebra {
    field: PrimeField,
    order: usize,
}

impl Algebra for BiAlgebra {
    type Value = TruncBiSeries;

    fn int(&self, n: u64) -> TruncBiSeries {
        TruncBiSeries::constant(RationalFunction::constant(self.field, n), self.order)
    }

    fn var(&self, name: char) -> Result<TruncBiSeries> {
        let one = RationalFunction::one(self.field);
        let mut out = TruncBiSeries::zero(self.field, self.order);
        match name {
            's' => out.set(0, 0, RationalFunction::var(self.field)),
            'U' => out.set(1, 0, one),
            'T' => out.set(0, 1, one),
            other => return Err(Error::UnexpectedVariable(other.to_string())),
        }
        Ok(out)
    }

    fn add(&self, a: &TruncBiSeries, b: &TruncBiSeries) -> TruncBiSeries {
        a + b
    }

    fn sub(&self, a: &TruncBiSeries, b: &TruncBiSeries) -> TruncBiSeries {
        a - b
    }

    fn mul(&self, a: &TruncBiSeries, b: &TruncBiSeries) -> TruncBiSeries {
        a * b
    }

    fn neg(&self, a: &TruncBiSeries) -> TruncBiSeries {
        -a
    }

    fn div(&self, a: &TruncBiSeries, b: &TruncBiSeries) -> Result<TruncBiSeries> {
        Ok(a * &b.inverse()?)
    }
}

impl fmt::Display for TruncBiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = render_terms(self.terms().map(|(i, j, c)| (c, monomial_text(&[('U', i), ('T', j)]))));
        f.write_str(&text)
    }
}

impl fmt::Debug for TruncBiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O((U,T)^{})", self, self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn index_position_roundtrip() {
        for k in 0..200 {
            let (i, j) = position(k);
            assert_eq!(index(i, j), k);
        }
    }

    #[test]
    fn total_degree_truncation() {
        let f = fp(5);
        let a = TruncBiSeries::parse(f, 3, "(1 + U + T)^3").unwrap();
        assert_eq!(a, TruncBiSeries::parse(f, 3, "1 + 3*U + 3*T + 3*U^2 + 6*U*T + 3*T^2").unwrap());
    }

    #[test]
    fn inverse_and_specializations() {
        let f = fp(7);
        let a = TruncBiSeries::parse(f, 6, "s + U + s*T + U*T^2").unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, TruncBiSeries::constant(RationalFunction::one(f), 6));
        assert_eq!(a.at_u_zero(), TruncSeries::parse(f, 6, "s + s*T").unwrap());
        assert_eq!(a.at_t_zero(), TruncSeries::parse(f, 6, "s + T").unwrap());
    }

    #[test]
    fn mismatch_reporting() {
        let f = fp(3);
        let a = TruncBiSeries::parse(f, 4, "U + T + U^2").unwrap();
        let b = TruncBiSeries::parse(f, 4, "U + T + U^2 + 2*U*T").unwrap();
        let m = a.first_mismatch(&b).unwrap().unwrap();
        assert_eq!((m.i, m.j), (1, 1));
        assert!(m.lhs.is_zero());
        assert_eq!(m.rhs, RationalFunction::constant(f, 2));
        assert_eq!(a.first_mismatch(&a).unwrap(), None);
    }

    #[test]
    fn display_roundtrip() {
        let f = fp(5);
        let a = TruncBiSeries::parse(f, 5, "s + 2*U*T + U^2/(s+1) + T^3").unwrap();
        assert_eq!(a.to_string(), "s + 2*U*T + (1/(s + 1))*U^2 + T^3");
        assert_eq!(TruncBiSeries::parse(f, 5, &a.to_string()).unwrap(), a);
    }
}

//! Reduced rational functions in F_p(s).
//!
//! Normal form: the denominator is monic, numerator and denominator are
//! coprime, and zero is `0/1`. Two fractions are equal exactly when their
//! normal forms are identical, so `PartialEq` is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::parse::{parse_in, Algebra};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn zero(field: PrimeField) -> Self {
        Self { num: Poly::zero(field), den: Poly::one(field) }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self { num: Poly::constant(field, c), den: Poly::one(field) }
    }

    /// The generator `s`.
    pub fn var(field: PrimeField) -> Self {
        Self { num: Poly::var(field), den: Poly::one(field) }
    }

    pub fn from_poly(num: Poly) -> Self {
        let den = Poly::one(num.field());
        Self { num, den }
    }

    /// Reduces `num / den` to normal form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        let field = den.field();
        if num.is_zero() {
            return Self::zero(field);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        let lc = den.leading();
        if lc == 1 {
            return Self { num, den };
        }
        let inv = field.inv(lc).expect("nonzero leading coefficient");
        Self { num: num.scale(inv), den: den.scale(inv) }
    }

    // Skips the gcd when the caller knows the pair is already coprime.
    fn from_coprime(num: Poly, den: Poly) -> Self {
        let field = den.field();
        if num.is_zero() {
            return Self::zero(field);
        }
        let lc = den.leading();
        if lc == 1 {
            return Self { num, den };
        }
        let inv = field.inv(lc).expect("nonzero leading coefficient");
        Self { num: num.scale(inv), den: den.scale(inv) }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.den.field()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Membership in the constant subfield F_p.
    pub fn as_constant(&self) -> Option<u64> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = self.field().reduce(c);
        if c == 0 {
            return Self::zero(self.field());
        }
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: u64) -> Self {
        // coprime powers stay coprime
        Self { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// `self^(p^e)`. Frobenius fixes F_p, so this only inflates exponents.
    pub fn frobenius(&self, e: u32) -> Self {
        let q = self.field().power_of_p(e).expect("p^e fits in u64") as usize;
        Self { num: self.num.inflate(q), den: self.den.inflate(q) }
    }

    /// The unique `g` with `g^(p^e) = self`, or [`Error::NotAPthPower`].
    pub fn pth_root(&self, e: u32) -> Result<Self> {
        if e == 0 {
            return Ok(self.clone());
        }
        let q = self
            .field()
            .power_of_p(e)
            .and_then(|q| usize::try_from(q).ok())
            .ok_or(Error::NotAPthPower { exponent: e })?;
        let num = self.num.deflate(q).ok_or(Error::NotAPthPower { exponent: e })?;
        let den = self.den.deflate(q).ok_or(Error::NotAPthPower { exponent: e })?;
        Ok(Self { num, den })
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(self.field(), other.field(), "rational functions over different fields");
    }
}

/// Operation selector for [`ratfun_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Binary arithmetic in normal form. Division by zero is an error.
pub fn ratfun_arith(a: &RationalFunction, b: &RationalFunction, op: ArithOp) -> Result<RationalFunction> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().characteristic(), b.field().characteristic()));
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

/// `g` with `g^(p^e) = f`.
pub fn pth_root_ratfun(f: &RationalFunction, e: u32) -> Result<RationalFunction> {
    f.pth_root(e)
}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.assert_same_field(rhs);
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RationalFunction::from_coprime(num, self.den.clone());
            }
            return RationalFunction::normalize(num, self.den.clone());
        }
        if self.den.is_one() {
            // a + c/d with gcd(c, d) = 1 stays coprime
            let num = &(&self.num * &rhs.den) + &rhs.num;
            return RationalFunction::from_coprime(num, rhs.den.clone());
        }
        if rhs.den.is_one() {
            let num = &self.num + &(&rhs.num * &self.den);
            return RationalFunction::from_coprime(num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let den = &self.den * &rhs.den;
            // any common factor would divide one of the coprime denominators
            return RationalFunction::from_coprime(num, den);
        }
        let b1 = self.den.div_exact(&g);
        let d1 = rhs.den.div_exact(&g);
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        let den = &b1 * &rhs.den;
        RationalFunction::normalize(num, den)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        self.assert_same_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.field());
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(c);
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.div_exact(&g1), rhs.den.div_exact(&g1))
        };
        let (c, b) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        RationalFunction::from_coprime(&a * &c, &b * &d)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl RationalFunction {
    /// Parses text such as `(s^2+1)/(s+2)`, reducing integers mod p.
    pub fn parse(field: PrimeField, text: &str) -> Result<Self> {
        parse_in(text, &RatFunAlgebra(field))
    }

    /// True when the textual form needs parentheses as a factor of a product.
    pub(crate) fn needs_parens_as_factor(&self) -> bool {
        !(self.den.is_one() && self.num.term_count() <= 1)
    }
}

struct RatFunAlgebra(PrimeField);

impl Algebra for RatFunAlgebra {
    type Value = RationalFunction;

    fn int(&self, n: u64) -> RationalFunction {
        RationalFunction::constant(self.0, n)
    }

    fn var(&self, name: char) -> Result<RationalFunction> {
        match name {
            's' => Ok(RationalFunction::var(self.0)),
            other => Err(Error::UnexpectedVariable(other.to_string())),
        }
    }

    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a + b
    }

    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a - b
    }

    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a * b
    }

    fn neg(&self, a: &RationalFunction) -> RationalFunction {
        -a
    }

    fn div(&self, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction> {
        a.checked_div(b)
    }

    fn pow(&self, a: &RationalFunction, e: u32) -> RationalFunction {
        a.pow(e as u64)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.term_count() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if self.den.term_count() > 1 {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction[{}]({})", self.field().characteristic(), self)
    }
}

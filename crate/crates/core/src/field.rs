//! Arithmetic in the prime field F_p and base-p combinatorics.
//!
//! Elements are plain `u64` residues in `[0, p)`; a [`PrimeField`] value
//! carries the modulus and performs the arithmetic. Moduli are restricted to
//! primes below 2^32 so that products of two residues fit in a `u64`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 32;

/// The prime field F_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl PrimeField {
    /// Validates `p` and returns the field, or [`Error::NotPrime`].
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(&self, n: u64) -> u64 {
        n % self.p
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn reduce_signed(&self, n: i64) -> u64 {
        let r = n.rem_euclid(self.p as i64);
        r as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// `C(n, k) mod p` by Lucas' theorem.
    pub fn binomial(&self, n: u64, k: u64) -> u64 {
        lucas_binomial(n, k, self.p)
    }

    /// Base-p digits of `n`, least significant first. Zero has no digits.
    pub fn digits(&self, mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while n > 0 {
            out.push(n % self.p);
            n /= self.p;
        }
        out
    }

    /// `p^e`, or `None` on overflow.
    pub fn power_of_p(&self, e: u32) -> Option<u64> {
        self.p.checked_pow(e)
    }
}

/// Deterministic primality test by trial division (moduli are below 2^32).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `C(n, k) mod p`, computed digit-wise in base `p`.
///
/// Zero whenever some base-p digit of `k` exceeds the matching digit of `n`
/// (in particular whenever `k > n`).
pub fn lucas_binomial(mut n: u64, mut k: u64, p: u64) -> u64 {
    debug_assert!(p >= 2);
    let mut acc = 1 % p;
    while k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = acc * small_binomial(nd, kd, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

// C(n, k) mod p for 0 <= k <= n < p via the multiplicative formula.
fn small_binomial(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    let f = PrimeField { p };
    num * f.inv(den).expect("factors below p are units") % p
}

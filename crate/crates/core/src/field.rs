//! Exact scalar fields.
//!
//! Everything in this crate is generic over [`Field`]. Two families are
//! provided: the rationals ([`Q`], backed by `num-rational`) and prime fields
//! [`Fp`] with a compile-time modulus.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// The rational numbers with arbitrary precision.
pub type Q = BigRational;

/// An exact field. Arithmetic never rounds; division by zero is reported by
/// [`Field::inv`] returning `None`.
pub trait Field:
    Clone
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// 0 for the rationals, p for F_p.
    fn characteristic() -> u64;

    fn from_i64(n: i64) -> Self;

    fn inv(&self) -> Option<Self>;

    /// Parses an integer `"n"` or a fraction `"p/q"`.
    fn parse_exact(s: &str) -> Option<Self>;

    fn mul_ref(&self, rhs: &Self) -> Self;

    fn add_assign_ref(&mut self, rhs: &Self);

    fn sub_assign_ref(&mut self, rhs: &Self);

    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a.mul_ref(b);
        self.add_assign_ref(&p);
    }

    fn div_ref(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul_ref(&r))
    }
}

impl Field for BigRational {
    fn characteristic() -> u64 {
        0
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
            Some((p, q)) => {
                let p = p.trim().parse::<BigInt>().ok()?;
                let q = q.trim().parse::<BigInt>().ok()?;
                if q.is_zero() {
                    None
                } else {
                    Some(BigRational::new(p, q))
                }
            }
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        if rhs.is_zero() {
            return;
        }
        *self = &*self + rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        if rhs.is_zero() {
            return;
        }
        *self = &*self - rhs;
    }
}

/// Residues modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

/// The field with two elements.
pub type F2 = Fp<2>;

impl<const P: u64> Fp<P> {
    const CHECK: () = assert!(P >= 2 && is_prime(P), "Fp modulus must be prime");

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::CHECK;
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        let m = P as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        Fp(acc as u64)
    }
}

const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp::new(1)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn characteristic() -> u64 {
        P
    }

    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        let parse = |t: &str| -> Option<Self> {
            let n = t.trim().parse::<BigInt>().ok()?;
            let r = n % BigInt::from(P);
            let r: i64 = r.try_into().ok()?;
            Some(Fp::new(r))
        };
        match s.split_once('/') {
            None => parse(s),
            Some((p, q)) => {
                let p = parse(p)?;
                let q = parse(q)?.inv()?;
                Some(p * q)
            }
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        *self * *rhs
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = *self + *rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self = *self - *rhs;
    }
}

/// Shorthand for building rationals in code and tests.
pub fn q(p: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_and_inverse() {
        let x = Q::parse_exact("-3/6").unwrap();
        assert_eq!(x, q(-1, 2));
        assert_eq!(x.inv().unwrap(), Q::from_i64(-2));
        assert!(Q::zero().inv().is_none());
        assert!(Q::parse_exact("1/0").is_none());
        assert_eq!(Q::parse_exact(" 7 ").unwrap(), Q::from_i64(7));
    }

    #[test]
    fn prime_field_arithmetic() {
        type F5 = Fp<5>;
        let a = F5::new(3);
        assert_eq!(a * a.inv().unwrap(), F5::one());
        assert_eq!(-a, F5::new(2));
        assert_eq!(F5::parse_exact("1/2").unwrap(), F5::new(3));
        assert_eq!(F5::parse_exact("-1").unwrap(), F5::new(4));
        assert_eq!(F2::from_i64(2), F2::zero());
        assert_eq!(F2::characteristic(), 2);
    }

    #[test]
    fn add_mul_accumulates() {
        let mut acc = q(1, 3);
        acc.add_mul(&q(1, 2), &q(2, 3));
        assert_eq!(acc, q(2, 3));
    }
}

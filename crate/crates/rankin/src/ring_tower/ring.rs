use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

use super::RingError;

/// A commutative ring element that knows how to build its own zero and one.
///
/// Rings like ℤ/p^r or ℤ[ζ_m] carry parameters in each value, so constants
/// are always produced "like" an existing element.
pub trait RingElem: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: &BigInt) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn is_zero(&self) -> bool;

    /// Whether two values live in the same ring (same modulus, order, ...).
    fn compatible(&self, _o: &Self) -> bool {
        true
    }

    fn from_i64_like(&self, n: i64) -> Self {
        self.from_int_like(&BigInt::from(n))
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }

    fn checked_plus(&self, o: &Self) -> Result<Self, RingError> {
        if !self.compatible(o) {
            return Err(RingError::Mismatch(format!("{self:?} vs {o:?}")));
        }
        Ok(self.plus(o))
    }

    fn checked_times(&self, o: &Self) -> Result<Self, RingError> {
        if !self.compatible(o) {
            return Err(RingError::Mismatch(format!("{self:?} vs {o:?}")));
        }
        Ok(self.times(o))
    }
}

/// Rings in which rational numbers with suitable denominators make sense.
pub trait RationalLike: RingElem {
    fn from_rational_like(&self, q: &BigRational) -> Result<Self, RingError>;
}

impl RingElem for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        n.clone()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl RingElem for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl RationalLike for BigRational {
    fn from_rational_like(&self, q: &BigRational) -> Result<Self, RingError> {
        Ok(q.clone())
    }
}

/// p-adic valuation of a rational; `None` stands for +∞ (the value 0).
pub fn padic_valuation(x: &BigRational, p: u64) -> Option<i64> {
    if Zero::is_zero(x) {
        return None;
    }
    Some(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
}

pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    assert!(p >= 2);
    if Zero::is_zero(n) {
        return i64::MAX;
    }
    let pb = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &pb);
        if !Zero::is_zero(&r) {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

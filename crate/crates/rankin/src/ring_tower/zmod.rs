use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ring::{RationalLike, RingElem};
use super::RingError;

/// Residue modulo p^r. Values with different (p, r) never mix silently.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZModPr {
    p: u64,
    r: u32,
    v: u64,
}

fn modulus_of(p: u64, r: u32) -> u64 {
    p.checked_pow(r).expect("p^r must fit in 63 bits")
}

impl ZModPr {
    pub fn new(p: u64, r: u32, value: i64) -> Self {
        assert!(p >= 2 && r >= 1);
        let m = modulus_of(p, r);
        assert!(m < (1 << 62), "p^r too large");
        let v = (value as i128).rem_euclid(m as i128) as u64;
        ZModPr { p, r, v }
    }

    pub fn zero(p: u64, r: u32) -> Self {
        Self::new(p, r, 0)
    }

    pub fn one(p: u64, r: u32) -> Self {
        Self::new(p, r, 1)
    }

    pub fn from_bigint(p: u64, r: u32, n: &BigInt) -> Self {
        let m = BigInt::from(modulus_of(p, r));
        let v = n.mod_floor(&m).to_u64().unwrap();
        ZModPr { p, r, v }
    }

    pub fn from_rational(p: u64, r: u32, q: &BigRational) -> Result<Self, RingError> {
        let d = Self::from_bigint(p, r, q.denom());
        let inv = d.inv().ok_or(RingError::NotInvertible(format!("denominator of {q} mod {p}")))?;
        Ok(Self::from_bigint(p, r, q.numer()) * inv)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn value(&self) -> u64 {
        self.v
    }
    pub fn modulus(&self) -> u64 {
        modulus_of(self.p, self.r)
    }

    /// Symmetric representative in (−p^r/2, p^r/2].
    pub fn signed(&self) -> i64 {
        let m = self.modulus();
        if self.v > m / 2 {
            self.v as i64 - m as i64
        } else {
            self.v as i64
        }
    }

    pub fn with_value(&self, value: i64) -> Self {
        Self::new(self.p, self.r, value)
    }

    pub fn reduce_precision(&self, r2: u32) -> Result<Self, RingError> {
        if r2 == 0 || r2 > self.r {
            return Err(RingError::Precision(format!("cannot reduce 𝑟={} to {r2}", self.r)));
        }
        Ok(Self::new(self.p, r2, (self.v % modulus_of(self.p, r2)) as i64))
    }

    /// p-adic valuation of the residue, capped at r.
    pub fn valuation(&self) -> u32 {
        if self.v == 0 {
            return self.r;
        }
        let mut v = self.v;
        let mut k = 0;
        while v % self.p == 0 {
            v /= self.p;
            k += 1;
        }
        k
    }

    pub fn is_unit(&self) -> bool {
        self.v % self.p != 0
    }

    pub fn inv(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let m = self.modulus() as i128;
        let (mut a, mut b) = (self.v as i128, m);
        let (mut x0, mut x1) = (1i128, 0i128);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        Some(ZModPr { p: self.p, r: self.r, v: x0.rem_euclid(m) as u64 })
    }

    /// Divide by p^k when the residue is divisible by p^k; the result has precision r − k.
    pub fn divide_by_p_power(&self, k: u32) -> Result<Self, RingError> {
        if k == 0 {
            return Ok(*self);
        }
        if k >= self.r || self.valuation() < k {
            return Err(RingError::Precision(format!("{self:?} not divisible by p^{k}")));
        }
        let pk = modulus_of(self.p, k);
        Ok(Self::new(self.p, self.r - k, (self.v / pk) as i64))
    }

    pub fn pow(&self, e: u64) -> Self {
        RingElem::pow_u(self, e)
    }

    /// x^e for possibly negative e (x must be a unit when e < 0).
    pub fn pow_i(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|u| u.pow(e.unsigned_abs()))
        }
    }

    fn check(&self, o: &Self) {
        if self.p != o.p || self.r != o.r {
            panic!("ℤ/p^r mismatch: {}^{} vs {}^{}", self.p, self.r, o.p, o.r);
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.v)
    }
}

impl fmt::Debug for ZModPr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.v, self.p, self.r)
    }
}

impl fmt::Display for ZModPr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for ZModPr {
    type Output = ZModPr;
    fn add(self, o: ZModPr) -> ZModPr {
        self.check(&o);
        let m = self.modulus();
        let s = self.v + o.v;
        ZModPr { v: if s >= m { s - m } else { s }, ..self }
    }
}

impl Sub for ZModPr {
    type Output = ZModPr;
    fn sub(self, o: ZModPr) -> ZModPr {
        self.check(&o);
        let m = self.modulus();
        ZModPr { v: if self.v >= o.v { self.v - o.v } else { self.v + m - o.v }, ..self }
    }
}

impl Mul for ZModPr {
    type Output = ZModPr;
    fn mul(self, o: ZModPr) -> ZModPr {
        self.check(&o);
        let m = self.modulus() as u128;
        ZModPr { v: ((self.v as u128 * o.v as u128) % m) as u64, ..self }
    }
}

impl Neg for ZModPr {
    type Output = ZModPr;
    fn neg(self) -> ZModPr {
        let m = self.modulus();
        ZModPr { v: if self.v == 0 { 0 } else { m - self.v }, ..self }
    }
}

impl RingElem for ZModPr {
    fn zero_like(&self) -> Self {
        ZModPr { v: 0, ..*self }
    }
    fn one_like(&self) -> Self {
        ZModPr { v: 1 % self.modulus(), ..*self }
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        Self::from_bigint(self.p, self.r, n)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.with_value(n)
    }
    fn plus(&self, o: &Self) -> Self {
        *self + *o
    }
    fn minus(&self, o: &Self) -> Self {
        *self - *o
    }
    fn times(&self, o: &Self) -> Self {
        *self * *o
    }
    fn negate(&self) -> Self {
        -*self
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn compatible(&self, o: &Self) -> bool {
        self.p == o.p && self.r == o.r
    }
}

impl RationalLike for ZModPr {
    fn from_rational_like(&self, q: &BigRational) -> Result<Self, RingError> {
        Self::from_rational(self.p, self.r, q)
    }
}

/// Hensel-lift a simple root of a polynomial over ℤ/p^r,
/// starting from a root mod p. Coefficients are constant-term first.
pub fn hensel_lift(coeffs: &[ZModPr], start: u64) -> Result<ZModPr, RingError> {
    let z = coeffs[0];
    let eval = |x: ZModPr| coeffs.iter().rev().fold(z.zero_like(), |acc, c| acc * x + *c);
    let deriv = |x: ZModPr| {
        coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(z.zero_like(), |acc, (i, c)| acc * x + *c * z.with_value(i as i64))
    };
    let mut x = z.with_value(start as i64);
    for _ in 0..=z.r() + 1 {
        let dx = deriv(x).inv().ok_or(RingError::NotInvertible("derivative at the root".into()))?;
        x = x - eval(x) * dx;
    }
    if !eval(x).is_zero() {
        return Err(RingError::Precision("Hensel iteration did not converge".into()));
    }
    Ok(x)
}

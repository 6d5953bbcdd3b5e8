use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::ring::RingElem;
use super::RingError;

/// The variable set of a Laurent polynomial ring, with per-variable invertibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentRing {
    names: Vec<String>,
    invertible: Vec<bool>,
}

impl LaurentRing {
    pub fn new(vars: &[(&str, bool)]) -> Arc<Self> {
        Arc::new(LaurentRing {
            names: vars.iter().map(|(n, _)| n.to_string()).collect(),
            invertible: vars.iter().map(|(_, i)| *i).collect(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Sparse Laurent polynomial with integer coefficients; zero terms are never stored.
#[derive(Clone)]
pub struct LaurentPoly {
    ring: Arc<LaurentRing>,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, o: &Self) -> bool {
        *self.ring == *o.ring && self.terms == o.terms
    }
}

impl LaurentPoly {
    pub fn zero(ring: &Arc<LaurentRing>) -> Self {
        LaurentPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<LaurentRing>, c: i64) -> Self {
        Self::term(ring, BigInt::from(c), vec![0; ring.nvars()]).unwrap()
    }

    pub fn term(ring: &Arc<LaurentRing>, c: BigInt, exps: Vec<i32>) -> Result<Self, RingError> {
        if exps.len() != ring.nvars() {
            return Err(RingError::Mismatch("exponent vector length".into()));
        }
        for (i, e) in exps.iter().enumerate() {
            if *e < 0 && !ring.invertible[i] {
                return Err(RingError::NotInvertible(ring.names[i].clone()));
            }
        }
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert(exps, c);
        }
        Ok(LaurentPoly { ring: ring.clone(), terms })
    }

    /// A single variable raised to the power e.
    pub fn var(ring: &Arc<LaurentRing>, name: &str, e: i32) -> Result<Self, RingError> {
        let i = ring.index(name).ok_or_else(|| RingError::Mismatch(format!("unknown variable {name}")))?;
        let mut ex = vec![0; ring.nvars()];
        ex[i] = e;
        Self::term(ring, BigInt::one(), ex)
    }

    pub fn ring(&self) -> &Arc<LaurentRing> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, BigInt> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn check(&self, o: &Self) {
        if *self.ring != *o.ring {
            panic!("Laurent ring mismatch");
        }
    }

    fn add_term(terms: &mut BTreeMap<Vec<i32>, BigInt>, e: Vec<i32>, c: BigInt) {
        if Zero::is_zero(&c) {
            return;
        }
        let entry = terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if Zero::is_zero(entry) {
            terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(&self.ring);
        for (e, x) in &self.terms {
            Self::add_term(&mut out.terms, e.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        RingElem::pow_u(self, n as u64)
    }

    /// Substitute `name` ↦ `value` (a Laurent polynomial in the same ring).
    /// Negative powers need `inv_value`, the inverse of `value`.
    pub fn substitute(&self, name: &str, value: &Self, inv_value: Option<&Self>) -> Result<Self, RingError> {
        let i = self.ring.index(name).ok_or_else(|| RingError::Mismatch(format!("unknown variable {name}")))?;
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[i] = 0;
            let mono = Self::term(&self.ring, c.clone(), rest)?;
            let factor = if e[i] >= 0 {
                value.pow(e[i] as u32)
            } else {
                inv_value
                    .ok_or_else(|| RingError::NotInvertible(format!("{name} has negative power")))?
                    .pow((-e[i]) as u32)
            };
            out = out.plus(&mono.times(&factor));
        }
        Ok(out)
    }

    /// Evaluate `name` at an integer; the variable must not appear with negative
    /// exponent unless the value is ±1.
    pub fn eval_int(&self, name: &str, v: i64) -> Result<Self, RingError> {
        let c = Self::constant(&self.ring, v);
        let inv = if v == 1 || v == -1 { Some(c.clone()) } else { None };
        self.substitute(name, &c, inv.as_ref())
    }

    /// Coefficient of var^k as a polynomial in the remaining variables.
    pub fn coeff_of(&self, name: &str, k: i32) -> Self {
        let i = self.ring.index(name).expect("unknown variable");
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut rest = e.clone();
                rest[i] = 0;
                Self::add_term(&mut out.terms, rest, c.clone());
            }
        }
        out
    }

    /// Degree range (min, max) of a variable; None for the zero polynomial.
    pub fn degree_range(&self, name: &str) -> Option<(i32, i32)> {
        let i = self.ring.index(name)?;
        let mut it = self.terms.keys().map(|e| e[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first reads more naturally
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut mono = Vec::new();
            for (i, x) in e.iter().enumerate() {
                match *x {
                    0 => {}
                    1 => mono.push(self.ring.names[i].clone()),
                    k => mono.push(format!("{}^{}", self.ring.names[i], k)),
                }
            }
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if One::is_one(&a) {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl RingElem for LaurentPoly {
    fn zero_like(&self) -> Self {
        Self::zero(&self.ring)
    }
    fn one_like(&self) -> Self {
        Self::constant(&self.ring, 1)
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        Self::term(&self.ring, n.clone(), vec![0; self.ring.nvars()]).unwrap()
    }
    fn plus(&self, o: &Self) -> Self {
        self.check(o);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            Self::add_term(&mut out.terms, e.clone(), c.clone());
        }
        out
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn times(&self, o: &Self) -> Self {
        self.check(o);
        let mut out = Self::zero(&self.ring);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                Self::add_term(&mut out.terms, e, c1 * c2);
            }
        }
        out
    }
    fn negate(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn compatible(&self, o: &Self) -> bool {
        *self.ring == *o.ring
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<LaurentRing> {
        LaurentRing::new(&[("x", false), ("s", true)])
    }

    #[test]
    fn negative_exponent_needs_invertible() {
        let r = ring();
        assert!(LaurentPoly::var(&r, "x", -1).is_err());
        let s = LaurentPoly::var(&r, "s", 1).unwrap();
        let si = LaurentPoly::var(&r, "s", -1).unwrap();
        assert_eq!(s.times(&si), s.one_like());
    }

    #[test]
    fn cancellation_removes_terms() {
        let r = ring();
        let x = LaurentPoly::var(&r, "x", 1).unwrap();
        assert_eq!(x.minus(&x).num_terms(), 0);
        let sq = x.plus(&x.one_like()).pow(2);
        assert_eq!(format!("{sq}"), "x^2 + 2*x + 1");
    }

    #[test]
    fn substitution() {
        let r = ring();
        let x = LaurentPoly::var(&r, "x", 1).unwrap();
        let s = LaurentPoly::var(&r, "s", 1).unwrap();
        let si = LaurentPoly::var(&r, "s", -1).unwrap();
        let p = x.times(&si).plus(&s);
        let at1 = p.eval_int("s", 1).unwrap();
        assert_eq!(at1, x.plus(&x.one_like()));
    }
}

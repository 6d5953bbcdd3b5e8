use num_bigint::BigInt;
use std::fmt;

use super::ring::RingElem;
use super::RingError;

/// Power series in one variable known through degree `len − 1`.
#[derive(Clone, PartialEq)]
pub struct TruncSeries<R: RingElem> {
    var: String,
    zero: R,
    coeffs: Vec<R>,
}

impl<R: RingElem> TruncSeries<R> {
    pub fn new(var: &str, zero: &R, coeffs: Vec<R>) -> Self {
        TruncSeries { var: var.to_string(), zero: zero.zero_like(), coeffs }
    }

    pub fn zeros(var: &str, zero: &R, t: usize) -> Self {
        Self::new(var, zero, vec![zero.zero_like(); t])
    }

    pub fn one(var: &str, zero: &R, t: usize) -> Self {
        let mut s = Self::zeros(var, zero, t);
        if t > 0 {
            s.coeffs[0] = zero.one_like();
        }
        s
    }

    /// The monomial c·v^k truncated at t.
    pub fn monomial(var: &str, c: R, k: usize, t: usize) -> Self {
        let mut s = Self::zeros(var, &c, t);
        if k < t {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn var(&self) -> &str {
        &self.var
    }
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }
    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }
    pub fn zero_elem(&self) -> &R {
        &self.zero
    }

    pub fn coeff(&self, n: usize) -> R {
        self.coeffs.get(n).cloned().unwrap_or_else(|| self.zero.zero_like())
    }

    pub fn set(&mut self, n: usize, c: R) {
        if n < self.coeffs.len() {
            self.coeffs[n] = c;
        }
    }

    pub fn truncate(&self, t: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(t);
        Self::new(&self.var, &self.zero, c)
    }

    pub fn map<S: RingElem>(&self, zero: &S, f: impl Fn(&R) -> S) -> TruncSeries<S> {
        TruncSeries::new(&self.var, zero, self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, s: &R) -> Self {
        Self::new(&self.var, &self.zero, self.coeffs.iter().map(|c| c.times(s)).collect())
    }

    fn compat(&self, o: &Self) -> Result<(), RingError> {
        if self.var != o.var {
            return Err(RingError::Mismatch(format!("series in {} vs {}", self.var, o.var)));
        }
        if !self.zero.compatible(&o.zero) {
            return Err(RingError::Mismatch("coefficient rings differ".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, RingError> {
        self.compat(o)?;
        let t = self.precision().min(o.precision());
        Ok(Self::new(&self.var, &self.zero, (0..t).map(|i| self.coeffs[i].plus(&o.coeffs[i])).collect()))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, RingError> {
        self.try_add(&o.negate())
    }

    /// Cauchy product truncated at min(T_a, T_b).
    pub fn series_multiply(&self, o: &Self) -> Result<Self, RingError> {
        self.compat(o)?;
        let t = self.precision().min(o.precision());
        let mut out = vec![self.zero.zero_like(); t];
        for (i, a) in self.coeffs.iter().enumerate().take(t) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(t - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Ok(Self::new(&self.var, &self.zero, out))
    }

    pub fn negate(&self) -> Self {
        Self::new(&self.var, &self.zero, self.coeffs.iter().map(|c| c.negate()).collect())
    }

    /// Multiplicative inverse when the constant term is a unit with inverse `c0_inv`.
    pub fn inverse_with(&self, c0_inv: &R) -> Self {
        let t = self.precision();
        let mut out = vec![self.zero.zero_like(); t];
        if t == 0 {
            return self.clone();
        }
        out[0] = c0_inv.clone();
        for n in 1..t {
            let mut s = self.zero.zero_like();
            for k in 1..=n {
                s = s.plus(&self.coeffs[k].times(&out[n - k]));
            }
            out[n] = s.times(c0_inv).negate();
        }
        Self::new(&self.var, &self.zero, out)
    }

    /// f(g) for g with zero constant term; the result keeps f's precision capped by g's.
    pub fn compose(&self, g: &Self) -> Result<Self, RingError> {
        self.compat(g)?;
        if !g.coeff(0).is_zero() {
            return Err(RingError::Precision("substituted series must have zero constant term".into()));
        }
        let t = self.precision().min(g.precision());
        let mut acc = Self::zeros(&self.var, &self.zero, t);
        let mut pw = Self::one(&self.var, &self.zero, t);
        for (i, c) in self.coeffs.iter().enumerate().take(t) {
            if i > 0 {
                pw = pw.series_multiply(g)?;
            }
            if !c.is_zero() {
                acc = acc.try_add(&pw.scale(c))?;
            }
        }
        Ok(acc)
    }

    /// Substitute v ↦ v^d (the V_d operator); precision stays the same.
    pub fn substitute_power(&self, d: usize) -> Self {
        let t = self.precision();
        let mut out = vec![self.zero.zero_like(); t];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * d < t {
                out[i * d] = c.clone();
            }
        }
        Self::new(&self.var, &self.zero, out)
    }
}

impl<R: RingElem> fmt::Debug for TruncSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({}; {:?} + O({}^{}))", self.var, self.coeffs, self.var, self.precision())
    }
}

impl<R: RingElem> RingElem for TruncSeries<R> {
    fn zero_like(&self) -> Self {
        Self::zeros(&self.var, &self.zero, self.precision())
    }
    fn one_like(&self) -> Self {
        Self::one(&self.var, &self.zero, self.precision())
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        Self::monomial(&self.var, self.zero.from_int_like(n), 0, self.precision())
    }
    fn plus(&self, o: &Self) -> Self {
        self.try_add(o).expect("series mismatch")
    }
    fn minus(&self, o: &Self) -> Self {
        self.try_sub(o).expect("series mismatch")
    }
    fn times(&self, o: &Self) -> Self {
        self.series_multiply(o).expect("series mismatch")
    }
    fn negate(&self) -> Self {
        TruncSeries::negate(self)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn compatible(&self, o: &Self) -> bool {
        self.compat(o).is_ok() && self.precision() == o.precision()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_tower::ZModPr;

    fn zs(v: &[i64]) -> TruncSeries<BigInt> {
        TruncSeries::new("q", &BigInt::from(0), v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn small_products() {
        assert_eq!(zs(&[1, 1, 0]).series_multiply(&zs(&[1, -1, 0])).unwrap(), zs(&[1, 0, -1]));
        assert_eq!(zs(&[1, 1, 1, 1, 1]).series_multiply(&zs(&[1, -1, 0, 0, 0])).unwrap(), zs(&[1, 0, 0, 0, 0]));
    }

    #[test]
    fn truncation_is_min() {
        let a = zs(&[1, 2, 3]);
        let b = zs(&[1, 1, 1, 1, 1]);
        assert_eq!(a.series_multiply(&b).unwrap().precision(), 3);
    }

    #[test]
    fn variable_mismatch() {
        let a = zs(&[1, 2]);
        let b = TruncSeries::new("pi", &BigInt::from(0), vec![BigInt::from(1)]);
        assert!(a.series_multiply(&b).is_err());
        let c = TruncSeries::new("q", &ZModPr::zero(3, 2), vec![ZModPr::one(3, 2)]);
        let d = TruncSeries::new("q", &ZModPr::zero(5, 2), vec![ZModPr::one(5, 2)]);
        assert!(c.series_multiply(&d).is_err());
    }

    #[test]
    fn eta_product_head() {
        // q ∏_{n≤6} (1−q^n)²(1−q^{11n})² through q^6
        let t = 7;
        let mut s = TruncSeries::monomial("q", BigInt::from(1), 1, t);
        for n in 1..=6usize {
            for d in [n, 11 * n] {
                let mut f = TruncSeries::one("q", &BigInt::from(0), t);
                f.set(d, BigInt::from(-1));
                s = s.series_multiply(&f).unwrap().series_multiply(&f).unwrap();
            }
        }
        assert_eq!(s, zs(&[0, 1, -2, -1, 2, 1, 2]));
    }

    #[test]
    fn inverse_and_compose() {
        let a = zs(&[1, -1, 0, 0, 0]);
        let inv = a.inverse_with(&BigInt::from(1));
        assert_eq!(inv, zs(&[1, 1, 1, 1, 1]));
        let g = zs(&[0, 1, 1, 0, 0]);
        // (1+x)∘(x + x²) = 1 + x + x²
        assert_eq!(zs(&[1, 1, 0, 0, 0]).compose(&g).unwrap(), zs(&[1, 1, 1, 0, 0]));
    }
}
